//! Exhaustive checks at n = 2 and an independent evaluation of the counts
//! that bypasses class enumeration entirely.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spermat::classes::EnumerationLimit;
use spermat::counting::full_report;
use spermat::matrix::{
    compose_sudoku, decompose_sudoku, disjoint_pi, disjoint_sigma, factorial, pi_to_sigma,
    random_pi_with, sigma_to_pi, validate_s_permutation, BinaryMatrix, PiMatrix, SPermMatrix,
};
use spermat::oracle::{enumerate_pi, OracleLimit, PiUniverse};

fn all_pi(n: usize) -> Vec<PiMatrix> {
    enumerate_pi(n, OracleLimit::default()).unwrap().collect()
}

/// Every 4x4 grid with one 1 per row and column, filtered to S-permutation matrices.
fn all_sigma4_by_grid_search() -> Vec<SPermMatrix> {
    let mut out = Vec::new();
    for p in spermat::matrix::Permutation::all(4) {
        let grid: Vec<Vec<bool>> = (0..4)
            .map(|r| (0..4).map(|c| p.apply(r) == c).collect())
            .collect();
        if let Ok(m) = validate_s_permutation(&grid) {
            out.push(m);
        }
    }
    out
}

#[test]
fn sigma4_has_sixteen_members_matching_pi2() {
    let sigma = all_sigma4_by_grid_search();
    assert_eq!(sigma.len(), 16);
    let mut from_pi: Vec<SPermMatrix> = all_pi(2).iter().map(pi_to_sigma).collect();
    from_pi.sort();
    let mut sorted = sigma.clone();
    sorted.sort();
    assert_eq!(sorted, from_pi);
}

#[test]
fn round_trip_exhaustive_n2() {
    for p in all_pi(2) {
        assert_eq!(sigma_to_pi(&pi_to_sigma(&p)), p);
    }
    for a in all_sigma4_by_grid_search() {
        assert_eq!(pi_to_sigma(&sigma_to_pi(&a)), a);
    }
}

#[test]
fn disjointness_agrees_on_all_unordered_pairs_n2() {
    let sigma = all_sigma4_by_grid_search();
    let mut pairs = 0;
    let mut disjoint = 0;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            let s = disjoint_sigma(&sigma[i], &sigma[j]).unwrap();
            let p = disjoint_pi(&sigma_to_pi(&sigma[i]), &sigma_to_pi(&sigma[j])).unwrap();
            assert_eq!(s, p);
            pairs += 1;
            disjoint += s as u32;
        }
    }
    assert_eq!(pairs, 120);
    assert_eq!(disjoint, 56);
}

#[test]
fn four_disjoint_sigma4_matrices_compose_to_a_sudoku() {
    let sigma = all_sigma4_by_grid_search();
    let idx: Vec<usize> = (0..16).collect();
    let mut found = None;
    'search: for a in 0..16 {
        for b in a + 1..16 {
            for c in b + 1..16 {
                for d in c + 1..16 {
                    let fam = [idx[a], idx[b], idx[c], idx[d]];
                    let ok = fam.iter().enumerate().all(|(s, &x)| {
                        fam[s + 1..]
                            .iter()
                            .all(|&y| disjoint_sigma(&sigma[x], &sigma[y]).unwrap())
                    });
                    if ok {
                        found = Some(fam);
                        break 'search;
                    }
                }
            }
        }
    }
    let fam: Vec<SPermMatrix> = found.unwrap().iter().map(|&i| sigma[i].clone()).collect();
    let m = compose_sudoku(&fam).unwrap();
    assert_eq!(decompose_sudoku(&m), fam);
}

#[test]
fn reference_independence_and_handshake_n2() {
    let universe = PiUniverse::new(2, OracleLimit::default()).unwrap();
    let counts: Vec<u64> = all_pi(2)
        .iter()
        .map(|p| universe.count_disjoint_with(p).unwrap())
        .collect();
    assert!(counts.iter().all(|&c| c == 7));
    assert_eq!(
        counts.iter().sum::<u64>(),
        2 * universe.count_disjoint_pairs()
    );
}

#[test]
fn random_pi_is_uniform_over_pi2() {
    let draws = 100_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut freq: HashMap<PiMatrix, u64> = HashMap::new();
    for _ in 0..draws {
        *freq.entry(random_pi_with(2, &mut rng)).or_insert(0) += 1;
    }
    assert_eq!(freq.len(), 16);
    let expected = draws as f64 / 16.0;
    let sigma = (draws as f64 * (1.0 / 16.0) * (15.0 / 16.0)).sqrt();
    for (p, count) in freq {
        assert!(
            (count as f64 - expected).abs() <= 5.0 * sigma,
            "{p} seen {count} times"
        );
    }
}

/// `sum over all masks A of (-1)^|A| prod_v (n - deg v)!` — the ungrouped
/// inclusion–exclusion sum, one term per labelled bipartite graph.
fn xi_ungrouped(n: usize) -> BigUint {
    let mut total = BigInt::from(0);
    for code in 0..1u64 << (n * n) {
        let m = BinaryMatrix::from_code(n, code);
        let term: BigInt = m
            .row_degrees()
            .into_iter()
            .chain(m.col_degrees())
            .map(|d| BigInt::from(factorial(n - d)))
            .product();
        if m.k().is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total.to_biguint().unwrap()
}

#[test]
fn ungrouped_sum_reproduces_known_values() {
    assert_eq!(xi_ungrouped(1), BigUint::from(0u32));
    assert_eq!(xi_ungrouped(2), BigUint::from(7u32));
    assert_eq!(xi_ungrouped(3), BigUint::from(17_972u32));
    assert_eq!(xi_ungrouped(4), BigUint::from(41_685_061_617u64));
}

#[test]
fn class_formula_matches_ungrouped_sum() {
    for n in 1..=4 {
        let r = full_report(n, None, EnumerationLimit::default(), false).unwrap();
        assert_eq!(r.xi, xi_ungrouped(n), "n={n}");
    }
}

#[test]
fn n4_values_are_pinned() {
    let r = full_report(4, None, EnumerationLimit::default(), false).unwrap();
    assert_eq!(r.xi.to_string(), "41685061617");
    assert_eq!(r.eta.to_string(), "2294248126968596791296");
    let p = r.probability().unwrap();
    assert_eq!(p.numer().to_string(), "41685061617");
    assert_eq!(p.denom().to_string(), "110075314175");
    assert_eq!(p.decimal(6), "0.378696");
}
