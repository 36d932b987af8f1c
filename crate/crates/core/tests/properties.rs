use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spermat::classes::{canonical_form, orbit_size, psi_vector, stabilizer_size};
use spermat::matrix::{
    coincidence_matrix, compose_sudoku, decompose_sudoku, disjoint_pi, disjoint_sigma, factorial,
    pi_to_sigma, random_pi, random_pi_with, sigma_to_pi, validate_s_permutation, BinaryMatrix,
    Permutation, PiMatrix,
};

fn binary(n: usize) -> impl Strategy<Value = BinaryMatrix> {
    proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
        let mut m = BinaryMatrix::zeros(n);
        for (idx, b) in bits.into_iter().enumerate() {
            m.set(idx / n, idx % n, b);
        }
        m
    })
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    any::<u64>().prop_map(move |s| Permutation::random(n, &mut ChaCha8Rng::seed_from_u64(s)))
}

fn matrix_and_perms() -> impl Strategy<Value = (BinaryMatrix, Permutation, Permutation)> {
    (2usize..=4).prop_flat_map(|n| (binary(n), perm(n), perm(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sigma_pi_round_trip(n in 3usize..=4, seed in any::<u64>()) {
        let p = random_pi(n, seed);
        let a = pi_to_sigma(&p);
        prop_assert_eq!(validate_s_permutation(&a.to_grid()).unwrap(), a.clone());
        prop_assert_eq!(sigma_to_pi(&a), p);
        prop_assert_eq!(pi_to_sigma(&sigma_to_pi(&a)), a);
    }

    #[test]
    fn disjointness_transports(n in 2usize..=4, s1 in any::<u64>(), s2 in any::<u64>()) {
        let (p, q) = (random_pi(n, s1), random_pi(n, s2));
        let d = disjoint_pi(&p, &q).unwrap();
        prop_assert_eq!(d, disjoint_sigma(&pi_to_sigma(&p), &pi_to_sigma(&q)).unwrap());
        prop_assert_eq!(d, disjoint_pi(&q, &p).unwrap());
        prop_assert_eq!(d, coincidence_matrix(&p, &q).unwrap().k() == 0);
        prop_assert!(!disjoint_pi(&p, &p).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn canonical_form_is_a_class_invariant((m, rp, cp) in matrix_and_perms()) {
        let moved = m.permuted(&rp, &cp);
        let c = canonical_form(&m);
        prop_assert_eq!(canonical_form(&c), c.clone());
        prop_assert_eq!(canonical_form(&moved), c.clone());
        prop_assert!(c.code() <= m.code());
        prop_assert_eq!(psi_vector(&moved), psi_vector(&m));
        let group = factorial(m.n()) * factorial(m.n());
        prop_assert_eq!(orbit_size(&m) * stabilizer_size(&m), group);
        prop_assert_eq!(orbit_size(&moved), orbit_size(&m));
    }

    #[test]
    fn psi_identities(m in (1usize..=5).prop_flat_map(binary)) {
        let psi = psi_vector(&m);
        prop_assert_eq!(psi.vertex_count(), 2 * m.n());
        prop_assert_eq!(psi.degree_sum(), 2 * m.k());
    }
}

/// A Sudoku matrix of order n^2 built from the standard pattern, then shuffled
/// by permuting symbols; its decomposition must recompose exactly.
#[test]
fn compose_decompose_identity_on_shuffled_patterns() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=3usize {
        let side = n * n;
        for _ in 0..50 {
            let symbols = Permutation::random(side, &mut rng);
            let cells: Vec<Vec<u32>> = (0..side)
                .map(|r| {
                    (0..side)
                        .map(|c| {
                            let v = (n * (r % n) + r / n + c) % side;
                            symbols.apply(v) as u32 + 1
                        })
                        .collect()
                })
                .collect();
            let m = spermat::matrix::SudokuMatrix::new(n, cells).unwrap();
            let family = decompose_sudoku(&m);
            assert_eq!(family.len(), side);
            assert_eq!(compose_sudoku(&family).unwrap(), m);
        }
    }
}

#[test]
fn random_pi_always_validates() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 1..=6 {
        for _ in 0..200 {
            let p = random_pi_with(n, &mut rng);
            let back = spermat::matrix::validate_pi(n, &p.to_one_based()).unwrap();
            assert_eq!(back, p);
            assert_eq!(PiMatrix::from_json(&p.to_json()).unwrap(), p);
        }
    }
}
