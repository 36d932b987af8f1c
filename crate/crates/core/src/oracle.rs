//! Brute-force checks that share nothing with the class-table route: full
//! enumeration of Π_n, direct disjointness scans, direct agreement counts and
//! Monte Carlo sampling.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::binary::BinaryMatrix;
use crate::matrix::perm::{factorial, Permutation};
use crate::matrix::pi::{random_pi_with, PiMatrix};

/// Size guard for exhaustive scans.
#[derive(Debug, Clone, Copy, Default)]
pub struct OracleLimit {
    pub allow_large: bool,
}

impl OracleLimit {
    pub const DEFAULT_MAX_N: usize = 3;
    /// Packed codes use one nibble per cell, so 4 is the hard ceiling.
    pub const HARD_MAX_N: usize = 4;

    pub fn check(&self, n: usize) -> Result<()> {
        let limit = if self.allow_large {
            Self::HARD_MAX_N
        } else {
            Self::DEFAULT_MAX_N
        };
        if n == 0 || n > limit {
            return Err(Error::InfeasibleSize { n, limit });
        }
        Ok(())
    }
}

/// Every Π_n matrix exactly once, ordered lexicographically by the tuple of
/// lexicographic ranks `(rho_1, .., rho_n, sigma_1, .., sigma_n)`.
pub fn enumerate_pi(n: usize, limit: OracleLimit) -> Result<impl Iterator<Item = PiMatrix>> {
    limit.check(n)?;
    let perms = Permutation::all(n);
    let radix = perms.len();
    let mut digits = vec![0usize; 2 * n];
    let mut done = false;
    Ok(std::iter::from_fn(move || {
        if done {
            return None;
        }
        let rows: Vec<Permutation> = digits[..n].iter().map(|&d| perms[d].clone()).collect();
        let cols: Vec<Permutation> = digits[n..].iter().map(|&d| perms[d].clone()).collect();
        let item = PiMatrix::from_permutations(&rows, &cols).expect("degrees match");
        done = true;
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < radix {
                done = false;
                break;
            }
            *d = 0;
        }
        Some(item)
    }))
}

/// A Π-matrix with entry `(i,j)` stored as the nibble `(a-1)*n + (b-1)` at
/// position `i*n + j`; unused high nibbles are all ones.
pub fn pack(p: &PiMatrix) -> u64 {
    let cells = p.n() * p.n();
    assert!(cells <= 16, "packing supports n <= 4");
    let mut word = if cells == 16 {
        0
    } else {
        u64::MAX << (4 * cells)
    };
    for (idx, code) in p.packed_codes().into_iter().enumerate() {
        word |= (code as u64) << (4 * idx);
    }
    word
}

const LOW_NIBBLES: u64 = 0x1111_1111_1111_1111;
const HIGH_NIBBLE_BITS: u64 = 0x8888_8888_8888_8888;

/// True iff no used nibble of `a` equals the matching nibble of `b`.
/// Unused nibbles are all ones in both words, so their XOR is filled back in.
#[inline]
pub fn packed_disjoint(a: u64, b: u64, unused: u64) -> bool {
    let x = (a ^ b) | unused;
    (x.wrapping_sub(LOW_NIBBLES) & !x & HIGH_NIBBLE_BITS) == 0
}

fn unused_mask(n: usize) -> u64 {
    let cells = n * n;
    if cells >= 16 {
        0
    } else {
        u64::MAX << (4 * cells)
    }
}

/// All of Π_n in packed form, in `enumerate_pi` order.
pub fn packed_all(n: usize, limit: OracleLimit) -> Result<Vec<u64>> {
    Ok(enumerate_pi(n, limit)?.map(|p| pack(&p)).collect())
}

/// Rows of the `i < j` triangle handled per task.
const PAIR_CHUNK: usize = 64;

/// The whole of Π_n held in packed form, so repeated scans enumerate once.
pub struct PiUniverse {
    n: usize,
    unused: u64,
    packed: Vec<u64>,
}

impl PiUniverse {
    pub fn new(n: usize, limit: OracleLimit) -> Result<Self> {
        Ok(PiUniverse {
            n,
            unused: unused_mask(n),
            packed: packed_all(n, limit)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.packed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.packed.is_empty()
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == self.n {
            Ok(())
        } else {
            Err(Error::SizeMismatch(self.n, n))
        }
    }

    /// Number of members disjoint from `reference` (the reference itself never is).
    pub fn count_disjoint_with(&self, reference: &PiMatrix) -> Result<u64> {
        self.check(reference.n())?;
        let r = pack(reference);
        Ok(self
            .packed
            .par_iter()
            .filter(|&&p| packed_disjoint(p, r, self.unused))
            .count() as u64)
    }

    /// Number of unordered disjoint pairs.
    ///
    /// The `i < j` triangle is split into fixed contiguous blocks of rows whose
    /// partial counts are summed, so the result does not depend on scheduling.
    pub fn count_disjoint_pairs(&self) -> u64 {
        let all = &self.packed;
        all.par_chunks(PAIR_CHUNK)
            .enumerate()
            .map(|(chunk, rows)| {
                let start = chunk * PAIR_CHUNK;
                rows.iter()
                    .enumerate()
                    .map(|(off, &p)| {
                        all[start + off + 1..]
                            .iter()
                            .filter(|&&q| packed_disjoint(p, q, self.unused))
                            .count() as u64
                    })
                    .sum::<u64>()
            })
            .sum()
    }

    /// Number of members equal to `reference` at every position where `mask`
    /// has a 1; other positions are unconstrained.
    pub fn count_agreeing(&self, reference: &PiMatrix, mask: &BinaryMatrix) -> Result<u64> {
        self.check(reference.n())?;
        self.check(mask.n())?;
        let n = self.n;
        let nibbles = mask
            .ones_positions()
            .iter()
            .fold(0u64, |acc, &(i, j)| acc | 0xF << (4 * (i * n + j)));
        let r = pack(reference);
        Ok(self
            .packed
            .par_iter()
            .filter(|&&p| (p ^ r) & nibbles == 0)
            .count() as u64)
    }
}

/// Number of Π-matrices disjoint from `reference` (the reference itself never is).
pub fn count_disjoint_with(reference: &PiMatrix, limit: OracleLimit) -> Result<u64> {
    PiUniverse::new(reference.n(), limit)?.count_disjoint_with(reference)
}

/// Number of unordered pairs `{p, q}` of disjoint Π_n matrices.
pub fn count_disjoint_pairs(n: usize, limit: OracleLimit) -> Result<u64> {
    Ok(PiUniverse::new(n, limit)?.count_disjoint_pairs())
}

/// Brute-force count of Π-matrices equal to `reference` at every position
/// where `mask` has a 1.
pub fn count_agreeing(
    reference: &PiMatrix,
    mask: &BinaryMatrix,
    limit: OracleLimit,
) -> Result<u64> {
    if mask.n() != reference.n() {
        return Err(Error::SizeMismatch(reference.n(), mask.n()));
    }
    PiUniverse::new(reference.n(), limit)?.count_agreeing(reference, mask)
}

/// `prod over rows and columns of (n - degree)!`.
pub fn agreeing_closed_form(mask: &BinaryMatrix) -> u64 {
    let n = mask.n();
    mask.row_degrees()
        .into_iter()
        .chain(mask.col_degrees())
        .map(|d| factorial(n - d))
        .product()
}

/// Outcome of a Monte Carlo estimate of the disjointness probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarlo {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub disjoint: u64,
    /// Draws discarded because both matrices came out identical.
    pub equal_redraws: u64,
    pub estimate: f64,
    /// Binomial standard error; `None` when it is zero (degenerate sample).
    pub stderr: Option<f64>,
}

impl MonteCarlo {
    pub fn z_score(&self, target: f64) -> Option<f64> {
        self.stderr.map(|s| (self.estimate - target) / s)
    }
}

/// Trials per independently seeded stream.
pub const MC_CHUNK: u64 = 4096;

/// Estimates the probability that two distinct uniform Π_n matrices are disjoint.
///
/// Trials are split into blocks of [`MC_CHUNK`]; block `c` draws from
/// ChaCha8 seeded with `seed` on stream `c`, so the result is identical for
/// any number of worker threads. A trial whose two draws coincide is redrawn
/// and tallied in `equal_redraws`.
pub fn monte_carlo_p(n: usize, trials: u64, seed: u64) -> Result<MonteCarlo> {
    if n < 2 {
        return Err(Error::UndefinedForN1);
    }
    if trials == 0 {
        return Err(Error::InvalidTable("trials must be positive".into()));
    }
    let chunks = trials.div_ceil(MC_CHUNK);
    let (disjoint, equal_redraws) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let len = MC_CHUNK.min(trials - c * MC_CHUNK);
            let mut disjoint = 0u64;
            let mut redraws = 0u64;
            for _ in 0..len {
                let (p, q) = loop {
                    let p = random_pi_with(n, &mut rng);
                    let q = random_pi_with(n, &mut rng);
                    if p != q {
                        break (p, q);
                    }
                    redraws += 1;
                };
                if p.raw().iter().zip(q.raw()).all(|(x, y)| x != y) {
                    disjoint += 1;
                }
            }
            (disjoint, redraws)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let estimate = disjoint as f64 / trials as f64;
    let se = (estimate * (1.0 - estimate) / trials as f64).sqrt();
    Ok(MonteCarlo {
        n,
        trials,
        seed,
        disjoint,
        equal_redraws,
        estimate,
        stderr: (se > 0.0).then_some(se),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    FixedReference,
    AllPairs,
    Agreement,
    MonteCarlo,
}

/// A single oracle run, ready for JSON output. Counts are decimal strings.
#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub n: usize,
    pub mode: OracleMode,
    pub count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<crate::matrix::pi::PiJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monte_carlo: Option<MonteCarlo>,
    /// Run-dependent fields; drop this before comparing outputs.
    pub metadata: RunMetadata,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub elapsed_ms: u128,
}

impl OracleResult {
    pub fn new(n: usize, mode: OracleMode, count: u64, elapsed: Duration) -> Self {
        OracleResult {
            n,
            mode,
            count: count.to_string(),
            reference: None,
            monte_carlo: None,
            metadata: RunMetadata {
                elapsed_ms: elapsed.as_millis(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializing plain data")
    }
}

/// Runs `f` and returns its value with the wall time it took.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::matrix::fixtures::{pi_prime, pi_second, pi_third};
    use crate::matrix::pi::{disjoint_pi, random_pi};

    #[test]
    fn enumeration_sizes() {
        let lim = OracleLimit::default();
        assert_eq!(enumerate_pi(1, lim).unwrap().count(), 1);
        let two: Vec<PiMatrix> = enumerate_pi(2, lim).unwrap().collect();
        assert_eq!(two.len(), 16);
        assert_eq!(two.iter().collect::<HashSet<_>>().len(), 16);
        assert_eq!(enumerate_pi(3, lim).unwrap().count(), 46_656);
        assert!(matches!(
            enumerate_pi(4, lim).map(|_| ()),
            Err(Error::InfeasibleSize { n: 4, limit: 3 })
        ));
    }

    #[test]
    fn enumeration_order_follows_permutation_ranks() {
        let first: Vec<PiMatrix> = enumerate_pi(2, OracleLimit::default())
            .unwrap()
            .take(2)
            .collect();
        let id = Permutation::identity(2);
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        let expect0 =
            PiMatrix::from_permutations(&[id.clone(), id.clone()], &[id.clone(), id.clone()]);
        let expect1 = PiMatrix::from_permutations(&[id.clone(), id.clone()], &[id, swap]);
        assert_eq!(first[0], expect0.unwrap());
        assert_eq!(first[1], expect1.unwrap());
    }

    #[test]
    fn packed_test_agrees_with_plain_test() {
        for n in 2..=4 {
            let unused = unused_mask(n);
            for s in 0..300u64 {
                let p = random_pi(n, s);
                let q = random_pi(n, s + 10_000);
                assert_eq!(
                    packed_disjoint(pack(&p), pack(&q), unused),
                    disjoint_pi(&p, &q).unwrap()
                );
            }
        }
        let unused = unused_mask(3);
        assert!(packed_disjoint(
            pack(&pi_prime()),
            pack(&pi_second()),
            unused
        ));
        assert!(!packed_disjoint(
            pack(&pi_second()),
            pack(&pi_third()),
            unused
        ));
    }

    #[test]
    fn small_counts() {
        let lim = OracleLimit::default();
        let one = enumerate_pi(1, lim).unwrap().next().unwrap();
        assert_eq!(count_disjoint_with(&one, lim).unwrap(), 0);
        assert_eq!(count_disjoint_pairs(1, lim).unwrap(), 0);
        assert_eq!(count_disjoint_pairs(2, lim).unwrap(), 56);
    }

    #[test]
    fn agreement_examples() {
        let lim = OracleLimit::default();
        let r2 = random_pi(2, 5);
        let mut single = BinaryMatrix::zeros(2);
        single.set(0, 1, true);
        assert_eq!(count_agreeing(&r2, &single, lim).unwrap(), 4);
        assert_eq!(agreeing_closed_form(&single), 4);
        assert_eq!(count_agreeing(&r2, &BinaryMatrix::ones(2), lim).unwrap(), 1);

        let diag = BinaryMatrix::from_bit_strings(&["100", "010", "001"]).unwrap();
        assert_eq!(count_agreeing(&pi_prime(), &diag, lim).unwrap(), 64);
        assert_eq!(agreeing_closed_form(&diag), 64);
        assert!(count_agreeing(&pi_prime(), &single, lim).is_err());
    }

    #[test]
    fn packed_agreement_matches_plain_scan() {
        let lim = OracleLimit::default();
        let reference = random_pi(3, 77);
        let mask = BinaryMatrix::from_bit_strings(&["101", "000", "010"]).unwrap();
        let plain = enumerate_pi(3, lim)
            .unwrap()
            .filter(|p| {
                mask.ones_positions()
                    .iter()
                    .all(|&(i, j)| p.get(i, j) == reference.get(i, j))
            })
            .count() as u64;
        assert_eq!(count_agreeing(&reference, &mask, lim).unwrap(), plain);
        assert_eq!(plain, agreeing_closed_form(&mask));
    }

    #[test]
    fn monte_carlo_degenerate_and_errors() {
        assert!(matches!(
            monte_carlo_p(1, 10, 0),
            Err(Error::UndefinedForN1)
        ));
        assert!(monte_carlo_p(2, 0, 0).is_err());
        let one = monte_carlo_p(3, 1, 7).unwrap();
        assert!(one.estimate == 0.0 || one.estimate == 1.0);
        assert_eq!(one.stderr, None);
        assert_eq!(one.z_score(0.5), None);
    }

    #[test]
    fn monte_carlo_is_thread_count_independent() {
        let a = monte_carlo_p(3, 20_000, 11).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| monte_carlo_p(3, 20_000, 11).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn oracle_result_json() {
        let r = OracleResult::new(2, OracleMode::AllPairs, 56, Duration::from_millis(3));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["mode"], "all-pairs");
        assert_eq!(v["count"], "56");
        assert_eq!(v["metadata"]["elapsed_ms"], 3);
    }
}
