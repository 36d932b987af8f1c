use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, PiError, Result};
use crate::matrix::binary::BinaryMatrix;
use crate::matrix::perm::Permutation;

/// Largest order accepted for a Π-matrix; entries are stored as bytes.
pub const MAX_PI_N: usize = 255;

/// An `n x n` matrix of ordered pairs `<a,b>` over `[n] x [n]` in which the
/// first components of every row and the second components of every column
/// are permutations of `[n]`.
///
/// Entry `(i,j)` equals `<rho_i(j), sigma_j(i)>` for the row permutations
/// `rho_i` and column permutations `sigma_j`. Storage is 0-based and row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiMatrix {
    n: usize,
    entries: Vec<(u8, u8)>,
}

/// Checks conditions ii) and iii) on 1-based entries and builds the matrix.
pub fn validate_pi(n: usize, entries: &[Vec<(usize, usize)>]) -> Result<PiMatrix> {
    if n == 0 || n > MAX_PI_N || entries.len() != n || entries.iter().any(|r| r.len() != n) {
        let found = entries.iter().map(Vec::len).sum();
        return Err(PiError::Shape {
            n,
            expected: n * n,
            found,
        }
        .into());
    }
    let mut flat = Vec::with_capacity(n * n);
    for (i, row) in entries.iter().enumerate() {
        for (j, &(a, b)) in row.iter().enumerate() {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(PiError::EntryOutOfRange {
                    row: i + 1,
                    col: j + 1,
                    a,
                    b,
                    n,
                }
                .into());
            }
            flat.push(((a - 1) as u8, (b - 1) as u8));
        }
    }
    PiMatrix::from_zero_based(n, flat)
}

impl PiMatrix {
    pub(crate) fn from_zero_based(n: usize, entries: Vec<(u8, u8)>) -> Result<Self> {
        debug_assert_eq!(entries.len(), n * n);
        let mut seen = vec![false; n];
        for i in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for j in 0..n {
                let a = entries[i * n + j].0 as usize;
                if std::mem::replace(&mut seen[a], true) {
                    return Err(PiError::RowFirstComponentNotPermutation(i + 1).into());
                }
            }
        }
        for j in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for i in 0..n {
                let b = entries[i * n + j].1 as usize;
                if std::mem::replace(&mut seen[b], true) {
                    return Err(PiError::ColumnSecondComponentNotPermutation(j + 1).into());
                }
            }
        }
        Ok(PiMatrix { n, entries })
    }

    /// Assembles `<rho_i(j), sigma_j(i)>` from `n` row and `n` column permutations.
    pub fn from_permutations(rows: &[Permutation], cols: &[Permutation]) -> Result<Self> {
        let n = rows.len();
        if cols.len() != n {
            return Err(Error::SizeMismatch(n, cols.len()));
        }
        if let Some(p) = rows.iter().chain(cols).find(|p| p.len() != n) {
            return Err(Error::SizeMismatch(n, p.len()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            for (j, col) in cols.iter().enumerate() {
                entries.push((row.apply(j) as u8, col.apply(i) as u8));
            }
        }
        Ok(PiMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based pair at 0-based position `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> (usize, usize) {
        let (a, b) = self.entries[i * self.n + j];
        (a as usize + 1, b as usize + 1)
    }

    pub(crate) fn raw(&self) -> &[(u8, u8)] {
        &self.entries
    }

    /// `rho_i`: the first components along row `i` (0-based).
    pub fn row_permutation(&self, i: usize) -> Permutation {
        Permutation::from_raw(
            (0..self.n)
                .map(|j| self.entries[i * self.n + j].0)
                .collect(),
        )
    }

    /// `sigma_j`: the second components down column `j` (0-based).
    pub fn col_permutation(&self, j: usize) -> Permutation {
        Permutation::from_raw(
            (0..self.n)
                .map(|i| self.entries[i * self.n + j].1)
                .collect(),
        )
    }

    /// Each entry as the single code `(a-1)*n + (b-1)`, row-major.
    pub fn packed_codes(&self) -> Vec<u8> {
        let n = self.n;
        self.entries
            .iter()
            .map(|&(a, b)| (a as usize * n + b as usize) as u8)
            .collect()
    }

    pub fn to_one_based(&self) -> Vec<Vec<(usize, usize)>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PiJson::from(self)).expect("serializing plain integers")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PiJson = serde_json::from_str(text)?;
        doc.try_into()
    }
}

/// Wire form: `{"n": N, "entries": [[[a,b],...],...]}`, 1-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiJson {
    pub n: usize,
    pub entries: Vec<Vec<[usize; 2]>>,
}

impl From<&PiMatrix> for PiJson {
    fn from(p: &PiMatrix) -> Self {
        PiJson {
            n: p.n,
            entries: p
                .to_one_based()
                .into_iter()
                .map(|row| row.into_iter().map(|(a, b)| [a, b]).collect())
                .collect(),
        }
    }
}

impl TryFrom<PiJson> for PiMatrix {
    type Error = Error;

    fn try_from(doc: PiJson) -> Result<Self> {
        let entries: Vec<Vec<(usize, usize)>> = doc
            .entries
            .iter()
            .map(|row| row.iter().map(|&[a, b]| (a, b)).collect())
            .collect();
        validate_pi(doc.n, &entries)
    }
}

impl fmt::Display for PiMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| {
                    let (a, b) = self.get(i, j);
                    format!("<{a},{b}>")
                })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// True iff no position holds component-wise equal pairs.
pub fn disjoint_pi(p: &PiMatrix, q: &PiMatrix) -> Result<bool> {
    check_same_n(p.n, q.n)?;
    Ok(p.entries.iter().zip(&q.entries).all(|(x, y)| x != y))
}

/// The 0/1 matrix with ones exactly where `p` and `q` agree.
pub fn coincidence_matrix(p: &PiMatrix, q: &PiMatrix) -> Result<BinaryMatrix> {
    check_same_n(p.n, q.n)?;
    let n = p.n;
    let mut m = BinaryMatrix::zeros(n);
    for (idx, (x, y)) in p.entries.iter().zip(&q.entries).enumerate() {
        if x == y {
            m.set(idx / n, idx % n, true);
        }
    }
    Ok(m)
}

fn check_same_n(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SizeMismatch(a, b))
    }
}

/// Uniform random Π-matrix: `2n` independent Fisher–Yates permutations drawn
/// from `rng`, rows first, then columns.
pub fn random_pi_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PiMatrix {
    let rows: Vec<Permutation> = (0..n).map(|_| Permutation::random(n, rng)).collect();
    let cols: Vec<Permutation> = (0..n).map(|_| Permutation::random(n, rng)).collect();
    PiMatrix::from_permutations(&rows, &cols).expect("all permutations have degree n")
}

/// Uniform random Π-matrix from a ChaCha8 stream seeded with `seed`.
pub fn random_pi(n: usize, seed: u64) -> PiMatrix {
    assert!(n >= 1, "random_pi requires n >= 1");
    random_pi_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
}
