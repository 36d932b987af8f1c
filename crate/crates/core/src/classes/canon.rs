use serde::{Deserialize, Serialize};

use crate::matrix::binary::{row_mask, BinaryMatrix};
use crate::matrix::perm::{factorial, Permutation};

/// Largest `n` for which canonical forms and orbit sizes are computed; the
/// row-major code must fit in one word.
pub const MAX_CANON_N: usize = 8;

/// `psi[i]` = number of vertices (rows plus columns) of degree `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeProfile {
    psi: Vec<usize>,
}

impl DegreeProfile {
    pub fn from_counts(psi: Vec<usize>) -> Self {
        assert!(!psi.is_empty());
        DegreeProfile { psi }
    }

    pub fn n(&self) -> usize {
        self.psi.len() - 1
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.psi
    }

    pub fn get(&self, degree: usize) -> usize {
        self.psi[degree]
    }

    /// Sum of all entries; always `2n`.
    pub fn vertex_count(&self) -> usize {
        self.psi.iter().sum()
    }

    /// `sum i*psi[i]`; always twice the edge count.
    pub fn degree_sum(&self) -> usize {
        self.psi.iter().enumerate().map(|(i, &c)| i * c).sum()
    }
}

pub fn psi_vector(m: &BinaryMatrix) -> DegreeProfile {
    let mut psi = vec![0; m.n() + 1];
    for d in m.row_degrees().into_iter().chain(m.col_degrees()) {
        psi[d] += 1;
    }
    DegreeProfile { psi }
}

/// The column permutations of `[n]` with a per-permutation lookup table that
/// maps a row word to its image, so canonicalizing a matrix costs
/// `n!` table passes plus a sort of `n` bytes each.
pub struct ColumnGroup {
    n: usize,
    tables: Vec<Vec<u8>>,
}

impl ColumnGroup {
    pub fn new(n: usize) -> Self {
        assert!(
            n <= MAX_CANON_N,
            "canonical forms are supported for n <= {MAX_CANON_N}"
        );
        let tables = Permutation::all(n)
            .iter()
            .map(|cp| {
                (0..1u64 << n)
                    .map(|row| {
                        (0..n).fold(0u8, |acc, j| {
                            let bit = (row >> (n - 1 - cp.apply(j))) & 1;
                            (acc << 1) | bit as u8
                        })
                    })
                    .collect()
            })
            .collect();
        ColumnGroup { n, tables }
    }

    fn rows_of(&self, code: u64) -> [u8; MAX_CANON_N] {
        let n = self.n;
        let mask = row_mask(n);
        let mut rows = [0u8; MAX_CANON_N];
        for (i, r) in rows.iter_mut().enumerate().take(n) {
            *r = ((code >> ((n - 1 - i) * n)) & mask) as u8;
        }
        rows
    }

    fn pack(&self, rows: &[u8]) -> u64 {
        rows.iter().fold(0u64, |acc, &r| (acc << self.n) | r as u64)
    }

    /// Sorted-row code of the image of `code` under each column permutation.
    fn images(&self, code: u64) -> impl Iterator<Item = u64> + '_ {
        let rows = self.rows_of(code);
        self.tables.iter().map(move |t| {
            let mut img = [0u8; MAX_CANON_N];
            for i in 0..self.n {
                img[i] = t[rows[i] as usize];
            }
            img[..self.n].sort_unstable();
            self.pack(&img[..self.n])
        })
    }

    /// Row-major code of the lexicographically smallest matrix in the orbit.
    ///
    /// For a fixed column permutation, sorting the rows ascending is the best
    /// row permutation, so only the `n!` column permutations are searched.
    pub fn canonical_code(&self, code: u64) -> u64 {
        self.images(code).min().expect("group is non-empty")
    }

    /// Number of (row, column) permutation pairs fixing the matrix.
    pub fn stabilizer_size(&self, code: u64) -> u64 {
        let mut rows = self.rows_of(code);
        let rows = &mut rows[..self.n];
        rows.sort_unstable();
        let sorted = self.pack(rows);
        let row_fixers: u64 = rows
            .chunk_by(|a, b| a == b)
            .map(|run| factorial(run.len()))
            .product();
        let col_fixers = self.images(code).filter(|&img| img == sorted).count() as u64;
        col_fixers * row_fixers
    }

    pub fn orbit_size(&self, code: u64) -> u64 {
        let group = factorial(self.n) * factorial(self.n);
        group / self.stabilizer_size(code)
    }
}

/// Lexicographically smallest (row-major, `0 < 1`) matrix reachable by
/// independent row and column permutations.
pub fn canonical_form(m: &BinaryMatrix) -> BinaryMatrix {
    let group = ColumnGroup::new(m.n());
    BinaryMatrix::from_code(m.n(), group.canonical_code(m.code()))
}

pub fn stabilizer_size(m: &BinaryMatrix) -> u64 {
    ColumnGroup::new(m.n()).stabilizer_size(m.code())
}

/// `(n!)^2 / |stabilizer|`.
pub fn orbit_size(m: &BinaryMatrix) -> u64 {
    ColumnGroup::new(m.n()).orbit_size(m.code())
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn bm(rows: &[&str]) -> BinaryMatrix {
        BinaryMatrix::from_bit_strings(rows).unwrap()
    }

    /// Every image under the full group, by direct application.
    fn orbit_by_brute_force(m: &BinaryMatrix) -> HashSet<BinaryMatrix> {
        let perms = Permutation::all(m.n());
        let mut out = HashSet::new();
        for rp in &perms {
            for cp in &perms {
                out.insert(m.permuted(rp, cp));
            }
        }
        out
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_vector(&bm(&["10", "00"])).as_slice(), &[2, 2, 0]);
        assert_eq!(psi_vector(&BinaryMatrix::ones(3)).as_slice(), &[0, 0, 0, 6]);
        assert_eq!(
            psi_vector(&BinaryMatrix::zeros(3)).as_slice(),
            &[6, 0, 0, 0]
        );
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(
            canonical_form(&BinaryMatrix::zeros(3)),
            BinaryMatrix::zeros(3)
        );
        let anti = bm(&["01", "10"]);
        let id = bm(&["10", "01"]);
        assert_eq!(canonical_form(&anti), canonical_form(&id));
        assert_eq!(canonical_form(&id).to_bit_strings(), ["01", "10"]);
        assert_eq!(orbit_size(&id), 2);
    }

    #[test]
    fn transpose_is_not_in_the_group() {
        let row = bm(&["11", "00"]);
        let col = bm(&["10", "10"]);
        assert_eq!(row.transpose(), col);
        assert_ne!(canonical_form(&row), canonical_form(&col));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit_size(&bm(&["10", "00"])), 4);
        assert_eq!(orbit_size(&bm(&["100", "010", "001"])), 6);
        assert_eq!(orbit_size(&BinaryMatrix::ones(3)), 1);
        assert_eq!(stabilizer_size(&BinaryMatrix::ones(3)), 36);
    }

    #[test]
    fn canonical_is_orbit_minimum_exhaustively_n3() {
        let group = ColumnGroup::new(3);
        for code in 0..1u64 << 9 {
            let m = BinaryMatrix::from_code(3, code);
            let orbit = orbit_by_brute_force(&m);
            let min = orbit.iter().map(BinaryMatrix::code).min().unwrap();
            assert_eq!(group.canonical_code(code), min);
            assert_eq!(group.orbit_size(code), orbit.len() as u64);
            assert_eq!(group.stabilizer_size(code) * orbit.len() as u64, 36);
        }
    }
}
