use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::perm::Permutation;

/// Largest order a `BinaryMatrix` supports: each row is one machine word.
pub const MAX_BINARY_N: usize = 64;

/// An `n x n` 0/1 matrix, equivalently a bipartite graph with rows and
/// columns as the two vertex parts and ones as edges.
///
/// Each row is a word whose most significant used bit is column 1, so the
/// numeric order of rows agrees with the lexicographic order of their bit
/// strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMatrix {
    n: usize,
    rows: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n <= MAX_BINARY_N, "binary matrix order {n} too large");
        BinaryMatrix {
            n,
            rows: vec![0; n],
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut m = Self::zeros(n);
        let full = row_mask(n);
        m.rows.iter_mut().for_each(|r| *r = full);
        m
    }

    /// Builds from row words laid out as described on the type.
    pub fn from_row_words(n: usize, rows: Vec<u64>) -> Self {
        assert_eq!(rows.len(), n);
        debug_assert!(rows.iter().all(|r| r & !row_mask(n) == 0));
        BinaryMatrix { n, rows }
    }

    /// Decodes the row-major code produced by [`BinaryMatrix::code`].
    pub fn from_code(n: usize, code: u64) -> Self {
        assert!(n * n <= 64);
        let mask = row_mask(n);
        let rows = (0..n).map(|i| (code >> ((n - 1 - i) * n)) & mask).collect();
        BinaryMatrix { n, rows }
    }

    /// Parses rows given as strings of `0`/`1` characters.
    pub fn from_bit_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n = rows.len();
        if n > MAX_BINARY_N {
            return Err(Error::InvalidTable(format!("matrix order {n} too large")));
        }
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {} has length {}, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, c) in row.bytes().enumerate() {
                match c {
                    b'0' => {}
                    b'1' => m.set(i, j, true),
                    _ => {
                        return Err(Error::InvalidTable(format!(
                            "row {} contains {:?}",
                            i + 1,
                            c as char
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of ones (edges).
    pub fn k(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> (self.n - 1 - j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let bit = 1u64 << (self.n - 1 - j);
        if value {
            self.rows[i] |= bit;
        } else {
            self.rows[i] &= !bit;
        }
    }

    pub fn row_words(&self) -> &[u64] {
        &self.rows
    }

    /// Row-major bit string packed into one word, cell (1,1) most significant.
    /// Requires `n <= 8`.
    pub fn code(&self) -> u64 {
        assert!(self.n * self.n <= 64);
        self.rows.iter().fold(0, |acc, &r| (acc << self.n) | r)
    }

    pub fn row_degree(&self, i: usize) -> usize {
        self.rows[i].count_ones() as usize
    }

    pub fn col_degree(&self, j: usize) -> usize {
        (0..self.n).filter(|&i| self.get(i, j)).count()
    }

    pub fn row_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.row_degree(i)).collect()
    }

    pub fn col_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|j| self.col_degree(j)).collect()
    }

    /// Positions of the ones, 0-based, in row-major order.
    pub fn ones_positions(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j))
            .collect()
    }

    /// `result[i][j] = self[rows(i)][cols(j)]`.
    pub fn permuted(&self, rows: &Permutation, cols: &Permutation) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(rows.apply(i), cols.apply(j)) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for (i, j) in self.ones_positions() {
            out.set(j, i, true);
        }
        out
    }

    pub fn to_bit_strings(&self) -> Vec<String> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| if self.get(i, j) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_bit_strings() {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

pub(crate) fn row_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_matches_row_major_bit_string() {
        let m = BinaryMatrix::from_bit_strings(&["010", "110", "001"]).unwrap();
        assert_eq!(m.code(), 0b010_110_001);
        assert_eq!(BinaryMatrix::from_code(3, m.code()), m);
        assert_eq!(m.k(), 4);
        assert_eq!(m.row_degrees(), vec![1, 2, 1]);
        assert_eq!(m.col_degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn permuted_moves_rows_and_columns() {
        let m = BinaryMatrix::from_bit_strings(&["10", "00"]).unwrap();
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        let id = Permutation::identity(2);
        assert_eq!(m.permuted(&swap, &id).to_bit_strings(), ["00", "10"]);
        assert_eq!(m.permuted(&id, &swap).to_bit_strings(), ["01", "00"]);
    }

    #[test]
    fn rejects_bad_bit_strings() {
        assert!(BinaryMatrix::from_bit_strings(&["01", "2 "]).is_err());
        assert!(BinaryMatrix::from_bit_strings(&["01", "1"]).is_err());
    }
}
