use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::sperm::{disjoint_sigma, parse_grid_text, validate_s_permutation, SPermMatrix};

/// An `n^2 x n^2` matrix over `[n^2]` whose rows, columns and `n x n` blocks
/// are all permutations of `[n^2]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SudokuMatrix {
    n: usize,
    cells: Vec<Vec<u32>>,
}

impl SudokuMatrix {
    /// Validates a grid of 1-based values.
    pub fn new(n: usize, cells: Vec<Vec<u32>>) -> Result<Self> {
        let side = n * n;
        if n == 0 || cells.len() != side || cells.iter().any(|r| r.len() != side) {
            return Err(Error::InvalidSudoku(format!(
                "grid is not {side}x{side} for n={n}"
            )));
        }
        for (r, row) in cells.iter().enumerate() {
            if !is_perm(side, row.iter().copied()) {
                return Err(Error::InvalidSudoku(format!(
                    "row {} is not a permutation",
                    r + 1
                )));
            }
        }
        for c in 0..side {
            if !is_perm(side, cells.iter().map(|row| row[c])) {
                return Err(Error::InvalidSudoku(format!(
                    "column {} is not a permutation",
                    c + 1
                )));
            }
        }
        for bi in 0..n {
            for bj in 0..n {
                let block = (0..side).map(|t| cells[bi * n + t / n][bj * n + t % n]);
                if !is_perm(side, block) {
                    return Err(Error::InvalidSudoku(format!(
                        "block ({},{}) is not a permutation",
                        bi + 1,
                        bj + 1
                    )));
                }
            }
        }
        Ok(SudokuMatrix { n, cells })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in &self.cells {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (n, rows) = parse_grid_text(text, |tok| tok.parse::<u32>().ok())?;
        SudokuMatrix::new(n, rows)
    }
}

fn is_perm(side: usize, mut vals: impl Iterator<Item = u32>) -> bool {
    let mut seen = vec![false; side];
    vals.all(|v| {
        v >= 1 && (v as usize) <= side && !std::mem::replace(&mut seen[v as usize - 1], true)
    })
}

/// `M = 1*A_1 + 2*A_2 + ... + n^2*A_{n^2}` for a pairwise disjoint family.
pub fn compose_sudoku(family: &[SPermMatrix]) -> Result<SudokuMatrix> {
    let Some(first) = family.first() else {
        return Err(Error::FamilySizeWrong {
            expected: 1,
            found: 0,
        });
    };
    let n = first.n();
    let side = n * n;
    if family.len() != side {
        return Err(Error::FamilySizeWrong {
            expected: side,
            found: family.len(),
        });
    }
    for (s, a) in family.iter().enumerate() {
        for (t, b) in family.iter().enumerate().skip(s + 1) {
            if !disjoint_sigma(a, b)? {
                return Err(Error::FamilyNotPairwiseDisjoint(s + 1, t + 1));
            }
        }
    }
    let mut cells = vec![vec![0u32; side]; side];
    for (t, a) in family.iter().enumerate() {
        for (r, c) in a.ones() {
            cells[r][c] = t as u32 + 1;
        }
    }
    for (r, row) in cells.iter().enumerate() {
        if let Some(c) = row.iter().position(|&v| v == 0) {
            return Err(Error::CellUncovered(r + 1, c + 1));
        }
    }
    SudokuMatrix::new(n, cells)
}

/// Splits `M` into the `n^2` S-permutation matrices `A_t = [M == t]`.
pub fn decompose_sudoku(m: &SudokuMatrix) -> Vec<SPermMatrix> {
    let side = m.n * m.n;
    (1..=side as u32)
        .map(|t| {
            let grid: Vec<Vec<bool>> = m
                .cells
                .iter()
                .map(|row| row.iter().map(|&v| v == t).collect())
                .collect();
            validate_s_permutation(&grid)
                .expect("each value class of a Sudoku matrix is an S-permutation matrix")
        })
        .collect()
}
