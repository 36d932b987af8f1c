use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::pi::{PiMatrix, MAX_PI_N};

/// An `n^2 x n^2` S-permutation matrix: one 1 in every row, every column and
/// every `n x n` block.
///
/// Only the within-block coordinates of each block's single 1 are kept
/// (0-based, row-major over blocks). The full grid is built on demand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SPermMatrix {
    n: usize,
    block_ones: Vec<(u8, u8)>,
}

/// Returns the block size `n` for a grid of side `side`, if `side = n^2`.
fn block_size(side: usize) -> Option<usize> {
    if side == 0 {
        return None;
    }
    let n = (side as f64).sqrt().round() as usize;
    (n * n == side && n <= MAX_PI_N).then_some(n)
}

/// Checks the row, column and block conditions on a full 0/1 grid.
pub fn validate_s_permutation(grid: &[Vec<bool>]) -> Result<SPermMatrix> {
    let side = grid.len();
    if let Some(row) = grid.iter().find(|r| r.len() != side) {
        return Err(Error::DimensionNotSquareOfSquare {
            rows: side,
            cols: row.len(),
        });
    }
    let n = block_size(side).ok_or(Error::DimensionNotSquareOfSquare {
        rows: side,
        cols: side,
    })?;

    for (r, row) in grid.iter().enumerate() {
        if row.iter().filter(|&&b| b).count() != 1 {
            return Err(Error::RowViolation(r + 1));
        }
    }
    for c in 0..side {
        if grid.iter().filter(|row| row[c]).count() != 1 {
            return Err(Error::ColumnViolation(c + 1));
        }
    }
    let mut block_ones = vec![None; n * n];
    let mut counts = vec![0usize; n * n];
    for (r, row) in grid.iter().enumerate() {
        for (c, _) in row.iter().enumerate().filter(|(_, &b)| b) {
            let b = (r / n) * n + c / n;
            counts[b] += 1;
            block_ones[b] = Some(((r % n) as u8, (c % n) as u8));
        }
    }
    if let Some(b) = counts.iter().position(|&c| c != 1) {
        return Err(Error::BlockViolation(b / n + 1, b % n + 1));
    }
    Ok(SPermMatrix {
        n,
        block_ones: block_ones.into_iter().map(Option::unwrap).collect(),
    })
}

impl SPermMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Side length of the full matrix, `n^2`.
    pub fn side(&self) -> usize {
        self.n * self.n
    }

    /// 1-based within-block coordinates of the 1 in block `(i, j)` (0-based block indices).
    pub fn block_one(&self, i: usize, j: usize) -> (usize, usize) {
        let (a, b) = self.block_ones[i * self.n + j];
        (a as usize + 1, b as usize + 1)
    }

    /// 0-based positions of all ones in the full grid, one per block.
    pub fn ones(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        self.block_ones
            .iter()
            .enumerate()
            .map(|(idx, &(a, b))| ((idx / n) * n + a as usize, (idx % n) * n + b as usize))
            .collect()
    }

    pub fn to_grid(&self) -> Vec<Vec<bool>> {
        let side = self.side();
        let mut grid = vec![vec![false; side]; side];
        for (r, c) in self.ones() {
            grid[r][c] = true;
        }
        grid
    }

    /// Text form: `n`, then `n^2` lines of `n^2` space-separated digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.to_grid() {
            let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let (n, rows) = parse_grid_text(text, |tok| match tok {
            "0" => Some(false),
            "1" => Some(true),
            _ => None,
        })?;
        let m = validate_s_permutation(&rows)?;
        debug_assert_eq!(m.n, n);
        Ok(m)
    }
}

/// Reads the shared `n` + `n^2` rows layout used by the S-permutation and
/// Sudoku text formats. Lines are 1-based in errors; trailing blank lines are ignored.
pub(crate) fn parse_grid_text<T>(
    text: &str,
    token: impl Fn(&str) -> Option<T>,
) -> Result<(usize, Vec<Vec<T>>)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty input, expected n"))?;
    let n: usize = header.parse().map_err(|_| {
        Error::parse(
            1,
            format!("expected a positive integer n, found {header:?}"),
        )
    })?;
    if n == 0 || n > MAX_PI_N {
        return Err(Error::parse(1, format!("n={n} outside [1,{MAX_PI_N}]")));
    }
    let side = n * n;
    let mut rows = Vec::new();
    for (lineno, line) in lines.by_ref() {
        if rows.len() == side {
            if line.is_empty() {
                continue;
            }
            return Err(Error::parse(
                lineno,
                "unexpected content after the last row",
            ));
        }
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            let v =
                token(tok).ok_or_else(|| Error::parse(lineno, format!("invalid entry {tok:?}")))?;
            row.push(v);
            if row.len() > side {
                break;
            }
        }
        if row.len() != side {
            return Err(Error::parse(
                lineno,
                format!(
                    "expected {side} entries, found {}",
                    line.split_whitespace().count()
                ),
            ));
        }
        rows.push(row);
    }
    if rows.len() != side {
        return Err(Error::parse(
            rows.len() + 2,
            format!("expected {side} rows, found {}", rows.len()),
        ));
    }
    Ok((n, rows))
}

/// Reads off the Π-matrix whose entry `(i,j)` is the position of the 1 in block `(i,j)`.
pub fn sigma_to_pi(a: &SPermMatrix) -> PiMatrix {
    PiMatrix::from_zero_based(a.n, a.block_ones.clone())
        .expect("a valid S-permutation matrix always yields a valid Pi matrix")
}

/// Places a single 1 in every block at the coordinates given by the Π-matrix entry.
pub fn pi_to_sigma(p: &PiMatrix) -> SPermMatrix {
    SPermMatrix {
        n: p.n(),
        block_ones: p.raw().to_vec(),
    }
}

/// True iff the two full grids share no position holding a 1.
pub fn disjoint_sigma(a: &SPermMatrix, b: &SPermMatrix) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::SizeMismatch(a.n, b.n));
    }
    let ones: HashSet<(usize, usize)> = a.ones().into_iter().collect();
    Ok(b.ones().iter().all(|p| !ones.contains(p)))
}
