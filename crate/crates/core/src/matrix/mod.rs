//! Domain types for S-permutation matrices and their Π-matrix images, the
//! bijection between them, disjointness, and Sudoku composition.

pub mod binary;
pub mod fixtures;
pub mod perm;
pub mod pi;
pub mod sperm;
pub mod sudoku;

pub use binary::BinaryMatrix;
pub use perm::{factorial, Permutation};
pub use pi::{coincidence_matrix, disjoint_pi, random_pi, random_pi_with, validate_pi, PiMatrix};
pub use sperm::{disjoint_sigma, pi_to_sigma, sigma_to_pi, validate_s_permutation, SPermMatrix};
pub use sudoku::{compose_sudoku, decompose_sudoku, SudokuMatrix};
