//! Exact counting of disjoint pairs of `n^2 x n^2` S-permutation matrices.
//!
//! The count comes from an inclusion–exclusion sum over classes of `n x n`
//! binary matrices under row and column permutations ([`classes`],
//! [`counting`]), and is checked against brute-force enumeration and
//! sampling over the Π-matrix representation ([`oracle`]).

pub mod classes;
pub mod cli;
pub mod counting;
pub mod error;
pub mod matrix;
pub mod oracle;

pub use error::{Error, PiError, Result};
