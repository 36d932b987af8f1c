//! Equivalence classes of `n x n` binary matrices under independent row and
//! column permutations (equivalently, isomorphism classes of bipartite graphs
//! with labelled parts of size `n`).

mod canon;
mod table;

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

pub use canon::{
    canonical_form, orbit_size, psi_vector, stabilizer_size, ColumnGroup, DegreeProfile,
    MAX_CANON_N,
};
pub use table::{ClassCache, ClassTable, Provenance, CACHE_DIR_ENV, DEFAULT_CACHE_DIR};

use crate::error::{Error, Result};
use crate::matrix::binary::BinaryMatrix;
use crate::matrix::perm::factorial;

/// One class: its lex-min representative and the numbers the counting formula needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphClass {
    pub k: usize,
    pub canonical: BinaryMatrix,
    pub orbit_size: u64,
    pub psi: DegreeProfile,
    pub weight: BigUint,
}

impl GraphClass {
    /// Derives every field from a representative (need not be canonical).
    pub fn from_matrix(m: &BinaryMatrix) -> Self {
        let group = ColumnGroup::new(m.n());
        let code = group.canonical_code(m.code());
        Self::from_canonical_code(&group, m.n(), code)
    }

    fn from_canonical_code(group: &ColumnGroup, n: usize, code: u64) -> Self {
        let canonical = BinaryMatrix::from_code(n, code);
        let psi = psi_vector(&canonical);
        GraphClass {
            k: canonical.k(),
            orbit_size: group.orbit_size(code),
            weight: class_weight(&psi),
            psi,
            canonical,
        }
    }

    pub fn n(&self) -> usize {
        self.canonical.n()
    }
}

/// `prod_{i=0}^{n-2} ((n-i)!)^{psi[i]}`; the empty product (n=1) is 1.
pub fn class_weight(psi: &DegreeProfile) -> BigUint {
    weight_up_to(psi, psi.n().saturating_sub(1))
}

/// The same product taken over `i = 0..=n`; the two extra factors are `1!` and `0!`.
pub fn class_weight_all_degrees(psi: &DegreeProfile) -> BigUint {
    weight_up_to(psi, psi.n() + 1)
}

fn weight_up_to(psi: &DegreeProfile, end: usize) -> BigUint {
    let n = psi.n();
    (0..end).fold(BigUint::one(), |acc, i| {
        acc * BigUint::from(factorial(n - i)).pow(psi.get(i) as u32)
    })
}

/// Size guard for exhaustive class enumeration.
#[derive(Debug, Clone, Copy)]
pub struct EnumerationLimit {
    pub max_n: usize,
    pub allow_large: bool,
}

impl EnumerationLimit {
    pub const DEFAULT_MAX_N: usize = 4;
    /// Hard ceiling with the override flag set.
    pub const LARGE_MAX_N: usize = 5;

    pub fn check(&self, n: usize) -> Result<()> {
        let limit = if self.allow_large {
            Self::LARGE_MAX_N.max(self.max_n)
        } else {
            self.max_n
        };
        if n == 0 || n > limit {
            return Err(Error::InfeasibleSize { n, limit });
        }
        Ok(())
    }

    pub fn is_large(&self, n: usize) -> bool {
        n > self.max_n
    }
}

impl Default for EnumerationLimit {
    fn default() -> Self {
        EnumerationLimit {
            max_n: Self::DEFAULT_MAX_N,
            allow_large: false,
        }
    }
}

/// Scans all `2^(n^2)` matrices, groups them by canonical form and emits one
/// record per class, sorted by `(k, canonical bit string)`.
///
/// Orbit sizes come from the stabilizer and are cross-checked against the
/// number of scanned members of each class.
pub fn enumerate_classes(n: usize, limit: EnumerationLimit) -> Result<ClassTable> {
    limit.check(n)?;
    let group = ColumnGroup::new(n);
    let total = 1u64 << (n * n);
    let members: HashMap<u64, u64> = (0..total)
        .into_par_iter()
        .fold(HashMap::new, |mut acc, code| {
            *acc.entry(group.canonical_code(code)).or_insert(0u64) += 1;
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (code, count) in b {
                *a.entry(code).or_insert(0) += count;
            }
            a
        });

    let mut classes = Vec::with_capacity(members.len());
    for (&code, &count) in &members {
        let class = GraphClass::from_canonical_code(&group, n, code);
        if class.orbit_size != count {
            return Err(Error::Inconsistent(format!(
                "class {code:#x}: stabilizer gives orbit {} but the scan found {count} members",
                class.orbit_size
            )));
        }
        classes.push(class);
    }
    classes.sort_by_key(|c| (c.k, c.canonical.code()));
    Ok(ClassTable::new(n, classes))
}
