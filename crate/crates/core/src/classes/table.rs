use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::canon::{psi_vector, ColumnGroup, DegreeProfile, MAX_CANON_N};
use super::{class_weight, enumerate_classes, EnumerationLimit, GraphClass};
use crate::counting::binomial;
use crate::error::{Error, Result};
use crate::matrix::binary::BinaryMatrix;

pub const CACHE_DIR_ENV: &str = "SPERMAT_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".spermat-cache";

/// Where a table came from. Kept apart from the data so two runs can be
/// compared byte-for-byte once this field is dropped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub version: String,
    pub created_unix: u64,
}

impl Provenance {
    pub fn now() -> Self {
        Provenance {
            generator: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTable {
    pub n: usize,
    pub classes: Vec<GraphClass>,
    pub provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
struct ClassRecord {
    k: usize,
    canonical: Vec<String>,
    orbit_size: u64,
    psi: Vec<usize>,
    weight: String,
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    n: usize,
    classes: Vec<ClassRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

impl ClassTable {
    pub fn new(n: usize, classes: Vec<GraphClass>) -> Self {
        ClassTable {
            n,
            classes,
            provenance: Some(Provenance::now()),
        }
    }

    pub fn classes_with_k(&self, k: usize) -> impl Iterator<Item = &GraphClass> {
        self.classes.iter().filter(move |c| c.k == k)
    }

    /// Number of classes per edge count `k = 0..=n^2`.
    pub fn counts_per_k(&self) -> Vec<usize> {
        (0..=self.n * self.n)
            .map(|k| self.classes_with_k(k).count())
            .collect()
    }

    /// Sum of orbit sizes per edge count `k = 0..=n^2`.
    pub fn orbit_sums(&self) -> Vec<u64> {
        (0..=self.n * self.n)
            .map(|k| self.classes_with_k(k).map(|c| c.orbit_size).sum())
            .collect()
    }

    /// Fails with `IncompleteTable` unless the classes with `k` edges cover
    /// all `C(n^2, k)` matrices.
    pub fn check_complete_for(&self, k: usize) -> Result<()> {
        let found: BigUint = self
            .classes_with_k(k)
            .map(|c| BigUint::from(c.orbit_size))
            .sum();
        let expected = binomial(self.n * self.n, k);
        if found != expected {
            return Err(Error::IncompleteTable {
                k,
                found: found.to_string(),
                expected: expected.to_string(),
            });
        }
        Ok(())
    }

    pub fn check_complete(&self) -> Result<()> {
        (0..=self.n * self.n).try_for_each(|k| self.check_complete_for(k))
    }

    pub fn to_json(&self) -> String {
        let doc = TableDoc {
            n: self.n,
            classes: self
                .classes
                .iter()
                .map(|c| ClassRecord {
                    k: c.k,
                    canonical: c.canonical.to_bit_strings(),
                    orbit_size: c.orbit_size,
                    psi: c.psi.as_slice().to_vec(),
                    weight: c.weight.to_string(),
                })
                .collect(),
            provenance: self.provenance.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("serializing plain data")
    }

    /// Parses and re-derives every record; any field that disagrees with its
    /// canonical matrix is rejected. Completeness is checked separately.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TableDoc = serde_json::from_str(text)?;
        let n = doc.n;
        if n == 0 || n > MAX_CANON_N {
            return Err(Error::InvalidTable(format!(
                "n={n} outside [1,{MAX_CANON_N}]"
            )));
        }
        let group = ColumnGroup::new(n);
        let mut seen = HashSet::new();
        let mut classes = Vec::with_capacity(doc.classes.len());
        for (idx, rec) in doc.classes.into_iter().enumerate() {
            let bad = |what: &str| Error::InvalidTable(format!("class #{}: {what}", idx + 1));
            if rec.canonical.len() != n {
                return Err(bad("canonical has the wrong number of rows"));
            }
            let canonical = BinaryMatrix::from_bit_strings(&rec.canonical)?;
            let code = canonical.code();
            if group.canonical_code(code) != code {
                return Err(bad("representative is not in canonical form"));
            }
            if !seen.insert(code) {
                return Err(bad("duplicate class"));
            }
            if rec.k != canonical.k() {
                return Err(bad("k does not match the representative"));
            }
            if rec.orbit_size != group.orbit_size(code) {
                return Err(bad("orbit_size does not match the representative"));
            }
            let psi = psi_vector(&canonical);
            if rec.psi != psi.as_slice() {
                return Err(bad("psi does not match the representative"));
            }
            let weight: BigUint = rec
                .weight
                .parse()
                .map_err(|_| bad("weight is not a decimal integer"))?;
            if weight != class_weight(&psi) {
                return Err(bad("weight does not match psi"));
            }
            classes.push(GraphClass {
                k: rec.k,
                canonical,
                orbit_size: rec.orbit_size,
                psi: DegreeProfile::from_counts(rec.psi),
                weight,
            });
        }
        Ok(ClassTable {
            n,
            classes,
            provenance: doc.provenance,
        })
    }

    /// CSV with columns `k, orbit_size, psi_0..psi_n, weight`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["k".to_string(), "orbit_size".to_string()];
        header.extend((0..=self.n).map(|i| format!("psi_{i}")));
        header.push("weight".to_string());
        w.write_record(&header)?;
        for c in &self.classes {
            let mut rec = vec![c.k.to_string(), c.orbit_size.to_string()];
            rec.extend(c.psi.as_slice().iter().map(usize::to_string));
            rec.push(c.weight.to_string());
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
    }
}

/// On-disk cache of class tables, one JSON file per `n`.
#[derive(Debug, Clone)]
pub struct ClassCache {
    dir: PathBuf,
}

impl ClassCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ClassCache { dir: dir.into() }
    }

    /// Uses `$SPERMAT_CACHE_DIR`, falling back to `./.spermat-cache`.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_DIR_ENV).unwrap_or_else(|| DEFAULT_CACHE_DIR.into()))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, n: usize) -> PathBuf {
        self.dir.join(format!("classes-n{n}.json"))
    }

    /// A cached table that parses, validates and is complete; `None` otherwise.
    pub fn load(&self, n: usize) -> Option<ClassTable> {
        let text = fs::read_to_string(self.path_for(n)).ok()?;
        let table = ClassTable::from_json(&text).ok()?;
        (table.n == n && table.check_complete().is_ok()).then_some(table)
    }

    pub fn store(&self, table: &ClassTable) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(table.n);
        fs::write(&path, table.to_json())?;
        Ok(path)
    }

    /// Returns the cached table unless `force` is set or the cache is
    /// missing or unusable, in which case the table is enumerated and stored.
    pub fn load_or_build(
        &self,
        n: usize,
        limit: EnumerationLimit,
        force: bool,
    ) -> Result<ClassTable> {
        limit.check(n)?;
        if !force {
            if let Some(table) = self.load(n) {
                return Ok(table);
            }
        }
        let table = enumerate_classes(n, limit)?;
        self.store(&table)?;
        Ok(table)
    }
}
