use thiserror::Error;

/// Reasons a candidate Π-matrix fails the row/column permutation conditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PiError {
    #[error("expected {expected} entries for n={n}, found {found}")]
    Shape {
        n: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row},{col}) = <{a},{b}> is outside [1,{n}]x[1,{n}]")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        a: usize,
        b: usize,
        n: usize,
    },
    #[error("RowFirstComponentNotPermutation({0})")]
    RowFirstComponentNotPermutation(usize),
    #[error("ColumnSecondComponentNotPermutation({0})")]
    ColumnSecondComponentNotPermutation(usize),
}

/// Every fallible operation in the crate reports one of these.
///
/// All indices carried by the variants are 1-based.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid of size {rows}x{cols} is not n^2 x n^2 for a positive integer n")]
    DimensionNotSquareOfSquare { rows: usize, cols: usize },
    #[error("RowViolation at row {0}")]
    RowViolation(usize),
    #[error("ColumnViolation at column {0}")]
    ColumnViolation(usize),
    #[error("BlockViolation at block ({0},{1})")]
    BlockViolation(usize, usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid Pi matrix: {0}")]
    InvalidPiMatrix(#[from] PiError),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("family has {found} matrices, expected {expected}")]
    FamilySizeWrong { expected: usize, found: usize },
    #[error("family members {0} and {1} are not disjoint")]
    FamilyNotPairwiseDisjoint(usize, usize),
    #[error("cell ({0},{1}) received no value")]
    CellUncovered(usize, usize),
    #[error("invalid Sudoku matrix: {0}")]
    InvalidSudoku(String),
    #[error("InfeasibleSize: n={n} exceeds the limit {limit}")]
    InfeasibleSize { n: usize, limit: usize },
    #[error("IncompleteTable: orbit sizes for k={k} sum to {found}, expected {expected}")]
    IncompleteTable {
        k: usize,
        found: String,
        expected: String,
    },
    #[error("UndefinedForN1: there is no second matrix to compare against when n=1")]
    UndefinedForN1,
    #[error("invalid class table: {0}")]
    InvalidTable(String),
    #[error("internal consistency error: {0}")]
    Inconsistent(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
