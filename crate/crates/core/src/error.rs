use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Positions are 1-based `(row, column)` pairs, matching the usual
/// `a(i, j)` indexing of a monotone triangle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("entries must strictly increase along a row; violated at ({row},{col})")]
    StrictIncreaseViolated { row: usize, col: usize },

    #[error("adjacent rows do not interlace at ({row},{col})")]
    InterlacingViolated { row: usize, col: usize },

    #[error("bottom row must be 1..n; wrong entry at column {col}")]
    BadBottomRow { col: usize },

    #[error("entry at ({row},{col}) is {value}, outside 1..={n}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: i64,
        n: usize,
    },

    #[error("size {n} is too small (need at least {min})")]
    SizeTooSmall { n: usize, min: usize },

    #[error("size {n} exceeds the supported maximum of {max}")]
    SizeTooLarge { n: usize, max: usize },

    #[error("operands have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },

    #[error("empty input: at least one triangle is required")]
    EmptyInput,

    #[error("not a column-sum matrix: {0}")]
    NotAColumnSumMatrix(String),

    #[error("not an alternating-sign matrix: {0}")]
    NotAnAsm(String),

    #[error("not a permutation of 1..={n}: {detail}")]
    NotAPermutation { n: usize, detail: String },

    #[error("{what} limit exceeded: n = {n}, limit = {limit}")]
    LimitExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("index {index} out of range (count is {count})")]
    IndexOutOfRange { index: String, count: String },

    #[error("row {row} out of range for n = {n} (allowed 1..={max})")]
    RowOutOfRange { row: usize, n: usize, max: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error on line {line}: {detail}")]
    Parse { line: usize, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
