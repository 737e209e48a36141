use thiserror::Error;

/// Errors raised by the matrix, canonicalization and classification routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("row {row} has length {found}, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("monomial of size {found} applied to dimension {expected}")]
    MonomialSize { expected: usize, found: usize },
    #[error("invalid monomial: {0}")]
    InvalidMonomial(String),
    #[error("representation has {found} parts, expected {expected}")]
    MultiplicityMismatch { expected: usize, found: usize },
    #[error("entry {value} exceeds the code bound {bound}")]
    EntryOutOfBound { value: i64, bound: i64 },
    #[error("depth {depth} exceeds the row count {rows}")]
    DepthTooLarge { depth: usize, rows: usize },
    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has a zero {kind} at index {index}")]
    ZeroLine { kind: &'static str, index: usize },
    #[error("block of order {order} is not in the catalog")]
    NotInCatalog { order: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
