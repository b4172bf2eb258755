use alloc::string::String;
use core::fmt;

/// Errors raised by constructors and operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Matrix or vector shapes do not agree.
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Two objects defined on different numbers of sites were combined.
    SizeMismatch { expected: usize, found: usize },
    /// A generator, site or node index outside its admissible range.
    IndexOutOfRange {
        what: &'static str,
        index: i64,
        min: i64,
        max: i64,
    },
    /// A parity or range constraint on module/sector labels is violated.
    InvalidLabel(String),
    /// An input exceeds a configured size guard.
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    /// A structural invariant of a link state or connectivity is violated.
    Invariant(String),
    /// A matrix expected to respect the magnetisation grading mixes sectors.
    MixedSectors { row: usize, col: usize },
    /// Text could not be parsed.
    Parse(String),
    /// Two independent computations of the same quantity disagree.
    InternalMismatch(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { op, left, right } => write!(
                f,
                "{op}: dimension mismatch ({}x{} vs {}x{})",
                left.0, left.1, right.0, right.1
            ),
            Error::SizeMismatch { expected, found } => {
                write!(f, "size mismatch: expected n={expected}, found n={found}")
            }
            Error::IndexOutOfRange { what, index, min, max } => {
                write!(f, "{what} {index} out of range {min}..={max}")
            }
            Error::InvalidLabel(msg) => write!(f, "invalid label: {msg}"),
            Error::LimitExceeded { what, value, limit } => {
                write!(f, "{what} = {value} exceeds the limit {limit}")
            }
            Error::Invariant(msg) => write!(f, "invariant violated: {msg}"),
            Error::MixedSectors { row, col } => {
                write!(f, "matrix mixes magnetisation sectors at entry ({row}, {col})")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InternalMismatch(msg) => write!(f, "internal cross-check failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
