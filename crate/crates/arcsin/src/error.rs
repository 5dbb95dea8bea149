//! Error type shared by every module in the crate.

use std::fmt;
use std::io;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors emitted by batch construction, injection, simulation, and I/O.
#[derive(Debug)]
pub enum Error {
    /// A batch constructor received a zero-sized shape.
    InvalidShape { rows: usize, cols: usize },
    /// Data provided to a constructor does not match the declared shape.
    DataLength { expected: usize, got: usize },
    /// Two batches that must share a shape do not.
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Two vectors that must share a length do not.
    LengthMismatch { left: usize, right: usize },
    /// A NaN or infinite entry where only finite values are allowed.
    NonFinite { row: usize, col: usize },
    /// A vector (or batch row) with zero L2 norm where a direction is required.
    ZeroNorm { row: usize },
    /// A scalar argument outside its documented domain.
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    /// An interval argument with lo >= hi.
    InvalidInterval { lo: f64, hi: f64 },
    /// Injection requires inputs already clamped to [-1, 1].
    UnclampedInput { row: usize, col: usize, value: f64 },
    /// A collection argument that must be non-empty was empty.
    Empty(&'static str),
    /// Probe training produced a non-finite loss.
    TrainingDiverged { epoch: usize },
    /// A config file line failed to parse or validate.
    ConfigParse { line: usize, message: String },
    /// An embedding or report file violated its format.
    FileFormat { message: String },
    /// Underlying I/O failure.
    Io(io::Error),
}

impl Error {
    /// Process exit code for CLI use: 1 for usage/validation errors,
    /// 2 for runtime failures (I/O, divergence).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::TrainingDiverged { .. } => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidShape { rows, cols } => {
                write!(f, "invalid shape {rows}x{cols}; both dimensions must be at least 1")
            }
            Error::DataLength { expected, got } => {
                write!(f, "data length mismatch: expected {expected} values, got {got}")
            }
            Error::ShapeMismatch { left, right } => {
                write!(
                    f,
                    "shape mismatch: {}x{} vs {}x{}",
                    left.0, left.1, right.0, right.1
                )
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::NonFinite { row, col } => {
                write!(f, "non-finite value at row {row}, column {col}")
            }
            Error::ZeroNorm { row } => {
                write!(f, "zero-norm vector at row {row}; cosine similarity is undefined")
            }
            Error::OutOfRange {
                name,
                value,
                min,
                max,
            } => {
                write!(f, "{name} = {value} is outside [{min}, {max}]")
            }
            Error::InvalidInterval { lo, hi } => {
                write!(f, "invalid interval: lo = {lo} must be strictly below hi = {hi}")
            }
            Error::UnclampedInput { row, col, value } => {
                write!(
                    f,
                    "input entry {value} at row {row}, column {col} is outside [-1, 1]; clamp before injecting"
                )
            }
            Error::Empty(what) => write!(f, "{what} must not be empty"),
            Error::TrainingDiverged { epoch } => {
                write!(f, "training diverged: non-finite loss at epoch {epoch}")
            }
            Error::ConfigParse { line, message } => {
                write!(f, "config line {line}: {message}")
            }
            Error::FileFormat { message } => write!(f, "{message}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}
