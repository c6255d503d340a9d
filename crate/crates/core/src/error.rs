//! Error type shared by every module of the crate.

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

/// Alias for results produced by this crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the filtering, localization, and
/// simulation layers.
///
/// Shape and finiteness problems are contract violations caught at operation
/// boundaries; the remaining variants are genuine runtime conditions
/// (singular systems, degenerate geometry, failed runs).
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes are incompatible for the attempted operation.
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Matrix construction with zero dimensions or a mismatched data length.
    InvalidDimensions { rows: usize, cols: usize, len: usize },
    /// A square matrix was required.
    NotSquare { rows: usize, cols: usize },
    /// An operation produced (or was handed) a NaN or infinity.
    NonFinite { op: &'static str },
    /// Pivoted elimination found no usable pivot in the given column.
    SingularMatrix { column: usize },
    /// Cholesky factorization hit a non-positive pivot at the given index.
    NotPositiveDefinite { index: usize },
    /// A covariance drifted further from positive semidefinite than allowed.
    NotPositiveSemidefinite { min_pivot: f64 },
    /// A matrix that must be symmetric is not, within tolerance.
    NotSymmetric { max_asymmetry: f64 },
    /// Time-of-arrival values must be nonnegative.
    NegativeToa { toa: f64 },
    /// Trilateration needs at least three anchors.
    TooFewAnchors { got: usize },
    /// Anchor and range lists must pair up one-to-one.
    RangeCountMismatch { anchors: usize, ranges: usize },
    /// The anchor geometry is rank deficient; the least-squares normal
    /// equations are singular at the given column.
    CollinearAnchors { column: usize },
    /// An observation referenced an anchor id that is not configured.
    UnknownAnchor { id: String },
    /// More than one observation was supplied for the same anchor.
    DuplicateObservation { id: String },
    /// The anchor list itself repeats an id.
    DuplicateAnchor { id: String },
    /// A scenario field violates its documented range.
    InvalidScenario { reason: &'static str },
    /// A filter run aborted at the given step.
    StepFailed { step: usize, source: Box<Error> },
    /// A Monte Carlo run aborted; the seed identifies which one.
    RunFailed { seed: u64, source: Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch { op, left, right } => write!(
                f,
                "shape mismatch in {op}: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::InvalidDimensions { rows, cols, len } => write!(
                f,
                "invalid matrix dimensions: {rows}x{cols} with {len} data entries"
            ),
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Error::NonFinite { op } => write!(f, "non-finite value in {op}"),
            Error::SingularMatrix { column } => {
                write!(f, "matrix is singular: no usable pivot in column {column}")
            }
            Error::NotPositiveDefinite { index } => write!(
                f,
                "matrix is not positive definite: non-positive pivot at index {index}"
            ),
            Error::NotPositiveSemidefinite { min_pivot } => write!(
                f,
                "covariance is not positive semidefinite: min pivot {min_pivot:e}"
            ),
            Error::NotSymmetric { max_asymmetry } => write!(
                f,
                "matrix is not symmetric: max asymmetry {max_asymmetry:e}"
            ),
            Error::NegativeToa { toa } => {
                write!(f, "time of arrival must be nonnegative, got {toa}")
            }
            Error::TooFewAnchors { got } => {
                write!(f, "at least 3 anchors are required, got {got}")
            }
            Error::RangeCountMismatch { anchors, ranges } => {
                write!(f, "{anchors} anchors but {ranges} ranges")
            }
            Error::CollinearAnchors { column } => write!(
                f,
                "anchors are collinear: normal equations singular in column {column}"
            ),
            Error::UnknownAnchor { id } => write!(f, "unknown anchor id {id:?}"),
            Error::DuplicateObservation { id } => {
                write!(f, "multiple observations for anchor id {id:?}")
            }
            Error::DuplicateAnchor { id } => write!(f, "duplicate anchor id {id:?}"),
            Error::InvalidScenario { reason } => write!(f, "invalid scenario: {reason}"),
            Error::StepFailed { step, source } => {
                write!(f, "filter run failed at step {step}: {source}")
            }
            Error::RunFailed { seed, source } => {
                write!(f, "run with seed {seed} failed: {source}")
            }
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::StepFailed { source, .. } | Error::RunFailed { source, .. } => Some(source),
            _ => None,
        }
    }
}
