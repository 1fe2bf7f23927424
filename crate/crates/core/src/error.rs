use thiserror::Error;

use crate::grpoly::Family;

/// Errors raised by the symbolic and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable family mismatch: {left:?} vs {right:?}")]
    FamilyMismatch { left: Family, right: Family },

    #[error("expected a polynomial over family {expected:?}, got {found:?}")]
    WrongFamily { expected: Family, found: Family },

    #[error("polynomial is not homogeneous")]
    NonHomogeneous,

    #[error("grading violation: {0}")]
    Grading(String),

    #[error("evaluation point has {len} entries, polynomial needs {needed}")]
    PointTooShort { len: usize, needed: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("pole of h(t) at t = {t}")]
    Pole { t: String },

    #[error("negative base {base} under fractional power at t = {t}")]
    NegativeBase { t: String, base: String },

    #[error("non-finite value at {at}")]
    NonFinite { at: String },

    #[error("degenerate projective parameter (0:0)")]
    DegenerateMobius,

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("ragged CSV row {row}: expected {expected} fields, got {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("unsupported combination: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
