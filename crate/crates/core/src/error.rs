use thiserror::Error;

/// Errors raised by constructors and operations of this crate.
///
/// Verification failures are *not* errors: they are reported through
/// [`crate::certificate::VerifyReport`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("weight #{index} = {weight} exceeds the available measure {available}")]
    InfeasibleWeight {
        index: usize,
        weight: String,
        available: String,
    },

    #[error("sets live over different bases")]
    BaseMismatch,

    #[error("rectangles overlap at [{a}, {b})")]
    Overlap { a: String, b: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown variable {0:?}")]
    UnknownVariable(String),

    #[error("enumeration box has {size} points, above the cap of {cap}")]
    EnumerationTooLarge { size: u128, cap: u128 },

    #[error("variable {0:?} has no finite range; supply an enumeration box")]
    UnboundedVariable(String),

    #[error("{routine}: precondition violated: {detail}")]
    Precondition { routine: &'static str, detail: String },

    #[error("{routine}: unsupported instance: {detail}")]
    Mode { routine: &'static str, detail: String },

    #[error("transportation subproblem infeasible; violating stable set has weight {weight}")]
    TransportInfeasible { weight: String },

    #[error("point is not in the convex hull of the feasible set (separator {normal:?} . x <= {rhs})")]
    NotInHull { normal: Vec<String>, rhs: String },

    #[error("certificate failed verification: {0}")]
    NotVerified(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(routine: &'static str, detail: impl Into<String>) -> Error {
    Error::Precondition {
        routine,
        detail: detail.into(),
    }
}
