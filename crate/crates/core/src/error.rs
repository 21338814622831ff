use thiserror::Error;

use crate::numerics::Scalar;

/// Errors raised by the certificate toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid rational literal {literal:?}: {reason}")]
    InvalidScalar { literal: String, reason: String },

    #[error("matrix rows have unequal lengths")]
    NotRectangular,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("quadratic form is not positive semidefinite")]
    NotPositiveSemidefinite,

    #[error("halfspace normal is the zero vector")]
    ZeroNormal,

    #[error("max-affine function needs at least one piece")]
    EmptyMaxAffine,

    #[error("sum needs at least one term")]
    EmptySum,

    #[error("polyhedron is unbounded and no box was supplied")]
    UnboundedWithoutBox,

    #[error("polyhedron is not full-dimensional")]
    NotFullDimensional,

    #[error("region is empty")]
    EmptyRegion,

    #[error("point set is empty")]
    EmptySet,

    #[error("explicit point set contains a duplicate point at index {index}")]
    DuplicatePoint { index: usize },

    #[error("invalid integer box: {0}")]
    InvalidBox(String),

    #[error("enumeration of {size} points exceeds the cap of {cap}")]
    BoxTooLarge { size: u128, cap: u128 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("internal invariant broken (implementation bug): {0}")]
    InternalInvariantBroken(String),

    #[error("V is not a subset of S (point {index})")]
    VNotSubsetOfS { index: usize },

    #[error("weak duality violated: bound {bound} exceeds primal value {primal}; the region is not an S-free neighborhood")]
    WeakDualityViolated { bound: Scalar, primal: Scalar },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
