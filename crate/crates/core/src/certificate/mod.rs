//! Strong optimality certificates: construction by successive subgradient
//! cuts, and an independent verifier.

mod solve;
mod verify;

pub use solve::{solve, IterationRecord, SolveOptions, SolveOutcome};
pub use verify::{probe_maximality, verify, Check, Finding, VerificationReport, Verdict, VerifyOptions};

use crate::error::{ensure_dim, Error, Result};
use crate::geometry::{Halfspace, Polyhedron};
use crate::numerics::{Scalar, Vector};

/// Points `zᵢ ∈ S`, subgradients `aᵢ ∈ ∂f(zᵢ)`, values `f(zᵢ)` and the
/// gradient polyhedron `Q = {x : ⟨aᵢ, x − zᵢ⟩ ≤ 0}`, in construction order.
///
/// Fields are public so that any claimed certificate can be represented;
/// [`verify`] trusts none of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongCertificate {
    pub points: Vec<Vector>,
    pub subgradients: Vec<Vector>,
    pub values: Vec<Scalar>,
    pub polyhedron: Polyhedron,
}

impl StrongCertificate {
    /// Assembles a certificate and its gradient polyhedron from (zᵢ, aᵢ, f(zᵢ)).
    pub fn from_pairs(points: Vec<Vector>, subgradients: Vec<Vector>, values: Vec<Scalar>) -> Result<Self> {
        let polyhedron = gradient_polyhedron(&points, &subgradients)?;
        if values.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: values.len(),
            });
        }
        Ok(StrongCertificate {
            points,
            subgradients,
            values,
            polyhedron,
        })
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn dim(&self) -> usize {
        self.polyhedron.dim()
    }

    /// Smallest certified value and the first point attaining it.
    pub fn optimum(&self) -> Option<(&Scalar, &Vector)> {
        self.values
            .iter()
            .zip(&self.points)
            .min_by(|a, b| a.0.cmp(b.0))
    }
}

/// `{x : ⟨aᵢ, x − zᵢ⟩ ≤ 0, i = 1..k}`.
pub fn gradient_polyhedron(points: &[Vector], subgradients: &[Vector]) -> Result<Polyhedron> {
    let Some(first) = points.first() else {
        return Err(Error::EmptySet);
    };
    ensure_dim(points.len(), subgradients.len())?;
    let n = first.dim();
    let halfspaces = points
        .iter()
        .zip(subgradients)
        .map(|(z, a)| {
            ensure_dim(n, z.dim())?;
            Halfspace::through(a.clone(), z)
        })
        .collect::<Result<Vec<_>>>()?;
    Polyhedron::new(n, halfspaces)
}
