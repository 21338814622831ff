//! Helly-number bounds, the vertex condition on certificate points, and
//! verification of Helly witnesses (lower-bound certificates for h(S)).

use serde::Serialize;

use crate::error::{ensure_dim, Error, Result};
use crate::feasible_set::DiscreteSet;
use crate::geometry::{hull_membership, Polyhedron};
use crate::numerics::Vector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetDescriptor {
    /// Subset of ℤⁿ.
    PureInteger { dimension: usize },
    /// Subset of ℝᵈ × ℤⁿ cut out by a convex set.
    MixedInteger { continuous: usize, integer: usize },
    Explicit { size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HellyBound {
    pub set_kind: SetDescriptor,
    pub bound: Option<u128>,
}

/// `h(S) ≤ 2ⁿ(d + 1)` for `S = (ℝᵈ × ℤⁿ) ∩ C` with C convex.
pub fn mixed_integer_bound(continuous: usize, integer: usize) -> HellyBound {
    let bound = 1u128
        .checked_shl(integer as u32)
        .and_then(|p| p.checked_mul(continuous as u128 + 1));
    let set_kind = if continuous == 0 {
        SetDescriptor::PureInteger { dimension: integer }
    } else {
        SetDescriptor::MixedInteger { continuous, integer }
    };
    HellyBound { set_kind, bound }
}

/// `2ⁿ` for integer polytopes, `|S|` for explicit point lists.
pub fn bound_for(set: &DiscreteSet) -> HellyBound {
    match set.explicit_points() {
        Some(points) => HellyBound {
            set_kind: SetDescriptor::Explicit { size: points.len() },
            bound: Some(points.len() as u128),
        },
        None => mixed_integer_bound(0, set.dim()),
    }
}

/// Checks `V = conv(V) ∩ S = vert(conv(V))` against the enumerated S.
pub fn check_v_condition(v: &[Vector], set: &DiscreteSet, cap: u128) -> Result<bool> {
    let points = set.enumerate(cap)?;
    for (index, p) in v.iter().enumerate() {
        ensure_dim(set.dim(), p.dim())?;
        if !set.contains(p)? {
            return Err(Error::VNotSubsetOfS { index });
        }
    }
    check_v_condition_in(v, &points)
}

pub(crate) fn check_v_condition_in(v: &[Vector], points: &[Vector]) -> Result<bool> {
    if v.is_empty() {
        return Ok(true);
    }
    let mut sorted = v.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != v.len() {
        return Err(Error::PreconditionViolated("V contains duplicate points".into()));
    }
    for s in points {
        if !v.contains(s) && hull_membership(v, s)? {
            return Ok(false);
        }
    }
    for (i, p) in v.iter().enumerate() {
        let rest: Vec<Vector> = v.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.clone()).collect();
        if !rest.is_empty() && hull_membership(&rest, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A convex set in a Helly witness, in H- or V-form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConvexSet {
    Polyhedron(Polyhedron),
    /// conv of the listed points; the empty list is the empty set.
    Hull(Vec<Vector>),
}

impl ConvexSet {
    pub fn contains(&self, x: &Vector) -> Result<bool> {
        match self {
            ConvexSet::Polyhedron(p) => p.contains(x),
            ConvexSet::Hull(points) if points.is_empty() => Ok(false),
            ConvexSet::Hull(points) => hull_membership(points, x),
        }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        match self {
            ConvexSet::Polyhedron(p) => ensure_dim(n, p.dim()),
            ConvexSet::Hull(points) => points.iter().try_for_each(|p| ensure_dim(n, p.dim())),
        }
    }
}

/// Convex sets C₁..C_m together with S.
#[derive(Clone, Debug)]
pub struct WitnessConfiguration {
    pub sets: Vec<ConvexSet>,
    pub set: DiscreteSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum WitnessFailure {
    /// ⋂ Cᵢ ∩ S ≠ ∅.
    FullIntersectionMeetsSet { point: Vector },
    /// ⋂_{i≠j} Cᵢ ∩ S = ∅ for this j.
    LeaveOneOutMissesSet { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub valid: bool,
    pub m: usize,
    pub failure: Option<WitnessFailure>,
}

impl WitnessReport {
    /// The certified lower bound `h(S) ≥ m`, when valid.
    pub fn implied_lower_bound(&self) -> Option<usize> {
        self.valid.then_some(self.m)
    }
}

/// Checks both Helly conditions by enumerating S.
pub fn verify_witness(w: &WitnessConfiguration, cap: u128) -> Result<WitnessReport> {
    let n = w.set.dim();
    for c in &w.sets {
        c.check_dim(n)?;
    }
    let points = w.set.enumerate(cap)?;
    let m = w.sets.len();
    // membership[s][i] = s ∈ Cᵢ
    let membership: Vec<Vec<bool>> = points
        .iter()
        .map(|s| w.sets.iter().map(|c| c.contains(s)).collect::<Result<Vec<bool>>>())
        .collect::<Result<_>>()?;

    if let Some(idx) = membership.iter().position(|row| row.iter().all(|&b| b)) {
        return Ok(WitnessReport {
            valid: false,
            m,
            failure: Some(WitnessFailure::FullIntersectionMeetsSet {
                point: points[idx].clone(),
            }),
        });
    }
    for j in 0..m {
        let met = membership
            .iter()
            .any(|row| row.iter().enumerate().all(|(i, &b)| i == j || b));
        if !met {
            return Ok(WitnessReport {
                valid: false,
                m,
                failure: Some(WitnessFailure::LeaveOneOutMissesSet { index: j }),
            });
        }
    }
    Ok(WitnessReport {
        valid: true,
        m,
        failure: None,
    })
}

/// The leave-one-out hulls `Cᵢ = conv(V ∖ {vᵢ})`.
pub fn leave_one_out_witness(v: &[Vector], set: &DiscreteSet) -> WitnessConfiguration {
    let sets = (0..v.len())
        .map(|i| {
            ConvexSet::Hull(
                v.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, p)| p.clone())
                    .collect(),
            )
        })
        .collect();
    WitnessConfiguration {
        sets,
        set: set.clone(),
    }
}
