//! Finite point sets S and the interior minimization oracle.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::error::{ensure_dim, Error, Result};
use crate::geometry::Polyhedron;
use crate::numerics::{Scalar, Vector};
use crate::objective::ConvexFunction;

/// Default cap on the number of enumerated points.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
enum SetKind {
    ExplicitPoints {
        points: Vec<Vector>,
    },
    IntegerPolytope {
        constraints: Polyhedron,
        lower: Vec<i64>,
        upper: Vec<i64>,
    },
}

/// A finite subset of ℚⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteSet {
    dim: usize,
    kind: SetKind,
}

impl DiscreteSet {
    /// A nonempty, duplicate-free list of points.
    pub fn explicit(points: Vec<Vector>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::EmptySet);
        };
        let dim = first.dim();
        for p in &points {
            ensure_dim(dim, p.dim())?;
        }
        let mut sorted: Vec<(usize, &Vector)> = points.iter().enumerate().collect();
        sorted.sort_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)));
        if let Some(w) = sorted.windows(2).find(|w| w[0].1 == w[1].1) {
            return Err(Error::DuplicatePoint { index: w[1].0 });
        }
        Ok(DiscreteSet {
            dim,
            kind: SetKind::ExplicitPoints { points },
        })
    }

    /// `{x ∈ ℤⁿ : x ∈ constraints, lower ≤ x ≤ upper}`.
    pub fn integer_polytope(constraints: Polyhedron, lower: Vec<i64>, upper: Vec<i64>) -> Result<Self> {
        let dim = constraints.dim();
        ensure_dim(dim, lower.len())?;
        ensure_dim(dim, upper.len())?;
        if let Some(i) = (0..dim).find(|&i| lower[i] > upper[i]) {
            return Err(Error::InvalidBox(format!(
                "coordinate {i}: lower {} exceeds upper {}",
                lower[i], upper[i]
            )));
        }
        Ok(DiscreteSet {
            dim,
            kind: SetKind::IntegerPolytope {
                constraints,
                lower,
                upper,
            },
        })
    }

    /// All integer points of a box.
    pub fn integer_box(lower: Vec<i64>, upper: Vec<i64>) -> Result<Self> {
        let dim = lower.len();
        DiscreteSet::integer_polytope(Polyhedron::whole_space(dim), lower, upper)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_integer_polytope(&self) -> bool {
        matches!(self.kind, SetKind::IntegerPolytope { .. })
    }

    pub fn explicit_points(&self) -> Option<&[Vector]> {
        match &self.kind {
            SetKind::ExplicitPoints { points } => Some(points),
            SetKind::IntegerPolytope { .. } => None,
        }
    }

    /// Constraint polyhedron and integer box of an integer polytope.
    pub fn polytope_parts(&self) -> Option<(&Polyhedron, &[i64], &[i64])> {
        match &self.kind {
            SetKind::IntegerPolytope {
                constraints,
                lower,
                upper,
            } => Some((constraints, lower, upper)),
            SetKind::ExplicitPoints { .. } => None,
        }
    }

    /// Number of candidate points a full enumeration visits.
    pub fn enumeration_size(&self) -> u128 {
        match &self.kind {
            SetKind::ExplicitPoints { points } => points.len() as u128,
            SetKind::IntegerPolytope { lower, upper, .. } => lower
                .iter()
                .zip(upper)
                .map(|(l, u)| (*u as i128 - *l as i128 + 1) as u128)
                .try_fold(1u128, |acc, w| acc.checked_mul(w))
                .unwrap_or(u128::MAX),
        }
    }

    /// Exact membership test.
    pub fn contains(&self, x: &Vector) -> Result<bool> {
        ensure_dim(self.dim, x.dim())?;
        Ok(match &self.kind {
            SetKind::ExplicitPoints { points } => points.contains(x),
            SetKind::IntegerPolytope {
                constraints,
                lower,
                upper,
            } => {
                x.is_integral()
                    && x.iter().zip(lower.iter().zip(upper)).all(|(v, (l, u))| {
                        v >= &Scalar::from(*l) && v <= &Scalar::from(*u)
                    })
                    && constraints.contains(x)?
            }
        })
    }

    /// Every point once; integer polytopes in lexicographic order.
    pub fn enumerate(&self, cap: u128) -> Result<Vec<Vector>> {
        let size = self.enumeration_size();
        if size > cap {
            return Err(Error::BoxTooLarge { size, cap });
        }
        match &self.kind {
            SetKind::ExplicitPoints { points } => Ok(points.clone()),
            SetKind::IntegerPolytope {
                constraints,
                lower,
                upper,
            } => {
                let mut out = Vec::new();
                let mut current = lower.clone();
                loop {
                    let x = Vector::new(current.iter().map(|&c| Scalar::from(c)).collect());
                    if constraints.contains(&x)? {
                        out.push(x);
                    }
                    // odometer, last coordinate fastest
                    let mut axis = self.dim;
                    loop {
                        if axis == 0 {
                            return Ok(out);
                        }
                        axis -= 1;
                        if current[axis] < upper[axis] {
                            current[axis] += 1;
                            break;
                        }
                        current[axis] = lower[axis];
                    }
                }
            }
        }
    }

    /// Coordinate-wise bounding box of the set's candidates, or `None` if
    /// an explicit set is all there is and it is empty.
    pub fn bounding_box(&self) -> (Vector, Vector) {
        match &self.kind {
            SetKind::ExplicitPoints { points } => {
                let lo = (0..self.dim)
                    .map(|i| points.iter().map(|p| &p[i]).min().expect("nonempty").clone())
                    .collect();
                let hi = (0..self.dim)
                    .map(|i| points.iter().map(|p| &p[i]).max().expect("nonempty").clone())
                    .collect();
                (lo, hi)
            }
            SetKind::IntegerPolytope { lower, upper, .. } => (
                lower.iter().map(|&v| Scalar::from(BigInt::from(v))).collect(),
                upper.iter().map(|&v| Scalar::from(BigInt::from(v))).collect(),
            ),
        }
    }
}

/// Result of one oracle call: the chosen minimizer over int(Q) ∩ S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub minimizer: Vector,
    pub value: Scalar,
    pub face_dim: usize,
    /// Number of interior points attaining the minimal value.
    pub tie_set_size: usize,
}

/// Minimizes f over int(Q) ∩ S, preferring the largest face dimension and
/// then the lexicographically smallest point. `None` when int(Q) ∩ S = ∅.
pub fn argmin_interior(
    f: &ConvexFunction,
    set: &DiscreteSet,
    region: &Polyhedron,
    cap: u128,
) -> Result<Option<OracleResult>> {
    let points = set.enumerate(cap)?;
    argmin_interior_of(f, &points, region)
}

/// As [`argmin_interior`], over an already enumerated point list.
pub fn argmin_interior_of(
    f: &ConvexFunction,
    points: &[Vector],
    region: &Polyhedron,
) -> Result<Option<OracleResult>> {
    ensure_dim(f.dim(), region.dim())?;
    let mut best: Option<Scalar> = None;
    let mut ties: Vec<&Vector> = Vec::new();
    for p in points {
        if !region.strict_contains(p)? {
            continue;
        }
        let value = f.evaluate(p)?;
        match best.as_ref().map(|b| value.cmp(b)) {
            Some(Ordering::Greater) => {}
            Some(Ordering::Equal) => ties.push(p),
            _ => {
                best = Some(value);
                ties = vec![p];
            }
        }
    }
    let Some(value) = best else {
        return Ok(None);
    };
    let mut chosen: Option<(usize, &Vector)> = None;
    for &p in &ties {
        let a = f.relint_subgradient(p)?.subgradient;
        let dim = f.face_dimension(p, &a, &value)?;
        let better = match chosen {
            None => true,
            Some((d, q)) => dim > d || (dim == d && p < q),
        };
        if better {
            chosen = Some((dim, p));
        }
    }
    let (face_dim, minimizer) = chosen.expect("ties nonempty");
    Ok(Some(OracleResult {
        minimizer: minimizer.clone(),
        value,
        face_dim,
        tie_set_size: ties.len(),
    }))
}
