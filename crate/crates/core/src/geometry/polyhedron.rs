use serde::Serialize;

use super::system::{affine_dimension_of, strictly_feasible_point, LinearSystem};
use crate::error::{ensure_dim, Error, Result};
use crate::numerics::{rank_of_rows, Scalar, Vector};

/// The closed halfspace `{x : ⟨normal, x⟩ ≤ offset}` with a nonzero normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Halfspace {
    normal: Vector,
    offset: Scalar,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: Scalar) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::ZeroNormal);
        }
        Ok(Halfspace { normal, offset })
    }

    /// `{x : ⟨normal, x − point⟩ ≤ 0}`.
    pub fn through(normal: Vector, point: &Vector) -> Result<Self> {
        ensure_dim(normal.dim(), point.dim())?;
        let offset = normal.dot(point);
        Halfspace::new(normal, offset)
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> &Scalar {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// `⟨normal, x⟩ − offset`; nonpositive inside.
    pub fn slack(&self, x: &Vector) -> Scalar {
        self.normal.dot(x) - &self.offset
    }

    pub fn contains(&self, x: &Vector) -> bool {
        !self.slack(x).is_positive()
    }

    pub fn strictly_contains(&self, x: &Vector) -> bool {
        self.slack(x).is_negative()
    }

    pub fn is_tight(&self, x: &Vector) -> bool {
        self.slack(x).is_zero()
    }

    /// Same normal, offset shifted outward by `epsilon`.
    pub fn relaxed(&self, epsilon: &Scalar) -> Halfspace {
        Halfspace {
            normal: self.normal.clone(),
            offset: &self.offset + epsilon,
        }
    }

    /// The opposite closed halfspace `{x : ⟨normal, x⟩ ≥ offset}`.
    pub fn flipped(&self) -> Halfspace {
        Halfspace {
            normal: self.normal.neg(),
            offset: -&self.offset,
        }
    }

    /// True if both describe the same set (normals positively proportional).
    pub fn is_equivalent(&self, other: &Halfspace) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let Some(i) = self.normal.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        if other.normal[i].is_zero() {
            return false;
        }
        let ratio = &other.normal[i] / &self.normal[i];
        ratio.is_positive()
            && other.normal == self.normal.scale(&ratio)
            && other.offset == &self.offset * &ratio
    }

    fn row(&self) -> (Vector, Scalar) {
        (self.normal.clone(), self.offset.clone())
    }
}

/// Axis-aligned rational box `lower ≤ x ≤ upper`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxBounds {
    pub lower: Vector,
    pub upper: Vector,
}

impl BoxBounds {
    pub fn new(lower: Vector, upper: Vector) -> Result<Self> {
        ensure_dim(lower.dim(), upper.dim())?;
        if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::InvalidBox("lower bound exceeds upper bound".into()));
        }
        Ok(BoxBounds { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(self.upper.iter()))
            .all(|(v, (l, u))| l <= v && v <= u)
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        let n = self.dim();
        (0..n)
            .flat_map(|i| {
                [
                    Halfspace {
                        normal: Vector::unit(n, i),
                        offset: self.upper[i].clone(),
                    },
                    Halfspace {
                        normal: Vector::unit(n, i).neg(),
                        offset: -&self.lower[i],
                    },
                ]
            })
            .collect()
    }
}

/// A facet of a full-dimensional polyhedron: the constraint defining it, its
/// index in the original constraint list, and the facet as a polyhedron.
#[derive(Clone, Debug)]
pub struct Facet {
    pub index: usize,
    pub halfspace: Halfspace,
    pub polyhedron: Polyhedron,
}

/// Intersection of finitely many closed halfspaces in ℚⁿ (ℝⁿ when empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    dim: usize,
    halfspaces: Vec<Halfspace>,
}

impl Polyhedron {
    pub fn whole_space(dim: usize) -> Self {
        Polyhedron {
            dim,
            halfspaces: Vec::new(),
        }
    }

    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        for h in &halfspaces {
            ensure_dim(dim, h.dim())?;
        }
        Ok(Polyhedron { dim, halfspaces })
    }

    /// Builds a polyhedron from raw rows, dropping rows with a zero normal
    /// when they hold trivially. A violated zero row yields the empty set.
    pub fn from_rows(dim: usize, rows: Vec<(Vector, Scalar)>) -> Result<Self> {
        let mut halfspaces = Vec::new();
        for (normal, offset) in rows {
            ensure_dim(dim, normal.dim())?;
            if normal.is_zero() {
                if offset.is_negative() {
                    return Ok(Polyhedron::empty(dim));
                }
                continue;
            }
            halfspaces.push(Halfspace { normal, offset });
        }
        Ok(Polyhedron { dim, halfspaces })
    }

    /// A canonical empty polyhedron (`x₁ ≤ 0` and `x₁ ≥ 1`).
    pub fn empty(dim: usize) -> Self {
        assert!(dim > 0, "the empty polyhedron needs a coordinate");
        Polyhedron {
            dim,
            halfspaces: vec![
                Halfspace {
                    normal: Vector::unit(dim, 0),
                    offset: Scalar::zero(),
                },
                Halfspace {
                    normal: Vector::unit(dim, 0).neg(),
                    offset: Scalar::from(-1),
                },
            ],
        }
    }

    pub fn from_box(bounds: &BoxBounds) -> Self {
        Polyhedron {
            dim: bounds.dim(),
            halfspaces: bounds.halfspaces(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty_list(&self) -> bool {
        self.halfspaces.is_empty()
    }

    pub fn push(&mut self, h: Halfspace) -> Result<()> {
        ensure_dim(self.dim, h.dim())?;
        self.halfspaces.push(h);
        Ok(())
    }

    pub fn with(&self, h: Halfspace) -> Result<Polyhedron> {
        let mut p = self.clone();
        p.push(h)?;
        Ok(p)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        ensure_dim(self.dim, other.dim)?;
        let mut p = self.clone();
        p.halfspaces.extend(other.halfspaces.iter().cloned());
        Ok(p)
    }

    pub fn intersect_box(&self, bounds: &BoxBounds) -> Result<Polyhedron> {
        self.intersect(&Polyhedron::from_box(bounds))
    }

    /// Adds the hyperplane `⟨normal, x⟩ = offset` as two opposite halfspaces.
    pub fn with_equality(&self, h: &Halfspace) -> Result<Polyhedron> {
        let mut p = self.clone();
        p.push(h.clone())?;
        p.push(h.flipped())?;
        Ok(p)
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        ensure_dim(self.dim, x.dim())?;
        Ok(self.halfspaces.iter().all(|h| h.contains(x)))
    }

    /// Strict satisfaction of every constraint. With nonzero normals this is
    /// exactly the topological interior.
    pub fn strict_contains(&self, x: &Vector) -> Result<bool> {
        ensure_dim(self.dim, x.dim())?;
        Ok(self.halfspaces.iter().all(|h| h.strictly_contains(x)))
    }

    fn system(&self) -> LinearSystem {
        let mut sys = LinearSystem::new(self.dim);
        for h in &self.halfspaces {
            sys.at_most(h.normal.clone(), h.offset.clone());
        }
        sys
    }

    pub fn find_point(&self) -> Option<Vector> {
        self.system().feasible_point()
    }

    pub fn is_empty(&self) -> bool {
        self.find_point().is_none()
    }

    /// Some point satisfying every constraint strictly, if one exists.
    pub fn interior_point(&self) -> Option<Vector> {
        let rows: Vec<_> = self.halfspaces.iter().map(Halfspace::row).collect();
        strictly_feasible_point(self.dim, &[], &[], &rows)
    }

    /// Indices of constraints that hold with equality on all of P.
    /// Returns `None` for the empty polyhedron.
    pub fn implicit_equalities(&self) -> Option<Vec<usize>> {
        self.find_point()?;
        if self.interior_point().is_some() {
            return Some(Vec::new());
        }
        let rows: Vec<_> = self.halfspaces.iter().map(Halfspace::row).collect();
        let implicit = (0..rows.len())
            .filter(|&i| {
                let others: Vec<_> = rows
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, r)| r.clone())
                    .collect();
                strictly_feasible_point(self.dim, &[], &others, &rows[i..=i]).is_none()
            })
            .collect();
        Some(implicit)
    }

    /// Dimension of the affine hull; −1 for the empty set.
    pub fn affine_dimension(&self) -> i64 {
        let rows: Vec<_> = self.halfspaces.iter().map(Halfspace::row).collect();
        affine_dimension_of(self.dim, &[], &rows)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.interior_point().is_some()
    }

    /// True when P is empty or has no nonzero recession direction.
    pub fn is_bounded(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let normals: Vec<Vector> = self.halfspaces.iter().map(|h| h.normal.clone()).collect();
        if rank_of_rows(&normals, self.dim) < self.dim {
            return false;
        }
        // pointed recession cone {A·d ≤ 0}: nontrivial iff it meets ⟨−Σaᵢ, d⟩ = 1
        let mut weight = Vector::zeros(self.dim);
        for n in &normals {
            weight = weight.sub(n);
        }
        let mut cone = LinearSystem::new(self.dim);
        for n in normals {
            cone.at_most(n, Scalar::zero());
        }
        cone.equal(weight, Scalar::one());
        !cone.is_feasible()
    }

    /// Vertices of `P ∩ bounds`; errors if that region is nonempty and unbounded.
    pub fn enumerate_vertices(&self, bounds: Option<&BoxBounds>) -> Result<Vec<Vector>> {
        let region = match bounds {
            Some(b) => self.intersect_box(b)?,
            None => self.clone(),
        };
        if region.is_empty() {
            return Ok(Vec::new());
        }
        if !region.is_bounded() {
            return Err(Error::UnboundedWithoutBox);
        }
        let vertices = region.system().basic_solutions();
        for v in &vertices {
            let tight: Vec<Vector> = region
                .halfspaces
                .iter()
                .filter(|h| h.is_tight(v))
                .map(|h| h.normal.clone())
                .collect();
            if rank_of_rows(&tight, self.dim) != self.dim {
                return Err(Error::InternalInvariantBroken(format!(
                    "vertex {v} is not determined by its tight constraints"
                )));
            }
        }
        Ok(vertices)
    }

    /// Facets of a full-dimensional polyhedron. Redundant constraints
    /// (including later duplicates of kept ones) are dropped greedily in order.
    pub fn facets(&self) -> Result<Vec<Facet>> {
        if !self.is_full_dimensional() {
            return Err(Error::NotFullDimensional);
        }
        let rows: Vec<_> = self.halfspaces.iter().map(Halfspace::row).collect();
        let mut kept: Vec<bool> = vec![true; rows.len()];
        for i in 0..rows.len() {
            let others: Vec<_> = (0..rows.len())
                .filter(|&j| j != i && kept[j])
                .map(|j| rows[j].clone())
                .collect();
            let (a, b) = &rows[i];
            let violated = [(a.neg(), -b)];
            if strictly_feasible_point(self.dim, &[], &others, &violated).is_none() {
                kept[i] = false;
            }
        }
        let irredundant: Vec<Halfspace> = (0..rows.len())
            .filter(|&i| kept[i])
            .map(|i| self.halfspaces[i].clone())
            .collect();
        let base = Polyhedron {
            dim: self.dim,
            halfspaces: irredundant,
        };
        (0..rows.len())
            .filter(|&i| kept[i])
            .map(|i| {
                let h = self.halfspaces[i].clone();
                let polyhedron = base.with(h.flipped())?;
                Ok(Facet {
                    index: i,
                    halfspace: h,
                    polyhedron,
                })
            })
            .collect()
    }
}
