//! Lower bounds `L(C) = inf_{bd C} f` from polyhedral S-free sets, computed
//! exactly facet by facet.
//!
//! Minimization over a polytope lifts every max-affine term to an epigraph
//! variable, leaving a convex quadratic over a polyhedron in (x, t). Some
//! vertex of the optimal set is the unique solution of the KKT system
//! `Hy + h + A_Jᵀμ = 0, A_J y = b_J` for an independent set J of active
//! rows; all such J are tried and the best feasible solution kept.

use serde::Serialize;

use crate::certificate::StrongCertificate;
use crate::error::{ensure_dim, Error, Result};
use crate::feasible_set::DiscreteSet;
use crate::geometry::{BoxBounds, Polyhedron};
use crate::numerics::{rank_of_rows, row_reduce, Matrix, Scalar, Vector};
use crate::objective::{ConvexFunction, FunctionKind};

/// Exact minimum of f over `P ∩ bounds`, with the lexicographically smallest
/// minimizer found.
pub fn minimize_on_polyhedron(
    f: &ConvexFunction,
    p: &Polyhedron,
    bounds: Option<&BoxBounds>,
) -> Result<(Scalar, Vector)> {
    ensure_dim(f.dim(), p.dim())?;
    let region = match bounds {
        Some(b) => {
            ensure_dim(f.dim(), b.dim())?;
            p.intersect_box(b)?
        }
        None => p.clone(),
    };
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if bounds.is_none() && !region.is_bounded() {
        return Err(Error::UnboundedWithoutBox);
    }
    let program = LiftedProgram::new(f, &region);
    let mut best: Option<(Scalar, Vector)> = None;
    program.for_each_stationary(|y| {
        if !program.feasible(&y) {
            return Ok(());
        }
        let x: Vector = y.entries()[..f.dim()].iter().cloned().collect();
        let value = f.evaluate(&x)?;
        let better = match &best {
            None => true,
            Some((v, w)) => value < *v || (&value == v && &x < w),
        };
        if better {
            best = Some((value, x));
        }
        Ok(())
    })?;
    best.ok_or_else(|| Error::InternalInvariantBroken("no stationary point in a nonempty polytope".into()))
}

/// `min ½yᵀHy + ⟨h, y⟩` over `{E·y = e, A·y ≤ b}` with y = (x, t).
struct LiftedProgram {
    vars: usize,
    hessian: Matrix,
    linear: Vector,
    equalities: Vec<(Vector, Scalar)>,
    inequalities: Vec<(Vector, Scalar)>,
}

impl LiftedProgram {
    fn new(f: &ConvexFunction, region: &Polyhedron) -> Self {
        let n = f.dim();
        let leaves = f.leaves();
        let epigraphs: Vec<_> = leaves
            .iter()
            .filter_map(|leaf| match leaf.kind() {
                FunctionKind::MaxAffine { pieces } if pieces.len() > 1 => Some(pieces),
                _ => None,
            })
            .collect();
        let vars = n + epigraphs.len();

        let mut hessian = Matrix::zeros(vars, vars);
        let mut linear = Vector::zeros(vars);
        for leaf in &leaves {
            match leaf.kind() {
                FunctionKind::Quadratic { matrix, linear: b, .. } => {
                    for r in 0..n {
                        for c in 0..n {
                            let v = hessian.get(r, c) + matrix.get(r, c);
                            hessian.set(r, c, v);
                        }
                    }
                    linear = linear.add(&lift(b, vars));
                }
                FunctionKind::MaxAffine { pieces } if pieces.len() == 1 => {
                    linear = linear.add(&lift(&pieces[0].gradient, vars));
                }
                _ => {}
            }
        }

        let mut inequalities = Vec::new();
        for (l, pieces) in epigraphs.iter().enumerate() {
            let mut cost = Vector::zeros(vars).into_entries();
            cost[n + l] = Scalar::one();
            linear = linear.add(&Vector::new(cost));
            for piece in pieces.iter() {
                // ⟨g, x⟩ − t ≤ −c
                let mut row = lift(&piece.gradient, vars).into_entries();
                row[n + l] = Scalar::from(-1);
                inequalities.push((Vector::new(row), -&piece.offset));
            }
        }

        // opposite pairs become equalities; repeated rows are dropped
        let hs = region.halfspaces();
        let mut used = vec![false; hs.len()];
        let mut equalities = Vec::new();
        for i in 0..hs.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let mut is_equality = false;
            for j in i + 1..hs.len() {
                if used[j] {
                    continue;
                }
                if hs[j].is_equivalent(&hs[i]) {
                    used[j] = true;
                } else if hs[j].is_equivalent(&hs[i].flipped()) {
                    used[j] = true;
                    is_equality = true;
                }
            }
            let row = (lift(hs[i].normal(), vars), hs[i].offset().clone());
            if is_equality {
                equalities.push(row);
            } else {
                inequalities.push(row);
            }
        }

        LiftedProgram {
            vars,
            hessian,
            linear,
            equalities,
            inequalities,
        }
    }

    fn feasible(&self, y: &Vector) -> bool {
        self.equalities.iter().all(|(a, b)| &a.dot(y) == b)
            && self.inequalities.iter().all(|(a, b)| &a.dot(y) <= b)
    }

    /// Visits the unique KKT solution of every independent active set that
    /// contains a basis of the equalities.
    fn for_each_stationary(&self, mut visit: impl FnMut(Vector) -> Result<()>) -> Result<()> {
        let mut basis: Vec<&(Vector, Scalar)> = Vec::new();
        let mut rows: Vec<Vector> = Vec::new();
        for eq in &self.equalities {
            rows.push(eq.0.clone());
            if rank_of_rows(&rows, self.vars) == rows.len() {
                basis.push(eq);
            } else {
                rows.pop();
            }
        }
        self.search(&mut basis, &mut rows, 0, &mut visit)
    }

    fn search<'a>(
        &'a self,
        active: &mut Vec<&'a (Vector, Scalar)>,
        rows: &mut Vec<Vector>,
        start: usize,
        visit: &mut impl FnMut(Vector) -> Result<()>,
    ) -> Result<()> {
        if let Some(y) = self.kkt_solution(active) {
            visit(y)?;
        }
        if active.len() == self.vars {
            return Ok(());
        }
        for i in start..self.inequalities.len() {
            let row = &self.inequalities[i];
            rows.push(row.0.clone());
            if rank_of_rows(rows, self.vars) == rows.len() {
                active.push(row);
                self.search(active, rows, i + 1, visit)?;
                active.pop();
            }
            rows.pop();
        }
        Ok(())
    }

    fn kkt_solution(&self, active: &[&(Vector, Scalar)]) -> Option<Vector> {
        let n = self.vars;
        let size = n + active.len();
        let mut system: Vec<Vec<Scalar>> = Vec::with_capacity(size);
        for r in 0..n {
            let mut row: Vec<Scalar> = self.hessian.row(r).to_vec();
            row.extend(active.iter().map(|(a, _)| a[r].clone()));
            row.push(-&self.linear[r]);
            system.push(row);
        }
        for (a, b) in active {
            let mut row = a.entries().to_vec();
            row.resize(size, Scalar::zero());
            row.push(b.clone());
            system.push(row);
        }
        let (reduced, pivots) = row_reduce(system, size + 1);
        if pivots.len() != size || pivots.last() == Some(&size) {
            return None;
        }
        Some(reduced[..n].iter().map(|row| row[size].clone()).collect())
    }
}

fn lift(v: &Vector, vars: usize) -> Vector {
    let mut e = v.entries().to_vec();
    e.resize(vars, Scalar::zero());
    Vector::new(e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetMinimum {
    /// Index of the facet's constraint in C.
    pub facet: usize,
    pub value: Scalar,
    pub point: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualBound {
    pub facet_minima: Vec<FacetMinimum>,
    pub bound: Scalar,
}

/// `L(C)` as the smallest facet minimum of f, each taken within `bounds`.
/// Facets that miss the box are skipped.
pub fn dual_bound(f: &ConvexFunction, c: &Polyhedron, bounds: Option<&BoxBounds>) -> Result<DualBound> {
    ensure_dim(f.dim(), c.dim())?;
    let facets = c.facets()?;
    if facets.is_empty() {
        return Err(Error::PreconditionViolated("C has no facets".into()));
    }
    let mut facet_minima = Vec::new();
    for facet in facets {
        match minimize_on_polyhedron(f, &facet.polyhedron, bounds) {
            Ok((value, point)) => facet_minima.push(FacetMinimum {
                facet: facet.index,
                value,
                point,
            }),
            Err(Error::EmptyRegion) => continue,
            Err(e) => return Err(e),
        }
    }
    let bound = facet_minima
        .iter()
        .map(|m| &m.value)
        .min()
        .cloned()
        .ok_or(Error::EmptyRegion)?;
    Ok(DualBound { facet_minima, bound })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualReport {
    pub facet_minima: Vec<FacetMinimum>,
    pub bound: Scalar,
    pub primal: Scalar,
    pub gap: Scalar,
    pub strong: bool,
    #[serde(rename = "box")]
    pub bounds: BoxBounds,
}

pub const DEFAULT_BOX_INFLATION: i64 = 4;

/// The bounding box of S with every half-width scaled by `factor` about
/// its centre, and at least 1.
pub fn default_box(set: &DiscreteSet, factor: &Scalar) -> Result<BoxBounds> {
    if factor < &Scalar::one() {
        return Err(Error::InvalidBox("inflation factor must be at least 1".into()));
    }
    let (lo, hi) = set.bounding_box();
    let two = Scalar::from(2);
    let mut lower = Vec::with_capacity(set.dim());
    let mut upper = Vec::with_capacity(set.dim());
    for (l, u) in lo.iter().zip(hi.iter()) {
        let centre = (l + u) / &two;
        let half = ((u - l) / &two) * factor;
        let half = if half < Scalar::one() { Scalar::one() } else { half };
        lower.push(&centre - &half);
        upper.push(&centre + &half);
    }
    BoxBounds::new(Vector::new(lower), Vector::new(upper))
}

/// Compares `L(Q)` with the certified optimum. Errors if weak duality fails,
/// which can only happen when Q is not S-free.
pub fn duality_report(
    cert: &StrongCertificate,
    f: &ConvexFunction,
    set: &DiscreteSet,
    bounds: Option<BoxBounds>,
) -> Result<DualReport> {
    let bounds = match bounds {
        Some(b) => b,
        None => default_box(set, &Scalar::from(DEFAULT_BOX_INFLATION))?,
    };
    let primal = cert
        .values
        .iter()
        .min()
        .cloned()
        .ok_or_else(|| Error::PreconditionViolated("certificate has no points".into()))?;
    let DualBound { facet_minima, bound } = dual_bound(f, &cert.polyhedron, Some(&bounds))?;
    if bound > primal {
        return Err(Error::WeakDualityViolated { bound, primal });
    }
    let gap = &primal - &bound;
    Ok(DualReport {
        facet_minima,
        strong: gap.is_zero(),
        bound,
        primal,
        gap,
        bounds,
    })
}
