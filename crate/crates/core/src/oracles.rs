//! Brute-force reference computations. These are deliberately naive and
//! share as little code as possible with the solver and verifier, so that
//! agreement between the two means something.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ensure_dim, Error, Result};
use crate::feasible_set::DiscreteSet;
use crate::geometry::{BoxBounds, Polyhedron};
use crate::numerics::{solve_linear, Matrix, Scalar, Vector};
use crate::objective::ConvexFunction;

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub grid_step: Scalar,
    pub samples: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_step: Scalar::ratio(1, 4),
            samples: 100,
            seed: 7,
        }
    }
}

/// Minimum of f over S by full scan; ties go to the lexicographically
/// smallest point.
pub fn brute_min(f: &ConvexFunction, set: &DiscreteSet, cap: u128) -> Result<(Scalar, Vector)> {
    ensure_dim(f.dim(), set.dim())?;
    let mut best: Option<(Scalar, Vector)> = None;
    for s in set.enumerate(cap)? {
        let value = f.evaluate(&s)?;
        let better = match &best {
            None => true,
            Some((v, p)) => value < *v || (&value == v && &s < p),
        };
        if better {
            best = Some((value, s));
        }
    }
    best.ok_or(Error::EmptySet)
}

/// The lexicographically first point of S with every constraint of Q slack,
/// or `None` when Q is S-free.
pub fn brute_sfree(q: &Polyhedron, set: &DiscreteSet, cap: u128) -> Result<Option<Vector>> {
    ensure_dim(q.dim(), set.dim())?;
    let mut points = set.enumerate(cap)?;
    points.sort();
    Ok(points.into_iter().find(|s| {
        q.halfspaces()
            .iter()
            .all(|h| h.normal().dot(s) < *h.offset())
    }))
}

/// Hull membership by Carathéodory: q ∈ conv(points) iff q is a nonnegative
/// affine combination of some affinely independent subset of size ≤ n + 1.
pub fn brute_hull_membership(points: &[Vector], q: &Vector) -> Result<bool> {
    let Some(first) = points.first() else {
        return Err(Error::EmptySet);
    };
    let n = first.dim();
    ensure_dim(n, q.dim())?;
    for p in points {
        ensure_dim(n, p.dim())?;
    }
    let mut rhs = q.entries().to_vec();
    rhs.push(Scalar::one());
    let rhs = Vector::new(rhs);
    for size in 1..=(n + 1).min(points.len()) {
        for subset in (0..points.len()).combinations(size) {
            // columns (pᵢ, 1)
            let mut m = Matrix::zeros(n + 1, size);
            for (c, &i) in subset.iter().enumerate() {
                for r in 0..n {
                    m.set(r, c, points[i][r].clone());
                }
                m.set(n, c, Scalar::one());
            }
            if crate::numerics::rank(&m) != size {
                continue;
            }
            if let Some(lambda) = solve_linear(&m, &rhs)? {
                if lambda.iter().all(|l| !l.is_negative()) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Smallest value of f over the points of `P ∩ bounds` whose coordinates
/// are integer multiples of `step`, with the lexicographically smallest
/// grid point attaining it. This is an upper bound on the true minimum.
pub fn grid_lower_bound(
    f: &ConvexFunction,
    p: &Polyhedron,
    bounds: Option<&BoxBounds>,
    step: &Scalar,
) -> Result<(Scalar, Vector)> {
    ensure_dim(f.dim(), p.dim())?;
    if !step.is_positive() {
        return Err(Error::PreconditionViolated("grid step must be positive".into()));
    }
    let vertices = p.enumerate_vertices(bounds)?;
    if vertices.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let n = p.dim();
    // grid index ranges covering the bounding box of the vertices
    let ranges: Vec<(i64, i64)> = (0..n)
        .map(|i| {
            let lo = vertices.iter().map(|v| &v[i]).min().expect("nonempty");
            let hi = vertices.iter().map(|v| &v[i]).max().expect("nonempty");
            let lo = (lo / step).ceil();
            let hi = (hi / step).floor();
            (to_i64(&lo), to_i64(&hi))
        })
        .collect();
    if ranges.iter().any(|(lo, hi)| lo > hi) {
        return Err(Error::EmptyRegion);
    }
    let mut best: Option<(Scalar, Vector)> = None;
    for index in ranges.iter().map(|&(lo, hi)| lo..=hi).multi_cartesian_product() {
        let x: Vector = index.iter().map(|&k| Scalar::from(k) * step).collect();
        let inside = p.contains(&x)? && bounds.is_none_or(|b| b.contains(&x));
        if !inside {
            continue;
        }
        let value = f.evaluate(&x)?;
        if best.as_ref().is_none_or(|(v, _)| &value < v) {
            best = Some((value, x));
        }
    }
    best.ok_or(Error::EmptyRegion)
}

fn to_i64(v: &num_bigint::BigInt) -> i64 {
    i64::try_from(v).expect("grid index fits in i64")
}

/// Searches for a random point x near z with `f(x) < f(z) + ⟨a, x − z⟩`.
pub fn sampled_subgradient_violation(
    f: &ConvexFunction,
    z: &Vector,
    a: &Vector,
    config: &OracleConfig,
) -> Result<Option<Vector>> {
    ensure_dim(f.dim(), z.dim())?;
    ensure_dim(f.dim(), a.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let fz = f.evaluate(z)?;
    for _ in 0..config.samples {
        let x: Vector = z
            .iter()
            .map(|c| c + &Scalar::ratio(rng.gen_range(-12..=12), rng.gen_range(1..=6)))
            .collect();
        if f.evaluate(&x)? < &fz + &a.dot(&x.sub(z)) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}
