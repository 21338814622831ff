use super::system::LinearSystem;
use crate::error::{ensure_dim, Error, Result};
use crate::numerics::{Scalar, Vector};

/// True iff `q` is a convex combination of `points` (exact feasibility of
/// `Σλⱼpⱼ = q, Σλⱼ = 1, λ ≥ 0`).
pub fn hull_membership(points: &[Vector], q: &Vector) -> Result<bool> {
    let Some(first) = points.first() else {
        return Err(Error::EmptySet);
    };
    let n = first.dim();
    for p in points {
        ensure_dim(n, p.dim())?;
    }
    ensure_dim(n, q.dim())?;
    if points.contains(q) {
        return Ok(true);
    }
    for axis in 0..n {
        let lo = points.iter().map(|p| &p[axis]).min().expect("nonempty");
        let hi = points.iter().map(|p| &p[axis]).max().expect("nonempty");
        if &q[axis] < lo || &q[axis] > hi {
            return Ok(false);
        }
    }
    Ok(convex_weights(points, q).is_some())
}

/// Convex weights expressing `q` over `points`, if any exist.
pub(crate) fn convex_weights(points: &[Vector], q: &Vector) -> Option<Vector> {
    let m = points.len();
    let n = q.dim();
    let mut sys = LinearSystem::new(m);
    for axis in 0..n {
        let row: Vector = points.iter().map(|p| p[axis].clone()).collect();
        sys.equal(row, q[axis].clone());
    }
    sys.equal(Vector::new(vec![Scalar::one(); m]), Scalar::one());
    for j in 0..m {
        sys.at_most(Vector::unit(m, j).neg(), Scalar::zero());
    }
    sys.feasible_point()
}
