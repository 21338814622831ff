use log::debug;
use serde::{Deserialize, Serialize};

use super::StrongCertificate;
use crate::error::{ensure_dim, Error, Result};
use crate::feasible_set::{argmin_interior_of, DiscreteSet, DEFAULT_ENUMERATION_CAP};
use crate::geometry::{Halfspace, Polyhedron};
use crate::helly::{bound_for, check_v_condition_in};
use crate::numerics::{Scalar, Vector};
use crate::objective::ConvexFunction;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub enumeration_cap: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// One pass of the cutting loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub point: Vector,
    pub value: Scalar,
    pub subgradient: Vector,
    pub face_dimension: usize,
    pub tie_set_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Certificate {
        certificate: StrongCertificate,
        optimum: Scalar,
        argmin: Vector,
        iterations: Vec<IterationRecord>,
    },
    /// A point of S where 𝕆 is a subgradient: optimal over ℝⁿ, hence over S.
    ContinuousOptimum {
        point: Vector,
        value: Scalar,
        note: String,
    },
    /// S = ∅; ℝⁿ itself is S-free.
    Infeasible { note: String },
}

/// Builds a strong optimality certificate by repeatedly minimizing over
/// int(Q) ∩ S and cutting with a relative-interior subgradient.
pub fn solve(f: &ConvexFunction, set: &DiscreteSet, options: &SolveOptions) -> Result<SolveOutcome> {
    ensure_dim(f.dim(), set.dim())?;
    let n = f.dim();
    let points = set.enumerate(options.enumeration_cap)?;
    if points.is_empty() {
        return Ok(SolveOutcome::Infeasible {
            note: "S is empty, so the whole space is S-free".into(),
        });
    }

    let mut region = Polyhedron::whole_space(n);
    let mut zs: Vec<Vector> = Vec::new();
    let mut subgradients: Vec<Vector> = Vec::new();
    let mut values: Vec<Scalar> = Vec::new();
    let mut iterations: Vec<IterationRecord> = Vec::new();

    while let Some(found) = argmin_interior_of(f, &points, &region)? {
        let z = found.minimizer;
        if f.is_zero_subgradient_possible(&z)? {
            debug!("zero subgradient at {z}; returning continuous optimum");
            return Ok(SolveOutcome::ContinuousOptimum {
                value: found.value,
                point: z,
                note: "0 is a subgradient at this point of S, so it minimizes f over all of R^n".into(),
            });
        }
        let a = f.relint_subgradient(&z)?.subgradient;
        if let Some(last) = values.last() {
            if &found.value < last {
                return Err(Error::InternalInvariantBroken(format!(
                    "minimum value decreased from {last} to {}",
                    found.value
                )));
            }
        }
        debug!(
            "iteration {}: z = {z}, t = {}, face dim {}, ties {}",
            zs.len() + 1,
            found.value,
            found.face_dim,
            found.tie_set_size
        );
        region.push(Halfspace::through(a.clone(), &z)?)?;
        iterations.push(IterationRecord {
            iteration: zs.len() + 1,
            point: z.clone(),
            value: found.value.clone(),
            subgradient: a.clone(),
            face_dimension: found.face_dim,
            tie_set_size: found.tie_set_size,
        });
        zs.push(z);
        subgradients.push(a);
        values.push(found.value);
        check_pairwise_strict(&zs, &subgradients)?;
        if zs.len() > points.len() {
            return Err(Error::InternalInvariantBroken(
                "more iterations than points in S".into(),
            ));
        }
    }

    if !check_v_condition_in(&zs, &points)? {
        return Err(Error::InternalInvariantBroken(
            "certificate points violate V = conv(V) ∩ S = vert(conv(V))".into(),
        ));
    }
    if let Some(bound) = bound_for(set).bound {
        if zs.len() as u128 > bound {
            return Err(Error::InternalInvariantBroken(format!(
                "certificate size {} exceeds the Helly bound {bound}",
                zs.len()
            )));
        }
    }
    if !region.is_full_dimensional() {
        return Err(Error::InternalInvariantBroken(
            "gradient polyhedron is not full-dimensional".into(),
        ));
    }

    let (optimum, argmin) = values
        .iter()
        .zip(&zs)
        .min_by(|a, b| a.0.cmp(b.0))
        .map(|(v, z)| (v.clone(), z.clone()))
        .expect("S nonempty and no continuous optimum, so at least one cut");
    Ok(SolveOutcome::Certificate {
        certificate: StrongCertificate {
            points: zs,
            subgradients,
            values,
            polyhedron: region,
        },
        optimum,
        argmin,
        iterations,
    })
}

/// `⟨aₖ, zᵢ − zₖ⟩ < 0` and `⟨aᵢ, zₖ − zᵢ⟩ < 0` for the newest index k.
fn check_pairwise_strict(zs: &[Vector], subgradients: &[Vector]) -> Result<()> {
    let k = zs.len() - 1;
    for i in 0..k {
        let forward = subgradients[i].dot(&zs[k].sub(&zs[i]));
        let backward = subgradients[k].dot(&zs[i].sub(&zs[k]));
        if !forward.is_negative() || !backward.is_negative() {
            return Err(Error::InternalInvariantBroken(format!(
                "pairwise strictness fails between iterations {} and {}",
                i + 1,
                k + 1
            )));
        }
    }
    Ok(())
}
