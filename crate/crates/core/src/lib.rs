//! Strong optimality certificates for minimizing a convex function over a
//! finite subset S of ℚⁿ.
//!
//! A certificate is a list of points `z₁..z_k ∈ S` with subgradients
//! `aᵢ ∈ ∂f(zᵢ)` whose gradient polyhedron `Q = {x : ⟨aᵢ, x − zᵢ⟩ ≤ 0}` has
//! no point of S in its interior, and with `⟨aᵢ, zⱼ − zᵢ⟩ < 0` for `i ≠ j`.
//! Evaluating f at the zᵢ then gives the minimum over S. All arithmetic is
//! exact over ℚ.

pub mod certificate;
pub mod duality;
mod error;
pub mod feasible_set;
pub mod geometry;
pub mod helly;
pub mod numerics;
pub mod objective;
pub mod oracles;

pub use error::{Error, Result};
