//! H-representation polyhedra with exact interior, dimension, vertex and
//! facet computations.

mod hull;
mod polyhedron;
mod system;

pub use hull::hull_membership;
pub use polyhedron::{BoxBounds, Facet, Halfspace, Polyhedron};
pub(crate) use system::{affine_dimension_of, LinearSystem};
