//! Exact rational scalars and small dense linear algebra.

mod linalg;
mod matrix;
mod scalar;
mod vector;

pub use linalg::{is_positive_semidefinite, nullspace, rank, solve_linear};
pub(crate) use linalg::{rank_of_rows, row_reduce};
pub use matrix::Matrix;
pub use scalar::Scalar;
pub use vector::Vector;
