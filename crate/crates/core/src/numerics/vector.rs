use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use super::Scalar;
use crate::error::{ensure_dim, Result};

/// Point or direction in ℚⁿ.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<Scalar>);

impl Vector {
    pub fn new(entries: Vec<Scalar>) -> Self {
        Vector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Scalar::zero(); dim])
    }

    pub fn from_integers(entries: &[i64]) -> Self {
        Vector(entries.iter().map(|&v| Scalar::from_integer(v)).collect())
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Vector::zeros(dim);
        v.0[axis] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(Scalar::is_integer)
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        ensure_dim(expected, self.dim())
    }

    /// Inner product; the caller guarantees equal lengths.
    pub fn dot(&self, other: &Vector) -> Scalar {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = Scalar::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }

    pub fn try_dot(&self, other: &Vector) -> Result<Scalar> {
        ensure_dim(self.dim(), other.dim())?;
        Ok(self.dot(other))
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: &Scalar) -> Vector {
        Vector(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl From<Vec<Scalar>> for Vector {
    fn from(v: Vec<Scalar>) -> Self {
        Vector(v)
    }
}

impl FromIterator<Scalar> for Vector {
    fn from_iter<I: IntoIterator<Item = Scalar>>(iter: I) -> Self {
        Vector(iter.into_iter().collect())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
