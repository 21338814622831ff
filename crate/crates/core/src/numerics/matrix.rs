use super::{Scalar, Vector};
use crate::error::{ensure_dim, Error, Result};

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have equal length.
    /// The column count of an empty row list is zero.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::NotRectangular);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_row_vectors(cols: usize, rows: &[Vector]) -> Result<Self> {
        for r in rows {
            ensure_dim(cols, r.dim())?;
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.iter().cloned()).collect(),
        })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_integer(v)).collect())
                .collect(),
        )
    }

    /// Builds a matrix and checks entry-wise symmetry.
    pub fn symmetric(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let m = Matrix::from_rows(rows)?;
        if !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vector(&self, r: usize) -> Vector {
        Vector::new(self.row(r).to_vec())
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &Vector) -> Result<Vector> {
        ensure_dim(self.cols, x.dim())?;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x.iter())
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// xᵀ·self·x for square matrices.
    pub fn quadratic_form(&self, x: &Vector) -> Result<Scalar> {
        let mx = self.mul_vec(x)?;
        Ok(x.dot(&mx))
    }

    pub fn scale(&self, factor: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        ensure_dim(self.rows, other.rows)?;
        ensure_dim(self.cols, other.cols)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        ensure_dim(self.cols, other.rows)?;
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let v = (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, v);
            }
        }
        Ok(out)
    }
}
