//! Exact feasibility and bounded maximization for small linear systems,
//! by exhaustive search over basic solutions.
//!
//! A nonempty polyhedron `{E·x = e, L·x ≤ l}` has a minimal face of the form
//! `{x : A_J·x = b_J}` where `J` holds a row basis of the whole constraint
//! matrix and contains a row basis of `E`. Every such `J` is tried; a
//! particular solution that satisfies all rows proves feasibility, and the
//! search is complete because some minimal face is always hit.

use itertools::Itertools;

use crate::numerics::{rank_of_rows, row_reduce, Scalar, Vector};

#[derive(Clone, Debug, Default)]
pub(crate) struct LinearSystem {
    cols: usize,
    equalities: Vec<(Vector, Scalar)>,
    inequalities: Vec<(Vector, Scalar)>,
}

impl LinearSystem {
    pub fn new(cols: usize) -> Self {
        LinearSystem {
            cols,
            ..Default::default()
        }
    }

    pub fn equal(&mut self, row: Vector, rhs: Scalar) -> &mut Self {
        debug_assert_eq!(row.dim(), self.cols);
        self.equalities.push((row, rhs));
        self
    }

    pub fn at_most(&mut self, row: Vector, rhs: Scalar) -> &mut Self {
        debug_assert_eq!(row.dim(), self.cols);
        self.inequalities.push((row, rhs));
        self
    }

    pub fn satisfied_by(&self, x: &Vector) -> bool {
        self.equalities.iter().all(|(a, b)| &a.dot(x) == b)
            && self.inequalities.iter().all(|(a, b)| &a.dot(x) <= b)
    }

    /// Calls `visit` on the particular solution of every feasible basic
    /// subsystem until it returns `false`.
    fn for_each_basic(&self, mut visit: impl FnMut(Vector) -> bool) {
        // zero rows constrain nothing, except for being trivially violated
        for (a, b) in &self.equalities {
            if a.is_zero() && !b.is_zero() {
                return;
            }
        }
        for (a, b) in &self.inequalities {
            if a.is_zero() && b.is_negative() {
                return;
            }
        }
        let eq: Vec<&(Vector, Scalar)> = self.equalities.iter().filter(|(a, _)| !a.is_zero()).collect();
        let le: Vec<&(Vector, Scalar)> = self.inequalities.iter().filter(|(a, _)| !a.is_zero()).collect();

        let mut eq_basis: Vec<&(Vector, Scalar)> = Vec::new();
        let mut basis_rows: Vec<Vector> = Vec::new();
        for row in &eq {
            basis_rows.push(row.0.clone());
            if rank_of_rows(&basis_rows, self.cols) == basis_rows.len() {
                eq_basis.push(row);
            } else {
                basis_rows.pop();
            }
        }
        let all_rows: Vec<Vector> = eq.iter().chain(&le).map(|(a, _)| a.clone()).collect();
        let total_rank = rank_of_rows(&all_rows, self.cols);
        let need = total_rank - eq_basis.len();

        for subset in (0..le.len()).combinations(need) {
            let rows: Vec<Vec<Scalar>> = eq_basis
                .iter()
                .copied()
                .chain(subset.iter().map(|&i| le[i]))
                .map(|(a, b)| {
                    let mut row = a.entries().to_vec();
                    row.push(b.clone());
                    row
                })
                .collect();
            let Some(x) = solve_independent(rows, self.cols, total_rank) else {
                continue;
            };
            if self.satisfied_by(&x) && !visit(x) {
                return;
            }
        }
    }

    pub fn feasible_point(&self) -> Option<Vector> {
        let mut found = None;
        self.for_each_basic(|x| {
            found = Some(x);
            false
        });
        found
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible_point().is_some()
    }

    /// Maximum of `objective` over the system. The caller guarantees the
    /// objective is bounded above on the feasible region.
    pub fn maximize_bounded(&self, objective: &Vector) -> Option<(Scalar, Vector)> {
        let mut best: Option<(Scalar, Vector)> = None;
        self.for_each_basic(|x| {
            let value = objective.dot(&x);
            if best.as_ref().is_none_or(|(v, _)| &value > v) {
                best = Some((value, x));
            }
            true
        });
        best
    }

    /// All distinct basic feasible solutions (vertices when the system is pointed).
    pub fn basic_solutions(&self) -> Vec<Vector> {
        let mut out = Vec::new();
        self.for_each_basic(|x| {
            out.push(x);
            true
        });
        out.sort();
        out.dedup();
        out
    }
}

/// Solves the augmented rows if they are linearly independent (`expected`
/// pivots in the coefficient part) and consistent.
fn solve_independent(rows: Vec<Vec<Scalar>>, cols: usize, expected: usize) -> Option<Vector> {
    if rows.len() != expected {
        return None;
    }
    let (reduced, pivots) = row_reduce(rows, cols + 1);
    if pivots.len() != expected || pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (row, &p) in reduced.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(Vector::new(x))
}

/// Finds x with `eq` equalities, `le` inequalities and `strict` rows holding
/// strictly, via the lifted problem `max s : strict·x + s ≤ rhs, s ≤ 1`.
pub(crate) fn strictly_feasible_point(
    cols: usize,
    eq: &[(Vector, Scalar)],
    le: &[(Vector, Scalar)],
    strict: &[(Vector, Scalar)],
) -> Option<Vector> {
    let lift = |a: &Vector, s: i64| {
        let mut e = a.entries().to_vec();
        e.push(Scalar::from(s));
        Vector::new(e)
    };
    if strict.is_empty() {
        let mut sys = LinearSystem::new(cols);
        for (a, b) in eq {
            sys.equal(a.clone(), b.clone());
        }
        for (a, b) in le {
            sys.at_most(a.clone(), b.clone());
        }
        return sys.feasible_point();
    }
    let mut sys = LinearSystem::new(cols + 1);
    for (a, b) in eq {
        sys.equal(lift(a, 0), b.clone());
    }
    for (a, b) in le {
        sys.at_most(lift(a, 0), b.clone());
    }
    for (a, b) in strict {
        sys.at_most(lift(a, 1), b.clone());
    }
    sys.at_most(Vector::unit(cols + 1, cols), Scalar::one());
    let (value, point) = sys.maximize_bounded(&Vector::unit(cols + 1, cols))?;
    if value.is_positive() {
        let mut e = point.into_entries();
        e.pop();
        Some(Vector::new(e))
    } else {
        None
    }
}

/// Affine dimension of `{eq rows hold with equality, le rows hold}`, or −1
/// if empty: `cols − rank(eq ∪ implicit equalities among le)`.
pub(crate) fn affine_dimension_of(
    cols: usize,
    eq: &[(Vector, Scalar)],
    le: &[(Vector, Scalar)],
) -> i64 {
    if strictly_feasible_point(cols, eq, le, &[]).is_none() {
        return -1;
    }
    let mut normals: Vec<Vector> = eq.iter().map(|(a, _)| a.clone()).collect();
    if strictly_feasible_point(cols, eq, &[], le).is_none() {
        for i in 0..le.len() {
            let others: Vec<_> = le
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, r)| r.clone())
                .collect();
            if strictly_feasible_point(cols, eq, &others, &le[i..=i]).is_none() {
                normals.push(le[i].0.clone());
            }
        }
    }
    (cols - rank_of_rows(&normals, cols)) as i64
}
