//! Convex objectives with exactly representable subdifferentials.
//!
//! Supported shapes are pointwise maxima of affine functions, convex
//! quadratics `½xᵀAx + ⟨b, x⟩ + c` with PSD `A`, and finite sums of these.

use serde::Serialize;

use crate::error::{ensure_dim, Error, Result};
use crate::geometry::{affine_dimension_of, LinearSystem};
use crate::numerics::{is_positive_semidefinite, Matrix, Scalar, Vector};

/// One affine function `⟨gradient, x⟩ + offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePiece {
    pub gradient: Vector,
    pub offset: Scalar,
}

impl AffinePiece {
    pub fn new(gradient: Vector, offset: Scalar) -> Self {
        AffinePiece { gradient, offset }
    }

    pub fn value(&self, x: &Vector) -> Scalar {
        self.gradient.dot(x) + &self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionKind {
    MaxAffine {
        pieces: Vec<AffinePiece>,
    },
    Quadratic {
        matrix: Matrix,
        linear: Vector,
        constant: Scalar,
    },
    Sum {
        terms: Vec<ConvexFunction>,
    },
}

/// A validated convex function on ℚⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexFunction {
    dim: usize,
    kind: FunctionKind,
}

/// How a chosen subgradient was assembled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ActiveWitness {
    /// Indices of the pieces attaining the maximum; each gets weight 1/|active|.
    MaxAffine { active: Vec<usize> },
    Quadratic { gradient: Vector },
    Sum { terms: Vec<SubgradientChoice> },
}

/// A point together with a subgradient from the relative interior of ∂f there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgradientChoice {
    pub point: Vector,
    pub subgradient: Vector,
    pub witness: ActiveWitness,
}

impl ConvexFunction {
    pub fn max_affine(pieces: Vec<AffinePiece>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::EmptyMaxAffine);
        };
        let dim = first.gradient.dim();
        for p in &pieces {
            ensure_dim(dim, p.gradient.dim())?;
        }
        Ok(ConvexFunction {
            dim,
            kind: FunctionKind::MaxAffine { pieces },
        })
    }

    /// The linear function `⟨gradient, x⟩`.
    pub fn linear(gradient: Vector) -> Self {
        ConvexFunction {
            dim: gradient.dim(),
            kind: FunctionKind::MaxAffine {
                pieces: vec![AffinePiece::new(gradient, Scalar::zero())],
            },
        }
    }

    /// `½xᵀAx + ⟨b, x⟩ + c`; `A` must be symmetric positive semidefinite.
    pub fn quadratic(matrix: Matrix, linear: Vector, constant: Scalar) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        ensure_dim(matrix.rows(), linear.dim())?;
        if !matrix.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if !is_positive_semidefinite(&matrix) {
            return Err(Error::NotPositiveSemidefinite);
        }
        Ok(ConvexFunction {
            dim: linear.dim(),
            kind: FunctionKind::Quadratic {
                matrix,
                linear,
                constant,
            },
        })
    }

    /// `½(x − center)ᵀA(x − center) + constant`.
    pub fn centered_quadratic(matrix: Matrix, center: &Vector, constant: Scalar) -> Result<Self> {
        let ac = matrix.mul_vec(center)?;
        let half_form = matrix.quadratic_form(center)? * Scalar::ratio(1, 2);
        ConvexFunction::quadratic(matrix, ac.neg(), half_form + constant)
    }

    pub fn sum(terms: Vec<ConvexFunction>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::EmptySum);
        };
        let dim = first.dim;
        for t in &terms {
            ensure_dim(dim, t.dim)?;
        }
        Ok(ConvexFunction {
            dim,
            kind: FunctionKind::Sum { terms },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn evaluate(&self, x: &Vector) -> Result<Scalar> {
        ensure_dim(self.dim, x.dim())?;
        Ok(self.value(x))
    }

    fn value(&self, x: &Vector) -> Scalar {
        match &self.kind {
            FunctionKind::MaxAffine { pieces } => pieces
                .iter()
                .map(|p| p.value(x))
                .max()
                .expect("at least one piece"),
            FunctionKind::Quadratic {
                matrix,
                linear,
                constant,
            } => {
                let form = matrix.quadratic_form(x).expect("dimension checked");
                form * Scalar::ratio(1, 2) + linear.dot(x) + constant
            }
            FunctionKind::Sum { terms } => terms.iter().map(|t| t.value(x)).sum(),
        }
    }

    /// Uniform average of active gradients for max-affine functions, the
    /// gradient for quadratics, and the sum of term choices for sums.
    pub fn relint_subgradient(&self, z: &Vector) -> Result<SubgradientChoice> {
        ensure_dim(self.dim, z.dim())?;
        Ok(self.choose(z))
    }

    fn choose(&self, z: &Vector) -> SubgradientChoice {
        let (subgradient, witness) = match &self.kind {
            FunctionKind::MaxAffine { pieces } => {
                let top = self.value(z);
                let active: Vec<usize> = (0..pieces.len())
                    .filter(|&j| pieces[j].value(z) == top)
                    .collect();
                let mut sum = Vector::zeros(self.dim);
                for &j in &active {
                    sum = sum.add(&pieces[j].gradient);
                }
                let weight = Scalar::ratio(1, active.len() as i64);
                (sum.scale(&weight), ActiveWitness::MaxAffine { active })
            }
            FunctionKind::Quadratic { matrix, linear, .. } => {
                let gradient = matrix.mul_vec(z).expect("dimension checked").add(linear);
                (gradient.clone(), ActiveWitness::Quadratic { gradient })
            }
            FunctionKind::Sum { terms } => {
                let choices: Vec<SubgradientChoice> = terms.iter().map(|t| t.choose(z)).collect();
                let mut sum = Vector::zeros(self.dim);
                for c in &choices {
                    sum = sum.add(&c.subgradient);
                }
                (sum, ActiveWitness::Sum { terms: choices })
            }
        };
        SubgradientChoice {
            point: z.clone(),
            subgradient,
            witness,
        }
    }

    /// Max-affine and quadratic leaves of the sum tree, in order.
    pub(crate) fn leaves(&self) -> Vec<&ConvexFunction> {
        match &self.kind {
            FunctionKind::Sum { terms } => terms.iter().flat_map(|t| t.leaves()).collect(),
            _ => vec![self],
        }
    }

    /// Splits `a` into per-leaf subgradients `aₘ ∈ ∂fₘ(z)` with `Σaₘ = a`,
    /// or `None` if `a ∉ ∂f(z)`.
    fn decompose(&self, z: &Vector, a: &Vector) -> Option<Vec<Vector>> {
        let leaves = self.leaves();
        // fixed gradients from quadratics, free convex weights for max-affine leaves
        let mut target = a.clone();
        let mut groups: Vec<(usize, Vec<Vector>)> = Vec::new();
        let mut fixed: Vec<Option<Vector>> = Vec::new();
        for (idx, leaf) in leaves.iter().enumerate() {
            match &leaf.kind {
                FunctionKind::Quadratic { matrix, linear, .. } => {
                    let g = matrix.mul_vec(z).expect("dimension checked").add(linear);
                    target = target.sub(&g);
                    fixed.push(Some(g));
                }
                FunctionKind::MaxAffine { pieces } => {
                    let top = leaf.value(z);
                    let active: Vec<Vector> = pieces
                        .iter()
                        .filter(|p| p.value(z) == top)
                        .map(|p| p.gradient.clone())
                        .collect();
                    groups.push((idx, active));
                    fixed.push(None);
                }
                FunctionKind::Sum { .. } => unreachable!("leaves are never sums"),
            }
        }
        if groups.is_empty() {
            return target.is_zero().then(|| fixed.into_iter().map(Option::unwrap).collect());
        }
        let vars: usize = groups.iter().map(|(_, g)| g.len()).sum();
        let mut sys = LinearSystem::new(vars);
        for axis in 0..self.dim {
            let row: Vector = groups
                .iter()
                .flat_map(|(_, g)| g.iter().map(move |v| v[axis].clone()))
                .collect();
            sys.equal(row, target[axis].clone());
        }
        let mut offset = 0;
        for (_, g) in &groups {
            let mut row = vec![Scalar::zero(); vars];
            for r in row.iter_mut().skip(offset).take(g.len()) {
                *r = Scalar::one();
            }
            sys.equal(Vector::new(row), Scalar::one());
            offset += g.len();
        }
        for j in 0..vars {
            sys.at_most(Vector::unit(vars, j).neg(), Scalar::zero());
        }
        let weights = sys.feasible_point()?;
        let mut offset = 0;
        for (idx, g) in &groups {
            let mut combo = Vector::zeros(self.dim);
            for (k, v) in g.iter().enumerate() {
                combo = combo.add(&v.scale(&weights[offset + k]));
            }
            offset += g.len();
            fixed[*idx] = Some(combo);
        }
        Some(fixed.into_iter().map(Option::unwrap).collect())
    }

    /// Exact membership `a ∈ ∂f(z)`.
    pub fn has_subgradient(&self, z: &Vector, a: &Vector) -> Result<bool> {
        ensure_dim(self.dim, z.dim())?;
        ensure_dim(self.dim, a.dim())?;
        Ok(self.decompose(z, a).is_some())
    }

    /// True iff 𝕆 ∈ ∂f(z), i.e. z minimizes f over all of ℝⁿ.
    pub fn is_zero_subgradient_possible(&self, z: &Vector) -> Result<bool> {
        self.has_subgradient(z, &Vector::zeros(self.dim))
    }

    /// Dimension of `{x : f(x) ≤ t, ⟨a, x − z⟩ = 0}` for `f(z) = t` and
    /// `a ∈ ∂f(z)`.
    ///
    /// On the hyperplane `f(x) ≥ t` with equality iff every leaf meets its
    /// subgradient inequality with equality, which is a polyhedral condition
    /// for max-affine leaves and `A(x − z) = 0` for quadratic leaves.
    pub fn face_dimension(&self, z: &Vector, a: &Vector, level: &Scalar) -> Result<usize> {
        ensure_dim(self.dim, z.dim())?;
        ensure_dim(self.dim, a.dim())?;
        let value = self.value(z);
        if &value != level {
            return Err(Error::PreconditionViolated(format!(
                "f(z) = {value} differs from the level {level}"
            )));
        }
        let parts = self.decompose(z, a).ok_or_else(|| {
            Error::PreconditionViolated(format!("{a} is not a subgradient at {z}"))
        })?;
        let mut eq: Vec<(Vector, Scalar)> = Vec::new();
        let mut le: Vec<(Vector, Scalar)> = Vec::new();
        if !a.is_zero() {
            eq.push((a.clone(), a.dot(z)));
        }
        for (leaf, part) in self.leaves().into_iter().zip(&parts) {
            match &leaf.kind {
                FunctionKind::Quadratic { matrix, .. } => {
                    let mz = matrix.mul_vec(z).expect("dimension checked");
                    for r in 0..matrix.rows() {
                        let row = matrix.row_vector(r);
                        if !row.is_zero() {
                            eq.push((row, mz[r].clone()));
                        }
                    }
                }
                FunctionKind::MaxAffine { pieces } => {
                    // ⟨gⱼ − aₘ, x⟩ ≤ fₘ(z) − ⟨aₘ, z⟩ − cⱼ
                    let base = leaf.value(z) - part.dot(z);
                    for p in pieces {
                        let row = p.gradient.sub(part);
                        let rhs = &base - &p.offset;
                        if row.is_zero() {
                            debug_assert!(!rhs.is_negative());
                            continue;
                        }
                        le.push((row, rhs));
                    }
                }
                FunctionKind::Sum { .. } => unreachable!(),
            }
        }
        let dim = if le.is_empty() {
            let normals: Vec<Vector> = eq.iter().map(|(r, _)| r.clone()).collect();
            (self.dim - crate::numerics::rank_of_rows(&normals, self.dim)) as i64
        } else {
            affine_dimension_of(self.dim, &eq, &le)
        };
        usize::try_from(dim).map_err(|_| {
            Error::InternalInvariantBroken(format!("face at {z} is empty but contains z"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(p: i64, d: i64) -> Scalar {
        Scalar::ratio(p, d)
    }

    fn v(x: &[i64]) -> Vector {
        Vector::from_integers(x)
    }

    /// (x₁ − ½)² + (x₂ − ½)²
    fn square_quadratic() -> ConvexFunction {
        ConvexFunction::quadratic(
            Matrix::from_integers(&[&[2, 0], &[0, 2]]).unwrap(),
            v(&[-1, -1]),
            q(1, 2),
        )
        .unwrap()
    }

    /// max(1 − x₁ − x₂, x₁ + x₂ − 2)
    fn slab_max_affine() -> ConvexFunction {
        ConvexFunction::max_affine(vec![
            AffinePiece::new(v(&[-1, -1]), Scalar::from(1)),
            AffinePiece::new(v(&[1, 1]), Scalar::from(-2)),
        ])
        .unwrap()
    }

    fn zero_quadratic() -> ConvexFunction {
        ConvexFunction::quadratic(Matrix::zeros(2, 2), Vector::zeros(2), Scalar::zero()).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(ConvexFunction::max_affine(vec![]), Err(Error::EmptyMaxAffine));
        let indefinite = Matrix::from_integers(&[&[1, 2], &[2, 1]]).unwrap();
        assert_eq!(
            ConvexFunction::quadratic(indefinite, Vector::zeros(2), Scalar::zero()),
            Err(Error::NotPositiveSemidefinite)
        );
        let asym = Matrix::from_integers(&[&[1, 0], &[1, 1]]).unwrap();
        assert_eq!(
            ConvexFunction::quadratic(asym, Vector::zeros(2), Scalar::zero()),
            Err(Error::NotSymmetric)
        );
        let f3 = ConvexFunction::linear(Vector::zeros(3));
        assert!(ConvexFunction::sum(vec![square_quadratic(), f3]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(square_quadratic().evaluate(&v(&[0, 0])).unwrap(), q(1, 2));
        assert_eq!(slab_max_affine().evaluate(&v(&[1, 1])).unwrap(), Scalar::zero());
        let sum = ConvexFunction::sum(vec![slab_max_affine(), zero_quadratic()]).unwrap();
        for x in [v(&[0, 0]), v(&[3, -1]), v(&[2, 2])] {
            assert_eq!(sum.evaluate(&x).unwrap(), slab_max_affine().evaluate(&x).unwrap());
        }
        assert!(square_quadratic().evaluate(&v(&[1])).is_err());
    }

    #[test]
    fn centered_quadratic_matches_expanded_form() {
        let c = Vector::new(vec![q(1, 2), q(1, 2)]);
        let f = ConvexFunction::centered_quadratic(
            Matrix::from_integers(&[&[2, 0], &[0, 2]]).unwrap(),
            &c,
            Scalar::zero(),
        )
        .unwrap();
        assert_eq!(f, square_quadratic());
    }

    #[test]
    fn relint_subgradient_examples() {
        let f = slab_max_affine();
        let c = f.relint_subgradient(&v(&[0, 1])).unwrap();
        assert_eq!(c.subgradient, v(&[-1, -1]));
        assert_eq!(c.witness, ActiveWitness::MaxAffine { active: vec![0] });

        let z = Vector::new(vec![q(3, 2), Scalar::zero()]);
        let c = f.relint_subgradient(&z).unwrap();
        assert_eq!(c.subgradient, v(&[0, 0]));
        assert_eq!(c.witness, ActiveWitness::MaxAffine { active: vec![0, 1] });

        let c = square_quadratic().relint_subgradient(&v(&[0, 0])).unwrap();
        assert_eq!(c.subgradient, v(&[-1, -1]));
    }

    #[test]
    fn zero_subgradient_examples() {
        let center = Vector::new(vec![q(1, 2), q(1, 2)]);
        assert!(square_quadratic().is_zero_subgradient_possible(&center).unwrap());
        assert!(!square_quadratic().is_zero_subgradient_possible(&v(&[0, 0])).unwrap());
        let f = slab_max_affine();
        assert!(f
            .is_zero_subgradient_possible(&Vector::new(vec![q(3, 2), Scalar::zero()]))
            .unwrap());
        assert!(!f.is_zero_subgradient_possible(&v(&[0, 1])).unwrap());
    }

    #[test]
    fn zero_subgradient_of_sum_needs_combined_weights() {
        // |x₁| + (x₁ − 1/4)² type: max(x,−x) plus a quadratic pulling right
        let abs = ConvexFunction::max_affine(vec![
            AffinePiece::new(v(&[1]), Scalar::zero()),
            AffinePiece::new(v(&[-1]), Scalar::zero()),
        ])
        .unwrap();
        let pull = ConvexFunction::centered_quadratic(
            Matrix::from_integers(&[&[2]]).unwrap(),
            &Vector::new(vec![q(1, 4)]),
            Scalar::zero(),
        )
        .unwrap();
        let f = ConvexFunction::sum(vec![abs, pull]).unwrap();
        // ∂f(0) = [−1, 1] − 1/2 ∋ 0
        assert!(f.is_zero_subgradient_possible(&v(&[0])).unwrap());
        assert!(!f.is_zero_subgradient_possible(&Vector::new(vec![q(1, 4)])).unwrap());
    }

    #[test]
    fn face_dimension_examples() {
        let f = square_quadratic();
        for z in [v(&[0, 0]), v(&[3, -2]), v(&[1, 0])] {
            let a = f.relint_subgradient(&z).unwrap().subgradient;
            let t = f.evaluate(&z).unwrap();
            assert_eq!(f.face_dimension(&z, &a, &t).unwrap(), 0);
        }

        let f = slab_max_affine();
        assert_eq!(f.face_dimension(&v(&[0, 1]), &v(&[-1, -1]), &Scalar::zero()).unwrap(), 1);

        let f = ConvexFunction::quadratic(
            Matrix::from_integers(&[&[2, 0], &[0, 0]]).unwrap(),
            v(&[-1, 0]),
            q(1, 4),
        )
        .unwrap();
        let z = v(&[0, 1]);
        assert_eq!(f.evaluate(&z).unwrap(), q(1, 4));
        assert_eq!(f.face_dimension(&z, &v(&[-1, 0]), &q(1, 4)).unwrap(), 1);
    }

    #[test]
    fn face_dimension_preconditions() {
        let f = slab_max_affine();
        assert!(matches!(
            f.face_dimension(&v(&[0, 1]), &v(&[-1, -1]), &Scalar::one()),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            f.face_dimension(&v(&[0, 1]), &v(&[1, 1]), &Scalar::zero()),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn face_dimension_at_a_vertex_of_the_level_set() {
        // f = max(x₁, x₂, −x₁−x₂) at the origin: ∂f = triangle, relint choice 0
        let f = ConvexFunction::max_affine(vec![
            AffinePiece::new(v(&[1, 0]), Scalar::zero()),
            AffinePiece::new(v(&[0, 1]), Scalar::zero()),
            AffinePiece::new(v(&[-1, -1]), Scalar::zero()),
        ])
        .unwrap();
        let c = f.relint_subgradient(&v(&[0, 0])).unwrap();
        assert!(c.subgradient.is_zero());
        assert_eq!(f.face_dimension(&v(&[0, 0]), &c.subgradient, &Scalar::zero()).unwrap(), 0);
        // at (0, 1) only x₂ is active; the face is the edge x₂ = 1 of the level set
        let z = v(&[0, 1]);
        let c = f.relint_subgradient(&z).unwrap();
        assert_eq!(f.face_dimension(&z, &c.subgradient, &Scalar::one()).unwrap(), 1);
    }

    fn random_rational(rng: &mut ChaCha8Rng) -> Scalar {
        q(rng.gen_range(-20..=20), rng.gen_range(1..=4))
    }

    fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vector {
        (0..n).map(|_| random_rational(rng)).collect()
    }

    fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
        let rows = rng.gen_range(1..=n);
        let l = Matrix::from_rows(
            (0..rows)
                .map(|_| (0..n).map(|_| Scalar::from(rng.gen_range(-2..=2))).collect())
                .collect(),
        )
        .unwrap();
        l.transpose().mul(&l).unwrap()
    }

    fn random_function(rng: &mut ChaCha8Rng, n: usize) -> ConvexFunction {
        match rng.gen_range(0..3) {
            0 => ConvexFunction::max_affine(
                (0..rng.gen_range(1..=5))
                    .map(|_| {
                        AffinePiece::new(
                            (0..n).map(|_| Scalar::from(rng.gen_range(-3..=3))).collect(),
                            Scalar::from(rng.gen_range(-3..=3)),
                        )
                    })
                    .collect(),
            )
            .unwrap(),
            1 => ConvexFunction::centered_quadratic(random_psd(rng, n), &random_point(rng, n), Scalar::zero())
                .unwrap(),
            _ => ConvexFunction::sum(vec![random_function(rng, n), random_function(rng, n)]).unwrap(),
        }
    }

    #[test]
    fn subgradient_inequality_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(1..=3);
            let f = random_function(&mut rng, n);
            let z: Vector = (0..n).map(|_| Scalar::from(rng.gen_range(-2..=2))).collect();
            let choice = f.relint_subgradient(&z).unwrap();
            let fz = f.evaluate(&z).unwrap();
            assert!(f.has_subgradient(&z, &choice.subgradient).unwrap());
            for _ in 0..100 {
                let x = random_point(&mut rng, n);
                let lower = &fz + &choice.subgradient.dot(&x.sub(&z));
                assert!(f.evaluate(&x).unwrap() >= lower);
            }
            if let ActiveWitness::MaxAffine { active } = &choice.witness {
                assert!(!active.is_empty());
                let FunctionKind::MaxAffine { pieces } = f.kind() else { unreachable!() };
                for &j in active {
                    assert_eq!(pieces[j].value(&z), fz);
                }
            }
        }
    }

    #[test]
    fn convexity_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let half = q(1, 2);
        for _ in 0..200 {
            let n = rng.gen_range(1..=3);
            let f = random_function(&mut rng, n);
            let x = random_point(&mut rng, n);
            let y = random_point(&mut rng, n);
            let mid = x.add(&y).scale(&half);
            let avg = (f.evaluate(&x).unwrap() + f.evaluate(&y).unwrap()) * &half;
            assert!(f.evaluate(&mid).unwrap() <= avg);
        }
    }

    #[test]
    fn quadratic_face_points_keep_the_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.gen_range(1..=3);
            let a = random_psd(&mut rng, n);
            let f = ConvexFunction::centered_quadratic(a.clone(), &random_point(&mut rng, n), Scalar::zero())
                .unwrap();
            let z = random_point(&mut rng, n);
            let grad = f.relint_subgradient(&z).unwrap().subgradient;
            let mut rows = a.to_rows();
            rows.push(grad.entries().to_vec());
            let basis = crate::numerics::nullspace(&Matrix::from_rows(rows).unwrap());
            let t = f.evaluate(&z).unwrap();
            assert_eq!(f.face_dimension(&z, &grad, &t).unwrap(), basis.len());
            for d in &basis {
                let x = z.add(&d.scale(&random_rational(&mut rng)));
                assert_eq!(f.evaluate(&x).unwrap(), t);
            }
        }
    }

    proptest! {
        // Adding a term minimized at z (zero subgradient there) can only
        // shrink the face. Arbitrary added terms can enlarge it, e.g.
        // x₁ + (−x₁) = 0 has a full-dimensional face.
        #[test]
        fn face_dimension_monotone_under_terms_flat_at_z(seed in 0u64..400) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..=3);
            let g = random_function(&mut rng, n);
            let z: Vector = (0..n).map(|_| Scalar::from(rng.gen_range(-2..=2))).collect();
            let h = ConvexFunction::centered_quadratic(random_psd(&mut rng, n), &z, Scalar::zero()).unwrap();
            let sum = ConvexFunction::sum(vec![g.clone(), h]).unwrap();
            let dg = {
                let a = g.relint_subgradient(&z).unwrap().subgradient;
                g.face_dimension(&z, &a, &g.evaluate(&z).unwrap()).unwrap()
            };
            let ds = {
                let a = sum.relint_subgradient(&z).unwrap().subgradient;
                sum.face_dimension(&z, &a, &sum.evaluate(&z).unwrap()).unwrap()
            };
            prop_assert!(ds <= dg);
        }
    }

    #[test]
    fn arbitrary_added_term_can_raise_face_dimension() {
        let g = ConvexFunction::linear(v(&[1, 0]));
        let h = ConvexFunction::linear(v(&[-1, 0]));
        let z = v(&[0, 0]);
        let a = g.relint_subgradient(&z).unwrap().subgradient;
        assert_eq!(g.face_dimension(&z, &a, &Scalar::zero()).unwrap(), 1);
        let s = ConvexFunction::sum(vec![g, h]).unwrap();
        let a = s.relint_subgradient(&z).unwrap().subgradient;
        assert_eq!(s.face_dimension(&z, &a, &Scalar::zero()).unwrap(), 2);
    }
}
