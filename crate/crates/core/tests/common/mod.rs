//! Random instance generators shared by the integration suites.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use strongcert::feasible_set::DiscreteSet;
use strongcert::geometry::{Halfspace, Polyhedron};
use strongcert::numerics::{Matrix, Scalar, Vector};
use strongcert::objective::{AffinePiece, ConvexFunction};

pub fn v(x: &[i64]) -> Vector {
    Vector::from_integers(x)
}

pub fn rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, max_den: i64) -> Scalar {
    let den = rng.gen_range(1..=max_den);
    Scalar::ratio(rng.gen_range(lo * den..=hi * den), den)
}

/// `MᵀM` for a random nonzero integer matrix M with 1..=n rows.
pub fn psd_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let rows = rng.gen_range(1..=n);
        let m: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        if m.iter().flatten().all(|&x| x == 0) {
            continue;
        }
        let gram: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Scalar::from(m.iter().map(|r| r[i] * r[j]).sum::<i64>()))
                    .collect()
            })
            .collect();
        return Matrix::from_rows(gram).unwrap();
    }
}

/// `½(x − c)ᵀA(x − c)` with c rational in [−2, 4]ⁿ.
pub fn random_quadratic(rng: &mut ChaCha8Rng, n: usize) -> ConvexFunction {
    let a = psd_matrix(rng, n);
    let c: Vector = (0..n).map(|_| rational(rng, -2, 4, 4)).collect();
    ConvexFunction::centered_quadratic(a, &c, Scalar::zero()).unwrap()
}

/// Maximum of 1..=5 pieces with integer data.
pub fn random_max_affine(rng: &mut ChaCha8Rng, n: usize) -> ConvexFunction {
    let count = rng.gen_range(1..=5);
    let pieces = (0..count)
        .map(|_| {
            let g: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
            AffinePiece::new(v(&g), Scalar::from(rng.gen_range(-5..=5)))
        })
        .collect();
    ConvexFunction::max_affine(pieces).unwrap()
}

/// Integer points of [0,3]ⁿ cut by up to three random halfspaces, each
/// keeping a common anchor point so the set is nonempty.
pub fn random_integer_polytope(rng: &mut ChaCha8Rng, n: usize) -> DiscreteSet {
    let anchor: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
    let cuts = rng.gen_range(0..=3);
    let mut halfspaces = Vec::new();
    for _ in 0..cuts {
        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        if a.iter().all(|&x| x == 0) {
            continue;
        }
        let at_anchor: i64 = a.iter().zip(&anchor).map(|(x, y)| x * y).sum();
        let slack = rng.gen_range(0..=2);
        halfspaces.push(Halfspace::new(v(&a), Scalar::from(at_anchor + slack)).unwrap());
    }
    let constraints = Polyhedron::new(n, halfspaces).unwrap();
    DiscreteSet::integer_polytope(constraints, vec![0; n], vec![3; n]).unwrap()
}

/// Alternates quadratic and max-affine objectives.
pub fn random_instance(rng: &mut ChaCha8Rng, index: usize) -> (ConvexFunction, DiscreteSet) {
    let n = 1 + index % 3;
    let f = if (index / 3) % 2 == 0 {
        random_quadratic(rng, n)
    } else {
        random_max_affine(rng, n)
    };
    (f, random_integer_polytope(rng, n))
}

/// A random polytope in [−3,3]ⁿ containing an integer anchor point.
pub fn random_bounded_polyhedron(rng: &mut ChaCha8Rng, n: usize) -> Polyhedron {
    let anchor: Vec<Scalar> = (0..n).map(|_| Scalar::from(rng.gen_range(-1..=1))).collect();
    let anchor = Vector::new(anchor);
    let mut hs = Vec::new();
    for i in 0..n {
        let lo = &anchor[i] - &Scalar::from(rng.gen_range(1..=2));
        let hi = &anchor[i] + &Scalar::from(rng.gen_range(1..=2));
        hs.push(Halfspace::new(Vector::unit(n, i), hi).unwrap());
        hs.push(Halfspace::new(Vector::unit(n, i).neg(), -lo).unwrap());
    }
    for _ in 0..rng.gen_range(0..=3) {
        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        if a.iter().all(|&x| x == 0) {
            continue;
        }
        let a = v(&a);
        let offset = a.dot(&anchor) + rational(rng, 0, 2, 2);
        hs.push(Halfspace::new(a, offset).unwrap());
    }
    Polyhedron::new(n, hs).unwrap()
}
