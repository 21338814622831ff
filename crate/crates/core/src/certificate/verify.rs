use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{gradient_polyhedron, StrongCertificate};
use crate::error::Result;
use crate::feasible_set::{DiscreteSet, DEFAULT_ENUMERATION_CAP};
use crate::geometry::Polyhedron;
use crate::helly::bound_for;
use crate::numerics::{Scalar, Vector};
use crate::objective::ConvexFunction;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub enumeration_cap: u128,
    /// Random points per zᵢ at which the subgradient inequality is evaluated.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            samples: 100,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    WellFormed,
    PointsInSet,
    Values,
    Subgradients,
    GradientPolyhedron,
    FullDimensional,
    PairwiseStrict,
    SFree,
    Optimality,
    SizeBound,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::WellFormed,
        Check::PointsInSet,
        Check::Values,
        Check::Subgradients,
        Check::GradientPolyhedron,
        Check::FullDimensional,
        Check::PairwiseStrict,
        Check::SFree,
        Check::Optimality,
        Check::SizeBound,
    ];
}

/// One concrete failure. Indices are 0-based positions in the certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub indices: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vector>,
    pub message: String,
}

impl Finding {
    fn new(indices: Vec<usize>, point: Option<Vector>, message: impl Into<String>) -> Self {
        Finding {
            indices,
            point,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: Check,
    pub passed: bool,
    pub findings: Vec<Finding>,
}

impl Verdict {
    fn from_findings(check: Check, findings: Vec<Finding>) -> Self {
        Verdict {
            check,
            passed: findings.is_empty(),
            findings,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub verdicts: Vec<Verdict>,
}

impl VerificationReport {
    pub fn verdict(&self, check: Check) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    pub fn failed_checks(&self) -> Vec<Check> {
        self.verdicts.iter().filter(|v| !v.passed).map(|v| v.check).collect()
    }
}

/// Re-derives every property of `cert` from scratch. Each check runs on its
/// own; one failing does not hide another. Only enumeration limits are errors.
pub fn verify(
    cert: &StrongCertificate,
    f: &ConvexFunction,
    set: &DiscreteSet,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let shape = well_formed(cert, f, set);
    if !shape.is_empty() {
        let mut verdicts = vec![Verdict::from_findings(Check::WellFormed, shape)];
        for check in &Check::ALL[1..] {
            verdicts.push(Verdict::from_findings(
                *check,
                vec![Finding::new(vec![], None, "not evaluated: certificate is malformed")],
            ));
        }
        return Ok(VerificationReport {
            passed: false,
            verdicts,
        });
    }

    let points = set.enumerate(options.enumeration_cap)?;
    let verdicts = vec![
        Verdict::from_findings(Check::WellFormed, vec![]),
        Verdict::from_findings(Check::PointsInSet, points_in_set(cert, set)?),
        Verdict::from_findings(Check::Values, values(cert, f)?),
        Verdict::from_findings(Check::Subgradients, subgradients(cert, f, options)?),
        Verdict::from_findings(Check::GradientPolyhedron, polyhedron_matches(cert)?),
        Verdict::from_findings(Check::FullDimensional, full_dimensional(&cert.polyhedron)),
        Verdict::from_findings(Check::PairwiseStrict, pairwise_strict(cert)),
        Verdict::from_findings(Check::SFree, s_free(&cert.polyhedron, &points)?),
        Verdict::from_findings(Check::Optimality, optimality(cert, f, &points)?),
        Verdict::from_findings(Check::SizeBound, size_bound(cert, set)),
    ];
    Ok(VerificationReport {
        passed: verdicts.iter().all(|v| v.passed),
        verdicts,
    })
}

fn well_formed(cert: &StrongCertificate, f: &ConvexFunction, set: &DiscreteSet) -> Vec<Finding> {
    let mut out = Vec::new();
    let k = cert.points.len();
    if k == 0 {
        out.push(Finding::new(vec![], None, "certificate has no points"));
    }
    if cert.subgradients.len() != k || cert.values.len() != k {
        out.push(Finding::new(
            vec![],
            None,
            format!(
                "{k} points, {} subgradients, {} values",
                cert.subgradients.len(),
                cert.values.len()
            ),
        ));
    }
    let n = f.dim();
    if set.dim() != n || cert.polyhedron.dim() != n {
        out.push(Finding::new(
            vec![],
            None,
            format!(
                "objective has dimension {n}, set {}, polyhedron {}",
                set.dim(),
                cert.polyhedron.dim()
            ),
        ));
    }
    for (i, p) in cert.points.iter().enumerate() {
        if p.dim() != n {
            out.push(Finding::new(vec![i], None, format!("point has dimension {}", p.dim())));
        }
    }
    for (i, a) in cert.subgradients.iter().enumerate() {
        if a.dim() != n {
            out.push(Finding::new(vec![i], None, format!("subgradient has dimension {}", a.dim())));
        }
    }
    out
}

fn points_in_set(cert: &StrongCertificate, set: &DiscreteSet) -> Result<Vec<Finding>> {
    let mut out = Vec::new();
    for (i, z) in cert.points.iter().enumerate() {
        if !set.contains(z)? {
            out.push(Finding::new(vec![i], Some(z.clone()), "point is not in S"));
        }
    }
    for i in 0..cert.points.len() {
        for j in i + 1..cert.points.len() {
            if cert.points[i] == cert.points[j] {
                out.push(Finding::new(vec![i, j], Some(cert.points[i].clone()), "repeated point"));
            }
        }
    }
    Ok(out)
}

fn values(cert: &StrongCertificate, f: &ConvexFunction) -> Result<Vec<Finding>> {
    let mut out = Vec::new();
    for (i, (z, t)) in cert.points.iter().zip(&cert.values).enumerate() {
        let actual = f.evaluate(z)?;
        if &actual != t {
            out.push(Finding::new(
                vec![i],
                Some(z.clone()),
                format!("stated value {t}, f evaluates to {actual}"),
            ));
        }
    }
    Ok(out)
}

fn subgradients(cert: &StrongCertificate, f: &ConvexFunction, options: &VerifyOptions) -> Result<Vec<Finding>> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut out = Vec::new();
    for (i, (z, a)) in cert.points.iter().zip(&cert.subgradients).enumerate() {
        if !f.has_subgradient(z, a)? {
            out.push(Finding::new(vec![i], Some(z.clone()), format!("{a} is not in the subdifferential")));
            continue;
        }
        let fz = f.evaluate(z)?;
        for _ in 0..options.samples {
            let x = sample_near(&mut rng, z);
            if f.evaluate(&x)? < &fz + &a.dot(&x.sub(z)) {
                out.push(Finding::new(
                    vec![i],
                    Some(x),
                    format!("subgradient inequality for {a} fails at the sampled point"),
                ));
                break;
            }
        }
    }
    Ok(out)
}

fn sample_near(rng: &mut ChaCha8Rng, z: &Vector) -> Vector {
    z.iter()
        .map(|c| c + &Scalar::ratio(rng.gen_range(-16..=16), rng.gen_range(1..=4)))
        .collect()
}

fn polyhedron_matches(cert: &StrongCertificate) -> Result<Vec<Finding>> {
    let expected = gradient_polyhedron(&cert.points, &cert.subgradients)?;
    let stated = cert.polyhedron.halfspaces();
    let mut out = Vec::new();
    if stated.len() != expected.len() {
        out.push(Finding::new(
            vec![],
            None,
            format!("{} constraints stated, {} pairs", stated.len(), expected.len()),
        ));
    }
    for (i, h) in expected.halfspaces().iter().enumerate() {
        if !stated.iter().any(|s| s.is_equivalent(h)) {
            out.push(Finding::new(vec![i], None, "no constraint ⟨aᵢ, x − zᵢ⟩ ≤ 0 in the polyhedron"));
        }
    }
    for (j, s) in stated.iter().enumerate() {
        if !expected.halfspaces().iter().any(|h| h.is_equivalent(s)) {
            out.push(Finding::new(vec![j], None, "constraint does not come from any (zᵢ, aᵢ) pair"));
        }
    }
    Ok(out)
}

fn full_dimensional(q: &Polyhedron) -> Vec<Finding> {
    let d = q.affine_dimension();
    if d == q.dim() as i64 {
        vec![]
    } else {
        vec![Finding::new(vec![], None, format!("affine dimension {d}, expected {}", q.dim()))]
    }
}

fn pairwise_strict(cert: &StrongCertificate) -> Vec<Finding> {
    let mut out = Vec::new();
    let k = cert.points.len();
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let ip = cert.subgradients[i].dot(&cert.points[j].sub(&cert.points[i]));
            if !ip.is_negative() {
                out.push(Finding::new(vec![i, j], None, format!("⟨aᵢ, zⱼ − zᵢ⟩ = {ip} is not negative")));
            }
        }
    }
    out
}

fn s_free(q: &Polyhedron, points: &[Vector]) -> Result<Vec<Finding>> {
    for s in points {
        if q.strict_contains(s)? {
            return Ok(vec![Finding::new(
                vec![],
                Some(s.clone()),
                "point of S in the interior of the polyhedron",
            )]);
        }
    }
    Ok(vec![])
}

fn optimality(cert: &StrongCertificate, f: &ConvexFunction, points: &[Vector]) -> Result<Vec<Finding>> {
    let mut best: Option<(Scalar, &Vector)> = None;
    for s in points {
        let v = f.evaluate(s)?;
        if best.as_ref().map_or(true, |(b, _)| &v < b) {
            best = Some((v, s));
        }
    }
    let Some((min, at)) = best else {
        return Ok(vec![Finding::new(vec![], None, "S is empty")]);
    };
    let certified = cert.values.iter().min().expect("well-formed certificate is nonempty");
    if certified == &min {
        Ok(vec![])
    } else {
        Ok(vec![Finding::new(
            vec![],
            Some(at.clone()),
            format!("certified minimum {certified}, true minimum over S {min}"),
        )])
    }
}

fn size_bound(cert: &StrongCertificate, set: &DiscreteSet) -> Vec<Finding> {
    match bound_for(set).bound {
        Some(b) if cert.size() as u128 > b => vec![Finding::new(
            vec![],
            None,
            format!("size {} exceeds the Helly bound {b}", cert.size()),
        )],
        _ => vec![],
    }
}

/// Relaxes each constraint of Q by `epsilon` in turn and reports whether
/// some point of S enters the interior.
pub fn probe_maximality(
    cert: &StrongCertificate,
    set: &DiscreteSet,
    epsilon: &Scalar,
    cap: u128,
) -> Result<Vec<bool>> {
    let points = set.enumerate(cap)?;
    let halfspaces = cert.polyhedron.halfspaces();
    (0..halfspaces.len())
        .map(|i| {
            let mut relaxed = halfspaces.to_vec();
            relaxed[i] = relaxed[i].relaxed(epsilon);
            let q = Polyhedron::new(cert.polyhedron.dim(), relaxed)?;
            for s in &points {
                if q.strict_contains(s)? {
                    return Ok(true);
                }
            }
            Ok(false)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::{solve, SolveOptions, SolveOutcome};
    use crate::numerics::Matrix;
    use crate::objective::AffinePiece;

    fn v(x: &[i64]) -> Vector {
        Vector::from_integers(x)
    }

    fn square() -> (ConvexFunction, DiscreteSet, StrongCertificate) {
        let f = ConvexFunction::quadratic(
            Matrix::from_integers(&[&[2, 0], &[0, 2]]).unwrap(),
            v(&[-1, -1]),
            Scalar::ratio(1, 2),
        )
        .unwrap();
        let s = DiscreteSet::integer_box(vec![0, 0], vec![1, 1]).unwrap();
        let cert = match solve(&f, &s, &SolveOptions::default()).unwrap() {
            SolveOutcome::Certificate { certificate, .. } => certificate,
            other => panic!("{other:?}"),
        };
        (f, s, cert)
    }

    fn slab() -> (ConvexFunction, DiscreteSet, StrongCertificate) {
        let f = ConvexFunction::max_affine(vec![
            AffinePiece::new(v(&[-1, -1]), Scalar::from(1)),
            AffinePiece::new(v(&[1, 1]), Scalar::from(-2)),
        ])
        .unwrap();
        let s = DiscreteSet::integer_box(vec![0, 0], vec![2, 2]).unwrap();
        let cert = match solve(&f, &s, &SolveOptions::default()).unwrap() {
            SolveOutcome::Certificate { certificate, .. } => certificate,
            other => panic!("{other:?}"),
        };
        (f, s, cert)
    }

    fn rebuilt(c: &StrongCertificate) -> StrongCertificate {
        StrongCertificate::from_pairs(c.points.clone(), c.subgradients.clone(), c.values.clone()).unwrap()
    }

    #[test]
    fn solved_square_passes_everything() {
        let (f, s, cert) = square();
        let r = verify(&cert, &f, &s, &VerifyOptions::default()).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.verdicts.len(), Check::ALL.len());
    }

    #[test]
    fn weakened_first_subgradient_breaks_strictness() {
        let (f, s, mut cert) = square();
        cert.subgradients[0] = v(&[-1, 0]);
        let cert = rebuilt(&cert);
        let r = verify(&cert, &f, &s, &VerifyOptions::default()).unwrap();
        let pairs = &r.verdict(Check::PairwiseStrict).unwrap().findings;
        // z₁ = (0,1): ⟨(−1,0), (0,1)⟩ = 0
        assert_eq!(cert.points[1], v(&[0, 1]));
        assert!(pairs.iter().any(|p| p.indices == vec![0, 1]));
        assert!(!pairs.iter().any(|p| p.indices == vec![0, 2]));
        assert!(!r.verdict(Check::Subgradients).unwrap().passed);
    }

    #[test]
    fn dropped_corner_leaves_witness() {
        let (f, s, mut cert) = square();
        cert.points.pop();
        cert.subgradients.pop();
        cert.values.pop();
        let cert = rebuilt(&cert);
        let r = verify(&cert, &f, &s, &VerifyOptions::default()).unwrap();
        assert_eq!(r.failed_checks(), vec![Check::SFree]);
        assert_eq!(r.verdict(Check::SFree).unwrap().findings[0].point, Some(v(&[1, 1])));
    }

    #[test]
    fn polyhedron_missing_constraint_is_flagged() {
        let (f, s, mut cert) = square();
        let kept = cert.polyhedron.halfspaces()[..3].to_vec();
        cert.polyhedron = Polyhedron::new(2, kept).unwrap();
        let r = verify(&cert, &f, &s, &VerifyOptions::default()).unwrap();
        assert_eq!(r.failed_checks(), vec![Check::GradientPolyhedron, Check::SFree]);
    }

    #[test]
    fn flipped_sign_and_swapped_points() {
        let (f, s, cert) = square();
        let mut flipped = cert.clone();
        flipped.subgradients[2] = flipped.subgradients[2].neg();
        let r = verify(&rebuilt(&flipped), &f, &s, &VerifyOptions::default()).unwrap();
        assert_eq!(r.verdict(Check::Subgradients).unwrap().findings[0].indices, vec![2]);

        let mut swapped = cert.clone();
        swapped.points.swap(0, 3);
        let r = verify(&rebuilt(&swapped), &f, &s, &VerifyOptions::default()).unwrap();
        let bad: Vec<_> = r.verdict(Check::Subgradients).unwrap().findings.iter().map(|x| x.indices[0]).collect();
        assert_eq!(bad, vec![0, 3]);
    }

    #[test]
    fn wrong_value_and_outside_point() {
        let (f, s, mut cert) = square();
        cert.values[1] = Scalar::from(7);
        cert.points[0] = v(&[5, 5]);
        let r = verify(&cert, &f, &s, &VerifyOptions::default()).unwrap();
        let failed = r.failed_checks();
        assert!(failed.contains(&Check::PointsInSet));
        assert!(failed.contains(&Check::Values));
    }

    #[test]
    fn malformed_certificate_reports_without_panicking() {
        let (f, s, mut cert) = square();
        cert.values.pop();
        let r = verify(&cert, &f, &s, &VerifyOptions::default()).unwrap();
        assert!(!r.passed);
        assert!(r.verdicts.iter().all(|v| !v.passed));
    }

    #[test]
    fn maximality_probe_examples() {
        let (_, s, cert) = square();
        let cap = DEFAULT_ENUMERATION_CAP;
        assert_eq!(probe_maximality(&cert, &s, &Scalar::ratio(1, 2), cap).unwrap(), vec![true; 4]);
        assert_eq!(probe_maximality(&cert, &s, &Scalar::zero(), cap).unwrap(), vec![false; 4]);
        let (f, s2, cert2) = slab();
        assert_eq!(probe_maximality(&cert2, &s2, &Scalar::ratio(1, 2), cap).unwrap(), vec![true; 2]);
        assert!(verify(&cert2, &f, &s2, &VerifyOptions::default()).unwrap().passed);
    }
}
