//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strongcert::certificate::{
    probe_maximality, solve, verify, Check, SolveOptions, SolveOutcome, StrongCertificate, VerifyOptions,
};
use strongcert::duality::{duality_report, minimize_on_polyhedron};
use strongcert::feasible_set::{DiscreteSet, DEFAULT_ENUMERATION_CAP as CAP};
use strongcert::geometry::{Halfspace, Polyhedron};
use strongcert::helly::{bound_for, check_v_condition, leave_one_out_witness, verify_witness};
use strongcert::numerics::{Matrix, Scalar, Vector};
use strongcert::objective::{AffinePiece, ConvexFunction};
use strongcert::oracles::{brute_min, grid_lower_bound};

use common::v;

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn err(e: strongcert::Error) -> String {
    e.to_string()
}

fn certificate_of(outcome: SolveOutcome) -> Result<(StrongCertificate, Scalar), String> {
    match outcome {
        SolveOutcome::Certificate {
            certificate, optimum, ..
        } => Ok((certificate, optimum)),
        other => Err(format!("expected a certificate, got {other:?}")),
    }
}

fn same_constraints(q: &Polyhedron, expected: &[Halfspace]) -> bool {
    q.len() == expected.len()
        && expected
            .iter()
            .all(|e| q.halfspaces().iter().any(|h| h.is_equivalent(e)))
}

fn hs(a: &[i64], b: i64) -> Halfspace {
    Halfspace::new(v(a), Scalar::from(b)).unwrap()
}

fn square_instance() -> (ConvexFunction, DiscreteSet) {
    let f = ConvexFunction::centered_quadratic(
        Matrix::from_integers(&[&[2, 0], &[0, 2]]).unwrap(),
        &Vector::new(vec![Scalar::ratio(1, 2), Scalar::ratio(1, 2)]),
        Scalar::zero(),
    )
    .unwrap();
    (f, DiscreteSet::integer_box(vec![0, 0], vec![1, 1]).unwrap())
}

fn slab_instance() -> (ConvexFunction, DiscreteSet) {
    let f = ConvexFunction::max_affine(vec![
        AffinePiece::new(v(&[-1, -1]), Scalar::from(1)),
        AffinePiece::new(v(&[1, 1]), Scalar::from(-2)),
    ])
    .unwrap();
    (f, DiscreteSet::integer_box(vec![0, 0], vec![2, 2]).unwrap())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (f, s) = square_instance();
    let (cert, optimum) = certificate_of(solve(&f, &s, &SolveOptions::default()).map_err(err)?)?;
    check(cert.size() == 4, || format!("k = {}", cert.size()))?;
    check(optimum == Scalar::ratio(1, 2), || format!("optimum {optimum}"))?;
    let expected = [hs(&[-1, -1], 0), hs(&[1, 1], 2), hs(&[1, -1], 1), hs(&[-1, 1], 1)];
    check(same_constraints(&cert.polyhedron, &expected), || {
        format!("Q = {:?}", cert.polyhedron)
    })?;
    let report = verify(&cert, &f, &s, &VerifyOptions::default()).map_err(err)?;
    check(report.passed, || format!("failed verdicts {:?}", report.failed_checks()))?;
    check(bound_for(&s).bound == Some(cert.size() as u128), || "Helly bound not met with equality".into())?;
    let dual = duality_report(&cert, &f, &s, None).map_err(err)?;
    check(dual.strong && dual.bound == Scalar::ratio(1, 2), || format!("L(Q) = {}", dual.bound))?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("k=4, optimum 1/2, L(Q)=1/2, {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (f, s) = slab_instance();
    let (cert, optimum) = certificate_of(solve(&f, &s, &SolveOptions::default()).map_err(err)?)?;
    check(cert.size() == 2, || format!("k = {}", cert.size()))?;
    check(optimum.is_zero(), || format!("optimum {optimum}"))?;
    check(
        same_constraints(&cert.polyhedron, &[hs(&[-1, -1], -1), hs(&[1, 1], 2)]),
        || format!("Q = {:?}", cert.polyhedron),
    )?;
    let report = verify(&cert, &f, &s, &VerifyOptions::default()).map_err(err)?;
    check(report.passed, || format!("failed verdicts {:?}", report.failed_checks()))?;
    let dual = duality_report(&cert, &f, &s, None).map_err(err)?;
    check(dual.strong && dual.bound.is_zero(), || format!("L(Q) = {}", dual.bound))?;
    let probe = probe_maximality(&cert, &s, &Scalar::ratio(1, 2), CAP).map_err(err)?;
    check(probe.iter().all(|&b| b), || format!("probe {probe:?}"))?;
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("k=2, optimum 0, L(Q)=0, probe all true, {elapsed:.2?}"))
}

const SUITE_SIZE: usize = 500;

struct Solved {
    set: DiscreteSet,
    cert: StrongCertificate,
}

/// Runs the random suite; collects the certificates for criterion 4.
fn criterion_3(solved: &mut Vec<Solved>) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut continuous = 0usize;
    let mut sizes = [0usize; 9];
    let mut index = 0usize;
    while solved.len() < SUITE_SIZE {
        let (f, set) = common::random_instance(&mut rng, index);
        index += 1;
        let n = f.dim();
        let (brute, _) = brute_min(&f, &set, CAP).map_err(err)?;
        match solve(&f, &set, &SolveOptions::default()).map_err(err)? {
            SolveOutcome::Certificate {
                certificate, optimum, ..
            } => {
                let tag = format!("instance {index} (n={n})");
                let report = verify(&certificate, &f, &set, &VerifyOptions::default()).map_err(err)?;
                check(report.passed, || format!("{tag}: verdicts {:?}", report.failed_checks()))?;
                check(optimum == brute, || format!("{tag}: optimum {optimum} vs brute force {brute}"))?;
                check(certificate.size() <= 1 << n, || format!("{tag}: k = {}", certificate.size()))?;
                for i in 0..certificate.size() {
                    for j in 0..certificate.size() {
                        if i != j {
                            let ip = certificate.subgradients[i]
                                .dot(&certificate.points[j].sub(&certificate.points[i]));
                            check(ip.is_negative(), || format!("{tag}: pair ({i}, {j}) gives {ip}"))?;
                        }
                    }
                }
                let dual = duality_report(&certificate, &f, &set, None).map_err(err)?;
                check(dual.strong, || format!("{tag}: gap {}", dual.gap))?;
                sizes[certificate.size()] += 1;
                solved.push(Solved {
                    set,
                    cert: certificate,
                });
            }
            SolveOutcome::ContinuousOptimum { point, value, .. } => {
                check(set.contains(&point).map_err(err)?, || "continuous optimum outside S".into())?;
                check(f.is_zero_subgradient_possible(&point).map_err(err)?, || {
                    "continuous optimum without zero subgradient".into()
                })?;
                check(value == brute, || "continuous optimum is not the minimum".into())?;
                continuous += 1;
            }
            SolveOutcome::Infeasible { .. } => return Err("generator produced an empty set".into()),
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} certificates verified (sizes 1..=8: {:?}), plus {continuous} continuous optima, {elapsed:.2?}",
        solved.len(),
        &sizes[1..]
    ))
}

fn criterion_4(solved: &[Solved]) -> Outcome {
    check(!solved.is_empty(), || "no certificates from criterion 3".into())?;
    for (i, s) in solved.iter().enumerate() {
        check(check_v_condition(&s.cert.points, &s.set, CAP).map_err(err)?, || {
            format!("certificate {i}: vertex condition fails")
        })?;
        let r = verify_witness(&leave_one_out_witness(&s.cert.points, &s.set), CAP).map_err(err)?;
        check(r.valid && r.m == s.cert.size(), || format!("certificate {i}: witness {r:?}"))?;
    }
    Ok(format!("{} certificates: vertex condition and leave-one-out witnesses hold", solved.len()))
}

fn rebuilt(points: Vec<Vector>, subgradients: Vec<Vector>, values: Vec<Scalar>) -> StrongCertificate {
    StrongCertificate::from_pairs(points, subgradients, values).unwrap()
}

fn criterion_5() -> Outcome {
    let (f, s) = square_instance();
    let (cert, _) = certificate_of(solve(&f, &s, &SolveOptions::default()).map_err(err)?)?;
    let opts = VerifyOptions::default();
    let failed = |c: &StrongCertificate| verify(c, &f, &s, &opts).map(|r| r.failed_checks()).map_err(err);

    let mut flipped = cert.subgradients.clone();
    flipped[1] = flipped[1].neg();
    let flipped = failed(&rebuilt(cert.points.clone(), flipped, cert.values.clone()))?;
    check(
        flipped.contains(&Check::Subgradients) && !flipped.contains(&Check::PointsInSet),
        || format!("flipped sign: {flipped:?}"),
    )?;

    let k = cert.size() - 1;
    let dropped = failed(&rebuilt(
        cert.points[..k].to_vec(),
        cert.subgradients[..k].to_vec(),
        cert.values[..k].to_vec(),
    ))?;
    check(dropped == vec![Check::SFree], || format!("dropped constraint: {dropped:?}"))?;

    let mut points = cert.points.clone();
    points.swap(0, 3);
    let swapped = failed(&rebuilt(points, cert.subgradients.clone(), cert.values.clone()))?;
    check(
        swapped.contains(&Check::Subgradients) && !swapped.contains(&Check::PointsInSet),
        || format!("swapped points: {swapped:?}"),
    )?;

    let mut weak = cert.subgradients.clone();
    weak[0] = v(&[-1, 0]);
    let weak = failed(&rebuilt(cert.points.clone(), weak, cert.values.clone()))?;
    check(weak.contains(&Check::PairwiseStrict), || format!("weakened subgradient: {weak:?}"))?;

    let half = Vector::new(vec![Scalar::ratio(1, 2), Scalar::ratio(1, 2)]);
    let centre = DiscreteSet::explicit(vec![half.clone(), v(&[0, 0])]).map_err(err)?;
    match solve(&f, &centre, &SolveOptions::default()).map_err(err)? {
        SolveOutcome::ContinuousOptimum { point, .. } if point == half => {}
        other => return Err(format!("vanishing gradient instance gave {other:?}")),
    }
    Ok("flipped sign, dropped constraint, swapped point and weakened subgradient rejected; continuous optimum reported".into())
}

fn on_grid(x: &Vector, step: &Scalar) -> bool {
    x.iter().all(|c| (c / step).is_integer())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let steps = [Scalar::one(), Scalar::ratio(1, 2), Scalar::ratio(1, 4)];
    let mut exact_hits = 0usize;
    for i in 0..100 {
        let n = 1 + i % 3;
        let p = common::random_bounded_polyhedron(&mut rng, n);
        let f = common::random_quadratic(&mut rng, n);
        let (exact, at) = minimize_on_polyhedron(&f, &p, None).map_err(err)?;
        let mut last_gap: Option<Scalar> = None;
        for step in &steps {
            let (grid, _) = grid_lower_bound(&f, &p, None, step).map_err(err)?;
            check(exact <= grid, || format!("polyhedron {i}: exact {exact} above grid {grid} at step {step}"))?;
            let gap = &grid - &exact;
            if let Some(prev) = &last_gap {
                check(&gap <= prev, || format!("polyhedron {i}: gap grew to {gap} at step {step}"))?;
            }
            if on_grid(&at, step) {
                check(gap.is_zero(), || format!("polyhedron {i}: minimizer {at} on grid but gap {gap}"))?;
                exact_hits += 1;
            }
            last_gap = Some(gap);
        }
    }
    Ok(format!("100 polytopes, 3 steps each; {exact_hits} grid-exact cases matched"))
}

fn main() -> ExitCode {
    let mut solved = Vec::new();
    let results = [
        ("1", "unit-square quadratic", criterion_1()),
        ("2", "slab max-affine", criterion_2()),
        ("3", "random property suite", criterion_3(&mut solved)),
        ("4", "vertex condition and Helly witness", criterion_4(&solved)),
        ("5", "tampered certificates", criterion_5()),
        ("6", "oracle consistency", criterion_6()),
    ];
    let mut all = true;
    for (id, name, result) in &results {
        match result {
            Ok(detail) => println!("criterion {id} [{name}]: PASS ({detail})"),
            Err(detail) => {
                all = false;
                println!("criterion {id} [{name}]: FAIL ({detail})");
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
