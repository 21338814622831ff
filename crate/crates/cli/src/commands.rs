use std::fs;
use std::io::Write;
use std::path::Path;

use log::info;
use serde::de::DeserializeOwned;
use serde::Serialize;
use strongcert::certificate::{
    probe_maximality, solve, verify, IterationRecord, SolveOptions, SolveOutcome, StrongCertificate, VerifyOptions,
};
use strongcert::duality::{default_box, duality_report, DualReport};
use strongcert::feasible_set::DiscreteSet;
use strongcert::helly::{bound_for, verify_witness, HellyBound, WitnessFailure};
use strongcert::numerics::{Scalar, Vector};
use strongcert::objective::ConvexFunction;
use strongcert::oracles::{brute_min, brute_sfree};
use strongcert::certificate::VerificationReport;

use crate::document::{
    CertificateDocument, ContinuousOptimumDocument, ContinuousTag, CrossCheck, InfeasibleDocument, InfeasibleTag,
    InstanceDocument, Settings, WitnessDocument,
};
use crate::error::CliError;
use crate::{Cli, Command, EXIT_INFEASIBLE, EXIT_OK, EXIT_REJECTED};

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Solve {
            instance,
            output,
            cross_check,
        } => cmd_solve(cli, instance, output.as_deref(), *cross_check, out),
        Command::Verify {
            instance,
            certificate,
            cross_check,
        } => cmd_verify(cli, instance, certificate, *cross_check, out),
        Command::Helly { witness } => cmd_helly(cli, witness, out),
        Command::Report {
            instance,
            certificate,
            tsv,
        } => cmd_report(cli, instance, certificate.as_deref(), *tsv, out),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let file = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        file: file.clone(),
        message: e.to_string(),
    })?;
    let mut de = serde_json::Deserializer::from_str(&text);
    let parse_error = |path: String, e: serde_json::Error| {
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let message = e.to_string();
        CliError::Parse {
            file: file.clone(),
            path,
            line: e.line(),
            column: e.column(),
            message: message.strip_suffix(&suffix).unwrap_or(&message).to_string(),
        }
    };
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        parse_error(path, e.into_inner())
    })?;
    de.end().map_err(|e| parse_error(".".into(), e))?;
    Ok(value)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io {
        file: "<stdout>".into(),
        message: e.to_string(),
    })
}

struct Loaded {
    f: ConvexFunction,
    set: DiscreteSet,
    settings: Settings,
    dimension: usize,
}

fn load_instance(cli: &Cli, path: &Path) -> Result<Loaded, CliError> {
    let doc: InstanceDocument = read_json(path)?;
    let name = path.display().to_string();
    let (f, set) = doc.build().map_err(|e| e.in_file(&name))?;
    let settings = Settings::merge(&doc.options, &cli.flags).map_err(|e| e.in_file(&name))?;
    Ok(Loaded {
        f,
        set,
        settings,
        dimension: doc.dimension,
    })
}

fn load_certificate(path: &Path, dimension: usize) -> Result<(CertificateDocument, StrongCertificate), CliError> {
    let doc: CertificateDocument = read_json(path)?;
    let name = path.display().to_string();
    if doc.dimension != dimension {
        return Err(CliError::invalid(
            "dimension",
            format!("certificate has dimension {}, instance has {dimension}", doc.dimension),
        )
        .in_file(&name));
    }
    let cert = doc.to_certificate().map_err(|e| e.in_file(&name))?;
    Ok((doc, cert))
}

fn cross_check_certificate(
    loaded: &Loaded,
    cert: &StrongCertificate,
    claimed: &Scalar,
) -> Result<CrossCheck, CliError> {
    let (min, argmin) = brute_min(&loaded.f, &loaded.set, loaded.settings.enum_cap)?;
    let interior_point = brute_sfree(&cert.polyhedron, &loaded.set, loaded.settings.enum_cap)?;
    let optimum_matches = &min == claimed;
    Ok(CrossCheck {
        agrees: optimum_matches && interior_point.is_none(),
        brute_force_minimum: min,
        brute_force_argmin: argmin,
        optimum_matches,
        interior_point,
    })
}

fn cmd_solve(
    cli: &Cli,
    instance: &Path,
    output: Option<&Path>,
    cross_check: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let loaded = load_instance(cli, instance)?;
    let options = SolveOptions {
        enumeration_cap: loaded.settings.enum_cap,
    };
    let (text, code) = match solve(&loaded.f, &loaded.set, &options)? {
        SolveOutcome::Certificate {
            certificate,
            optimum,
            argmin,
            iterations,
        } => {
            info!("certificate of size {} with optimum {optimum}", certificate.size());
            let mut doc = CertificateDocument::new(&certificate, optimum, argmin, iterations);
            let mut code = EXIT_OK;
            if cross_check {
                let check = cross_check_certificate(&loaded, &certificate, &doc.optimum)?;
                if !check.agrees {
                    code = EXIT_REJECTED;
                }
                doc.cross_check = Some(check);
            }
            (to_json(&doc), code)
        }
        SolveOutcome::ContinuousOptimum { point, value, note } => {
            let mut code = EXIT_OK;
            if cross_check && brute_min(&loaded.f, &loaded.set, loaded.settings.enum_cap)?.0 != value {
                code = EXIT_REJECTED;
            }
            let doc = ContinuousOptimumDocument {
                outcome: ContinuousTag::ContinuousOptimum,
                dimension: loaded.dimension,
                point,
                value,
                note,
            };
            (to_json(&doc), code)
        }
        SolveOutcome::Infeasible { note } => {
            let doc = InfeasibleDocument {
                outcome: InfeasibleTag::Infeasible,
                dimension: loaded.dimension,
                note,
            };
            (to_json(&doc), EXIT_INFEASIBLE)
        }
    };
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io {
            file: path.display().to_string(),
            message: e.to_string(),
        })?,
        None => emit(out, &text)?,
    }
    Ok(code)
}

#[derive(Serialize)]
#[serde(untagged)]
enum DualityEntry {
    Report(DualReport),
    Failed { error: String },
}

#[derive(Serialize)]
struct Maximality {
    epsilon: Scalar,
    /// Entry i: relaxing constraint i by epsilon lets a point of S into the interior.
    admits_point: Vec<bool>,
}

#[derive(Serialize)]
struct Claims {
    claimed_optimum: Scalar,
    certified_optimum: Option<Scalar>,
    matches: bool,
}

#[derive(Serialize)]
struct VerifyOutput {
    passed: bool,
    verification: VerificationReport,
    claims: Claims,
    duality: DualityEntry,
    helly: HellyBound,
    maximality: Option<Maximality>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check: Option<CrossCheck>,
}

fn cmd_verify(
    cli: &Cli,
    instance: &Path,
    certificate: &Path,
    cross_check: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let loaded = load_instance(cli, instance)?;
    let (doc, cert) = load_certificate(certificate, loaded.dimension)?;
    let cap = loaded.settings.enum_cap;
    let options = VerifyOptions {
        enumeration_cap: cap,
        ..VerifyOptions::default()
    };
    let verification = verify(&cert, &loaded.f, &loaded.set, &options)?;

    let certified_optimum = cert.values.iter().min().cloned();
    let matches = certified_optimum.as_ref() == Some(&doc.optimum)
        && cert
            .points
            .iter()
            .zip(&cert.values)
            .any(|(z, v)| z == &doc.argmin && v == &doc.optimum);
    let claims = Claims {
        claimed_optimum: doc.optimum.clone(),
        certified_optimum,
        matches,
    };

    let bounds = default_box(&loaded.set, &loaded.settings.box_inflate)?;
    let duality = match duality_report(&cert, &loaded.f, &loaded.set, Some(bounds)) {
        Ok(r) => DualityEntry::Report(r),
        Err(e) => DualityEntry::Failed { error: e.to_string() },
    };
    let strong = matches!(&duality, DualityEntry::Report(r) if r.strong);

    let maximality = if verification.passed {
        Some(Maximality {
            admits_point: probe_maximality(&cert, &loaded.set, &loaded.settings.epsilon, cap)?,
            epsilon: loaded.settings.epsilon.clone(),
        })
    } else {
        None
    };

    let cross_check = if cross_check {
        Some(cross_check_certificate(&loaded, &cert, &doc.optimum)?)
    } else {
        None
    };
    let passed = verification.passed && claims.matches && strong && cross_check.as_ref().is_none_or(|c| c.agrees);
    let output = VerifyOutput {
        passed,
        verification,
        claims,
        duality,
        helly: bound_for(&loaded.set),
        maximality,
        cross_check,
    };
    emit(out, &to_json(&output))?;
    Ok(if passed { EXIT_OK } else { EXIT_REJECTED })
}

#[derive(Serialize)]
struct HellyOutput {
    valid: bool,
    m: usize,
    failure: Option<WitnessFailure>,
    implied_lower_bound: Option<usize>,
    upper_bound: HellyBound,
}

fn cmd_helly(cli: &Cli, witness: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let doc: WitnessDocument = read_json(witness)?;
    let name = witness.display().to_string();
    let config = doc.build().map_err(|e| e.in_file(&name))?;
    let settings = Settings::merge(&doc.options, &cli.flags).map_err(|e| e.in_file(&name))?;
    let report = verify_witness(&config, settings.enum_cap)?;
    let output = HellyOutput {
        valid: report.valid,
        m: report.m,
        implied_lower_bound: report.implied_lower_bound(),
        failure: report.failure,
        upper_bound: bound_for(&config.set),
    };
    emit(out, &to_json(&output))?;
    Ok(if output.valid { EXIT_OK } else { EXIT_REJECTED })
}

fn tsv_vector(v: &Vector) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn cmd_report(
    cli: &Cli,
    instance: &Path,
    certificate: Option<&Path>,
    tsv: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let loaded = load_instance(cli, instance)?;
    let (cert, iterations): (StrongCertificate, Vec<IterationRecord>) = match certificate {
        Some(path) => {
            let (doc, cert) = load_certificate(path, loaded.dimension)?;
            (cert, doc.provenance.iterations)
        }
        None => {
            let options = SolveOptions {
                enumeration_cap: loaded.settings.enum_cap,
            };
            match solve(&loaded.f, &loaded.set, &options)? {
                SolveOutcome::Certificate {
                    certificate,
                    iterations,
                    ..
                } => (certificate, iterations),
                SolveOutcome::ContinuousOptimum { point, value, .. } => {
                    emit(out, &format!("continuous optimum at {point} with value {value}\n"))?;
                    return Ok(EXIT_OK);
                }
                SolveOutcome::Infeasible { note } => {
                    emit(out, &format!("infeasible: {note}\n"))?;
                    return Ok(EXIT_INFEASIBLE);
                }
            }
        }
    };
    let bounds = default_box(&loaded.set, &loaded.settings.box_inflate)?;
    let dual = duality_report(&cert, &loaded.f, &loaded.set, Some(bounds))?;

    let mut text = String::new();
    if tsv {
        text.push_str("# iterations\niteration\tpoint\tvalue\tsubgradient\tface_dimension\ttie_set_size\n");
        for r in &iterations {
            text.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                r.iteration,
                tsv_vector(&r.point),
                r.value,
                tsv_vector(&r.subgradient),
                r.face_dimension,
                r.tie_set_size
            ));
        }
        text.push_str("\n# facet_minima\nfacet\tvalue\tpoint\n");
        for m in &dual.facet_minima {
            text.push_str(&format!("{}\t{}\t{}\n", m.facet, m.value, tsv_vector(&m.point)));
        }
    } else {
        text.push_str(&format!("certificate size: {}\n", cert.size()));
        for (i, ((z, a), t)) in cert.points.iter().zip(&cert.subgradients).zip(&cert.values).enumerate() {
            text.push_str(&format!("  z{} = {z}  a{} = {a}  f = {t}\n", i + 1, i + 1));
        }
        text.push_str(&format!(
            "dual bound L(Q) = {} over box {} .. {}; primal {}; gap {}; strong duality: {}\n",
            dual.bound,
            dual.bounds.lower,
            dual.bounds.upper,
            dual.primal,
            dual.gap,
            if dual.strong { "yes" } else { "no" }
        ));
        if let Some(b) = bound_for(&loaded.set).bound {
            text.push_str(&format!("Helly bound: {b}\n"));
        }
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}
