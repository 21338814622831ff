//! JSON documents read and written by the command line tool.
//!
//! Numbers are JSON integers or `"p/q"` strings. Instance and witness files
//! are parsed into flat structs first so that serde reports the exact field
//! and line of a bad value; shape checks then run with explicit paths.

use serde::{Deserialize, Serialize};
use strongcert::certificate::{IterationRecord, StrongCertificate};
use strongcert::feasible_set::{DiscreteSet, DEFAULT_ENUMERATION_CAP};
use strongcert::geometry::{Halfspace, Polyhedron};
use strongcert::helly::{ConvexSet, WitnessConfiguration};
use strongcert::numerics::{Matrix, Scalar, Vector};
use strongcert::objective::{AffinePiece, ConvexFunction};

use crate::error::CliError;

pub const TIE_BREAK: &str =
    "minimum value, then largest face dimension, then lexicographically smallest point";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub dimension: usize,
    pub objective: ObjectiveDoc,
    pub set: SetDoc,
    #[serde(default)]
    pub options: OptionsDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveType {
    Quadratic,
    MaxAffine,
    Sum,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveDoc {
    #[serde(rename = "type")]
    pub kind: ObjectiveType,
    pub matrix: Option<Vec<Vec<Scalar>>>,
    pub linear: Option<Vector>,
    pub center: Option<Vector>,
    pub constant: Option<Scalar>,
    pub pieces: Option<Vec<PieceDoc>>,
    pub terms: Option<Vec<ObjectiveDoc>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub gradient: Vector,
    pub offset: Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetType {
    Points,
    IntegerPolytope,
    MixedInteger,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetDoc {
    #[serde(rename = "type")]
    pub kind: SetType,
    pub points: Option<Vec<Vector>>,
    pub constraints: Option<Vec<ConstraintDoc>>,
    pub lower: Option<Vec<Scalar>>,
    pub upper: Option<Vec<Scalar>>,
    // accepted so the rejection message can be specific
    pub continuous: Option<serde_json::Value>,
    pub integer: Option<serde_json::Value>,
}

/// `⟨normal, x⟩ ≤ offset`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDoc {
    pub normal: Vector,
    pub offset: Scalar,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsDoc {
    pub box_inflate: Option<Scalar>,
    pub enum_cap: Option<u64>,
    pub epsilon: Option<Scalar>,
}

/// Settings after merging flags over instance options over defaults.
#[derive(Debug, Clone)]
pub struct Settings {
    pub box_inflate: Scalar,
    pub enum_cap: u128,
    pub epsilon: Scalar,
}

impl Settings {
    pub fn merge(doc: &OptionsDoc, flags: &crate::GlobalFlags) -> Result<Settings, CliError> {
        let box_inflate = flags
            .box_inflate
            .clone()
            .or_else(|| doc.box_inflate.clone())
            .unwrap_or_else(|| Scalar::from(strongcert::duality::DEFAULT_BOX_INFLATION));
        if box_inflate < Scalar::one() {
            return Err(CliError::invalid("options.box_inflate", "must be at least 1"));
        }
        let enum_cap = flags
            .enum_cap
            .or(doc.enum_cap)
            .map(u128::from)
            .unwrap_or(DEFAULT_ENUMERATION_CAP);
        let epsilon = flags
            .epsilon
            .clone()
            .or_else(|| doc.epsilon.clone())
            .unwrap_or_else(Scalar::one);
        if !epsilon.is_positive() {
            return Err(CliError::invalid("options.epsilon", "must be positive"));
        }
        Ok(Settings {
            box_inflate,
            enum_cap,
            epsilon,
        })
    }
}

fn check_len(path: &str, expected: usize, found: usize) -> Result<(), CliError> {
    if expected == found {
        Ok(())
    } else {
        Err(CliError::invalid(
            path,
            format!("expected {expected} entries, found {found}"),
        ))
    }
}

fn unused(path: &str, kind: &str, fields: &[(&str, bool)]) -> Result<(), CliError> {
    match fields.iter().find(|(_, present)| *present) {
        Some((name, _)) => Err(CliError::invalid(
            &format!("{path}.{name}"),
            format!("field is not used by type {kind}"),
        )),
        None => Ok(()),
    }
}

fn required<'a, T>(value: &'a Option<T>, path: &str) -> Result<&'a T, CliError> {
    value
        .as_ref()
        .ok_or_else(|| CliError::invalid(path, "missing field"))
}

fn core(path: &str, e: strongcert::Error) -> CliError {
    CliError::invalid(path, e.to_string())
}

impl InstanceDocument {
    pub fn build(&self) -> Result<(ConvexFunction, DiscreteSet), CliError> {
        if self.dimension == 0 {
            return Err(CliError::invalid("dimension", "must be at least 1"));
        }
        let f = self.objective.build(self.dimension, "objective")?;
        let s = self.set.build(self.dimension, "set")?;
        Ok((f, s))
    }
}

impl ObjectiveDoc {
    pub fn build(&self, n: usize, path: &str) -> Result<ConvexFunction, CliError> {
        match self.kind {
            ObjectiveType::Quadratic => {
                unused(
                    path,
                    "quadratic",
                    &[("pieces", self.pieces.is_some()), ("terms", self.terms.is_some())],
                )?;
                let rows = required(&self.matrix, &format!("{path}.matrix"))?;
                check_len(&format!("{path}.matrix"), n, rows.len())?;
                for (i, row) in rows.iter().enumerate() {
                    check_len(&format!("{path}.matrix[{i}]"), n, row.len())?;
                }
                let matrix = Matrix::from_rows(rows.clone()).map_err(|e| core(&format!("{path}.matrix"), e))?;
                let constant = self.constant.clone().unwrap_or_else(Scalar::zero);
                match (&self.linear, &self.center) {
                    (Some(_), Some(_)) => Err(CliError::invalid(
                        &format!("{path}.center"),
                        "give either linear or center, not both",
                    )),
                    (_, Some(c)) => {
                        check_len(&format!("{path}.center"), n, c.dim())?;
                        ConvexFunction::centered_quadratic(matrix, c, constant).map_err(|e| core(path, e))
                    }
                    (linear, None) => {
                        let linear = linear.clone().unwrap_or_else(|| Vector::zeros(n));
                        check_len(&format!("{path}.linear"), n, linear.dim())?;
                        ConvexFunction::quadratic(matrix, linear, constant).map_err(|e| core(path, e))
                    }
                }
            }
            ObjectiveType::MaxAffine => {
                unused(
                    path,
                    "max_affine",
                    &[
                        ("matrix", self.matrix.is_some()),
                        ("linear", self.linear.is_some()),
                        ("center", self.center.is_some()),
                        ("constant", self.constant.is_some()),
                        ("terms", self.terms.is_some()),
                    ],
                )?;
                let docs = required(&self.pieces, &format!("{path}.pieces"))?;
                let mut pieces = Vec::with_capacity(docs.len());
                for (i, p) in docs.iter().enumerate() {
                    check_len(&format!("{path}.pieces[{i}].gradient"), n, p.gradient.dim())?;
                    pieces.push(AffinePiece::new(p.gradient.clone(), p.offset.clone()));
                }
                ConvexFunction::max_affine(pieces).map_err(|e| core(&format!("{path}.pieces"), e))
            }
            ObjectiveType::Sum => {
                unused(
                    path,
                    "sum",
                    &[
                        ("matrix", self.matrix.is_some()),
                        ("linear", self.linear.is_some()),
                        ("center", self.center.is_some()),
                        ("constant", self.constant.is_some()),
                        ("pieces", self.pieces.is_some()),
                    ],
                )?;
                let docs = required(&self.terms, &format!("{path}.terms"))?;
                let terms = docs
                    .iter()
                    .enumerate()
                    .map(|(i, t)| t.build(n, &format!("{path}.terms[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                ConvexFunction::sum(terms).map_err(|e| core(&format!("{path}.terms"), e))
            }
        }
    }
}

pub fn build_constraints(docs: &[ConstraintDoc], n: usize, path: &str) -> Result<Polyhedron, CliError> {
    let mut hs = Vec::with_capacity(docs.len());
    for (i, c) in docs.iter().enumerate() {
        let p = format!("{path}[{i}]");
        check_len(&format!("{p}.normal"), n, c.normal.dim())?;
        hs.push(Halfspace::new(c.normal.clone(), c.offset.clone()).map_err(|e| core(&p, e))?);
    }
    Polyhedron::new(n, hs).map_err(|e| core(path, e))
}

fn integer_bounds(values: &[Scalar], n: usize, path: &str) -> Result<Vec<i64>, CliError> {
    check_len(path, n, values.len())?;
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if !v.is_integer() {
                return Err(CliError::invalid(&format!("{path}[{i}]"), "bound must be an integer"));
            }
            i64::try_from(v.numerator())
                .map_err(|_| CliError::invalid(&format!("{path}[{i}]"), "bound does not fit in 64 bits"))
        })
        .collect()
}

impl SetDoc {
    pub fn build(&self, n: usize, path: &str) -> Result<DiscreteSet, CliError> {
        match self.kind {
            SetType::MixedInteger => Err(CliError::invalid(
                &format!("{path}.type"),
                "mixed_integer sets are not supported; use points or integer_polytope",
            )),
            SetType::Points => {
                unused(
                    path,
                    "points",
                    &[
                        ("constraints", self.constraints.is_some()),
                        ("lower", self.lower.is_some()),
                        ("upper", self.upper.is_some()),
                        ("continuous", self.continuous.is_some()),
                        ("integer", self.integer.is_some()),
                    ],
                )?;
                let points = required(&self.points, &format!("{path}.points"))?;
                if points.is_empty() {
                    // no explicit list can be empty; an infeasible polytope stands in for ∅
                    return DiscreteSet::integer_polytope(Polyhedron::empty(n), vec![0; n], vec![0; n])
                        .map_err(|e| core(path, e));
                }
                for (i, p) in points.iter().enumerate() {
                    check_len(&format!("{path}.points[{i}]"), n, p.dim())?;
                }
                DiscreteSet::explicit(points.clone()).map_err(|e| core(&format!("{path}.points"), e))
            }
            SetType::IntegerPolytope => {
                unused(
                    path,
                    "integer_polytope",
                    &[
                        ("points", self.points.is_some()),
                        ("continuous", self.continuous.is_some()),
                        ("integer", self.integer.is_some()),
                    ],
                )?;
                let constraints = match &self.constraints {
                    Some(c) => build_constraints(c, n, &format!("{path}.constraints"))?,
                    None => Polyhedron::whole_space(n),
                };
                let lower = integer_bounds(required(&self.lower, &format!("{path}.lower"))?, n, &format!("{path}.lower"))?;
                let upper = integer_bounds(required(&self.upper, &format!("{path}.upper"))?, n, &format!("{path}.upper"))?;
                DiscreteSet::integer_polytope(constraints, lower, upper).map_err(|e| core(path, e))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateTag {
    Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuousTag {
    ContinuousOptimum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfeasibleTag {
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub tie_break: String,
    pub iterations: Vec<IterationRecord>,
}

/// Brute-force comparison attached by `--cross-check`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossCheck {
    pub brute_force_minimum: Scalar,
    pub brute_force_argmin: Vector,
    pub optimum_matches: bool,
    /// A point of S strictly inside Q, if the oracle finds one.
    pub interior_point: Option<Vector>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub outcome: CertificateTag,
    pub dimension: usize,
    pub points: Vec<Vector>,
    pub subgradients: Vec<Vector>,
    pub values: Vec<Scalar>,
    pub polyhedron: Vec<ConstraintDoc>,
    pub optimum: Scalar,
    pub argmin: Vector,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
}

impl CertificateDocument {
    pub fn new(
        cert: &StrongCertificate,
        optimum: Scalar,
        argmin: Vector,
        iterations: Vec<IterationRecord>,
    ) -> Self {
        CertificateDocument {
            outcome: CertificateTag::Certificate,
            dimension: cert.dim(),
            points: cert.points.clone(),
            subgradients: cert.subgradients.clone(),
            values: cert.values.clone(),
            polyhedron: cert
                .polyhedron
                .halfspaces()
                .iter()
                .map(|h| ConstraintDoc {
                    normal: h.normal().clone(),
                    offset: h.offset().clone(),
                })
                .collect(),
            optimum,
            argmin,
            provenance: Provenance {
                tool: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
                tie_break: TIE_BREAK.into(),
                iterations,
            },
            cross_check: None,
        }
    }

    /// The certificate exactly as stated; the verifier decides whether it holds.
    pub fn to_certificate(&self) -> Result<StrongCertificate, CliError> {
        let n = self.dimension;
        if n == 0 {
            return Err(CliError::invalid("dimension", "must be at least 1"));
        }
        for (field, list) in [("points", &self.points), ("subgradients", &self.subgradients)] {
            for (i, p) in list.iter().enumerate() {
                check_len(&format!("{field}[{i}]"), n, p.dim())?;
            }
        }
        check_len("argmin", n, self.argmin.dim())?;
        Ok(StrongCertificate {
            points: self.points.clone(),
            subgradients: self.subgradients.clone(),
            values: self.values.clone(),
            polyhedron: build_constraints(&self.polyhedron, n, "polyhedron")?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuousOptimumDocument {
    pub outcome: ContinuousTag,
    pub dimension: usize,
    pub point: Vector,
    pub value: Scalar,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfeasibleDocument {
    pub outcome: InfeasibleTag,
    pub dimension: usize,
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexSetType {
    Polyhedron,
    Hull,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexSetDoc {
    #[serde(rename = "type")]
    pub kind: ConvexSetType,
    pub constraints: Option<Vec<ConstraintDoc>>,
    pub points: Option<Vec<Vector>>,
}

/// Convex sets C₁..C_m and the set S they are tested against.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDocument {
    pub dimension: usize,
    pub sets: Vec<ConvexSetDoc>,
    pub set: SetDoc,
    #[serde(default)]
    pub options: OptionsDoc,
}

impl WitnessDocument {
    pub fn build(&self) -> Result<WitnessConfiguration, CliError> {
        let n = self.dimension;
        if n == 0 {
            return Err(CliError::invalid("dimension", "must be at least 1"));
        }
        let mut sets = Vec::with_capacity(self.sets.len());
        for (i, c) in self.sets.iter().enumerate() {
            let path = format!("sets[{i}]");
            sets.push(match c.kind {
                ConvexSetType::Polyhedron => {
                    unused(&path, "polyhedron", &[("points", c.points.is_some())])?;
                    let docs = required(&c.constraints, &format!("{path}.constraints"))?;
                    ConvexSet::Polyhedron(build_constraints(docs, n, &format!("{path}.constraints"))?)
                }
                ConvexSetType::Hull => {
                    unused(&path, "hull", &[("constraints", c.constraints.is_some())])?;
                    let points = required(&c.points, &format!("{path}.points"))?;
                    for (j, p) in points.iter().enumerate() {
                        check_len(&format!("{path}.points[{j}]"), n, p.dim())?;
                    }
                    ConvexSet::Hull(points.clone())
                }
            });
        }
        let set = self.set.build(n, "set")?;
        Ok(WitnessConfiguration { sets, set })
    }
}
