//! JSON documents for models, certificates, obstructions and reports.
//!
//! Polynomials are lists of terms `{coeff, factors}`. A coefficient is an
//! exact rational string (`"3"`, `"-2/5"`), and a factor is a triple
//! `[space, name, exponent]` with `space` one of `base`, `w0`, `w1`, `w2` or
//! `interval` (names `t` and `dt`). Terms and factors are written in
//! canonical order and accepted in any order.

use std::collections::BTreeMap;

use fibrewise_core::algebra::Namer;
use fibrewise_core::dga::BaseGenerator;
use fibrewise_core::model::{validate_comultiplication, validate_relative_model};
use fibrewise_core::normalize::{NormalizationResult, Obstruction, Outcome, Pipeline, Stage};
use fibrewise_core::{
    ChangeOfGenerators, Comultiplication, DGHomotopy, EquivalenceCertificate, FiberGenerator, FreeCdga, HypothesisReport, Monomial,
    Polynomial, RelativeModel, Space, Step, Structure, Var, Q,
};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub const CERTIFICATE_FORMAT: &str = "fibrewise-certificate/1";
pub const OBSTRUCTION_FORMAT: &str = "fibrewise-obstruction/1";
pub const REPORT_FORMAT: &str = "fibrewise-hypotheses/1";

/// Environment variable overriding the default truncation degree.
pub const TRUNCATION_ENV: &str = "FIBREWISE_TRUNCATION";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{location}: {kind}")]
pub struct DocumentError {
    pub location: String,
    pub kind: DocumentErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentErrorKind {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("unknown generator {space}:{name}")]
    UnknownGenerator { space: String, name: String },
    #[error("unknown space {0:?}")]
    UnknownSpace(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateGenerator(String),
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("K-S order violated: {0}")]
    KsViolation(String),
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("unknown stage {0:?}")]
    UnknownStage(String),
    #[error("unexpected document format {0:?}")]
    Format(String),
}

fn err<T>(location: impl Into<String>, kind: DocumentErrorKind) -> Result<T, DocumentError> {
    Err(DocumentError { location: location.into(), kind })
}

/// `[space, name, exponent]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor(pub String, pub String, pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: String,
    pub factors: Vec<Factor>,
}

pub type PolyDoc = Vec<Term>;
pub type PolyMap = BTreeMap<String, PolyDoc>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseDoc {
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub differential: PolyMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDoc {
    pub generators: Vec<GeneratorDoc>,
}

/// A relative model with a fibrewise multiplication.
///
/// Missing differential entries are zero; missing comultiplication entries
/// are standard, `w + w'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_degree: Option<u32>,
    pub base: BaseDoc,
    pub fiber: FiberDoc,
    #[serde(default)]
    pub differential: PolyMap,
    #[serde(default)]
    pub comultiplication: PolyMap,
}

/// Generator names of a model, used to print and parse polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Names {
    pub base: Vec<String>,
    pub fiber: Vec<String>,
    degrees_base: Vec<u32>,
    degrees_fiber: Vec<u32>,
}

impl Names {
    pub fn of(model: &RelativeModel) -> Self {
        Names {
            base: model.base.generators.iter().map(|g| g.name.clone()).collect(),
            fiber: model.fiber.iter().map(|g| g.name.clone()).collect(),
            degrees_base: model.base.generators.iter().map(|g| g.degree).collect(),
            degrees_fiber: model.fiber.iter().map(|g| g.degree).collect(),
        }
    }

    fn resolve(&self, space: &str, name: &str) -> Result<Var, DocumentErrorKind> {
        let unknown = || DocumentErrorKind::UnknownGenerator { space: space.into(), name: name.into() };
        let sp = Space::parse(space).ok_or_else(|| DocumentErrorKind::UnknownSpace(space.into()))?;
        match sp {
            Space::Base => {
                let i = self.base.iter().position(|n| n == name).ok_or_else(unknown)?;
                Ok(Var::base(i as u32, self.degrees_base[i]))
            }
            Space::Interval => match name {
                "t" => Ok(Var::T),
                "dt" => Ok(Var::DT),
                _ => Err(unknown()),
            },
            copy => {
                let i = self.fiber.iter().position(|n| n == name).ok_or_else(unknown)?;
                Ok(Var::fiber(i as u32, self.degrees_fiber[i]).in_copy(copy))
            }
        }
    }

    fn name(&self, v: Var) -> &str {
        match v.space {
            Space::Base => &self.base[v.index as usize],
            Space::Interval => {
                if v == Var::T {
                    "t"
                } else {
                    "dt"
                }
            }
            _ => &self.fiber[v.index as usize],
        }
    }

    pub fn fiber_index(&self, name: &str) -> Option<usize> {
        self.fiber.iter().position(|n| n == name)
    }
}

impl Namer for Names {
    fn var_name(&self, v: Var) -> String {
        let primes = match v.space {
            Space::W1 => "'",
            Space::W2 => "''",
            _ => "",
        };
        format!("{}{}", self.name(v), primes)
    }
}

pub fn parse_rational(s: &str) -> Option<Q> {
    let parse_int = |t: &str| {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        t.parse::<BigInt>().ok()
    };
    match s.split_once('/') {
        None => parse_int(s).map(Q::from_integer),
        Some((n, d)) => {
            let (n, d) = (parse_int(n)?, parse_int(d)?);
            if d.is_zero() || d.is_negative() {
                return None;
            }
            Some(Q::new(n, d))
        }
    }
}

pub fn format_rational(q: &Q) -> String {
    q.to_string()
}

pub fn encode_poly(p: &Polynomial, names: &Names) -> PolyDoc {
    p.terms()
        .map(|(m, c)| Term {
            coeff: format_rational(c),
            factors: m.factors().iter().map(|&(v, e)| Factor(v.space.as_str().into(), names.name(v).into(), e)).collect(),
        })
        .collect()
}

pub fn decode_poly(doc: &PolyDoc, names: &Names, location: &str) -> Result<Polynomial, DocumentError> {
    let mut p = Polynomial::zero();
    for (i, term) in doc.iter().enumerate() {
        let loc = format!("{location}[{i}]");
        let Some(c) = parse_rational(&term.coeff) else {
            return err(format!("{loc}.coeff"), DocumentErrorKind::MalformedRational(term.coeff.clone()));
        };
        let mut raw = Vec::with_capacity(term.factors.len());
        for (j, Factor(space, name, e)) in term.factors.iter().enumerate() {
            if *e == 0 {
                return err(format!("{loc}.factors[{j}]"), DocumentErrorKind::ZeroExponent);
            }
            match names.resolve(space, name) {
                Ok(v) => raw.push((v, *e)),
                Err(kind) => return err(format!("{loc}.factors[{j}]"), kind),
            }
        }
        let (m, sign) = Monomial::normalize(raw);
        if sign != 0 {
            p.add_term(m, c * Q::from_integer(sign.into()));
        }
    }
    Ok(p)
}

fn encode_map(images: &[Polynomial], names: &Names) -> PolyMap {
    images.iter().enumerate().map(|(k, p)| (names.fiber[k].clone(), encode_poly(p, names))).collect()
}

/// Reads a name-indexed map of fibre images; `default(k)` fills gaps.
fn decode_map(
    map: &PolyMap,
    names: &Names,
    location: &str,
    default: impl Fn(usize) -> Polynomial,
) -> Result<Vec<Polynomial>, DocumentError> {
    for key in map.keys() {
        if names.fiber_index(key).is_none() {
            return err(format!("{location}.{key}"), DocumentErrorKind::UnknownGenerator { space: "w0".into(), name: key.clone() });
        }
    }
    (0..names.fiber.len())
        .map(|k| match map.get(&names.fiber[k]) {
            Some(doc) => decode_poly(doc, names, &format!("{location}.{}", names.fiber[k])),
            None => Ok(default(k)),
        })
        .collect()
}

/// Default truncation: `2 * (max generator degree) + 2`, unless the
/// environment overrides it.
pub fn default_truncation(doc: &ModelDocument) -> u32 {
    if let Some(t) = std::env::var(TRUNCATION_ENV).ok().and_then(|s| s.trim().parse().ok()) {
        return t;
    }
    let max = doc.base.generators.iter().chain(&doc.fiber.generators).map(|g| g.degree).max().unwrap_or(0);
    2 * max + 2
}

fn check_unique(doc: &ModelDocument) -> Result<(), DocumentError> {
    let mut seen = std::collections::BTreeSet::new();
    let gens =
        doc.base.generators.iter().map(|g| ("base.generators", g)).chain(doc.fiber.generators.iter().map(|g| ("fiber.generators", g)));
    for (loc, g) in gens {
        if !seen.insert(g.name.as_str()) || g.name.is_empty() {
            return err(loc, DocumentErrorKind::DuplicateGenerator(g.name.clone()));
        }
    }
    Ok(())
}

/// Builds and validates the model described by `doc`.
///
/// `truncation` overrides both the document and the default.
pub fn parse_model(doc: &ModelDocument, truncation: Option<u32>) -> Result<(RelativeModel, Comultiplication, Names), DocumentError> {
    check_unique(doc)?;
    let truncation = truncation.or(doc.truncation_degree).unwrap_or_else(|| default_truncation(doc));
    let skeleton = RelativeModel {
        base: FreeCdga::new(
            doc.base.generators.iter().map(|g| BaseGenerator { name: g.name.clone(), degree: g.degree }).collect(),
            vec![Polynomial::zero(); doc.base.generators.len()],
            truncation,
        ),
        fiber: doc.fiber.generators.iter().map(|g| FiberGenerator { name: g.name.clone(), degree: g.degree }).collect(),
        differential: vec![Polynomial::zero(); doc.fiber.generators.len()],
    };
    let names = Names::of(&skeleton);
    let mut model = skeleton;
    for key in doc.base.differential.keys() {
        if !names.base.contains(key) {
            return err(
                format!("base.differential.{key}"),
                DocumentErrorKind::UnknownGenerator { space: "base".into(), name: key.clone() },
            );
        }
    }
    for (i, name) in names.base.iter().enumerate() {
        if let Some(p) = doc.base.differential.get(name) {
            model.base.differential[i] = decode_poly(p, &names, &format!("base.differential.{name}"))?;
        }
    }
    model.differential = decode_map(&doc.differential, &names, "differential", |_| Polynomial::zero())?;
    let standard = Comultiplication::standard(&model);
    let comult =
        Comultiplication { images: decode_map(&doc.comultiplication, &names, "comultiplication", |k| standard.images[k].clone())? };
    validate(&model, &comult, &names)?;
    Ok((model, comult, names))
}

fn validate(model: &RelativeModel, c: &Comultiplication, names: &Names) -> Result<(), DocumentError> {
    use fibrewise_core::model::{ComultViolation as CV, ModelViolation as MV};
    if let Err(v) = validate_relative_model(model) {
        let (loc, kind) = match &v {
            MV::WrongDegree { generator, .. } => {
                (format!("differential.{}", names.fiber[*generator]), DocumentErrorKind::DegreeMismatch(format!("{v:?}")))
            }
            MV::KsOrder { generator, .. } => {
                (format!("differential.{}", names.fiber[*generator]), DocumentErrorKind::KsViolation(format!("{v:?}")))
            }
            _ => ("model".into(), DocumentErrorKind::Invalid(format!("{v:?}"))),
        };
        return err(loc, kind);
    }
    if let Err(v) = validate_comultiplication(model, c) {
        let loc = match &v {
            CV::WrongDegree { generator, .. }
            | CV::ForeignVariable { generator, .. }
            | CV::CounitShape { generator, .. }
            | CV::NotDg { generator, .. } => format!("comultiplication.{}", names.fiber[*generator]),
            _ => "comultiplication".into(),
        };
        let kind = match v {
            CV::WrongDegree { .. } => DocumentErrorKind::DegreeMismatch(format!("{v:?}")),
            _ => DocumentErrorKind::Invalid(format!("{v:?}")),
        };
        return err(loc, kind);
    }
    Ok(())
}

pub fn model_document(model: &RelativeModel, c: &Comultiplication) -> ModelDocument {
    let names = Names::of(model);
    ModelDocument {
        truncation_degree: Some(model.truncation()),
        base: BaseDoc {
            generators: model.base.generators.iter().map(|g| GeneratorDoc { name: g.name.clone(), degree: g.degree }).collect(),
            differential: model
                .base
                .differential
                .iter()
                .enumerate()
                .map(|(i, p)| (names.base[i].clone(), encode_poly(p, &names)))
                .collect(),
        },
        fiber: FiberDoc { generators: model.fiber.iter().map(|g| GeneratorDoc { name: g.name.clone(), degree: g.degree }).collect() },
        differential: encode_map(&model.differential, &names),
        comultiplication: encode_map(&c.images, &names),
    }
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, DocumentError> {
    serde_json::from_str(text)
        .map_err(|e| DocumentError { location: format!("line {}", e.line()), kind: DocumentErrorKind::Json(e.to_string()) })
}

/// Pretty JSON with a trailing newline; key order is fixed by the types.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDoc {
    pub differential: PolyMap,
    pub comultiplication: PolyMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepDoc {
    ChangeOfGenerators { map: PolyMap, result: StructureDoc },
    Homotopy { images: PolyMap, start: PolyMap, end: PolyMap },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub format: String,
    pub pipeline: String,
    pub truncation_degree: u32,
    pub source: StructureDoc,
    pub steps: Vec<StepDoc>,
    pub target: StructureDoc,
}

fn encode_structure(s: &Structure, names: &Names) -> StructureDoc {
    StructureDoc { differential: encode_map(&s.differential, names), comultiplication: encode_map(&s.comultiplication.images, names) }
}

fn decode_structure(d: &StructureDoc, names: &Names, location: &str) -> Result<Structure, DocumentError> {
    let zero = |_| Polynomial::zero();
    Ok(Structure {
        differential: decode_map(&d.differential, names, &format!("{location}.differential"), zero)?,
        comultiplication: Comultiplication {
            images: decode_map(&d.comultiplication, names, &format!("{location}.comultiplication"), zero)?,
        },
    })
}

pub fn pipeline_name(p: Pipeline) -> &'static str {
    match p {
        Pipeline::Hopf => "hopf",
        Pipeline::Ls => "ls",
    }
}

pub fn certificate_document(cert: &EquivalenceCertificate, model: &RelativeModel, pipeline: Pipeline) -> CertificateDocument {
    let names = Names::of(model);
    let steps = cert
        .steps
        .iter()
        .map(|s| match s {
            Step::ChangeOfGenerators { map, result } => {
                StepDoc::ChangeOfGenerators { map: encode_map(&map.images, &names), result: encode_structure(result, &names) }
            }
            Step::Homotopy(h) => StepDoc::Homotopy {
                images: encode_map(&h.images, &names),
                start: encode_map(&h.start.images, &names),
                end: encode_map(&h.end.images, &names),
            },
        })
        .collect();
    CertificateDocument {
        format: CERTIFICATE_FORMAT.into(),
        pipeline: pipeline_name(pipeline).into(),
        truncation_degree: model.truncation(),
        source: encode_structure(&cert.source, &names),
        steps,
        target: encode_structure(&cert.target, &names),
    }
}

/// Decodes a certificate against the generators of `model`. Missing map
/// entries decode as the identity, other missing entries as zero.
pub fn parse_certificate(doc: &CertificateDocument, model: &RelativeModel) -> Result<EquivalenceCertificate, DocumentError> {
    if doc.format != CERTIFICATE_FORMAT {
        return err("format", DocumentErrorKind::Format(doc.format.clone()));
    }
    let names = Names::of(model);
    let zero = |_| Polynomial::zero();
    let mut steps = Vec::with_capacity(doc.steps.len());
    for (i, s) in doc.steps.iter().enumerate() {
        let loc = format!("steps[{i}]");
        steps.push(match s {
            StepDoc::ChangeOfGenerators { map, result } => Step::ChangeOfGenerators {
                map: ChangeOfGenerators {
                    images: decode_map(map, &names, &format!("{loc}.map"), |k| Polynomial::var(model.fiber_var(k)))?,
                },
                result: decode_structure(result, &names, &format!("{loc}.result"))?,
            },
            StepDoc::Homotopy { images, start, end } => Step::Homotopy(DGHomotopy {
                images: decode_map(images, &names, &format!("{loc}.images"), zero)?,
                start: Comultiplication { images: decode_map(start, &names, &format!("{loc}.start"), zero)? },
                end: Comultiplication { images: decode_map(end, &names, &format!("{loc}.end"), zero)? },
            }),
        });
    }
    Ok(EquivalenceCertificate {
        source: decode_structure(&doc.source, &names, "source")?,
        steps,
        target: decode_structure(&doc.target, &names, "target")?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyClassesDoc {
    pub degree: u32,
    pub classes: Vec<PolyDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisDoc {
    pub satisfied: bool,
    pub truncation_degree: u32,
    pub odd_cohomology: Vec<CohomologyClassesDoc>,
    pub even_fiber_generators: Vec<String>,
    pub non_associative: Vec<String>,
}

pub fn hypothesis_document(report: &HypothesisReport, names: &Names) -> HypothesisDoc {
    HypothesisDoc {
        satisfied: report.satisfied(),
        truncation_degree: report.truncation,
        odd_cohomology: report
            .odd_cohomology
            .iter()
            .map(|(n, cls)| CohomologyClassesDoc { degree: *n, classes: cls.iter().map(|p| encode_poly(p, names)).collect() })
            .collect(),
        even_fiber_generators: report.even_fiber_generators.iter().map(|&k| names.fiber[k].clone()).collect(),
        non_associative: report.non_associative.iter().map(|&k| names.fiber[k].clone()).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionDocument {
    pub format: String,
    pub pipeline: String,
    pub stage: String,
    pub generator: String,
    pub word_length: u32,
    pub class_witness: PolyDoc,
    /// Human-readable rendering of `class_witness`.
    pub class_witness_text: String,
    pub hypotheses: HypothesisDoc,
}

pub fn obstruction_document(o: &Obstruction, result: &NormalizationResult, names: &Names) -> ObstructionDocument {
    ObstructionDocument {
        format: OBSTRUCTION_FORMAT.into(),
        pipeline: pipeline_name(result.pipeline).into(),
        stage: o.stage.as_str().into(),
        generator: names.fiber[o.generator].clone(),
        word_length: o.word_length,
        class_witness: encode_poly(&o.class_witness, names),
        class_witness_text: o.class_witness.display(names).to_string(),
        hypotheses: hypothesis_document(&result.report, names),
    }
}

pub fn parse_obstruction(doc: &ObstructionDocument, model: &RelativeModel) -> Result<Obstruction, DocumentError> {
    if doc.format != OBSTRUCTION_FORMAT {
        return err("format", DocumentErrorKind::Format(doc.format.clone()));
    }
    let names = Names::of(model);
    let stage = Stage::parse(&doc.stage)
        .ok_or_else(|| DocumentError { location: "stage".into(), kind: DocumentErrorKind::UnknownStage(doc.stage.clone()) })?;
    let generator = names.fiber_index(&doc.generator).ok_or_else(|| DocumentError {
        location: "generator".into(),
        kind: DocumentErrorKind::UnknownGenerator { space: "w0".into(), name: doc.generator.clone() },
    })?;
    Ok(Obstruction {
        stage,
        generator,
        word_length: doc.word_length,
        class_witness: decode_poly(&doc.class_witness, &names, "class_witness")?,
    })
}

/// Written by `hopf`/`ls` when the hypotheses fail and no override is given.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub format: String,
    pub pipeline: String,
    pub hypotheses: HypothesisDoc,
}

pub fn report_document(result: &NormalizationResult, names: &Names) -> ReportDocument {
    debug_assert!(matches!(result.outcome, Outcome::HypothesisViolation));
    ReportDocument {
        format: REPORT_FORMAT.into(),
        pipeline: pipeline_name(result.pipeline).into(),
        hypotheses: hypothesis_document(&result.report, names),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE_A: &str = include_str!("../fixtures/A.json");

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3"), Some(Q::from_integer(3.into())));
        assert_eq!(parse_rational("-2/4"), Some(Q::new((-1).into(), 2.into())));
        for bad in ["1/0", "0.5", "", "1/-2", "+1", "1e3", "a/b", "1/"] {
            assert_eq!(parse_rational(bad), None, "{bad}");
        }
        assert_eq!(format_rational(&Q::new(6.into(), (-4).into())), "-3/2");
    }

    #[test]
    fn fixture_a_parses() {
        let doc: ModelDocument = from_json(FIXTURE_A).unwrap();
        let (m, c, names) = parse_model(&doc, None).unwrap();
        assert_eq!(names.base, vec!["b3"]);
        assert_eq!(names.fiber, vec!["w3", "w5"]);
        assert_eq!(m.differential[1], Polynomial::product([(Var::base(0, 3), 1), (Var::fiber(0, 3), 1)]));
        assert!(c.is_standard(&m));
    }

    #[test]
    fn canonical_write_is_a_fixed_point() {
        let doc: ModelDocument = from_json(FIXTURE_A).unwrap();
        let (m, c, _) = parse_model(&doc, None).unwrap();
        let text = to_json(&model_document(&m, &c));
        let (m2, c2, _) = parse_model(&from_json(&text).unwrap(), None).unwrap();
        assert_eq!((&m2, &c2), (&m, &c));
        assert_eq!(to_json(&model_document(&m2, &c2)), text);
    }

    #[test]
    fn unordered_factors_pick_up_signs() {
        let doc: ModelDocument = from_json(FIXTURE_A).unwrap();
        let (m, _, names) = parse_model(&doc, None).unwrap();
        let term = |fs: Vec<Factor>| vec![Term { coeff: "1".into(), factors: fs }];
        let w = |s: &str, n: &str| Factor(s.into(), n.into(), 1);
        let p = decode_poly(&term(vec![w("w0", "w5"), w("base", "b3"), w("w0", "w3")]), &names, "p").unwrap();
        let q = decode_poly(&term(vec![w("base", "b3"), w("w0", "w3"), w("w0", "w5")]), &names, "q").unwrap();
        assert_eq!(p, q);
        let p = decode_poly(&term(vec![w("w0", "w5"), w("w0", "w3")]), &names, "p").unwrap();
        assert_eq!(p, -Polynomial::product([(m.fiber_var(0), 1), (m.fiber_var(1), 1)]));
    }

    fn parse_error(text: &str) -> DocumentError {
        parse_model(&from_json(text).unwrap(), None).unwrap_err()
    }

    #[test]
    fn parse_errors_carry_locations() {
        let e = parse_error(&FIXTURE_A.replace("\"coeff\": \"1\"", "\"coeff\": \"1/0\""));
        assert_eq!(e.kind, DocumentErrorKind::MalformedRational("1/0".into()));
        assert!(e.location.starts_with("differential.w5[0]"), "{}", e.location);

        let e = parse_error(&FIXTURE_A.replace("[\"base\", \"b3\", 1]", "[\"base\", \"b7\", 1]"));
        assert!(matches!(e.kind, DocumentErrorKind::UnknownGenerator { .. }));

        let e = parse_error(&FIXTURE_A.replace("\"degree\": 5", "\"degree\": 6"));
        assert!(matches!(e.kind, DocumentErrorKind::DegreeMismatch(_)), "{e}");

        let e = parse_error(&FIXTURE_A.replace("[\"w0\", \"w3\", 1]", "[\"w0\", \"w5\", 1]"));
        assert!(matches!(e.kind, DocumentErrorKind::KsViolation(_) | DocumentErrorKind::DegreeMismatch(_)), "{e}");
    }

    #[test]
    fn empty_fiber_is_a_valid_model() {
        let text = r#"{"base": {"generators": [{"name": "x", "degree": 2}]}, "fiber": {"generators": []}}"#;
        let (m, c, _) = parse_model(&from_json(text).unwrap(), Some(6)).unwrap();
        assert!(m.fiber.is_empty() && c.images.is_empty());
    }
}
