//! Command-line surface.
//!
//! Exit codes: 0 success or normalized, 2 hypotheses violated, 3 obstruction
//! found, 4 invalid input (including a rejected certificate), 1 internal
//! error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fibrewise_core::certify::{emit_triviality_report, verify_equivalence};
use fibrewise_core::model::{associativity_defect, check_homotopy_associative, check_hypotheses, AssociativityVerdict};
use fibrewise_core::normalize::{hopf_normalize, ls_normalize, NormalizationResult, NormalizeOptions, Outcome};
use fibrewise_core::{Comultiplication, Error, RelativeModel};
use serde::Serialize;

use crate::document::{
    certificate_document, encode_poly, from_json, hypothesis_document, model_document, obstruction_document, parse_certificate,
    parse_model, report_document, to_json, CertificateDocument, HypothesisDoc, ModelDocument, Names, PolyDoc,
};
use crate::perturb::{perturb, PerturbError, PerturbMode, PerturbationSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_OBSTRUCTION: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "fibrewise", version, about = "Normalize relative Sullivan models of fibrewise H-spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a model and report the hypotheses and associativity defects.
    Check {
        model: PathBuf,
        /// Truncation degree to check up to.
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Cohomology of the base in one degree, with class representatives.
    Cohomology {
        model: PathBuf,
        #[arg(short = 'n')]
        degree: u32,
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Kill the fibre differential.
    Hopf(NormalizeArgs),
    /// Kill the fibre differential and bring C to the standard coproduct.
    Ls(NormalizeArgs),
    /// Replay a certificate against a model.
    Verify { model: PathBuf, certificate: PathBuf },
    /// Seeded perturbation of a trivial model.
    Perturb {
        model: PathBuf,
        #[arg(long)]
        seed: u64,
        /// change-of-generators, exact-homotopy or both.
        #[arg(long, default_value = "both")]
        mode: PerturbMode,
        #[arg(long, default_value_t = 3)]
        max_word_length: u32,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

#[derive(Debug, Args)]
struct NormalizeArgs {
    model: PathBuf,
    /// Certificate, obstruction or hypothesis report, depending on the outcome.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// Where to write the normalized model.
    #[arg(long)]
    model_out: Option<PathBuf>,
    /// Run and conclude even when the hypotheses fail.
    #[arg(long)]
    override_hypotheses: bool,
    #[arg(long)]
    max_degree: Option<u32>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INVALID, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INTERNAL, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Internal(_) | Error::Revalidation(_) => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::internal(format!("write failed: {e}"))
    }
}

type ExitResult = Result<i32, Failure>;

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INVALID;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> ExitResult {
    match cmd {
        Command::Check { model, max_degree } => check(&model, max_degree, out),
        Command::Cohomology { model, degree, max_degree } => cohomology(&model, degree, max_degree, out),
        Command::Hopf(a) => normalize(a, false, out),
        Command::Ls(a) => normalize(a, true, out),
        Command::Verify { model, certificate } => verify(&model, &certificate, out),
        Command::Perturb { model, seed, mode, max_word_length, output } => {
            let (m, c, _) = load_model(&model, None)?;
            let spec = PerturbationSpec { seed, max_word_length, mode };
            let (m2, c2) = perturb(&m, &c, &spec).map_err(|e| match e {
                PerturbError::Engine(e) => Failure::from(e),
                other => Failure::invalid(other.to_string()),
            })?;
            write_file(&output, &to_json(&model_document(&m2, &c2)))?;
            writeln!(out, "perturbed model written to {}", output.display())?;
            Ok(EXIT_OK)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::internal(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path, truncation: Option<u32>) -> Result<(RelativeModel, Comultiplication, Names), Failure> {
    let doc: ModelDocument = from_json(&read(path)?).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    parse_model(&doc, truncation).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct DefectDoc {
    generator: String,
    defect: PolyDoc,
    exact: bool,
}

#[derive(Serialize)]
struct CheckDoc {
    valid: bool,
    truncation_degree: u32,
    hypotheses: HypothesisDoc,
    associativity: Vec<DefectDoc>,
}

fn check(path: &Path, max_degree: Option<u32>, out: &mut dyn Write) -> ExitResult {
    let (m, c, names) = load_model(path, max_degree)?;
    let report = check_hypotheses(&m)?;
    let verdicts = check_homotopy_associative(&m, &c)?;
    let associativity = verdicts
        .iter()
        .enumerate()
        .map(|(k, v)| DefectDoc {
            generator: names.fiber[k].clone(),
            defect: encode_poly(&associativity_defect(&m, &c, k), &names),
            exact: matches!(v, AssociativityVerdict::Exact(_)),
        })
        .collect();
    let doc = CheckDoc { valid: true, truncation_degree: m.truncation(), hypotheses: hypothesis_document(&report, &names), associativity };
    write!(out, "{}", to_json(&doc))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CohomologyDoc {
    degree: u32,
    truncation_degree: u32,
    dimension: usize,
    classes: Vec<PolyDoc>,
    boundary_dimension: usize,
}

fn cohomology(path: &Path, degree: u32, max_degree: Option<u32>, out: &mut dyn Write) -> ExitResult {
    let (m, _, names) = load_model(path, max_degree)?;
    let slice = m.base.cohomology_in_degree(degree)?;
    let doc = CohomologyDoc {
        degree,
        truncation_degree: m.truncation(),
        dimension: slice.dim_cohomology(),
        classes: slice.complement.iter().map(|p| encode_poly(p, &names)).collect(),
        boundary_dimension: slice.boundaries.len(),
    };
    write!(out, "{}", to_json(&doc))?;
    Ok(EXIT_OK)
}

fn describe_hypotheses(result: &NormalizationResult, names: &Names, out: &mut dyn Write) -> std::io::Result<()> {
    let r = &result.report;
    for (n, classes) in &r.odd_cohomology {
        let shown: Vec<String> = classes.iter().map(|p| p.display(names).to_string()).collect();
        writeln!(out, "hypothesis violated: H^{n}(B) != 0 (classes: {})", shown.join(", "))?;
    }
    for &k in &r.even_fiber_generators {
        writeln!(out, "hypothesis violated: fibre generator {} has even degree", names.fiber[k])?;
    }
    for &k in &r.non_associative {
        writeln!(out, "hypothesis violated: associativity defect of {} is not exact", names.fiber[k])?;
    }
    Ok(())
}

fn normalize(a: NormalizeArgs, ls: bool, out: &mut dyn Write) -> ExitResult {
    let (m, c, names) = load_model(&a.model, a.max_degree)?;
    let opts = NormalizeOptions { override_hypotheses: a.override_hypotheses };
    let result = if ls { ls_normalize(&m, &c, opts)? } else { hopf_normalize(&m, &c, opts)? };
    write!(out, "{}", emit_triviality_report(&result))?;
    describe_hypotheses(&result, &names, out)?;
    let code = match &result.outcome {
        Outcome::Normalized(cert) => {
            writeln!(out, "certificate: {} step(s)", cert.steps.len())?;
            if let Some(p) = &a.output {
                write_file(p, &to_json(&certificate_document(cert, &m, result.pipeline)))?;
            }
            if let Some(p) = &a.model_out {
                let m2 = m.with_differential(cert.target.differential.clone());
                write_file(p, &to_json(&model_document(&m2, &cert.target.comultiplication)))?;
            }
            EXIT_OK
        }
        Outcome::Obstructed(o) => {
            writeln!(
                out,
                "obstruction: stage {}, generator {}, word length {}, class {}",
                o.stage.as_str(),
                names.fiber[o.generator],
                o.word_length,
                o.class_witness.display(&names)
            )?;
            if let Some(p) = &a.output {
                write_file(p, &to_json(&obstruction_document(o, &result, &names)))?;
            }
            EXIT_OBSTRUCTION
        }
        Outcome::HypothesisViolation => {
            if let Some(p) = &a.output {
                write_file(p, &to_json(&report_document(&result, &names)))?;
            }
            EXIT_HYPOTHESIS
        }
    };
    Ok(code)
}

fn verify(model: &Path, certificate: &Path, out: &mut dyn Write) -> ExitResult {
    let (m, c, _) = load_model(model, None)?;
    let doc: CertificateDocument =
        from_json(&read(certificate)?).map_err(|e| Failure::invalid(format!("{}: {e}", certificate.display())))?;
    if doc.truncation_degree != m.truncation() {
        let (m2, c2, _) = load_model(model, Some(doc.truncation_degree))?;
        return verify_loaded(&m2, &c2, &doc, out);
    }
    verify_loaded(&m, &c, &doc, out)
}

fn verify_loaded(m: &RelativeModel, c: &Comultiplication, doc: &CertificateDocument, out: &mut dyn Write) -> ExitResult {
    let cert = parse_certificate(doc, m).map_err(|e| Failure::invalid(format!("certificate: {e}")))?;
    match verify_equivalence(m, c, &cert) {
        Ok(()) => {
            writeln!(out, "certificate accepted: {} step(s), truncation degree {}", cert.steps.len(), m.truncation())?;
            Ok(EXIT_OK)
        }
        Err(r) => {
            let at = r.step.map_or_else(|| "certificate".to_string(), |i| format!("step {i}"));
            Err(Failure::invalid(format!("certificate rejected at {at}: {}", r.reason)))
        }
    }
}
