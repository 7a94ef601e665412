//! Argument handling and dispatch for the `acsl` binary.
//!
//! Results go to stdout as one JSON document. Errors go to stderr as JSON
//! with a non-zero exit code: 2 for bad input, 3 when the surgery
//! normalization vanishes, 1 when a check suite finds failures.

use std::io::Write;
use std::path::PathBuf;

use acsl_core::invariants::{s3_expectation, simplicial_satellite, CouplingLevel};
use acsl_core::io::{invariant_to_json, link_to_json, load_link_json, Document, Input};
use acsl_core::manifolds::{s1xs2_expectation, s1xsigma_expectation};
use acsl_core::suites::{self, Suite};
use acsl_core::surgery::{
    oracle_expectation, surgery_expectation, SurgeryPresentation, DEFAULT_MAX_TERMS,
};
use acsl_core::{Error, FramedLink};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DENOMINATOR: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "acsl", version, about = "Abelian Chern-Simons link invariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct JobArgs {
    /// JSON input file.
    #[arg(long)]
    pub input: PathBuf,
    /// Coupling level; overrides any `k` in the input.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    /// Term cap for the floating-point cross-check.
    #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
    pub max_terms: u128,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    Periodicity,
    Satellite,
    Kirby,
    Oracle,
    Manifolds,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Periodicity => Suite::Periodicity,
            SuiteArg::Satellite => Suite::Satellite,
            SuiteArg::Kirby => Suite::Kirby,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Manifolds => Suite::Manifolds,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expectation value of a coloured link in S³.
    S3(JobArgs),
    /// Expectation value in the manifold presented by the surgery components.
    Surgery(JobArgs),
    /// Closed form in S¹×S² from homology data.
    S1xs2(JobArgs),
    /// Closed form in S¹×Σ_g from homology data.
    S1xsigma(JobArgs),
    /// Simplicial satellite of a link (all charges ±1).
    Satellite(JobArgs),
    /// Randomized property checks.
    Check {
        /// Suite to run; all suites when omitted.
        #[arg(long, value_enum)]
        suite: Option<SuiteArg>,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        max_terms: u128,
    },
}

/// Stable machine-readable name of an error.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "syntax",
        Error::EdgeMultiplicity { .. } => "edge_multiplicity",
        Error::ComponentCycle(_) => "component_cycle",
        Error::OddInterCrossings { .. } => "odd_inter_crossings",
        Error::Index { .. } => "index",
        Error::LengthMismatch { .. } => "length_mismatch",
        Error::Asymmetric { .. } => "asymmetric",
        Error::ZeroLevel => "zero_level",
        Error::OrderMismatch(..) => "order_mismatch",
        Error::ZeroInverse => "zero_inverse",
        Error::SurgeryComponent(_) => "surgery_component",
        Error::NotSurgery(_) => "not_surgery",
        Error::NotIsolated(_) => "not_isolated",
        Error::NotUnitFramed(..) => "not_unit_framed",
        Error::SelfSlide(_) => "self_slide",
        Error::BadSign(_) => "bad_sign",
        Error::DenominatorZero => "denominator_zero",
        Error::TermLimit { .. } => "term_limit",
        Error::Overflow(_) => "overflow",
        Error::GenusMismatch { .. } => "genus_mismatch",
        Error::Schema { .. } => "schema",
    }
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({"error": error_kind(e), "message": e.to_string()});
    if let Error::Schema { path, .. } = e {
        v["path"] = json!(path);
    }
    v
}

struct Failure {
    code: i32,
    body: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure {
            code: if e == Error::DenominatorZero {
                EXIT_DENOMINATOR
            } else {
                EXIT_INPUT
            },
            body: error_json(&e),
        }
    }
}

fn level(flag: Option<i64>, doc: &Document) -> Result<CouplingLevel, Failure> {
    match (flag, doc.k) {
        (Some(k), _) => Ok(CouplingLevel::new(k)?),
        (None, Some(k)) => Ok(k),
        (None, None) => Err(Failure {
            code: EXIT_INPUT,
            body: json!({"error": "missing_level", "message": "no --k flag and no \"k\" in the input"}),
        }),
    }
}

fn link_of(doc: &Document) -> Result<&FramedLink, Failure> {
    doc.link().ok_or_else(|| Failure {
        code: EXIT_INPUT,
        body: json!({"error": "wrong_input", "message": "this command needs a link or diagram input"}),
    })
}

fn homology_of(doc: &Document) -> Result<&acsl_core::HomologyData, Failure> {
    match &doc.input {
        Input::Homology(h) => Ok(h),
        _ => Err(Failure {
            code: EXIT_INPUT,
            body: json!({"error": "wrong_input", "message": "this command needs {genus, N, q_self} input"}),
        }),
    }
}

fn with_warnings(mut v: Value, doc: &Document) -> Value {
    if !doc.warnings.is_empty() {
        v["warnings"] = json!(doc.warnings);
    }
    v
}

fn job(cmd: &Command) -> Result<(i32, Value), Failure> {
    let (name, args) = match cmd {
        Command::S3(a) => ("s3", a),
        Command::Surgery(a) => ("surgery", a),
        Command::S1xs2(a) => ("s1xs2", a),
        Command::S1xsigma(a) => ("s1xsigma", a),
        Command::Satellite(a) => ("satellite", a),
        Command::Check { .. } => return check(cmd),
    };
    let doc = load_link_json(&args.input)?;
    let out = match name {
        "s3" => {
            let k = level(args.k, &doc)?;
            invariant_to_json(&s3_expectation(link_of(&doc)?, k)?)
        }
        "surgery" => {
            let k = level(args.k, &doc)?;
            let p = SurgeryPresentation::new(link_of(&doc)?.clone(), k);
            let inv = surgery_expectation(&p)?;
            let mut v = invariant_to_json(&inv);
            v["oracle"] = match oracle_expectation(&p, args.max_terms) {
                Ok((re, im)) => json!([re, im]),
                Err(_) => Value::Null,
            };
            v
        }
        "s1xs2" => invariant_to_json(&s1xs2_expectation(
            homology_of(&doc)?,
            level(args.k, &doc)?,
        )?),
        "s1xsigma" => invariant_to_json(&s1xsigma_expectation(
            homology_of(&doc)?,
            level(args.k, &doc)?,
        )?),
        _ => {
            let k = args.k.map(CouplingLevel::new).transpose()?.or(doc.k);
            let link = link_of(&doc)?;
            let sat = simplicial_satellite(link)?;
            let mut v = json!({"link": link_to_json(&sat, k)});
            if let Some(k) = k {
                if link.count(acsl_core::Role::Surgery) == 0 {
                    v["before"] = invariant_to_json(&s3_expectation(link, k)?);
                    v["after"] = invariant_to_json(&s3_expectation(&sat, k)?);
                }
            }
            v
        }
    };
    Ok((EXIT_OK, with_warnings(out, &doc)))
}

fn check(cmd: &Command) -> Result<(i32, Value), Failure> {
    let Command::Check {
        suite,
        k,
        trials,
        seed,
        max_terms,
    } = *cmd
    else {
        unreachable!("check called with another command")
    };
    let cfg = suites::Config {
        k: CouplingLevel::new(k)?,
        trials,
        seed,
        max_terms,
    };
    let selected: Vec<Suite> = match suite {
        Some(s) => vec![s.into()],
        None => Suite::ALL.to_vec(),
    };
    let reports = selected
        .into_iter()
        .map(|s| suites::run(s, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(|r| r.passed);
    let code = if passed { EXIT_OK } else { EXIT_CHECK_FAILED };
    Ok((code, json!({"passed": passed, "reports": reports})))
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let body = json!({"error": "usage", "message": e.to_string()});
            let _ = writeln!(err, "{body}");
            return EXIT_INPUT;
        }
    };
    let (code, body, to_err) = match job(&cli.command) {
        Ok((code, v)) => (code, v, false),
        Err(f) => (f.code, f.body, true),
    };
    let text = serde_json::to_string(&body).expect("JSON values serialize");
    let _ = if to_err {
        writeln!(err, "{text}")
    } else {
        writeln!(out, "{text}")
    };
    code
}
