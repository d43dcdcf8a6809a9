//! `sharpcheck` command-line front end.
//!
//! Exit codes: 0 when every reported verdict holds, 1 when a check fails
//! (a witness is printed), 2 on any error.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::domain::{IdealArithmetic, QuadraticDomain, ValuationDomain};
use crate::engine::{identity_suite, pseudo_dedekind_sweep, sharp_pair_check, sharp_sweep, unit_closure_restricted_sweep};
use crate::error::{Error, Result};
use crate::literal::{eval, parse_domain, parse_expr, parse_real_list, DomainSpec, IdealLiteral};
use crate::oracle::{equivalence_harness, factorization_check, FactorizationOracle};
use crate::report::{CheckReport, SCHEMA_VERSION};

pub const DEFAULT_QUAD_BUDGET: u64 = 30;
pub const DEFAULT_VAL_BUDGET: u64 = 6;
pub const DEFAULT_SAMPLES: usize = 500;

#[derive(Debug, Parser)]
#[command(name = "sharpcheck", version, about = "Check the sharp factorization condition in quadratic orders and valuation domains")]
pub struct CommandLine {
    #[command(subcommand)]
    pub command: Command,

    /// Enumeration bound: ideal norm for quadratic orders, largest cut value for valuation domains
    #[arg(long, global = true)]
    pub budget: Option<u64>,

    /// Emit one JSON document instead of text
    #[arg(long, global = true)]
    pub json: bool,

    /// Non-group cut points added to valuation universes, e.g. `sqrt3,sqrt3/2,4-sqrt3`
    #[arg(long, global = true, value_name = "LIST")]
    pub probe_points: Option<String>,

    /// Restrict the sweep to ideals with v-closure equal to the whole domain
    #[arg(long, global = true)]
    pub restricted: bool,

    /// Run the restricted sweep even when the domain is not pseudo-Dedekind (diagnostic only)
    #[arg(long, global = true, requires = "restricted")]
    pub force: bool,

    /// Seed of the sampled identity suite
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Number of sampled pairs in the identity suite
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an ideal expression, e.g. `colon(ideal(2), ideal(2,1+w))`
    Eval { domain: String, expr: String },
    /// Test I = [I:(I:H)](I:H) for one pair
    CheckPair { domain: String, i: String, h: String },
    /// Search for I = A'B' with A' ⊇ A and B' ⊇ B by brute force
    CheckDef { domain: String, i: String, a: String, b: String },
    /// Criterion sweep, pseudo-Dedekind sweep, identity suite and criterion/oracle comparison
    Sweep { domain: String },
    /// Structural diagnosis and the theory's prediction
    Diagnose { domain: String },
}

/// Parse `argv` (including the program name). Help and version requests
/// come back as `Error::Usage` carrying the rendered text.
pub fn parse(args: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> std::result::Result<CommandLine, clap::Error> {
    CommandLine::try_parse_from(args)
}

/// What a command produced: text for stdout and the exit code.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(CheckReport::holds) {
        0
    } else {
        1
    }
}

#[derive(Serialize)]
struct ReportBundle<'a> {
    schema: u32,
    reports: &'a [CheckReport],
}

fn render(cmd: &CommandLine, reports: &[CheckReport]) -> String {
    if cmd.json {
        match reports {
            [single] => single.to_json(),
            many => serde_json::to_string_pretty(&ReportBundle {
                schema: SCHEMA_VERSION,
                reports: many,
            })
            .expect("reports serialize"),
        }
    } else {
        reports
            .iter()
            .map(CheckReport::render_text)
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn run_on<D: IdealLiteral + FactorizationOracle>(d: &D, cmd: &CommandLine, default_budget: u64) -> Result<Outcome> {
    let budget = cmd.budget.unwrap_or(default_budget);
    let reports = match &cmd.command {
        Command::Eval { expr, .. } => {
            let e = parse_expr(d, expr)?;
            let value = eval(d, &e);
            let stdout = if cmd.json {
                serde_json::json!({
                    "schema": SCHEMA_VERSION,
                    "domain": d.descriptor(),
                    "expression": expr,
                    "result": value.to_string(),
                })
                .to_string()
            } else {
                value.to_string()
            };
            return Ok(Outcome { code: 0, stdout });
        }
        Command::CheckPair { i, h, .. } => {
            vec![sharp_pair_check(d, &d.parse_ideal(i)?, &d.parse_ideal(h)?)]
        }
        Command::CheckDef { i, a, b, .. } => {
            let (i, a, b) = (d.parse_ideal(i)?, d.parse_ideal(a)?, d.parse_ideal(b)?);
            vec![factorization_check(d, &i, &a, &b)?]
        }
        Command::Sweep { .. } => {
            let main = if cmd.restricted {
                unit_closure_restricted_sweep(d, budget, cmd.force)?
            } else {
                sharp_sweep(d, budget)?
            };
            vec![
                main,
                pseudo_dedekind_sweep(d, budget)?,
                identity_suite(d, budget, cmd.samples, cmd.seed)?,
                equivalence_harness(d, budget)?.report,
            ]
        }
        Command::Diagnose { .. } => unreachable!("handled before dispatch"),
    };
    Ok(Outcome {
        code: exit_code(&reports),
        stdout: render(cmd, &reports),
    })
}

#[derive(Serialize)]
struct DiagnoseOutput {
    schema: u32,
    domain: String,
    structure: String,
    prediction: crate::report::Prediction,
    #[serde(skip_serializing_if = "Option::is_none")]
    value_group: Option<crate::valuation::Diagnosis>,
}

fn diagnose(cmd: &CommandLine, spec: &DomainSpec) -> Outcome {
    let out = match spec {
        DomainSpec::Quad(order) => {
            let d = QuadraticDomain::new(*order);
            let structure = if order.is_maximal() {
                "maximal order (Dedekind)".to_string()
            } else {
                "non-maximal order (Noetherian, not integrally closed)".to_string()
            };
            DiagnoseOutput {
                schema: SCHEMA_VERSION,
                domain: d.descriptor(),
                structure,
                prediction: d.prediction(),
                value_group: None,
            }
        }
        DomainSpec::Val(group) => {
            let d = ValuationDomain::new(group.clone());
            let diag = group.diagnose();
            DiagnoseOutput {
                schema: SCHEMA_VERSION,
                domain: d.descriptor(),
                structure: diag.to_string(),
                prediction: d.prediction(),
                value_group: Some(diag),
            }
        }
    };
    let stdout = if cmd.json {
        serde_json::to_string_pretty(&out).expect("diagnosis serializes")
    } else {
        format!(
            "{}: {}; {} [theory, not verified by this run]",
            out.domain, out.structure, out.prediction
        )
    };
    Outcome { code: 0, stdout }
}

/// Execute a parsed command.
pub fn run(cmd: &CommandLine) -> Result<Outcome> {
    let domain = match &cmd.command {
        Command::Eval { domain, .. }
        | Command::CheckPair { domain, .. }
        | Command::CheckDef { domain, .. }
        | Command::Sweep { domain }
        | Command::Diagnose { domain } => domain,
    };
    let spec = parse_domain(domain)?;
    if let Command::Diagnose { .. } = cmd.command {
        return Ok(diagnose(cmd, &spec));
    }
    match spec {
        DomainSpec::Quad(order) => {
            if cmd.probe_points.is_some() {
                return Err(Error::Validation("--probe-points applies only to valuation domains".into()));
            }
            run_on(&QuadraticDomain::new(order), cmd, DEFAULT_QUAD_BUDGET)
        }
        DomainSpec::Val(group) => {
            let mut d = ValuationDomain::new(group);
            if let Some(list) = &cmd.probe_points {
                d = d.with_probes(parse_real_list(list)?);
            }
            run_on(&d, cmd, DEFAULT_VAL_BUDGET)
        }
    }
}

/// Full program: parse, run, print, and return the exit code.
pub fn main_with(
    args: impl IntoIterator<Item = impl Into<OsString> + Clone>,
    out: &mut impl Write,
    err: &mut impl Write,
) -> i32 {
    let cmd = match parse(args) {
        Ok(cmd) => cmd,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match run(&cmd) {
        Ok(outcome) => {
            let _ = writeln!(out, "{}", outcome.stdout.trim_end());
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
