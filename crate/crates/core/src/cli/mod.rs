//! Command-line front end.
//!
//! Exit codes: 0 success or hit, 3 no hit within bounds (or an identity that
//! fails to verify), 4 homography given to `detect`, 1 usage or parse error,
//! 2 a mathematical precondition failed.

pub mod parse;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::detect::{
    transcendence_report, verify_equation_sigma, verify_equation_tau, DetectionBounds,
    Outcome, RittEquationSigma, RittEquationTau,
};
use crate::error::Error;
use crate::linearized::{bell, linearize_row, verify_row};
use crate::poincare::{constants_check, homography_closed_form, solve_koenigs, validate_map, ValidatedMap};
use parse::parse_expression;
use report::{
    Body, ConstantsJson, DetectJson, EquationJson, LinearizeJson, Report, SolveReport, VerifyJson,
    SCHEMA_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_NO_HIT: i32 = 3;
pub const EXIT_HOMOGRAPHY: i32 = 4;

/// Caps detector worker threads.
pub const THREADS_ENV: &str = "RITT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "schroder", version, about = "Exact Schröder/Koenigs series and Ritt-type equation search")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Tau,
    Sigma,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schröder function σ and Koenigs function τ to a given order.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long, default_value_t = 20)]
        order: i64,
    },
    /// Search for (τ')^r = A(x)·τ^j within bounds.
    Detect {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        /// Defaults to 2*deg_max + j_max + margin.
        #[arg(long)]
        order: Option<i64>,
        #[arg(long, default_value_t = 6)]
        r_max: u32,
        #[arg(long, default_value_t = 8)]
        j_max: u32,
        #[arg(long, default_value_t = 12)]
        deg_max: u32,
        #[arg(long, default_value_t = DetectionBounds::DEFAULT_MARGIN)]
        margin: u32,
    },
    /// Check a given equation on the τ side or the σ side.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long, value_enum)]
        side: Side,
        #[arg(long, allow_negative_numbers = true)]
        r: i64,
        #[arg(long, allow_negative_numbers = true)]
        j: i64,
        /// Rational function in x.
        #[arg(long = "A", value_name = "EXPR", allow_hyphen_values = true)]
        a: String,
        #[arg(long, default_value_t = 64)]
        order: i64,
    },
    /// Partial Bell polynomial B_{n,k}.
    Bell {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Row n of the linearized system, optionally checked on τ.
    Linearize {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 40)]
        order: i64,
    },
    /// Forcing factors qⁿ − 1 showing f(R) = f, f(0) = 0 has only f = 0.
    ConstantsCheck {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long, default_value_t = 20)]
        order: i64,
    },
}

/// What a run produced: the exit code and the text bound for stdout/stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invocation {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_exit(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_PRECONDITION,
    }
}

fn threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from))
}

fn load_map(src: &str) -> Result<ValidatedMap, Error> {
    validate_map(&parse_expression(src, 'z')?)
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Invocation { exit_code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Invocation { exit_code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let (report, code) = match execute(&cli.command) {
        Ok(v) => v,
        Err(e) => {
            return Invocation {
                exit_code: error_exit(&e),
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let text = if cli.json { report.to_json() } else { report.to_text() };
    match &cli.out {
        None => Invocation { exit_code: code, stdout: text, stderr: String::new() },
        Some(path) => match std::fs::write(path, text) {
            Ok(()) => Invocation { exit_code: code, stdout: String::new(), stderr: String::new() },
            Err(e) => Invocation {
                exit_code: EXIT_USAGE,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
    }
}

fn report(command: &'static str, inputs: serde_json::Value, body: Body) -> Report {
    Report { schema_version: SCHEMA_VERSION, command, inputs, body }
}

/// Runs one subcommand and returns its report with the exit code it implies.
pub fn execute(command: &Command) -> Result<(Report, i32), Error> {
    match command {
        Command::Solve { map, order } => {
            let m = load_map(map)?;
            let pair = solve_koenigs(&m, *order)?;
            let closed = if m.is_homography { Some(homography_closed_form(&m)?) } else { None };
            let body = Body::Solve(SolveReport::new(&pair, closed.as_ref()));
            Ok((report("solve", json!({ "map": map, "order": order }), body), EXIT_OK))
        }
        Command::Detect { map, order, r_max, j_max, deg_max, margin } => {
            let m = load_map(map)?;
            let order = order.unwrap_or_else(|| DetectionBounds::min_order(*j_max, *deg_max, *margin));
            let bounds = DetectionBounds::new(*r_max, *j_max, *deg_max, order, *margin)?;
            let pair = solve_koenigs(&m, order)?;
            let rep = transcendence_report(&pair, &bounds, threads())?;
            let code = match rep.outcome {
                Outcome::Hit => EXIT_OK,
                Outcome::NoHitWithinBounds => EXIT_NO_HIT,
                Outcome::Homography => EXIT_HOMOGRAPHY,
            };
            let inputs = json!({
                "map": map, "order": order, "r_max": r_max, "j_max": j_max,
                "deg_max": deg_max, "margin": margin,
            });
            Ok((report("detect", inputs, Body::Detect(DetectJson::new(&m, &rep))), code))
        }
        Command::Verify { map, side, r, j, a, order } => {
            let m = load_map(map)?;
            let a_fn = parse_expression(a, 'x')?;
            let pair = solve_koenigs(&m, *order)?;
            let (side_name, equation, residual) = match side {
                Side::Tau => {
                    let eq = RittEquationTau { r: *r, j: *j, a: a_fn };
                    let res = verify_equation_tau(&pair, &eq)?;
                    ("tau", EquationJson::from(&eq), res)
                }
                Side::Sigma => {
                    let eq = RittEquationSigma { r: *r, j: *j, a: a_fn };
                    let res = verify_equation_sigma(&pair, &eq)?;
                    ("sigma", EquationJson::from(&eq), res)
                }
            };
            let code = if residual.is_zero() { EXIT_OK } else { EXIT_NO_HIT };
            let inputs = json!({ "map": map, "side": side_name, "r": r, "j": j, "A": a, "order": order });
            let body = Body::Verify(VerifyJson {
                map: (&m).into(),
                side: side_name,
                equation,
                residual: (&residual).into(),
            });
            Ok((report("verify", inputs, body), code))
        }
        Command::Bell { n, k } => {
            let b = bell(*n, *k)?;
            Ok((report("bell", json!({ "n": n, "k": k }), Body::Bell((&b).into())), EXIT_OK))
        }
        Command::Linearize { map, n, verify, order } => {
            let m = load_map(map)?;
            let row = linearize_row(&m, *n)?;
            let residual = if *verify {
                let pair = solve_koenigs(&m, *order)?;
                Some(verify_row(&row, &pair)?)
            } else {
                None
            };
            let code = match &residual {
                Some(r) if !r.is_zero() => EXIT_NO_HIT,
                _ => EXIT_OK,
            };
            let inputs = json!({ "map": map, "n": n, "verify": verify, "order": order });
            let body = Body::Linearize(LinearizeJson {
                map: (&m).into(),
                row: (&row).into(),
                residual: residual.as_ref().map(Into::into),
            });
            Ok((report("linearize", inputs, body), code))
        }
        Command::ConstantsCheck { map, order } => {
            let m = load_map(map)?;
            let trace = constants_check(&m, *order)?;
            let code = if trace.all_factors_nonzero() && trace.solution_is_zero() {
                EXIT_OK
            } else {
                EXIT_PRECONDITION
            };
            let body = Body::Constants(ConstantsJson::new(&m, *order, &trace));
            Ok((report("constants-check", json!({ "map": map, "order": order }), body), code))
        }
    }
}
