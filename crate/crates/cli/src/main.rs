//! Command-line front end for the relmin library.
//!
//! Exit codes: 0 success, 1 a checked property failed or an operation's
//! precondition was violated, 2 malformed input.

use std::fs;
use std::io::{ErrorKind, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use relmin::cayley_dickson::find_composition_violation_with;
use relmin::heisenberg::{lift_scalar, HeisenbergRecord};
use relmin::unitriangular::{corner_elem, delete_reduction, heisenberg_realization};
use relmin::verify::run_verify_with;
use relmin::witness::{
    break_compatibility, escalate_unbounded, kronecker_oracle, EscalationRequest, NeighborhoodOracle,
};
use relmin::{CdElement, Error, InnerProduct, Pairing, Rational, Strategy, Suite, UniTriMatrix, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "relmin",
    version,
    about = "Exact Cayley-Dickson, Heisenberg and unitriangular group computations"
)]
struct Cli {
    /// Evaluate samples on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,

    /// Also write the JSON result to this file.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded property suite and print its report.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        level: u32,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        coeff_magnitude: u32,
    },
    /// Construct a witness from a JSON request.
    Witness {
        #[arg(value_enum)]
        kind: WitnessKind,
        /// Request file; stdin when omitted.
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
    },
    /// Compute a group operation from JSON operands.
    Compute {
        #[arg(value_enum)]
        kind: ComputeKind,
        /// Operand file; stdin when omitted.
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
    },
    /// Search the structured candidate set for a norm-multiplicativity failure.
    Search {
        #[arg(long, default_value_t = 4)]
        level: u32,
        #[arg(long, default_value_t = 1)]
        bound: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessKind {
    BreakCompat,
    Escalate,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComputeKind {
    HMul,
    UtMul,
    Realize,
    Reduce,
    Corner,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    /// A property failed or an operation rejected its input (exit 1).
    Checked(Value),
    /// Input could not be read or parsed (exit 2).
    Malformed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::Precondition(_) => "precondition",
            Error::Contract(_) => "contract",
            Error::ExcludedCorner(_) => "excluded_corner",
            Error::NotInTilde(_) => "not_in_tilde",
            Error::Shape(_) | Error::LevelMismatch { .. } => "shape",
            Error::Index(_) => "index",
            _ => "arithmetic",
        };
        Failure::Checked(json!({ "error": kind, "reason": e.to_string() }))
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn read_input<T: for<'de> Deserialize<'de>>(path: Option<&Path>) -> Result<T, Failure> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Malformed(format!("{}: {e}", p.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::Malformed(format!("stdin: {e}")))?;
            buf
        }
    };
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("invalid input: {e}")))
}

/// Level-0 values as bare rationals, everything else in object form.
fn compact(c: &CdElement) -> Value {
    match c.level() {
        0 => json!(c.coeffs()[0]),
        _ => json!(c),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BreakRequest {
    x: Vec<CdElement>,
    eps0: Rational,
    level: u32,
    n: usize,
    #[serde(default)]
    pairing: Pairing,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EscalateRequest {
    n0: u64,
    m: u32,
    r: Rational,
    #[serde(default = "half")]
    delta1: Rational,
    #[serde(default = "half")]
    delta2: Rational,
}

fn half() -> Rational {
    Rational::new(1, 2).expect("nonzero")
}

fn witness(kind: WitnessKind, input: Option<&Path>) -> Outcome {
    match kind {
        WitnessKind::BreakCompat => {
            let req: BreakRequest = read_input(input)?;
            let w = InnerProduct::new(req.level, req.n, req.pairing)?;
            let x = req
                .x
                .into_iter()
                .map(|c| lift_scalar(c, req.level))
                .collect::<relmin::Result<Vec<_>>>()?;
            let out = match break_compatibility(&w, &x, &req.eps0) {
                Err(Error::Precondition(msg)) if msg.starts_with("no escaping coordinate") => {
                    return Err(Failure::Checked(
                        json!({ "error": "precondition", "reason": "no escaping coordinate", "detail": msg }),
                    ));
                }
                other => other?,
            };
            Ok((
                json!({
                    "a": out.a.iter().map(compact).collect::<Vec<_>>(),
                    "index": out.index + 1,
                    "w_value": compact(&out.w_value),
                    "max_abs_sq": out.max_abs_sq,
                }),
                true,
            ))
        }
        WitnessKind::Escalate => {
            let req: EscalateRequest = read_input(input)?;
            let oracle = kronecker_oracle(req.delta1, req.delta2)?;
            let esc = EscalationRequest::new(req.n0, req.m, req.r)?;
            let out = escalate_unbounded(&oracle, &oracle.base(), &esc)?;
            Ok((
                json!({
                    "n0": esc.n0,
                    "m": esc.m,
                    "r": esc.r,
                    "c_squared": esc.c_squared,
                    "neighborhood": oracle.describe(&oracle.base()),
                    "shrunk": out.shrunk,
                    "escaped": out.escaped,
                    "multiplier": out.multiplier,
                    "x": out.x,
                    "norm_sq": out.norm_sq,
                    "norm_bound": out.norm_bound,
                }),
                true,
            ))
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HMulArgs {
    u1: HeisenbergRecord,
    u2: HeisenbergRecord,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UtMulArgs {
    m1: UniTriMatrix,
    m2: UniTriMatrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RealizeArgs {
    u: HeisenbergRecord,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReduceArgs {
    matrix: UniTriMatrix,
    i: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CornerArgs {
    n: usize,
    i: usize,
    j: usize,
    a: CdElement,
}

fn compute(kind: ComputeKind, input: Option<&Path>) -> Outcome {
    let value = match kind {
        ComputeKind::HMul => {
            let args: HMulArgs = read_input(input)?;
            let (g1, u1) = args.u1.into_element()?;
            let (g2, u2) = args.u2.into_element()?;
            if g1 != g2 {
                return Err(Error::Shape("u1 and u2 belong to different groups".into()).into());
            }
            json!(HeisenbergRecord::from_element(&g1, &g1.mul(&u1, &u2)?))
        }
        ComputeKind::UtMul => {
            let args: UtMulArgs = read_input(input)?;
            json!(args.m1.mul(&args.m2)?)
        }
        ComputeKind::Realize => {
            let args: RealizeArgs = read_input(input)?;
            let (g, u) = args.u.into_element()?;
            json!(heisenberg_realization(&g, &u)?)
        }
        ComputeKind::Reduce => {
            let args: ReduceArgs = read_input(input)?;
            json!(delete_reduction(&args.matrix, args.i)?)
        }
        ComputeKind::Corner => {
            let args: CornerArgs = read_input(input)?;
            json!(corner_elem(args.n, args.i, args.j, &args.a)?)
        }
    };
    Ok((value, true))
}

fn run(cli: &Cli) -> Outcome {
    let strategy = if cli.sequential {
        Strategy::Sequential
    } else {
        Strategy::default()
    };
    match &cli.command {
        Command::Verify {
            suite,
            samples,
            seed,
            level,
            dim,
            coeff_magnitude,
        } => {
            let config = VerifyConfig {
                suite: *suite,
                samples: *samples,
                seed: *seed,
                level: *level,
                dim: *dim,
                coeff_magnitude: *coeff_magnitude,
            };
            let report = run_verify_with(&config, strategy).map_err(|e| Failure::Malformed(e.to_string()))?;
            let passed = report.passed();
            Ok((json!(report), passed))
        }
        Command::Witness { kind, input } => witness(*kind, input.as_deref()),
        Command::Compute { kind, input } => compute(*kind, input.as_deref()),
        Command::Search { level, bound } => {
            let hit = find_composition_violation_with(*level, *bound, strategy)
                .map_err(|e| Failure::Malformed(e.to_string()))?;
            Ok((json!({ "level": level, "bound": bound, "violation": hit }), true))
        }
    }
}

fn emit(value: &Value, json_out: Option<&Path>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    // A closed pipe (e.g. `relmin … | head`) is not an error worth reporting.
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => return Err(format!("stdout: {e}")),
        _ => {}
    }
    if let Some(path) = json_out {
        fs::write(path, format!("{text}\n")).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (value, code) = match run(&cli) {
        Ok((value, passed)) => (value, if passed { 0 } else { 1 }),
        Err(Failure::Checked(value)) => (value, 1),
        Err(Failure::Malformed(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(msg) = emit(&value, cli.json_out.as_deref()) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
