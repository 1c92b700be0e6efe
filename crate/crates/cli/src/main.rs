//! `equilat`: compute and verify bases of lattices under symmetric-group
//! actions.
//!
//! Exit status: 0 success, 1 malformed input, 2 refusal, 3 budget exhausted.

mod commands;
mod input;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use equilat::chains::ScanKind;
use equilat::{Budget, Error, TermOrder};
use serde_json::json;

use commands::Output;

#[derive(Parser)]
#[command(name = "equilat", version, about = "Bases of lattices under symmetric-group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graver basis of a lattice.
    Graver(Args),
    /// Hilbert basis of the nonnegative part of a lattice.
    Hilbert(Args),
    /// Reduced Gröbner basis for a term order.
    Groebner(Args),
    /// Check that a move set connects every fiber up to a norm bound.
    MarkovVerify(Args),
    /// Check that a move set reduces every fiber to its minimum.
    GroebnerVerify(Args),
    /// The Sym(n)-orbit of a vector.
    Orbit(Args),
    /// The canonical orbit representative of a vector.
    Canon(Args),
    /// Cross-check Graver and Hilbert bases through Lawrence doubling.
    LiftCheck(Args),
    /// Scan a chain of lattices for stabilization.
    Stabilize(Args),
    /// Marginal matrix and kernel lattice of a hierarchical model.
    ModelKernel(Args),
    /// The no-3-way move of growing support.
    No3way(Args),
    /// Check the Graver envelope given by the Hilbert basis and g_L.
    EnvelopeCheck(Args),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
pub struct Args {
    /// Input JSON file.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Move set JSON file.
    #[arg(long)]
    basis: Option<PathBuf>,
    #[arg(long, value_parser = parse_order)]
    order: Option<TermOrder>,
    /// Norm bound for verification.
    #[arg(long)]
    bound: Option<u64>,
    /// Work cap for the main loops; overrides EQUILAT_BUDGET.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    #[arg(long = "n-max")]
    n_max: Option<u32>,
    #[arg(long, default_value_t = 2)]
    window: u32,
    /// Chain description for `stabilize`.
    #[arg(long)]
    seed: Option<PathBuf>,
    #[arg(long, value_parser = parse_kind)]
    kind: Option<ScanKind>,
    /// Level for `orbit`, `canon`, `no3way` and scenario models.
    #[arg(long)]
    n: Option<u32>,
    /// Bounded range for `no3way` (default 2).
    #[arg(long)]
    c: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn parse_order(s: &str) -> Result<TermOrder, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<ScanKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn reason(e: &Error) -> &'static str {
    match e {
        Error::Refused(r) => r.reason(),
        Error::BudgetExceeded { .. } => "budget-exceeded",
        Error::Overflow => "overflow",
        Error::Precondition(_) => "precondition",
        _ => "malformed-input",
    }
}

fn exit_code(reason: &str) -> u8 {
    match reason {
        "infinite-fiber" | "not-independent" => 2,
        "budget-exceeded" | "overflow" => 3,
        _ => 1,
    }
}

/// Writes to a sibling temporary file and renames it into place.
fn write_atomically(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn emit(args: &Args, output: &Output) -> io::Result<()> {
    let mut bytes = match args.format {
        Format::Json => serde_json::to_string_pretty(&output.json).expect("values serialize").into_bytes(),
        Format::Text => output.text.trim_end().as_bytes().to_vec(),
    };
    bytes.push(b'\n');
    match &args.out {
        Some(path) => write_atomically(path, &bytes),
        None => io::stdout().lock().write_all(&bytes),
    }
}

fn failure_output(reason: &str, message: &str) -> Output {
    Output {
        json: json!({ "error": { "reason": reason, "message": message } }),
        text: format!("error ({reason}): {message}"),
    }
}

fn run(command: &Command) -> (Result<Output, Error>, &Args, Option<String>) {
    let args = match command {
        Command::Graver(a)
        | Command::Hilbert(a)
        | Command::Groebner(a)
        | Command::MarkovVerify(a)
        | Command::GroebnerVerify(a)
        | Command::Orbit(a)
        | Command::Canon(a)
        | Command::LiftCheck(a)
        | Command::Stabilize(a)
        | Command::ModelKernel(a)
        | Command::No3way(a)
        | Command::EnvelopeCheck(a) => a,
    };
    let budget = match args.budget {
        Some(limit) => Ok(Budget::default().with_work_limit(limit)),
        None => Budget::from_env(),
    };
    let budget = match budget {
        Ok(b) => b,
        Err(e) => return (Err(e), args, None),
    };
    let mut cut = None;
    let result = match command {
        Command::Graver(a) => commands::graver(a, &budget),
        Command::Hilbert(a) => commands::hilbert(a, &budget),
        Command::Groebner(a) => commands::groebner(a, &budget),
        Command::MarkovVerify(a) => commands::markov_verify(a, &budget),
        Command::GroebnerVerify(a) => commands::groebner_verify(a, &budget),
        Command::Orbit(a) => commands::orbit_cmd(a, &budget),
        Command::Canon(a) => commands::canon(a, &budget),
        Command::LiftCheck(a) => commands::lift_check(a, &budget),
        Command::Stabilize(a) => commands::stabilize(a, &budget).map(|(out, reason)| {
            cut = reason;
            out
        }),
        Command::ModelKernel(a) => commands::model_kernel(a, &budget),
        Command::No3way(a) => commands::no3way(a, &budget),
        Command::EnvelopeCheck(a) => commands::envelope_check(a, &budget),
    };
    (result, args, cut)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, args, cut) = run(&cli.command);
    let (output, code) = match result {
        Ok(out) => {
            let code = cut.as_deref().map_or(0, exit_code);
            (out, code)
        }
        Err(e) => {
            let r = reason(&e);
            eprintln!("equilat: {e}");
            (failure_output(r, &e.to_string()), exit_code(r))
        }
    };
    if let Err(e) = emit(args, &output) {
        eprintln!("equilat: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
