mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "unital", version, about = "Analyze, canonicalize and decompose unital qubit channels")]
struct Cli {
    /// Numerical tolerance (must be positive).
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive_tolerance)]
    tolerance: f64,

    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Human,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validation flags, Choi spectrum and Bloch data of a channel document.
    Analyze { file: PathBuf },
    /// Canonical Pauli form with its unitary witnesses.
    Canonicalize { file: PathBuf },
    /// Decide local unitary equivalence of two channels.
    Equiv { a: PathBuf, b: PathBuf },
    /// Mixed-unitary decomposition with prescribed weights.
    Decompose {
        file: PathBuf,
        /// Comma-separated target weights.
        #[arg(long, value_delimiter = ',', required_unless_present = "average", conflicts_with = "average")]
        weights: Option<Vec<f64>>,
        /// Use m equal weights.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
        average: Option<u32>,
    },
    /// Tetrahedron and ordered-cone tests for a diagonal scaling.
    #[command(allow_negative_numbers = true)]
    Bloch { d1: f64, d2: f64, d3: f64 },
    /// Emit a channel document.
    Gen {
        kind: GenKind,
        /// Pauli mixing coefficients (muI muX muY muZ).
        #[arg(allow_negative_numbers = true)]
        coeffs: Vec<f64>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Random,
    Depolarizing,
    Identity,
    PauliMixing,
}

fn positive_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err("tolerance must be a positive finite number".into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = cli.tolerance;
    let result = match &cli.command {
        Command::Analyze { file } => commands::analyze(file, tol),
        Command::Canonicalize { file } => commands::canonicalize(file, tol),
        Command::Equiv { a, b } => commands::equiv(a, b, tol),
        Command::Decompose {
            file,
            weights,
            average,
        } => commands::decompose(file, weights.as_deref(), *average, tol),
        Command::Bloch { d1, d2, d3 } => Ok(commands::bloch([*d1, *d2, *d3], tol)),
        Command::Gen { kind, coeffs } => commands::gen(*kind, coeffs, cli.seed, tol),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(msg) = &outcome.message {
        eprintln!("{msg}");
    }
    if let Some(doc) = &outcome.document {
        let text = match cli.format {
            Format::Json => serde_json::to_string_pretty(doc).expect("serializable") + "\n",
            Format::Human => render::human(doc),
        };
        let written = match &cli.output {
            Some(path) => std::fs::write(path, text.as_bytes()),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(outcome.code)
}
