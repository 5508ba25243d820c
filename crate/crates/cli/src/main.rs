use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

mod commands;

#[derive(Parser)]
#[command(name = "rigidconvex", version, about = "Rigid convexity and determinantal representations of plane curves")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct ParamArgs {
    /// Denominator q0 as a polynomial in t, or ascending coefficients `a,b,c`.
    #[arg(long, allow_hyphen_values = true)]
    pub q0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q2: Option<String>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Decide rigid convexity from the Hermite matrix.
    CheckRigid {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// Include the Hermite matrix in the report.
        #[arg(long)]
        emit_hermite: bool,
        /// Absolute eigenvalue tolerance (default: RIGIDCONVEX_TOL or relative 1e-9).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print the trigonometric Hermite matrix H(z).
    Hermite {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Build the Bezoutian pencil of a rational parametrization.
    BezoutPencil {
        #[command(flatten)]
        param: ParamArgs,
        /// Implicit equation to verify the determinant against.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// Write the pencil JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a point where the pencil is positive (semi)definite.
    FindComponent {
        /// Pencil JSON file.
        #[arg(long, conflicts_with_all = ["q0", "q1", "q2"])]
        pencil: Option<PathBuf>,
        #[command(flatten)]
        param: ParamArgs,
        /// det F up to scale; computed from the pencil when omitted.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
    },
    /// Determinantal representations of a smooth cubic.
    CubicRepr {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Write the spectral-factorization SDP in SDPA sparse format.
    ExportSdp {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        out: PathBuf,
        /// Apply the congruence scaling at this angle first.
        #[arg(long)]
        scale_at: Option<f64>,
    },
    /// Check a spectral factor U(z) against H(z).
    VerifyFactor {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// JSON file `{"m": int, "coeffs": [U0, U1, ...]}`.
        #[arg(long)]
        factor: PathBuf,
        #[arg(long, default_value_t = 1e-2)]
        tol: f64,
    },
    /// Check det F(x) = c p(x).
    VerifyDet {
        #[arg(long)]
        pencil: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Run a stored example.
    Fixture {
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
    /// Sample p on a grid (or along the curve) as CSV `x1,x2,p`.
    PlotData {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// `x1min,x1max,x2min,x2max`.
        #[arg(long, allow_hyphen_values = true, default_value = "-2,2,-2,2")]
        range: String,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Emit only points on p = 0.
        #[arg(long)]
        curve: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::CheckRigid { .. } => "check-rigid",
            Command::Hermite { .. } => "hermite",
            Command::BezoutPencil { .. } => "bezout-pencil",
            Command::FindComponent { .. } => "find-component",
            Command::CubicRepr { .. } => "cubic-repr",
            Command::ExportSdp { .. } => "export-sdp",
            Command::VerifyFactor { .. } => "verify-factor",
            Command::VerifyDet { .. } => "verify-det",
            Command::Fixture { .. } => "fixture",
            Command::PlotData { .. } => "plot-data",
        }
    }
}

/// What a command computed: machine form, text form.
pub struct Outcome {
    pub inputs: Value,
    pub result: Value,
    pub text: String,
}

/// Failure with the exit code it maps to.
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl From<rigidconvex::Error> for Failure {
    fn from(e: rigidconvex::Error) -> Self {
        let input = e.is_input_error();
        Failure { code: if input { 1 } else { 2 }, kind: if input { "input" } else { "numerical" }, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, kind: "io", message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(|| commands::run(&cli.command)).unwrap_or_else(|p| {
        let message = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "internal failure".into());
        Err(Failure { code: 2, kind: "internal", message })
    });
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    match outcome {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(out)) => {
            if cli.json {
                let report = json!({
                    "command": name,
                    "inputs": out.inputs,
                    "result": out.result,
                    "timing_ms": elapsed_ms,
                });
                emit(&format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")));
            } else if out.text.ends_with('\n') {
                emit(&out.text);
            } else {
                emit(&format!("{}\n", out.text));
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            if cli.json {
                let report = json!({
                    "command": name,
                    "error": {"kind": f.kind, "message": f.message},
                    "timing_ms": elapsed_ms,
                });
                emit(&format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
pub fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}
