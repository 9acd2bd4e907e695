//! Command-line front end: problem documents in, JSON reports and CSV data out.

pub mod analyze;
pub mod error;
pub mod hopf;
pub mod input;
pub mod locus;
pub mod report;
pub mod simulate;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use pyragas::model::{catalog, ProblemDocument, Tolerances};
use pyragas::Problem;
use serde::Serialize;

pub use error::CliError;
use input::{load_document, Overrides};
use locus::{GainBase, PathKind, PathSpec};
use report::{digest, write_output, Csv, Envelope};

/// Default Chebyshev collocation nodes for periodic problems.
pub const DEFAULT_NODES: usize = 64;

#[derive(Debug, Parser)]
#[command(name = "pyragas", version, about = "Stability analysis of time-delayed feedback control")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write here instead of standard output (atomically).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Emit the JSON report envelope (default).
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV data instead of the envelope.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    /// Collocation nodes M for periodic problems.
    #[arg(long, default_value_t = DEFAULT_NODES)]
    pub nodes: usize,
    /// Root search rectangle for equilibria.
    #[arg(long, num_args = 3, value_names = ["RE_MIN", "RE_MAX", "IM_MAX"], allow_negative_numbers = true)]
    pub region: Option<Vec<f64>>,
    /// Override the tolerance of the multiplier-1 band.
    #[arg(long)]
    pub tol_one: Option<f64>,
}

impl AnalysisArgs {
    fn overrides(&self) -> Overrides {
        Overrides { region: self.region.clone(), tol_one: self.tol_one }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every applicable verdict and spectrum for a problem.
    Analyze {
        problem: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample Hopf curves k*(ω) of the scalar reduced equation.
    Hopf {
        /// Unstable eigenvalue λ* > 0.
        #[arg(long)]
        lambda: f64,
        /// Delay T > 0.
        #[arg(long)]
        delay: f64,
        /// Comma-separated branch indices m; empty for none.
        #[arg(long, default_value = "0,1,2", allow_hyphen_values = true)]
        branches: String,
        /// Samples per branch.
        #[arg(long, default_value_t = 400)]
        samples: usize,
        /// Distance from the branch endpoints as a fraction of 2π/T.
        #[arg(long, default_value_t = 1e-3)]
        guard: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Trace eigenvalues or multipliers along a gain path.
    Locus {
        problem: PathBuf,
        #[arg(long, value_enum, default_value_t = PathKind::Real)]
        path: PathKind,
        /// Matrix the path parameter multiplies.
        #[arg(long, value_enum, default_value_t = GainBase::Identity)]
        base: GainBase,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        to: f64,
        /// Argument φ of a ray path, in radians.
        #[arg(long, allow_negative_numbers = true, required_if_eq("path", "ray"))]
        angle: Option<f64>,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Integrate a controlled equilibrium from a perturbed history.
    Simulate {
        problem: PathBuf,
        /// Length of the run in delays.
        #[arg(long, default_value_t = 40.0)]
        horizon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest time step; rounded down to divide the delay.
        #[arg(long)]
        dt: Option<f64>,
        /// Size of the history perturbation; 0 starts on the equilibrium.
        #[arg(long, default_value_t = 1e-6)]
        amplitude: f64,
        /// Also write the trajectory CSV here.
        #[arg(long, value_name = "FILE")]
        trajectory: Option<PathBuf>,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// List the benchmark problems, or print one as a problem document.
    Catalog {
        /// Print only this case's problem document.
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// What a command produced before formatting.
struct Outcome {
    command: &'static str,
    digest: String,
    seed: Option<u64>,
    tolerances: Option<Tolerances>,
    results: serde_json::Value,
    csv: Csv,
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("reports serialize")
}

fn pretty<T: Serialize>(value: &T) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text.into_bytes()
}

fn build(doc: &ProblemDocument) -> Result<Problem, CliError> {
    Ok(doc.build::<f64>()?)
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let (outcome, output) = match &cli.command {
        Command::Analyze { problem, analysis, output } => {
            let doc = load_document(problem)?;
            let ov = analysis.overrides();
            let tol = ov.tolerances(&doc)?;
            let region = ov.region(&doc)?;
            let (results, csv) = match build(&doc)? {
                Problem::Equilibrium(p) => {
                    let (a, csv) = analyze::equilibrium(&p, region, &tol)?;
                    (to_json(&a), csv)
                }
                Problem::PeriodicLinear(p) => {
                    let (a, csv) = analyze::periodic(&p, analysis.nodes, &tol)?;
                    (to_json(&a), csv)
                }
            };
            (Outcome { command: "analyze", digest: digest(&doc), seed: None, tolerances: Some(tol), results, csv }, output)
        }
        Command::Hopf { lambda, delay, branches, samples, guard, output } => {
            let req = hopf::HopfRequest {
                lambda: *lambda,
                delay: *delay,
                branches: hopf::parse_branches(branches).map_err(CliError::Usage)?,
                samples: *samples,
                guard: *guard,
            };
            let (rows, csv) = hopf::hopf(&req)?;
            let results = serde_json::json!({ "request": to_json(&req), "branches": to_json(&rows) });
            (Outcome { command: "hopf", digest: digest(&req), seed: None, tolerances: None, results, csv }, output)
        }
        Command::Locus { problem, path, base, from, to, angle, analysis, output } => {
            let doc = load_document(problem)?;
            let ov = analysis.overrides();
            let tol = ov.tolerances(&doc)?;
            let region = ov.region(&doc)?;
            let spec = match path {
                PathKind::Homotopy => PathSpec { kind: *path, base: GainBase::Document, from: 0.0, to: 1.0, angle: None },
                _ => PathSpec { kind: *path, base: *base, from: *from, to: *to, angle: *angle },
            };
            if !(spec.from.is_finite() && spec.to.is_finite() && spec.angle.is_none_or(f64::is_finite)) {
                return Err(CliError::Usage("path bounds and angle must be finite".into()));
            }
            let (locus, csv) = match build(&doc)? {
                Problem::Equilibrium(p) => locus::equilibrium(&p, &spec, region, &tol)?,
                Problem::PeriodicLinear(p) => {
                    if spec.kind != PathKind::Homotopy {
                        return Err(CliError::Usage("periodic problems support only `--path homotopy`".into()));
                    }
                    locus::periodic(&p, analysis.nodes, &tol)?
                }
            };
            (Outcome { command: "locus", digest: digest(&doc), seed: None, tolerances: Some(tol), results: to_json(&locus), csv }, output)
        }
        Command::Simulate { problem, horizon, seed, dt, amplitude, trajectory, analysis, output } => {
            let doc = load_document(problem)?;
            let ov = analysis.overrides();
            let tol = ov.tolerances(&doc)?;
            let region = ov.region(&doc)?;
            let Problem::Equilibrium(p) = build(&doc)? else {
                return Err(CliError::Usage("simulate needs an equilibrium problem".into()));
            };
            let req = simulate::SimulationRequest { horizon: *horizon, dt: *dt, amplitude: *amplitude, seed: *seed };
            let (summary, csv) = simulate::simulate(&p, &req, region, &tol)?;
            if let Some(path) = trajectory {
                write_output(Some(path), csv.as_str().as_bytes())?;
            }
            let results = serde_json::json!({ "request": to_json(&req), "summary": to_json(&summary) });
            (Outcome { command: "simulate", digest: digest(&doc), seed: Some(*seed), tolerances: Some(tol), results, csv }, output)
        }
        Command::Catalog { name, output } => {
            let cases = catalog();
            if let Some(name) = name {
                let case = cases
                    .iter()
                    .find(|c| &c.name == name)
                    .ok_or_else(|| CliError::Usage(format!("no catalog case named `{name}`")))?;
                return write_output(output.out.as_deref(), &pretty(&case.document));
            }
            let mut csv = Csv::new(["name", "kind", "dimension"]);
            for c in &cases {
                csv.line_raw(&[&c.name, to_json(&c.document.kind).as_str().unwrap_or_default(), &c.document.dimension.to_string()]);
            }
            let results = to_json(&cases);
            (Outcome { command: "catalog", digest: digest(&results), seed: None, tolerances: None, results, csv }, output)
        }
    };
    let bytes = if output.csv {
        outcome.csv.as_str().as_bytes().to_vec()
    } else {
        pretty(&Envelope {
            tool: "pyragas",
            version: env!("CARGO_PKG_VERSION"),
            command: outcome.command,
            input_digest: outcome.digest,
            seed: outcome.seed,
            tolerances: outcome.tolerances,
            results: outcome.results,
            timing_ms: start.elapsed().as_millis() as u64,
        })
    };
    write_output(output.out.as_deref(), &bytes)
}
