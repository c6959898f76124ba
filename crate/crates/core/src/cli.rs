//! The `zeno` command line.
//!
//! Exit status: 0 on success, 1 on runtime or numerical failure, 2 on usage
//! errors. `ZENO_THREADS` caps the number of worker threads used to evaluate
//! curve points.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::analysis::{compute_curve, compute_curve_with_survival, find_transitions_with, sweep};
use crate::config::{parse_config, Command, RunSpec};
use crate::emit::{emit, Report};
use crate::error::Error;

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CommandArg {
    Curve,
    Sweep,
    Transitions,
}

#[derive(Debug, Parser)]
#[command(
    name = "zeno",
    about = "Modified decay rates and Zeno/anti-Zeno transitions for spin-boson models"
)]
struct Cli {
    #[arg(value_enum)]
    command: CommandArg,
    /// `key = value` config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// sb (single two-level system) or lsb (collective spin j).
    #[arg(long)]
    model: Option<String>,
    /// Strong coupling strength.
    #[arg(long = "G", allow_hyphen_values = true)]
    strong: Option<String>,
    /// Weak coupling strength.
    #[arg(long = "F", allow_hyphen_values = true)]
    weak: Option<String>,
    /// Strong-bath Ohmicity.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// Weak-bath Ohmicity.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// Strong-bath cutoff frequency.
    #[arg(long, allow_hyphen_values = true)]
    wc: Option<String>,
    /// Weak-bath cutoff frequency.
    #[arg(long, allow_hyphen_values = true)]
    ac: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// Collective spin (lsb only), a positive half-integer.
    #[arg(long, allow_hyphen_values = true)]
    j: Option<String>,
    /// Inverse temperature.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "zero_temp")]
    beta: Option<String>,
    #[arg(long)]
    zero_temp: bool,
    #[arg(long, allow_hyphen_values = true)]
    tau_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    tau_max: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    tau_steps: Option<String>,
    /// linear or log.
    #[arg(long)]
    tau_spacing: Option<String>,
    /// G, F, j, delta or eps.
    #[arg(long)]
    sweep_param: Option<String>,
    /// Comma-separated values.
    #[arg(long, allow_hyphen_values = true)]
    sweep_values: Option<String>,
    /// parabolic or grid_only.
    #[arg(long)]
    refinement: Option<String>,
    /// Also compute survival probabilities (curve only).
    #[arg(long)]
    survival: bool,
    /// Use the unit-exponent envelope in the spin-boson boundary term.
    #[arg(long)]
    paper_literal: bool,
    /// Large-spin C(0) square-term coefficient: decay or survival.
    #[arg(long)]
    square_term: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output path, or - for standard output.
    #[arg(long, allow_hyphen_values = true)]
    out: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    abs_tol: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    rel_tol: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    max_subdivisions: Option<String>,
}

impl Cli {
    fn overrides(&self) -> Vec<(String, String)> {
        let command = match self.command {
            CommandArg::Curve => "curve",
            CommandArg::Sweep => "sweep",
            CommandArg::Transitions => "transitions",
        };
        let mut pairs = vec![("command".to_string(), command.to_string())];
        let optional = [
            ("model", &self.model),
            ("G", &self.strong),
            ("F", &self.weak),
            ("s", &self.s),
            ("r", &self.r),
            ("wc", &self.wc),
            ("ac", &self.ac),
            ("eps", &self.eps),
            ("delta", &self.delta),
            ("j", &self.j),
            ("beta", &self.beta),
            ("tau-min", &self.tau_min),
            ("tau-max", &self.tau_max),
            ("tau-steps", &self.tau_steps),
            ("tau-spacing", &self.tau_spacing),
            ("sweep-param", &self.sweep_param),
            ("sweep-values", &self.sweep_values),
            ("refinement", &self.refinement),
            ("square-term", &self.square_term),
            ("format", &self.format),
            ("out", &self.out),
            ("abs-tol", &self.abs_tol),
            ("rel-tol", &self.rel_tol),
            ("max-subdivisions", &self.max_subdivisions),
        ];
        for (key, value) in optional {
            if let Some(v) = value {
                pairs.push((key.to_string(), v.clone()));
            }
        }
        if self.zero_temp {
            pairs.push(("beta".into(), "inf".into()));
        }
        if self.survival {
            pairs.push(("survival".into(), "true".into()));
        }
        if self.paper_literal {
            pairs.push(("paper-literal".into(), "true".into()));
        }
        pairs
    }
}

/// Runs a parsed spec and writes its output. Returns the bytes written.
pub fn execute(spec: &RunSpec) -> Result<usize, Error> {
    let cfg = spec.model_config()?;
    for note in cfg.baths().diagnostics() {
        log::warn!("{note}");
    }
    let q = spec.quadrature()?;
    let grid = spec.tau_grid()?;
    let write = |report: Report<'_>| {
        emit(&report, spec, spec.format, &spec.out).map_err(|e| Error::Output(e.to_string()))
    };
    match spec.command {
        Command::Curve => {
            let curve = if spec.survival {
                compute_curve_with_survival(&cfg, &grid, &q)?
            } else {
                compute_curve(&cfg, &grid, &q)?
            };
            write(Report::Curve(&curve))
        }
        Command::Sweep => {
            let (param, values) = match (spec.sweep_param, &spec.sweep_values) {
                (Some(p), Some(v)) => (p, v),
                _ => {
                    return Err(Error::Configuration(
                        "sweep needs sweep-param and sweep-values".into(),
                    ))
                }
            };
            let result = sweep(&cfg, param, values, &grid, &q)?;
            write(Report::Sweep(&result))
        }
        Command::Transitions => {
            let curve = compute_curve(&cfg, &grid, &q)?;
            let report = find_transitions_with(&curve, spec.refinement)?;
            write(Report::Transitions(&curve, &report))
        }
    }
}

fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var("ZENO_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!(
                "ZENO_THREADS must be a positive integer, got `{v}`"
            )),
        },
    }
}

/// Parses arguments, runs, and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };

    let file_text = match &cli.config {
        None => None,
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => Some(text),
            Err(e) => {
                eprintln!("error: cannot read config {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
    };
    let spec = match parse_config(file_text.as_deref(), &cli.overrides()) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let threads = match thread_cap() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return EXIT_RUNTIME;
        }
    };
    match pool.install(|| execute(&spec)) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}
