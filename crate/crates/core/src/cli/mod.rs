//! The `aqo` command line.
//!
//! Settings come from an optional flat `key = value` file, then `--set`
//! overrides, then explicit flags. Tables go to CSV with one header row, fit
//! summaries to JSON.

mod commands;
mod config;

pub use commands::{execute, Report};
pub use config::{parse_kv, QChoice, RunConfig, MODEL_KEYS, RUN_KEYS};

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::{Error, Result};

const KEYS_HELP: &str = "\
Config keys (file, --set KEY=VALUE, or the matching flag):
  model          grover-plain | grover-noise-std | grover-noise-grv | tunneling |
                 multi-solution | mlevel-grover
  driver         grover | standard (grover-plain only)
  n, n_min, n_max, n_step
                 qubit counts; n sets both ends of the sweep
  epsilon        comma list of noise strengths
  q              rotated-target weight, or 'scan' for 0..=n
  target_scale   1, n, or a number equal to one of them
  barriers       comma list of tunneling barrier heights (random if unset)
  targets, p     multi-solution targets as bit strings, or p random ones
  energies, degeneracies
                 comma lists for mlevel-grover
  schedule       linear | optimal | grover-override
  s_points       grid size (gap: coarse grid, default 257; spectrum: 101; verify: 11)
  feasible_only  emit only q < q_eps rows in 'gap'
  levels         number of excited levels in 'spectrum'
  target_success success probability for T_comp (default 0.99)
  draws, tolerance
                 random instances per (model, n) and pass threshold for 'verify'
  seed, workers, out

Exit status: 0 success, 1 verification or fit failure, 2 usage error.";

#[derive(Parser, Debug)]
#[command(name = "aqo", version, about = "Spectral gaps and annealing times from exactly reduced Hamiltonians")]
#[command(after_long_help = KEYS_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Minimum gap per (n, epsilon, q) as CSV.
    Gap,
    /// Computational time per (n, epsilon) as CSV.
    Tcomp,
    /// Fitted scaling exponent per epsilon as JSON.
    Scaling,
    /// Compare reduced and brute-force spectra on random instances.
    Verify,
    /// Excitation energies E_l - E_0 along s as CSV.
    Spectrum,
}

#[derive(Args, Debug, Default, Clone)]
pub struct Options {
    /// Flat key=value config file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Model family (see the key list below).
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// grover | standard
    #[arg(long, global = true)]
    pub driver: Option<String>,
    /// Single qubit count.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    #[arg(long, global = true)]
    pub n_min: Option<u32>,
    #[arg(long, global = true)]
    pub n_max: Option<u32>,
    #[arg(long, global = true)]
    pub n_step: Option<u32>,
    /// Comma-separated noise strengths.
    #[arg(long, global = true)]
    pub epsilon: Option<String>,
    /// Target weight, or "scan".
    #[arg(long, global = true)]
    pub q: Option<String>,
    /// linear | optimal | grover-override
    #[arg(long, global = true)]
    pub schedule: Option<String>,
    #[arg(long, global = true)]
    pub s_points: Option<usize>,
    /// Keep only q below the noise cutoff.
    #[arg(long, global = true)]
    pub feasible_only: bool,
    /// Excited levels reported by `spectrum`.
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "AQO_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Override any config key.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long, global = true, hide = true)]
    pub inject_chi_sign_error: bool,
}

impl Options {
    /// Merged key map: file, then `--set`, then flags.
    pub fn merged(&self) -> Result<BTreeMap<String, String>> {
        let mut map = match &self.config {
            Some(path) => parse_kv(
                &std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?,
            )?,
            None => BTreeMap::new(),
        };
        for kv in &self.set {
            map.extend(parse_kv(kv)?);
        }
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        };
        put("model", self.model.clone());
        put("driver", self.driver.clone());
        put("n", self.n.map(|v| v.to_string()));
        put("n_min", self.n_min.map(|v| v.to_string()));
        put("n_max", self.n_max.map(|v| v.to_string()));
        put("n_step", self.n_step.map(|v| v.to_string()));
        put("epsilon", self.epsilon.clone());
        put("q", self.q.clone());
        put("schedule", self.schedule.clone());
        put("s_points", self.s_points.map(|v| v.to_string()));
        put("feasible_only", self.feasible_only.then(|| "true".to_string()));
        put("levels", self.levels.map(|v| v.to_string()));
        put("seed", self.seed.map(|v| v.to_string()));
        put("workers", self.workers.map(|v| v.to_string()));
        put("out", self.out.as_ref().map(|p| p.display().to_string()));
        Ok(map)
    }
}

fn usage_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::InvalidInput(_) | Error::TooManyQubits { .. } | Error::DimensionMismatch { .. })
}

/// Writes through a temporary file in the target directory, so an
/// interrupted run never leaves a partial file behind.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn run_inner(cli: &Cli) -> Result<Report> {
    let config = RunConfig::from_map(&cli.options.merged()?)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let report = pool.install(|| execute(cli.command, &config, cli.options.inject_chi_sign_error))?;
    match &config.out {
        Some(path) => write_atomic(path, &report.body)?,
        None => print!("{}", report.body),
    }
    Ok(report)
}

/// Parses arguments, runs the command and maps the outcome to an exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run_inner(&cli) {
        Ok(report) if report.ok => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("aqo: {e}");
            ExitCode::from(if usage_error(&e) { 2 } else { 1 })
        }
    }
}
