//! `casediff` command line: `run`, `compare`, `sweep` and `validate`.
//!
//! Exit status is 0 on success, 1 for invalid configurations or failed
//! checks, 2 for I/O failures.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::comparative::{compare_instances, homophily_sweep, network_compare};
use crate::config::{ConfigError, RunConfig, RunSettings, SweepAxis};
use crate::dynamics::{simulate_with, threshold_sequence, DiffusionTrace, SimulationOptions};
use crate::error::{ComparativeError, DynamicsError, ModelError};
use crate::export;
use crate::model::{EvalMode, Instance, NetworkSpec};
use crate::rational::Rational;

#[derive(Debug, Parser)]
#[command(
    name = "casediff",
    version,
    about = "Diffusion of a new product among case-based decision makers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one configuration and write trace.csv and summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        opts: RunArgs,
    },
    /// Compare two configurations that share a population.
    Compare {
        /// Given twice: spec A, then spec B.
        #[arg(long, required = true)]
        config: Vec<PathBuf>,
        #[command(flatten)]
        opts: RunArgs,
    },
    /// Run the configuration once per value of its [sweep] axis.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        opts: RunArgs,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Parse and validate a configuration.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub horizon: Option<u64>,
    #[arg(long)]
    pub no_fast_forward: bool,
    #[arg(long)]
    pub mode: Option<EvalMode>,
    /// Output directory (default `out`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Comparative(#[from] ComparativeError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(ConfigError::Io { .. }) | CliError::Write { .. } => 2,
            _ => 1,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Messages go to `stdout` and `stderr`.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn settings(cfg: &RunConfig, opts: &RunArgs) -> RunSettings {
    let mut run = cfg.run;
    if let Some(h) = opts.horizon {
        run.horizon = h;
    }
    if opts.no_fast_forward {
        run.fast_forward = false;
    }
    if let Some(mode) = opts.mode {
        run.mode = mode;
    }
    run
}

fn out_dir(cfg: &RunConfig, opts: &RunArgs) -> PathBuf {
    opts.out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Write { path, source })
}

fn run_one(instance: &Instance, run: &RunSettings) -> Result<DiffusionTrace, CliError> {
    let options = SimulationOptions {
        horizon: run.horizon,
        fast_forward: run.fast_forward,
        mode: run.mode,
        reevaluate_adopters: false,
    };
    Ok(simulate_with(instance, &options)?.trace)
}

fn trace_csv(instance: &Instance, trace: &DiffusionTrace) -> Result<String, CliError> {
    let thresholds = match threshold_sequence(trace, instance) {
        Ok(h) => Some(h),
        Err(DynamicsError::ThresholdsUndefined) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(export::trace_csv(trace, thresholds.as_ref()))
}

fn execute(command: &Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Validate { config, seed } => {
            let cfg = RunConfig::from_path(config)?;
            let inst = cfg.instance(*seed)?;
            let _ = writeln!(
                stdout,
                "ok: {} individuals in {} groups, {:?} network",
                inst.size(),
                inst.group_count(),
                inst.network().kind()
            );
            Ok(())
        }
        Command::Run { config, opts } => {
            let cfg = RunConfig::from_path(config)?;
            let inst = cfg.instance(opts.seed)?;
            let run = settings(&cfg, opts);
            let trace = run_one(&inst, &run)?;
            let dir = out_dir(&cfg, opts);
            write_file(&dir, "trace.csv", &trace_csv(&inst, &trace)?)?;
            write_file(&dir, "summary.json", &export::summary_json(&trace))?;
            let _ = writeln!(stdout, "{}", export::summary_line(&trace));
            Ok(())
        }
        Command::Compare { config, opts } => {
            if config.len() != 2 {
                return Err(CliError::Usage(format!(
                    "compare takes exactly two --config files, got {}",
                    config.len()
                )));
            }
            let cfg_a = RunConfig::from_path(&config[0])?;
            let cfg_b = RunConfig::from_path(&config[1])?;
            let a = cfg_a.instance(opts.seed)?;
            let b = cfg_b.instance(opts.seed)?;
            let horizon = settings(&cfg_a, opts).horizon;
            let dir = out_dir(&cfg_a, opts);
            let both_ties = matches!(a.network(), NetworkSpec::GroupTies { .. })
                && matches!(b.network(), NetworkSpec::GroupTies { .. });
            if both_ties && a.network() != b.network() {
                if a.product() != b.product() || a.population() != b.population() {
                    return Err(CliError::Usage(
                        "network comparison needs configs that differ only in their ties".into(),
                    ));
                }
                let cmp = network_compare(&a, a.network(), b.network(), horizon)?;
                let json = serde_json::to_string_pretty(&export::network_comparison_json(&cmp))
                    .expect("json");
                write_file(&dir, "report.json", &(json + "\n"))?;
                let _ = writeln!(stdout, "{}", export::network_verdict(&cmp));
                return Ok(());
            }
            let report = compare_instances(&a, &b, horizon)?;
            let json = serde_json::to_string_pretty(&report.to_json()).expect("json");
            write_file(&dir, "report.json", &(json + "\n"))?;
            let _ = writeln!(stdout, "{}", report.verdict.label());
            for w in &report.diagnostics.warnings {
                let _ = writeln!(stdout, "warning: {w}");
            }
            Ok(())
        }
        Command::Sweep { config, opts, jobs } => sweep(config, opts, *jobs, stdout),
    }
}

fn sweep(
    config: &Path,
    opts: &RunArgs,
    jobs: usize,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let cfg = RunConfig::from_path(config)?;
    let spec = cfg
        .sweep
        .clone()
        .ok_or_else(|| CliError::Usage("config has no [sweep] section".into()))?;
    let base = cfg.instance(opts.seed)?;
    let run = settings(&cfg, opts);
    let instances: Vec<Instance> = spec
        .values
        .iter()
        .map(|v| spec.axis.apply(&base, v))
        .collect::<Result<_, _>>()?;

    let work = |inst: &Instance| run_one(inst, &run).and_then(|t| Ok((trace_csv(inst, &t)?, t)));
    let results: Vec<Result<(String, DiffusionTrace), CliError>> = if jobs == 1 {
        instances.iter().map(work).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
        pool.install(|| instances.par_iter().map(work).collect())
    };
    let results: Vec<(String, DiffusionTrace)> = results.into_iter().collect::<Result<_, _>>()?;

    if spec.axis == SweepAxis::Gamma && spec.values.windows(2).all(|w| w[0] < w[1]) {
        homophily_sweep(&base, &spec.values, run.horizon)?;
    }

    let dir = out_dir(&cfg, opts);
    for (i, (csv, trace)) in results.iter().enumerate() {
        write_file(&dir, &format!("sweep_{i}_trace.csv"), csv)?;
        write_file(
            &dir,
            &format!("sweep_{i}_summary.json"),
            &export::summary_json(trace),
        )?;
    }
    let mut order: Vec<usize> = (0..results.len()).collect();
    order.sort_by(|&x, &y| spec.values[x].cmp(&spec.values[y]).then(x.cmp(&y)));
    let rows: Vec<(Rational, DiffusionTrace)> = order
        .iter()
        .map(|&i| (spec.values[i].clone(), results[i].1.clone()))
        .collect();
    write_file(&dir, "sweep.csv", &export::sweep_csv(&rows))?;
    for (i, (_, trace)) in results.iter().enumerate() {
        let _ = writeln!(
            stdout,
            "{}={}: {}",
            spec.axis_name,
            crate::rational::format(&spec.values[i]),
            export::summary_line(trace)
        );
    }
    Ok(())
}
