//! Command-line front end for the spin-star dephasing channel.
//!
//! Runs are driven by a JSON config file (see the crate README for the
//! schema); a few flags override file values so experiments stay
//! reproducible from the config alone.

mod config;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use config::{resolve_seed, BathSpec, OutputFormat, RunConfig};
use output::LimitsDiagnostics;
use spinstar::{
    capacity_point, coherence_factor, ensemble_average, equal_coupling_coherence,
    quantum_capacity_from_ratio, recurrence_period, short_time_flatness_check, EnsembleConfig,
};

/// Error with the exit status it should produce: 2 for bad usage or
/// configs, 1 for failures during the run.
#[derive(Debug)]
pub struct CliError {
    message: String,
    exit_code: u8,
}

impl CliError {
    pub fn usage(message: String) -> Self {
        Self {
            message,
            exit_code: 2,
        }
    }

    pub fn run(message: String) -> Self {
        Self {
            message,
            exit_code: 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "spinstar",
    version,
    about = "Capacities of the Ising spin-star dephasing channel",
    after_help = "Config seed can be overridden by --seed or the SPINSTAR_SEED environment variable."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep all capacities over a time grid for one channel
    Sweep(RunArgs),
    /// Average capacities over an ensemble of random baths
    Ensemble(RunArgs),
    /// Sweep plus recurrence-period and limiting-case diagnostics
    Limits(RunArgs),
    /// Cross-check every analytic result against its brute-force oracle
    Verify {
        /// Largest bath size for the 2^N enumeration checks (<= 20)
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Override the config seed (random baths only)
    #[arg(long)]
    seed: Option<u64>,
    /// Override the output path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the output format: csv or json
    #[arg(long)]
    format: Option<String>,
    /// Worker threads; results are identical for any worker count
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => with_pool(&args, |cfg, seed| run_sweep(cfg, seed, "sweep")),
        Command::Ensemble(args) => with_pool(&args, run_ensemble),
        Command::Limits(args) => with_pool(&args, run_limits),
        Command::Verify { max_n } => verify::run_verify(max_n),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit_code)
        }
    }
}

/// Loads the config, applies flag overrides, and runs `f` inside a
/// thread pool of the requested size.
fn with_pool(
    args: &RunArgs,
    f: impl FnOnce(&RunConfig, Option<u64>) -> Result<(), CliError> + Send,
) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(out) = &args.out {
        cfg.output.path = out.clone();
    }
    if let Some(format) = &args.format {
        cfg.output.format = match format.as_str() {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => return Err(CliError::usage(format!("unknown format {other:?}"))),
        };
    }
    let seed = resolve_seed(args.seed)?;
    match args.workers {
        None => f(&cfg, seed),
        Some(workers) => {
            if workers == 0 {
                return Err(CliError::usage("--workers must be >= 1".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| CliError::run(format!("thread pool: {e}")))?;
            pool.install(|| f(&cfg, seed))
        }
    }
}

fn run_sweep(cfg: &RunConfig, seed: Option<u64>, mode: &str) -> Result<(), CliError> {
    let model = cfg.build_model(seed)?;
    let grid = cfg.time_grid();
    let points = grid
        .par_iter()
        .map(|&t| capacity_point(&model, t, &cfg.theta_grid))
        .collect::<spinstar::Result<Vec<_>>>()
        .map_err(|e| CliError::run(e.to_string()))?;
    output::write_sweep(
        &cfg.output.path,
        cfg.output.format,
        cfg.alpha,
        cfg.beta,
        mode,
        &points,
        &cfg.theta_grid,
    )
}

fn run_ensemble(cfg: &RunConfig, seed: Option<u64>) -> Result<(), CliError> {
    let BathSpec::Random {
        n,
        seed: cfg_seed,
        samples,
    } = cfg.bath
    else {
        return Err(CliError::usage(
            "ensemble mode needs a bath of type \"random\"".into(),
        ));
    };
    let ensemble = EnsembleConfig {
        n_bath: n,
        n_samples: samples,
        seed: seed.unwrap_or(cfg_seed),
        beta: cfg.beta,
        alpha: cfg.alpha,
        time_grid: cfg.time_grid(),
    };
    let result = ensemble_average(&ensemble).map_err(|e| CliError::run(e.to_string()))?;
    output::write_ensemble(
        &cfg.output.path,
        cfg.output.format,
        cfg.alpha,
        cfg.beta,
        n,
        samples,
        &result,
    )
}

fn run_limits(cfg: &RunConfig, seed: Option<u64>) -> Result<(), CliError> {
    run_sweep(cfg, seed, "limits")?;

    let model = cfg.build_model(seed)?;
    let grid = cfg.time_grid();
    let q_values: Vec<f64> = grid
        .iter()
        .map(|&t| {
            coherence_factor(&model, t)
                .and_then(|cf| quantum_capacity_from_ratio(cf.ratio_abs()))
                .map_err(|e| CliError::run(e.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let min_q = q_values.iter().copied().fold(f64::INFINITY, f64::min);
    let max_q = q_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // period and closed-form diagnostics only make sense for equal baths
    let (mut period, mut periodicity_residual, mut closed_form_residual) = (None, None, None);
    if let BathSpec::Equal { n, g, omega } = cfg.bath {
        if g != 0.0 {
            let t_p = recurrence_period(g, cfg.alpha).map_err(|e| CliError::run(e.to_string()))?;
            let mut res_period = 0.0_f64;
            let mut res_closed = 0.0_f64;
            for (&t, &q) in grid.iter().zip(&q_values) {
                let shifted = coherence_factor(&model, t + t_p)
                    .and_then(|cf| quantum_capacity_from_ratio(cf.ratio_abs()))
                    .map_err(|e| CliError::run(e.to_string()))?;
                res_period = res_period.max((q - shifted).abs());
                let closed = equal_coupling_coherence(n, g, omega, cfg.alpha, cfg.beta, t)
                    .map_err(|e| CliError::run(e.to_string()))?;
                let general =
                    coherence_factor(&model, t).map_err(|e| CliError::run(e.to_string()))?;
                res_closed = res_closed.max((closed.ratio_abs() - general.ratio_abs()).abs());
            }
            period = Some(t_p);
            periodicity_residual = Some(res_period);
            closed_form_residual = Some(res_closed);
        }
    }

    let epsilons = [1e-4 / cfg.alpha, 2e-4 / cfg.alpha, 1e-3 / cfg.alpha];
    let deficits = short_time_flatness_check(&model, &epsilons)
        .map_err(|e| CliError::run(e.to_string()))?
        .into_iter()
        .map(|(eps, d)| (cfg.alpha * eps, d))
        .collect();

    output::print_diagnostics(&LimitsDiagnostics {
        recurrence_period: period,
        periodicity_residual,
        closed_form_residual,
        min_q,
        max_q,
        short_time_deficits: deficits,
    })
}
