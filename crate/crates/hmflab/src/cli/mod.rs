//! Command-line front end: `simulate`, `sweep`, `predict`, `version`.
//!
//! Exit codes: 0 success, 2 config error, 3 numerical failure, 4 i/o
//! error. Error details go to the diagnostic stream.

pub mod config;
pub mod driver;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{HmfError, Result};
pub use config::{OutputSpec, PredictorKind, RunConfig, SweepAxis, SweepConfig};
pub use driver::{
    cmd_predict, cmd_simulate, cmd_sweep, parse_timeseries, run_simulation, run_sweep,
    write_timeseries, PredictParams, RunSummary, SweepSummary,
};

#[derive(Parser, Debug)]
#[command(name = "hmflab", disable_version_flag = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one configured simulation and write time series + summary.
    Simulate(SimulateArgs),
    /// Run a parameter sweep with per-cell seeds and write one summary.
    Sweep(SweepArgs),
    /// Evaluate a theory engine without simulating.
    Predict(PredictArgs),
    /// Print the artifact version.
    Version,
}

#[derive(Args, Debug)]
struct CommonOverrides {
    /// JSON config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: current directory).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Base RNG seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Timestep override.
    #[arg(long)]
    dt: Option<f64>,
    /// Final time override.
    #[arg(long)]
    t_end: Option<f64>,
    /// Particle count override.
    #[arg(long)]
    n: Option<usize>,
    /// Cluster half-width override.
    #[arg(long)]
    delta_theta: Option<f64>,
    /// Gaussian scale override.
    #[arg(long)]
    sigma_theta: Option<f64>,
    /// Perturbation amplitude override.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Parallel sweep cells (default: HMFLAB_JOBS, then available
    /// cores); accepted but unused by single runs.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonOverrides,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonOverrides,
}

#[derive(Args, Debug)]
struct PredictArgs {
    /// Theory engine: exact | rmt | vlasov | warm.
    kind: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta_theta: Option<f64>,
    #[arg(long)]
    sigma_theta: Option<f64>,
    #[arg(long)]
    temperature: Option<f64>,
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help; anything else is a usage/config error
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &HmfError) -> i32 {
    match e {
        HmfError::NumericalBlowup { .. }
        | HmfError::NonConvergence(_)
        | HmfError::QuadratureFailure(_) => 3,
        HmfError::Io(_) => 4,
        _ => 2,
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Version => {
            println!("hmflab {}", driver::VERSION);
            Ok(())
        }
        Command::Predict(args) => {
            let record = cmd_predict(
                &args.kind,
                &PredictParams {
                    n: args.n,
                    delta_theta: args.delta_theta,
                    sigma_theta: args.sigma_theta,
                    temperature: args.temperature,
                },
            )?;
            println!("{}", serde_json::to_string_pretty(&record).unwrap());
            Ok(())
        }
        Command::Simulate(args) => {
            let mut cfg = load_run_config(&args.common)?;
            apply_overrides(&mut cfg, &args.common)?;
            let summary = cmd_simulate(&cfg, &args.common.out)?;
            match summary.fit {
                Some(fit) => println!(
                    "gamma_fit = {:.6} +- {:.6} on window [{:.2}, {:.2}]",
                    fit.gamma, fit.stderr, fit.window.0, fit.window.1
                ),
                None => println!("no exponential phase"),
            }
            Ok(())
        }
        Command::Sweep(args) => {
            let path = args.common.config.as_ref().ok_or_else(|| {
                HmfError::Config("sweep requires --config <path>".into())
            })?;
            let text = std::fs::read_to_string(path)?;
            let mut cfg: SweepConfig = serde_json::from_str(&text)
                .map_err(|e| HmfError::Config(format!("{}: {e}", path.display())))?;
            apply_overrides(&mut cfg.base, &args.common)?;
            if let Some(seed) = args.common.seed {
                // --seed replaces the seed list with a SplitMix64-derived
                // ensemble of the same size (or 1 if none was configured)
                let count = cfg.seeds.len().max(1);
                cfg.seeds = crate::rng::expand_seeds(seed, count);
            }
            let jobs = args
                .common
                .jobs
                .or_else(|| {
                    std::env::var("HMFLAB_JOBS")
                        .ok()
                        .and_then(|v| v.parse().ok())
                })
                .unwrap_or_else(|| {
                    std::thread::available_parallelism()
                        .map(|v| v.get())
                        .unwrap_or(1)
                });
            let summary = cmd_sweep(&cfg, &args.common.out, jobs)?;
            println!("{} rows written", summary.rows.len());
            Ok(())
        }
    }
}

fn load_run_config(common: &CommonOverrides) -> Result<RunConfig> {
    match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text)
                .map_err(|e| HmfError::Config(format!("{}: {e}", path.display())))
        }
        None => {
            // flag-only operation starts from the stock quiet-start run
            Ok(serde_json::from_value(serde_json::json!({
                "equilibrium": {"kind": "quiet_start", "n": 1000, "seed": 1},
                "integrator": {"dt": 0.05, "t_end": 40.0},
                "predictors": ["exact", "vlasov"]
            }))
            .expect("stock config"))
        }
    }
}

fn apply_overrides(cfg: &mut RunConfig, common: &CommonOverrides) -> Result<()> {
    use crate::equilibria::EquilibriumKind;

    if let Some(seed) = common.seed {
        cfg.equilibrium.seed = seed;
        cfg.perturbation = None; // re-derive from the new seed
    }
    if let Some(dt) = common.dt {
        cfg.integrator.dt = dt;
    }
    if let Some(t_end) = common.t_end {
        cfg.integrator.t_end = t_end;
    }
    if let Some(n) = common.n {
        cfg.equilibrium.n = n;
    }
    if let Some(dt) = common.delta_theta {
        match &mut cfg.equilibrium.kind {
            EquilibriumKind::Bicluster { delta_theta }
            | EquilibriumKind::RandomUniformBicluster { delta_theta } => *delta_theta = dt,
            EquilibriumKind::QuietStart => {
                cfg.equilibrium.kind = EquilibriumKind::Bicluster { delta_theta: dt }
            }
            other => {
                return Err(HmfError::Config(format!(
                    "--delta-theta does not apply to {other:?}"
                )))
            }
        }
    }
    if let Some(st) = common.sigma_theta {
        match &mut cfg.equilibrium.kind {
            EquilibriumKind::RandomGaussianBicluster { sigma_theta } => *sigma_theta = st,
            other => {
                return Err(HmfError::Config(format!(
                    "--sigma-theta does not apply to {other:?}"
                )))
            }
        }
    }
    if let Some(eps) = common.epsilon {
        let seed = cfg.resolved_perturbation().seed;
        cfg.perturbation = Some(crate::equilibria::PerturbationSpec { epsilon: eps, seed });
    }
    Ok(())
}
