//! Run, sweep and predict drivers behind the command-line front end.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cli::config::{PredictorKind, RunConfig, SweepAxis, SweepConfig};
use crate::diagnostics::{fit_growth_rate, saturation_stats, GrowthFit, SaturationStats};
use crate::equilibria::EquilibriumKind;
use crate::error::{HmfError, Result};
use crate::integrator::{evolve, Trajectory};
use crate::linstab::{exact_growth_rate, gamma_bicluster, gamma_quiet_start};
use crate::model::Observables;
use crate::quad;
use crate::rmt::{moments_gaussian, moments_uniform, rmt_prediction};
use crate::vlasov::{dispersion_roots, fourier_coefficient, vlasov_growth_rate, DensityProfile};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything a single run produces.
#[derive(Debug)]
pub struct RunOutcome {
    pub summary: RunSummary,
    pub trajectory: Trajectory,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub version: String,
    pub config: RunConfig,
    pub fit: Option<GrowthFit>,
    pub no_exponential_phase: bool,
    pub predictors: PredictorReport,
    pub conservation: ConservationReport,
    pub saturation: Option<SaturationStats>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PredictorReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactPrediction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rmt: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vlasov: Option<VlasovPrediction>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExactPrediction {
    pub gamma: f64,
    pub lambda_sq: f64,
    /// Closed-form rate when the equilibrium kind has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct VlasovPrediction {
    pub gamma: f64,
    pub two_pi_n2_abs: f64,
    pub omega_sq_plus: f64,
    pub omega_sq_minus: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConservationReport {
    pub u_initial: f64,
    pub max_rel_energy_drift: f64,
    pub max_abs_momentum_drift: f64,
}

/// Build, perturb, evolve, fit and diagnose one configured run.
pub fn run_simulation(cfg: &RunConfig) -> Result<RunOutcome> {
    let resolved = cfg.resolve();
    resolved.integrator.validate()?;
    let equilibrium = resolved.equilibrium.build()?;
    let pert = resolved.resolved_perturbation();
    let initial = crate::equilibria::perturb(&equilibrium, &pert)?;
    let trajectory = evolve(&initial, &resolved.integrator)?;

    let fit = match fit_growth_rate(&trajectory, None) {
        Ok(f) => Some(f),
        Err(HmfError::NoExponentialPhase) => None,
        Err(e) => return Err(e),
    };

    let conservation = conservation_report(&trajectory.samples);
    let saturation = saturation_stats(&trajectory, resolved.integrator.t_end / 2.0).ok();

    let mut predictors = PredictorReport::default();
    for kind in &resolved.predictors {
        match kind {
            PredictorKind::Exact => {
                let r = exact_growth_rate(&equilibrium);
                predictors.exact = Some(ExactPrediction {
                    gamma: r.gamma,
                    lambda_sq: r.lambda_sq,
                    closed_form: closed_form_rate(&resolved.equilibrium.kind, resolved.equilibrium.n),
                });
            }
            PredictorKind::Rmt => {
                predictors.rmt = Some(rmt_predictor_json(
                    &resolved.equilibrium.kind,
                    resolved.equilibrium.n,
                ));
            }
            PredictorKind::Vlasov => {
                let profile = density_for_kind(&resolved.equilibrium.kind)?;
                predictors.vlasov = Some(vlasov_prediction(&profile)?);
            }
        }
    }

    Ok(RunOutcome {
        summary: RunSummary {
            version: VERSION.to_string(),
            config: resolved,
            fit,
            no_exponential_phase: fit.is_none(),
            predictors,
            conservation,
            saturation,
        },
        trajectory,
    })
}

fn conservation_report(samples: &[Observables]) -> ConservationReport {
    let u0 = samples[0].u;
    let p0 = samples[0].p_total;
    let scale = u0.abs().max(f64::MIN_POSITIVE);
    let mut du = 0.0f64;
    let mut dp = 0.0f64;
    for o in samples {
        du = du.max((o.u - u0).abs() / scale);
        dp = dp.max((o.p_total - p0).abs());
    }
    ConservationReport {
        u_initial: u0,
        max_rel_energy_drift: du,
        max_abs_momentum_drift: dp,
    }
}

fn closed_form_rate(kind: &EquilibriumKind, n: usize) -> Option<f64> {
    match kind {
        EquilibriumKind::QuietStart => Some(gamma_quiet_start()),
        EquilibriumKind::Bicluster { delta_theta } => gamma_bicluster(n, *delta_theta).ok(),
        _ => None,
    }
}

fn rmt_predictor_json(kind: &EquilibriumKind, n: usize) -> serde_json::Value {
    let moments = match kind {
        EquilibriumKind::RandomUniformBicluster { delta_theta } => moments_uniform(*delta_theta),
        EquilibriumKind::RandomGaussianBicluster { sigma_theta } => moments_gaussian(*sigma_theta),
        other => {
            return json!({
                "applicable": false,
                "reason": format!("no random-matrix model for {other:?}"),
            })
        }
    };
    match moments.and_then(|m| rmt_prediction(n, &m).map(|p| (m, p))) {
        Ok((m, p)) => json!({
            "applicable": true,
            "mu": m.mu,
            "sigma_sq": m.sigma_sq,
            "lambda_sq_mean": p.lambda_sq_mean,
            "lambda_sq_var": p.lambda_sq_var,
            "gamma_mean": p.gamma_mean,
        }),
        Err(e) => json!({
            "applicable": false,
            "reason": e.to_string(),
        }),
    }
}

/// Continuum density matching an equilibrium kind.
pub fn density_for_kind(kind: &EquilibriumKind) -> Result<DensityProfile> {
    match kind {
        EquilibriumKind::QuietStart => Ok(DensityProfile::uniform()),
        EquilibriumKind::Bicluster { delta_theta }
        | EquilibriumKind::RandomUniformBicluster { delta_theta } => {
            DensityProfile::bicluster(*delta_theta)
        }
        EquilibriumKind::RandomGaussianBicluster { sigma_theta } => {
            paired_truncated_gaussian(*sigma_theta)
        }
        EquilibriumKind::CustomSymmetric { density } => {
            let k = crate::equilibria::parse_cos_density(density)?;
            DensityProfile::harmonic(k, 1.0)
        }
    }
}

/// Antipodal pair of Gaussians of scale sigma truncated to +-pi/2 around
/// each center; the continuum density of the random Gaussian bicluster.
fn paired_truncated_gaussian(sigma_theta: f64) -> Result<DensityProfile> {
    if !(sigma_theta > 0.0 && sigma_theta.is_finite()) {
        return Err(HmfError::InvalidInput(format!(
            "sigma_theta must be positive, got {sigma_theta}"
        )));
    }
    let st = sigma_theta;
    let kernel = move |t: f64| (-t * t / (2.0 * st * st)).exp();
    let norm = quad::integrate(&kernel, -FRAC_PI_2, FRAC_PI_2, 1e-13)?;
    let f = move |theta: f64| {
        let d0 = crate::model::wrap_angle(theta);
        let dpi = crate::model::wrap_angle(theta - PI);
        let mut v = 0.0;
        if d0.abs() <= FRAC_PI_2 {
            v += kernel(d0);
        }
        if dpi.abs() <= FRAC_PI_2 {
            v += kernel(dpi);
        }
        v / (2.0 * norm)
    };
    DensityProfile::analytic(f, vec![-PI, -FRAC_PI_2, FRAC_PI_2, PI])
}

fn vlasov_prediction(profile: &DensityProfile) -> Result<VlasovPrediction> {
    let roots = dispersion_roots(profile)?;
    let n2 = fourier_coefficient(profile, 2)?.norm();
    Ok(VlasovPrediction {
        gamma: vlasov_growth_rate(profile)?,
        two_pi_n2_abs: TAU * n2,
        omega_sq_plus: roots.omega_sq_plus,
        omega_sq_minus: roots.omega_sq_minus,
    })
}

// --- file output ------------------------------------------------------

/// Write the time-series CSV: header `t,mx,my,m,u,p_total`, 17
/// significant digits per value so every column round-trips exactly.
pub fn write_timeseries(path: &Path, samples: &[Observables]) -> Result<()> {
    let mut out = Vec::with_capacity(64 * (samples.len() + 1));
    writeln!(out, "t,mx,my,m,u,p_total")?;
    for o in samples {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            o.t, o.mx, o.my, o.m, o.u, o.p_total
        )?;
    }
    fs::write(path, out)?;
    Ok(())
}

/// Parse a time-series CSV written by [`write_timeseries`].
pub fn parse_timeseries(text: &str) -> Result<Vec<Observables>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| HmfError::Config("empty time-series file".into()))?;
    if header.trim() != "t,mx,my,m,u,p_total" {
        return Err(HmfError::Config(format!("unexpected header '{header}'")));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| HmfError::Config(format!("row {}: {e}", i + 2)))?;
        if cols.len() != 6 {
            return Err(HmfError::Config(format!(
                "row {}: expected 6 columns, got {}",
                i + 2,
                cols.len()
            )));
        }
        out.push(Observables {
            t: cols[0],
            mx: cols[1],
            my: cols[2],
            m: cols[3],
            u: cols[4],
            p_total: cols[5],
        });
    }
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| HmfError::Config(format!("serialization: {e}")))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Run a config and write its output files. Returns the summary.
pub fn cmd_simulate(cfg: &RunConfig, out_dir: &Path) -> Result<RunSummary> {
    cfg.validate()?;
    let outcome = run_simulation(cfg)?;
    fs::create_dir_all(out_dir)?;
    let ts_path = resolve_out(out_dir, cfg.outputs.timeseries.as_deref(), "timeseries.csv");
    let sm_path = resolve_out(out_dir, cfg.outputs.summary.as_deref(), "summary.json");
    write_timeseries(&ts_path, &outcome.trajectory.samples)?;
    write_json(&sm_path, &outcome.summary)?;
    Ok(outcome.summary)
}

fn resolve_out(dir: &Path, configured: Option<&Path>, default_name: &str) -> PathBuf {
    match configured {
        Some(p) if p.is_absolute() => p.to_path_buf(),
        Some(p) => dir.join(p),
        None => dir.join(default_name),
    }
}

// --- sweep ------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSummary {
    pub version: String,
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    /// Seed-averaged fitted rate; absent when every cell failed or rows
    /// are predictor-only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_stderr: Option<f64>,
    pub predictors: serde_json::Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<SweepCell>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepCell {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conservation: Option<ConservationReport>,
}

/// Run every (value, seed) cell, aggregate per value, and evaluate the
/// theory curves alongside. Cells run in parallel up to `jobs`; output
/// order is fixed by the sorted axis values, never by completion order.
pub fn run_sweep(cfg: &SweepConfig, jobs: usize) -> Result<SweepSummary> {
    cfg.validate()?;
    let mut values = cfg.values.clone();
    values.sort_by(f64::total_cmp);
    let seeds = cfg.effective_seeds();

    let rows: Vec<SweepRow> = if cfg.axis == SweepAxis::T {
        values
            .iter()
            .map(|&v| {
                let p = crate::vlasov::warm_waterbag_growth_rate(v);
                let predictors = match p {
                    Ok(w) => json!({ "warm_gamma": w.gamma, "linearly_stable": w.linearly_stable }),
                    Err(e) => json!({ "error": e.to_string() }),
                };
                SweepRow {
                    value: v,
                    gamma_mean: None,
                    gamma_stderr: None,
                    predictors,
                    cells: Vec::new(),
                }
            })
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| HmfError::Config(format!("thread pool: {e}")))?;
        let tasks: Vec<(usize, f64, u64)> = values
            .iter()
            .enumerate()
            .flat_map(|(i, &v)| seeds.iter().map(move |&s| (i, v, s)))
            .collect();
        let cell_results: Vec<(usize, SweepCell)> = pool.install(|| {
            use rayon::prelude::*;
            tasks
                .par_iter()
                .map(|&(i, v, s)| {
                    let cell = match cfg
                        .cell_config(v, s)
                        .and_then(|c| run_simulation(&c))
                    {
                        Ok(outcome) => SweepCell {
                            seed: s,
                            gamma: outcome.summary.fit.map(|f| f.gamma),
                            error: outcome
                                .summary
                                .fit
                                .is_none()
                                .then(|| "no exponential phase".into()),
                            conservation: Some(outcome.summary.conservation),
                        },
                        Err(e) => SweepCell {
                            seed: s,
                            gamma: None,
                            error: Some(e.to_string()),
                            conservation: None,
                        },
                    };
                    (i, cell)
                })
                .collect()
        });

        let mut per_value: Vec<Vec<SweepCell>> = vec![Vec::new(); values.len()];
        for (i, cell) in cell_results {
            per_value[i].push(cell);
        }
        for cells in &mut per_value {
            cells.sort_by_key(|c| {
                seeds.iter().position(|&s| s == c.seed).unwrap_or(usize::MAX)
            });
        }

        values
            .iter()
            .zip(per_value)
            .map(|(&v, cells)| {
                let fits: Vec<f64> = cells.iter().filter_map(|c| c.gamma).collect();
                let (mean, stderr) = aggregate(&fits);
                SweepRow {
                    value: v,
                    gamma_mean: mean,
                    gamma_stderr: stderr,
                    predictors: predictor_curves(cfg, v),
                    cells,
                }
            })
            .collect()
    };

    Ok(SweepSummary {
        version: VERSION.to_string(),
        config: cfg.clone(),
        rows,
    })
}

fn aggregate(fits: &[f64]) -> (Option<f64>, Option<f64>) {
    if fits.is_empty() {
        return (None, None);
    }
    let n = fits.len() as f64;
    let mean = fits.iter().sum::<f64>() / n;
    if fits.len() < 2 {
        return (Some(mean), None);
    }
    let var = fits.iter().map(|g| (g - mean) * (g - mean)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some((var / n).sqrt()))
}

/// Theory curves evaluated at one axis value.
fn predictor_curves(cfg: &SweepConfig, value: f64) -> serde_json::Value {
    let n = match cfg.axis {
        SweepAxis::N => value as usize,
        _ => cfg.base.equilibrium.n,
    };
    let mut out = serde_json::Map::new();
    let kind_at = |kind: &EquilibriumKind| -> EquilibriumKind {
        let mut k = kind.clone();
        match (&mut k, cfg.axis) {
            (EquilibriumKind::Bicluster { delta_theta }, SweepAxis::DeltaTheta)
            | (EquilibriumKind::RandomUniformBicluster { delta_theta }, SweepAxis::DeltaTheta) => {
                *delta_theta = value
            }
            (EquilibriumKind::RandomGaussianBicluster { sigma_theta }, SweepAxis::SigmaTheta) => {
                *sigma_theta = value
            }
            _ => {}
        }
        k
    };
    let kind = kind_at(&cfg.base.equilibrium.kind);

    if let Some(g) = closed_form_rate(&kind, n) {
        out.insert("finite_n_gamma".into(), json!(g));
    }
    if let EquilibriumKind::Bicluster { delta_theta }
    | EquilibriumKind::RandomUniformBicluster { delta_theta } = kind
    {
        if let Ok(g) = gamma_bicluster(n, delta_theta) {
            out.insert("finite_n_gamma".into(), json!(g));
        }
    }
    out.insert("rmt".into(), rmt_predictor_json(&kind, n));
    if let Ok(profile) = density_for_kind(&kind) {
        if let Ok(v) = vlasov_prediction(&profile) {
            out.insert("vlasov_gamma".into(), json!(v.gamma));
        }
    }
    serde_json::Value::Object(out)
}

/// Run a sweep and write its summary file.
pub fn cmd_sweep(cfg: &SweepConfig, out_dir: &Path, jobs: usize) -> Result<SweepSummary> {
    let summary = run_sweep(cfg, jobs)?;
    fs::create_dir_all(out_dir)?;
    let path = resolve_out(out_dir, cfg.outputs.summary.as_deref(), "sweep.json");
    write_json(&path, &summary)?;
    Ok(summary)
}

// --- predict ----------------------------------------------------------

/// Parameter set for `predict`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PredictParams {
    pub n: Option<usize>,
    pub delta_theta: Option<f64>,
    pub sigma_theta: Option<f64>,
    pub temperature: Option<f64>,
}

/// Evaluate one theory engine without running a simulation; returns the
/// record printed on standard output.
pub fn cmd_predict(kind: &str, params: &PredictParams) -> Result<serde_json::Value> {
    match kind {
        "exact" => {
            let n = params.n.unwrap_or(1000);
            let (spec_kind, state) = match params.delta_theta {
                Some(dt) => (
                    EquilibriumKind::Bicluster { delta_theta: dt },
                    crate::equilibria::bicluster(n, dt)?,
                ),
                None => (EquilibriumKind::QuietStart, crate::equilibria::quiet_start(n)?),
            };
            let r = exact_growth_rate(&state);
            Ok(json!({
                "kind": "exact",
                "equilibrium": spec_kind,
                "n": n,
                "lambda_sq": r.lambda_sq,
                "gamma": r.gamma,
                "closed_form": closed_form_rate(&spec_kind, n),
            }))
        }
        "rmt" => {
            let n = params.n.unwrap_or(1000);
            let moments = match (params.delta_theta, params.sigma_theta) {
                (Some(dt), None) => moments_uniform(dt)?,
                (None, Some(st)) => moments_gaussian(st)?,
                _ => {
                    return Err(HmfError::Config(
                        "predict rmt needs exactly one of --delta-theta / --sigma-theta".into(),
                    ))
                }
            };
            let p = rmt_prediction(n, &moments)?;
            Ok(json!({
                "kind": "rmt",
                "n": n,
                "mu": moments.mu,
                "sigma_sq": moments.sigma_sq,
                "lambda_sq_mean": p.lambda_sq_mean,
                "lambda_sq_var": p.lambda_sq_var,
                "gamma_mean": p.gamma_mean,
            }))
        }
        "vlasov" => {
            let profile = match params.delta_theta {
                Some(dt) => DensityProfile::bicluster(dt)?,
                None => DensityProfile::uniform(),
            };
            let v = vlasov_prediction(&profile)?;
            Ok(json!({
                "kind": "vlasov",
                "delta_theta": params.delta_theta,
                "two_pi_n2_abs": v.two_pi_n2_abs,
                "omega_sq_plus": v.omega_sq_plus,
                "omega_sq_minus": v.omega_sq_minus,
                "gamma": v.gamma,
            }))
        }
        "warm" => {
            let t = params.temperature.ok_or_else(|| {
                HmfError::Config("predict warm needs --temperature".into())
            })?;
            let w = crate::vlasov::warm_waterbag_growth_rate(t)?;
            Ok(json!({
                "kind": "warm",
                "temperature": t,
                "gamma": w.gamma,
                "linearly_stable": w.linearly_stable,
            }))
        }
        other => Err(HmfError::Config(format!(
            "unknown predictor '{other}' (expected exact | rmt | vlasov | warm)"
        ))),
    }
}
