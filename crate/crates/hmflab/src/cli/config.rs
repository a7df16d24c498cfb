//! Run and sweep configuration documents (single JSON files; CLI flags
//! override individual fields).

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::equilibria::{default_epsilon, EquilibriumKind, EquilibriumSpec, PerturbationSpec};
use crate::error::{HmfError, Result};
use crate::integrator::IntegratorConfig;
use crate::rng::splitmix64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub equilibrium: EquilibriumSpec,
    /// Omitted: amplitude 0.01 * 2 pi / n with a seed derived from the
    /// equilibrium seed by one SplitMix64 step.
    #[serde(default)]
    pub perturbation: Option<PerturbationSpec>,
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub outputs: OutputSpec,
    #[serde(default)]
    pub predictors: Vec<PredictorKind>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub timeseries: Option<PathBuf>,
    #[serde(default)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictorKind {
    Exact,
    Rmt,
    Vlasov,
}

impl RunConfig {
    /// Fill in the derived perturbation so the echoed config is complete.
    pub fn resolve(&self) -> Self {
        let mut out = self.clone();
        out.perturbation = Some(self.resolved_perturbation());
        out
    }

    pub fn resolved_perturbation(&self) -> PerturbationSpec {
        self.perturbation.unwrap_or(PerturbationSpec {
            epsilon: default_epsilon(self.equilibrium.n),
            seed: splitmix64(self.equilibrium.seed),
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.integrator.validate()?;
        // surfaces bad equilibrium parameters before any file is written
        self.equilibrium.build().map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// Ensemble seeds; one simulation cell per (value, seed). Required
    /// for the random equilibrium kinds.
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub outputs: OutputSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    DeltaTheta,
    SigmaTheta,
    N,
    /// Waterbag temperature: predictor-only rows (warm initial states are
    /// analytic here, not simulated).
    T,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(HmfError::Config("sweep needs a non-empty values list".into()));
        }
        let random_kind = matches!(
            self.base.equilibrium.kind,
            EquilibriumKind::RandomUniformBicluster { .. }
                | EquilibriumKind::RandomGaussianBicluster { .. }
                | EquilibriumKind::CustomSymmetric { .. }
        );
        if random_kind && self.seeds.is_empty() {
            return Err(HmfError::Config(
                "random equilibria need a non-empty seeds list".into(),
            ));
        }
        if self.axis != SweepAxis::T {
            self.base.integrator.validate()?;
        }
        for &v in &self.values {
            if !v.is_finite() {
                return Err(HmfError::Config(format!("non-finite axis value {v}")));
            }
        }
        Ok(())
    }

    /// Seeds actually used: the configured list, or the base equilibrium
    /// seed alone for deterministic kinds.
    pub fn effective_seeds(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            vec![self.base.equilibrium.seed]
        } else {
            self.seeds.clone()
        }
    }

    /// Materialize the run config of one sweep cell.
    pub fn cell_config(&self, value: f64, seed: u64) -> Result<RunConfig> {
        let mut cfg = self.base.clone();
        cfg.equilibrium.seed = seed;
        cfg.perturbation = Some(PerturbationSpec {
            epsilon: self
                .base
                .perturbation
                .map(|p| p.epsilon)
                .unwrap_or_else(|| default_epsilon(self.base.equilibrium.n)),
            seed: splitmix64(seed),
        });
        match self.axis {
            SweepAxis::DeltaTheta => match &mut cfg.equilibrium.kind {
                EquilibriumKind::Bicluster { delta_theta }
                | EquilibriumKind::RandomUniformBicluster { delta_theta } => {
                    *delta_theta = value;
                }
                other => {
                    return Err(HmfError::Config(format!(
                        "axis delta_theta does not apply to {other:?}"
                    )))
                }
            },
            SweepAxis::SigmaTheta => match &mut cfg.equilibrium.kind {
                EquilibriumKind::RandomGaussianBicluster { sigma_theta } => {
                    *sigma_theta = value;
                }
                other => {
                    return Err(HmfError::Config(format!(
                        "axis sigma_theta does not apply to {other:?}"
                    )))
                }
            },
            SweepAxis::N => {
                if value < 2.0 || value.fract() != 0.0 {
                    return Err(HmfError::Config(format!(
                        "axis n needs integer values >= 2, got {value}"
                    )));
                }
                cfg.equilibrium.n = value as usize;
                if self.base.perturbation.is_none() {
                    cfg.perturbation = Some(PerturbationSpec {
                        epsilon: default_epsilon(cfg.equilibrium.n),
                        seed: splitmix64(seed),
                    });
                }
            }
            SweepAxis::T => {
                return Err(HmfError::Config(
                    "temperature rows are predictor-only; no cell config exists".into(),
                ))
            }
        }
        Ok(cfg)
    }
}
