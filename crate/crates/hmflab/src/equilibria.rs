//! Force-free zero-magnetization initial states and the small random
//! perturbation that seeds the instability.
//!
//! Every generator returns a cold state (all momenta exactly zero) whose
//! magnetization modulus is below 1e-13, so the state is an exact fixed
//! point of the dynamics: the mean-field force vanishes identically with
//! the magnetization.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{HmfError, Result};
use crate::model::ParticleState;
use crate::rng::{normal, particle_rng, uniform_01, uniform_symmetric};

/// Declarative description of an initial force-free configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSpec {
    #[serde(flatten)]
    pub kind: EquilibriumKind,
    pub n: usize,
    /// RNG seed; ignored by the deterministic kinds.
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquilibriumKind {
    /// Equal spacing on the circle, theta_k = 2 pi k / n.
    QuietStart,
    /// Two antipodal uniform clusters of half width `delta_theta`.
    Bicluster { delta_theta: f64 },
    /// n/2 angles i.i.d. uniform on [-delta_theta, delta_theta], the rest
    /// exact pi-shifts of the first half.
    RandomUniformBicluster { delta_theta: f64 },
    /// Same pairing with angles drawn from a Gaussian of scale
    /// `sigma_theta` truncated to [-pi/2, pi/2].
    RandomGaussianBicluster { sigma_theta: f64 },
    /// Pi-periodic named density sampled on a half period with antipodal
    /// pairing; `density` is an identifier like "cos4" for
    /// (1 + cos 4 theta) / 2 pi.
    CustomSymmetric { density: String },
}

impl EquilibriumSpec {
    pub fn build(&self) -> Result<ParticleState> {
        match &self.kind {
            EquilibriumKind::QuietStart => quiet_start(self.n),
            EquilibriumKind::Bicluster { delta_theta } => bicluster(self.n, *delta_theta),
            EquilibriumKind::RandomUniformBicluster { delta_theta } => {
                random_sym_bicluster(self.n, ClusterDist::Uniform(*delta_theta), self.seed)
            }
            EquilibriumKind::RandomGaussianBicluster { sigma_theta } => {
                random_sym_bicluster(self.n, ClusterDist::Gaussian(*sigma_theta), self.seed)
            }
            EquilibriumKind::CustomSymmetric { density } => {
                custom_symmetric(self.n, density, self.seed)
            }
        }
    }
}

/// Angular perturbation applied by [`perturb`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    /// Amplitude in radians; must satisfy epsilon <= 0.1 * 2 pi / n.
    pub epsilon: f64,
    pub seed: u64,
}

/// Default perturbation amplitude, 0.01 * 2 pi / n: far inside the
/// epsilon << 2 pi / n regime while still giving a measurable initial
/// magnetization.
pub fn default_epsilon(n: usize) -> f64 {
    0.01 * TAU / n as f64
}

/// Equally spaced angles theta_k = 2 pi k / n (k = 1..n), zero momenta.
pub fn quiet_start(n: usize) -> Result<ParticleState> {
    if n < 2 {
        return Err(HmfError::InvalidInput(format!(
            "quiet start needs n >= 2, got {n}"
        )));
    }
    let theta = (1..=n).map(|k| TAU * k as f64 / n as f64).collect();
    ParticleState::cold(theta)
}

/// Two uniform clusters of n/2 particles: theta_k = -dt + 4 k dt / n for
/// k = 1..n/2, the second half shifted by exactly pi.
pub fn bicluster(n: usize, delta_theta: f64) -> Result<ParticleState> {
    validate_bicluster_n(n)?;
    validate_delta_theta(delta_theta)?;
    let half = n / 2;
    let mut theta = Vec::with_capacity(n);
    for k in 1..=half {
        theta.push(-delta_theta + 4.0 * k as f64 * delta_theta / n as f64);
    }
    for k in 0..half {
        theta.push(theta[k] + PI);
    }
    ParticleState::cold(theta)
}

/// Distribution of the first-half cluster angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClusterDist {
    /// Waterbag on [-delta_theta, delta_theta].
    Uniform(f64),
    /// Gaussian of scale sigma_theta, rejection-truncated to [-pi/2, pi/2].
    Gaussian(f64),
}

/// Random symmetric bicluster: n/2 i.i.d. angles from the cluster
/// distribution, the remaining n/2 exact pi-shifts. Reproducible from the
/// seed (one RNG substream per particle index).
pub fn random_sym_bicluster(n: usize, dist: ClusterDist, seed: u64) -> Result<ParticleState> {
    validate_bicluster_n(n)?;
    match dist {
        ClusterDist::Uniform(dt) => validate_delta_theta(dt)?,
        ClusterDist::Gaussian(st) => {
            if !(st > 0.0 && st.is_finite()) {
                return Err(HmfError::InvalidInput(format!(
                    "sigma_theta must be positive, got {st}"
                )));
            }
        }
    }
    let half = n / 2;
    let mut theta = Vec::with_capacity(n);
    for k in 0..half {
        let mut rng = particle_rng(seed, k as u64);
        let angle = match dist {
            ClusterDist::Uniform(dt) => uniform_symmetric(&mut rng, dt),
            ClusterDist::Gaussian(st) => loop {
                let z = normal(&mut rng, st);
                if z.abs() <= FRAC_PI_2 {
                    break z;
                }
            },
        };
        theta.push(angle);
    }
    for k in 0..half {
        theta.push(theta[k] + PI);
    }
    ParticleState::cold(theta)
}

/// Sample a named pi-periodic density on a half period and pair
/// antipodally. Supported identifiers: `cos<k>` with even k >= 2, meaning
/// the density (1 + cos k theta) / 2 pi on the circle.
pub fn custom_symmetric(n: usize, density: &str, seed: u64) -> Result<ParticleState> {
    validate_bicluster_n(n)?;
    let k = parse_cos_density(density)?;
    let half = n / 2;
    let mut theta = Vec::with_capacity(n);
    for i in 0..half {
        let mut rng = particle_rng(seed, i as u64);
        // rejection against the uniform bound 2/(2 pi) on [-pi/2, pi/2)
        let angle = loop {
            let cand = uniform_symmetric(&mut rng, FRAC_PI_2);
            if 2.0 * uniform_01(&mut rng) <= 1.0 + (k as f64 * cand).cos() {
                break cand;
            }
        };
        theta.push(angle);
    }
    for i in 0..half {
        theta.push(theta[i] + PI);
    }
    ParticleState::cold(theta)
}

pub(crate) fn parse_cos_density(density: &str) -> Result<u32> {
    let k = density
        .strip_prefix("cos")
        .and_then(|s| s.parse::<u32>().ok())
        .ok_or_else(|| {
            HmfError::InvalidInput(format!(
                "unknown symmetric density '{density}' (expected cos<k>, k even)"
            ))
        })?;
    if k < 2 || k % 2 != 0 {
        return Err(HmfError::InvalidInput(format!(
            "cos{k} is not pi-periodic; the harmonic must be even and >= 2"
        )));
    }
    Ok(k)
}

/// Shift every angle by an independent uniform draw on [-epsilon, epsilon];
/// momenta untouched. Bit-reproducible from the seed.
pub fn perturb(state: &ParticleState, pert: &PerturbationSpec) -> Result<ParticleState> {
    let n = state.n();
    let bound = 0.1 * TAU / n as f64;
    if !(pert.epsilon > 0.0 && pert.epsilon <= bound) {
        return Err(HmfError::InvalidInput(format!(
            "epsilon = {} outside (0, {:.3e}] for n = {n}",
            pert.epsilon, bound
        )));
    }
    let theta = state
        .theta()
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let mut rng = particle_rng(pert.seed, k as u64);
            t + uniform_symmetric(&mut rng, pert.epsilon)
        })
        .collect();
    ParticleState::new(theta, state.p().to_vec())
}

fn validate_bicluster_n(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(HmfError::InvalidInput(format!(
            "bicluster kinds need even n >= 2, got {n}"
        )));
    }
    Ok(())
}

fn validate_delta_theta(dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt <= FRAC_PI_2) {
        return Err(HmfError::InvalidInput(format!(
            "delta_theta must lie in (0, pi/2], got {dt}"
        )));
    }
    Ok(())
}
