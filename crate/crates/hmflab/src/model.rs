//! State representation, order parameter, mean-field force and conserved
//! quantities of the Hamiltonian mean-field (HMF) model.
//!
//! The model is N globally coupled rotators with Hamiltonian
//! `H = sum p_i^2/2 + (1/2N) sum_{ij} [1 - cos(theta_i - theta_j)]`.
//! Because the coupling is all-to-all through the first cosine harmonic,
//! every force reduces to the magnetization vector, which keeps all
//! operations here O(N).

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{HmfError, Result};

/// Positions and momenta of N rotators. Angles are kept unnormalized
/// during integration (the trigonometric functions are periodic, and raw
/// angles preserve winding); [`wrap_angle`] is applied only on output.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleState {
    theta: Vec<f64>,
    p: Vec<f64>,
}

impl ParticleState {
    /// Build a state from angles and momenta of equal length n >= 1.
    /// All entries must be finite.
    pub fn new(theta: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(HmfError::InvalidInput("empty state".into()));
        }
        if theta.len() != p.len() {
            return Err(HmfError::InvalidInput(format!(
                "theta has {} entries but p has {}",
                theta.len(),
                p.len()
            )));
        }
        if !theta.iter().chain(p.iter()).all(|x| x.is_finite()) {
            return Err(HmfError::InvalidInput(
                "non-finite angle or momentum".into(),
            ));
        }
        Ok(Self { theta, p })
    }

    /// Cold state: given angles, all momenta zero.
    pub fn cold(theta: Vec<f64>) -> Result<Self> {
        let n = theta.len();
        Self::new(theta, vec![0.0; n])
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.theta, &mut self.p)
    }

    /// True when all momenta vanish (the monokinetic zero-temperature case).
    pub fn is_cold(&self) -> bool {
        self.p.iter().all(|&p| p == 0.0)
    }

    /// Copy of the state with every angle wrapped to [-pi, pi).
    pub fn wrapped(&self) -> Self {
        Self {
            theta: self.theta.iter().map(|&t| wrap_angle(t)).collect(),
            p: self.p.clone(),
        }
    }

    /// Magnetization vector: `Mx = <cos theta>`, `My = <sin theta>`.
    /// Plain left-to-right accumulation; see
    /// [`magnetization_compensated`](Self::magnetization_compensated) for
    /// the compensated variant recommended beyond ~1e5 particles.
    pub fn magnetization(&self) -> Magnetization {
        let n = self.n() as f64;
        let (mut cx, mut cy) = (0.0, 0.0);
        for &t in &self.theta {
            cx += t.cos();
            cy += t.sin();
        }
        Magnetization::from_components(cx / n, cy / n)
    }

    /// Magnetization with Kahan-compensated sums. Same contract as
    /// [`magnetization`](Self::magnetization); worth using when N > 1e5.
    pub fn magnetization_compensated(&self) -> Magnetization {
        let n = self.n() as f64;
        let cx = kahan_sum(self.theta.iter().map(|t| t.cos()));
        let cy = kahan_sum(self.theta.iter().map(|t| t.sin()));
        Magnetization::from_components(cx / n, cy / n)
    }

    /// Mean-field force on every particle:
    /// `F_k = My cos(theta_k) - Mx sin(theta_k)`.
    pub fn forces(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        self.forces_into(&mut out);
        out
    }

    pub(crate) fn forces_into(&self, out: &mut [f64]) {
        let m = self.magnetization();
        for (f, &t) in out.iter_mut().zip(&self.theta) {
            *f = m.my * t.cos() - m.mx * t.sin();
        }
    }

    /// Average energy per particle: `sum p_i^2 / 2N + (1 - M^2) / 2`.
    pub fn energy_per_particle(&self) -> f64 {
        let n = self.n() as f64;
        let kinetic: f64 = self.p.iter().map(|&p| p * p).sum::<f64>() / (2.0 * n);
        let m = self.magnetization();
        kinetic + 0.5 * (1.0 - m.m * m.m)
    }

    /// Total momentum, a constant of the motion.
    pub fn total_momentum(&self) -> f64 {
        self.p.iter().sum()
    }
}

/// The (Mx, My, M) order parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Magnetization {
    pub mx: f64,
    pub my: f64,
    /// Modulus sqrt(mx^2 + my^2), always computed from the components.
    pub m: f64,
}

impl Magnetization {
    pub fn from_components(mx: f64, my: f64) -> Self {
        Self {
            mx,
            my,
            m: mx.hypot(my),
        }
    }
}

/// One sampled point of a run: time, order parameter and conserved
/// quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub t: f64,
    pub mx: f64,
    pub my: f64,
    pub m: f64,
    /// Energy per particle.
    pub u: f64,
    pub p_total: f64,
}

impl Observables {
    pub fn measure(t: f64, state: &ParticleState) -> Self {
        let mag = state.magnetization();
        Self {
            t,
            mx: mag.mx,
            my: mag.my,
            m: mag.m,
            u: state.energy_per_particle(),
            p_total: state.total_momentum(),
        }
    }
}

/// Wrap an angle to [-pi, pi). Exact no-op (bitwise) for angles already
/// in range, so the normalization is idempotent.
pub fn wrap_angle(x: f64) -> f64 {
    let k = ((x + PI) / TAU).floor();
    let mut y = x - TAU * k;
    if y >= PI {
        y -= TAU;
    } else if y < -PI {
        y += TAU;
    }
    y
}

/// Kahan-compensated summation.
pub(crate) fn kahan_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for x in xs {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}
