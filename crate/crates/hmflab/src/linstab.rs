//! Exact finite-N linear stability of cold force-free states.
//!
//! Linearizing the equations of motion about a cold zero-force state
//! produces a block Jacobian whose spectrum is determined by the N x N
//! symmetric matrix `A_ij = cos(theta_i - theta_j) / N`: the growth rate
//! is the square root of A's largest positive eigenvalue. The cosine
//! addition formula factors A as `(c c^T + s s^T)/N` with c_i =
//! cos(theta_i), s_i = sin(theta_i), so its nonzero eigenvalues are those
//! of a 2 x 2 Gram matrix; that O(N) reduction is the production path and
//! a cyclic Jacobi eigensolver serves as the dense oracle.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use serde::{Deserialize, Serialize};

use crate::error::{HmfError, Result};
use crate::model::ParticleState;

/// Dense symmetric stability matrix `A_ij = cos(theta_i - theta_j) / N`.
#[derive(Debug, Clone)]
pub struct StabilityMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl StabilityMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }
}

/// Growth rate extracted from the stability spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRateResult {
    /// sqrt(max(lambda_sq, 0)).
    pub gamma: f64,
    /// Largest eigenvalue of A.
    pub lambda_sq: f64,
    /// False when no eigenvalue is positive: the state is linearly
    /// stable or neutral and gamma is reported as 0.
    pub exponentially_unstable: bool,
    pub method: RateMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateMethod {
    RankTwoGram,
    DenseEigen,
}

/// Materialize A for a state. The linearization assumes a cold force-free
/// equilibrium; a warm state only triggers a warning because the matrix
/// itself is still well defined.
pub fn build_stability_matrix(state: &ParticleState) -> StabilityMatrix {
    warn_if_warm(state);
    let n = state.n();
    let nf = n as f64;
    let theta = state.theta();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 1.0 / nf;
        for j in 0..i {
            let v = (theta[i] - theta[j]).cos() / nf;
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    StabilityMatrix { n, entries }
}

fn warn_if_warm(state: &ParticleState) {
    if !state.is_cold() {
        log::warn!(
            "stability analysis assumes a cold state; momenta are nonzero (max |p| = {:.3e})",
            state.p().iter().fold(0.0f64, |a, &p| a.max(p.abs()))
        );
    }
}

/// Growth rate through the rank-2 Gram reduction: the nonzero eigenvalues
/// of A are the eigenvalues of `(1/N) [[c.c, c.s], [c.s, s.s]]`. O(N).
pub fn exact_growth_rate(state: &ParticleState) -> GrowthRateResult {
    warn_if_warm(state);
    let n = state.n() as f64;
    let (mut cc, mut cs, mut ss) = (0.0, 0.0, 0.0);
    for &t in state.theta() {
        let (s, c) = t.sin_cos();
        cc += c * c;
        cs += c * s;
        ss += s * s;
    }
    let (a, b, d) = (cc / n, cs / n, ss / n);
    let half_tr = 0.5 * (a + d);
    let disc = (0.5 * (a - d)).hypot(b);
    let lambda_sq = half_tr + disc;
    let unstable = lambda_sq > 0.0;
    GrowthRateResult {
        gamma: if unstable { lambda_sq.sqrt() } else { 0.0 },
        lambda_sq,
        exponentially_unstable: unstable,
        method: RateMethod::RankTwoGram,
    }
}

/// Growth rate through the dense oracle path: builds A and runs the
/// Jacobi eigensolver. O(N^3) and guarded to test scales; exists to
/// cross-check [`exact_growth_rate`] through an independent route.
pub fn dense_growth_rate(state: &ParticleState) -> Result<GrowthRateResult> {
    let a = build_stability_matrix(state);
    let eig = dense_symmetric_eigen(a.entries(), a.n())?;
    let lambda_sq = eig[0];
    let unstable = lambda_sq > 0.0;
    Ok(GrowthRateResult {
        gamma: if unstable { lambda_sq.sqrt() } else { 0.0 },
        lambda_sq,
        exponentially_unstable: unstable,
        method: RateMethod::DenseEigen,
    })
}

/// All eigenvalues of a dense symmetric matrix (row-major, n x n) by
/// cyclic Jacobi rotations, sorted descending. Converged when every
/// off-diagonal magnitude is below 1e-12 times the Frobenius norm.
/// Guarded to n <= 2048: this is the test-scale oracle, not a production
/// path.
pub fn dense_symmetric_eigen(matrix: &[f64], n: usize) -> Result<Vec<f64>> {
    if n == 0 || matrix.len() != n * n {
        return Err(HmfError::InvalidInput(format!(
            "matrix storage {} does not match n = {n}",
            matrix.len()
        )));
    }
    if n > 2048 {
        return Err(HmfError::InvalidInput(format!(
            "dense eigensolver is guarded to n <= 2048, got {n}"
        )));
    }
    let scale = matrix.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            asym = asym.max((matrix[i * n + j] - matrix[j * n + i]).abs());
        }
    }
    if asym > 1e-12 * scale.max(1.0) {
        return Err(HmfError::NotSymmetric(asym));
    }

    let mut a = matrix.to_vec();
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-12 * frob;

    for _sweep in 0..100 {
        let mut max_off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                max_off = max_off.max(a[p * n + q].abs());
            }
        }
        if max_off < tol || frob == 0.0 {
            let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
            eig.sort_by(|x, y| y.total_cmp(x));
            return Ok(eig);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < tol * 1e-2 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // classic 2x2 rotation angle
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(HmfError::NonConvergence("jacobi eigensolver"))
}

/// Growth rate of the perturbed quiet start: exactly 1/sqrt(2), with no
/// finite-N correction.
pub fn gamma_quiet_start() -> f64 {
    FRAC_1_SQRT_2
}

/// The two nonzero eigenvalues of the m x m Toeplitz matrix with entries
/// `t_k = cos(k omega)`: `(m +- sin(m omega)/sin(omega)) / 2`, returned
/// with the larger one first.
///
/// Fails with [`HmfError::DegenerateFrequency`] when |sin(omega)| <
/// 1e-14; the caller must use the analytic limit sin(m omega)/sin(omega)
/// -> m (omega -> 0), i.e. eigenvalues (m, 0).
pub fn toeplitz_cos_eigen(m: usize, omega: f64) -> Result<(f64, f64)> {
    if m < 1 {
        return Err(HmfError::InvalidInput("toeplitz size must be >= 1".into()));
    }
    let s = omega.sin();
    if s.abs() < 1e-14 {
        return Err(HmfError::DegenerateFrequency(1e-14));
    }
    let ratio = ((m as f64) * omega).sin() / s;
    let mf = m as f64;
    Ok((0.5 * (mf + ratio.abs()), 0.5 * (mf - ratio.abs())))
}

/// Finite-N growth rate of the deterministic bicluster:
/// `sqrt(1/2 + sin(2 dt) / (N sin(4 dt / N)))`. At delta_theta = pi/2 the
/// rate is exactly 1/sqrt(2) for every N.
pub fn gamma_bicluster(n: usize, delta_theta: f64) -> Result<f64> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(HmfError::InvalidInput(format!(
            "bicluster rate needs even n >= 2, got {n}"
        )));
    }
    if !(delta_theta > 0.0 && delta_theta <= FRAC_PI_2) {
        return Err(HmfError::InvalidInput(format!(
            "delta_theta must lie in (0, pi/2], got {delta_theta}"
        )));
    }
    if delta_theta == FRAC_PI_2 && n > 2 {
        return Ok(FRAC_1_SQRT_2);
    }
    let m = n / 2;
    let omega = 4.0 * delta_theta / n as f64;
    let ratio = match toeplitz_cos_eigen(m, omega) {
        Ok((plus, _)) => 2.0 * plus - m as f64, // recover sin(m w)/sin(w) >= 0
        Err(HmfError::DegenerateFrequency(_)) => m as f64,
        Err(e) => return Err(e),
    };
    Ok((0.5 + ratio / n as f64).sqrt())
}

/// Large-N limit of the bicluster rate: `sqrt((1 + sinc(2 dt)) / 2)`,
/// approached at O(N^-2).
pub fn gamma_bicluster_large_n(delta_theta: f64) -> Result<f64> {
    if !(delta_theta > 0.0 && delta_theta <= FRAC_PI_2) {
        return Err(HmfError::InvalidInput(format!(
            "delta_theta must lie in (0, pi/2], got {delta_theta}"
        )));
    }
    Ok(((1.0 + sinc(2.0 * delta_theta)) / 2.0).sqrt())
}

/// sin(x)/x with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}
