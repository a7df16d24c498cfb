//! Random-matrix prediction of the expected growth rate for random
//! symmetric bicluster states.
//!
//! For the pi-paired random states the growth rate reduces to the largest
//! eigenvalue of the half-size matrix `L_ij = cos(theta_i - theta_j)`.
//! When the entries have positive mean mu, the largest eigenvalue of a
//! random symmetric matrix is asymptotically normal with mean
//! `1 + (m - 1) mu + sigma^2 / mu` and variance `2 sigma^2`; rescaling by
//! 2/N gives the squared-growth-rate distribution, and the expected rate
//! follows by integrating sqrt(x) against that normal restricted to
//! [0, 1].
//!
//! Entry moments are defined by double integrals of cos and cos^2 against
//! f0 (x) f0. The cosine addition formulas split those exactly into
//! products of one-dimensional harmonic projections of f0, which is how
//! the quadrature path evaluates them:
//! `mu = <cos>^2 + <sin>^2`, `<cos^2> = 1/2 + (<cos 2t>^2 + <sin 2t>^2)/2`.
//! Quadrature is the authoritative path; the printed closed forms are
//! retained as cross-checks only (the uniform-waterbag sigma^2 closed
//! form disagrees with its defining integral by a factor 2 in the second
//! term, which the cross-check test detects and reports).

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HmfError, Result};
use crate::linstab::sinc;
use crate::quad;

/// First and second moments of the off-diagonal entries
/// cos(theta_i - theta_j).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentPair {
    /// Expected entry, must be positive for the eigenvalue law to apply.
    pub mu: f64,
    /// Entry variance (always the centered second moment).
    pub sigma_sq: f64,
    pub source: MomentSource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSource {
    ClosedForm,
    Quadrature,
}

/// Expected squared growth rate, its variance and the expected rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmtPrediction {
    pub n: usize,
    pub lambda_sq_mean: f64,
    pub lambda_sq_var: f64,
    pub gamma_mean: f64,
}

/// Entry moments of a density f0 supported on [a, b], by adaptive
/// Gauss-Legendre to absolute tolerance 1e-10. The density must be
/// normalized on its support (checked to 1e-10).
pub fn moments_quadrature(f0: &impl Fn(f64) -> f64, support: (f64, f64)) -> Result<MomentPair> {
    let (a, b) = support;
    if !(a < b) {
        return Err(HmfError::InvalidInput(format!(
            "empty support [{a}, {b}]"
        )));
    }
    let tol = 1e-11;
    let norm = quad::integrate(&|t| f0(t), a, b, tol)?;
    if (norm - 1.0).abs() > 1e-10 {
        return Err(HmfError::UnnormalizedDensity(norm));
    }
    let c1 = quad::integrate(&|t| f0(t) * t.cos(), a, b, tol)?;
    let s1 = quad::integrate(&|t| f0(t) * t.sin(), a, b, tol)?;
    let c2 = quad::integrate(&|t| f0(t) * (2.0 * t).cos(), a, b, tol)?;
    let s2 = quad::integrate(&|t| f0(t) * (2.0 * t).sin(), a, b, tol)?;
    let mu = c1 * c1 + s1 * s1;
    let second = 0.5 + 0.5 * (c2 * c2 + s2 * s2);
    let mut sigma_sq = second - mu * mu;
    if sigma_sq < -1e-10 {
        return Err(HmfError::QuadratureFailure(format!(
            "negative variance {sigma_sq}"
        )));
    }
    if sigma_sq < 0.0 {
        sigma_sq = 0.0;
    }
    Ok(MomentPair {
        mu,
        sigma_sq,
        source: MomentSource::Quadrature,
    })
}

/// Moments of the uniform waterbag on [-delta_theta, delta_theta]:
/// mu from the closed form sinc^2(delta_theta), sigma^2 from quadrature
/// (the printed closed form is wrong; see [`moments_uniform_closed`]).
pub fn moments_uniform(delta_theta: f64) -> Result<MomentPair> {
    check_uniform_domain(delta_theta)?;
    let q = waterbag_moments_quadrature(delta_theta)?;
    let mu = sinc(delta_theta).powi(2);
    debug_assert!((mu - q.mu).abs() < 1e-8);
    Ok(MomentPair {
        mu,
        sigma_sq: q.sigma_sq,
        source: MomentSource::Quadrature,
    })
}

/// Both waterbag moments straight from quadrature (no closed-form mu),
/// used as the oracle when validating the closed forms.
pub fn waterbag_moments_quadrature(delta_theta: f64) -> Result<MomentPair> {
    let height = 1.0 / (2.0 * delta_theta);
    moments_quadrature(&move |_| height, (-delta_theta, delta_theta))
}

/// Moments of the Gaussian of scale sigma_theta truncated to
/// [-pi/2, pi/2], entirely by quadrature (the closed erf forms are a
/// cross-check path, see [`moments_gaussian_closed`]).
pub fn moments_gaussian(sigma_theta: f64) -> Result<MomentPair> {
    check_gaussian_domain(sigma_theta)?;
    let a = FRAC_PI_2;
    let kernel = move |t: f64| (-t * t / (2.0 * sigma_theta * sigma_theta)).exp();
    let norm = quad::integrate(&kernel, -a, a, 1e-13)?;
    moments_quadrature(&move |t| kernel(t) / norm, (-a, a))
}

/// Printed closed form of the waterbag moments. The mu formula
/// sinc^2(dt) is correct; the sigma^2 formula
/// `1/2 + cos^2(dt) sinc^2(dt)/4 - mu^2` undercounts the second term by a
/// factor 2 relative to the defining integral (which gives
/// `1/2 + sinc^2(2 dt)/2 - mu^2`). Kept verbatim so the discrepancy can
/// be measured.
pub fn moments_uniform_closed(delta_theta: f64) -> Result<MomentPair> {
    check_uniform_domain(delta_theta)?;
    let mu = sinc(delta_theta).powi(2);
    let sigma_sq = 0.5 + delta_theta.cos().powi(2) * sinc(delta_theta).powi(2) / 4.0 - mu * mu;
    Ok(MomentPair {
        mu,
        sigma_sq,
        source: MomentSource::ClosedForm,
    })
}

/// Corrected closed form of the waterbag variance, from carrying the
/// cos^2 decomposition through: `1/2 + sinc^2(2 dt)/2 - mu^2`.
pub fn moments_uniform_corrected(delta_theta: f64) -> Result<MomentPair> {
    check_uniform_domain(delta_theta)?;
    let mu = sinc(delta_theta).powi(2);
    let sigma_sq = 0.5 + 0.5 * sinc(2.0 * delta_theta).powi(2) - mu * mu;
    Ok(MomentPair {
        mu,
        sigma_sq,
        source: MomentSource::ClosedForm,
    })
}

/// Closed erf forms for the truncated-Gaussian moments, with the complex
/// error function evaluated by quadrature along a straight contour
/// (tolerance 1e-8). Cross-check path only.
pub fn moments_gaussian_closed(sigma_theta: f64) -> Result<MomentPair> {
    check_gaussian_domain(sigma_theta)?;
    let st = sigma_theta;
    let denom = erf_complex(Complex64::new(FRAC_PI_2 / (st * 2.0_f64.sqrt()), 0.0))?.re;
    let w1 = Complex64::new(std::f64::consts::PI, -2.0 * st * st) / (2.0 * st * 2.0_f64.sqrt());
    let mu = (-st * st).exp() / (denom * denom) * erf_complex(w1)?.re.powi(2);
    let w2 = Complex64::new(std::f64::consts::PI, -4.0 * st * st) / (2.0 * st * 2.0_f64.sqrt());
    let sigma_sq = 0.5
        + (-4.0 * st * st).exp() / 8.0 / (denom * denom) * (2.0 * erf_complex(w2)?.re).powi(2)
        - mu * mu;
    Ok(MomentPair {
        mu,
        sigma_sq,
        source: MomentSource::ClosedForm,
    })
}

/// erf(z) = (2/sqrt(pi)) z int_0^1 exp(-z^2 t^2) dt along the straight
/// contour from 0 to z; real and imaginary parts integrated separately.
pub fn erf_complex(z: Complex64) -> Result<Complex64> {
    let z2 = z * z;
    let re = quad::integrate(&|t: f64| (-z2 * (t * t)).exp().re, 0.0, 1.0, 1e-9)?;
    let im = quad::integrate(&|t: f64| (-z2 * (t * t)).exp().im, 0.0, 1.0, 1e-9)?;
    let two_over_sqrt_pi = 2.0 / std::f64::consts::PI.sqrt();
    Ok(two_over_sqrt_pi * z * Complex64::new(re, im))
}

/// Mean and variance of the squared growth rate:
/// mean = (2/n)(1 + (n/2 - 1) mu + sigma^2/mu), variance = 8 sigma^2/n^2.
pub fn expected_lambda_sq(n: usize, moments: &MomentPair) -> Result<(f64, f64)> {
    check_rmt_inputs(n, moments)?;
    let nf = n as f64;
    let mean = (2.0 / nf) * (1.0 + (nf / 2.0 - 1.0) * moments.mu + moments.sigma_sq / moments.mu);
    let var = 8.0 * moments.sigma_sq / (nf * nf);
    Ok((mean, var))
}

/// Expected growth rate: the ratio of `int_0^1 sqrt(x) w(x) dx` to
/// `int_0^1 w(x) dx` with `w = exp(-n^2 (x - <lambda^2>)^2 / (16 sigma^2))`,
/// each integral evaluated by adaptive quadrature to 1e-10. The Gaussian
/// weight is sharply peaked, so the integration is segmented around the
/// peak before the adaptive pass.
pub fn expected_gamma(n: usize, moments: &MomentPair) -> Result<f64> {
    let (mean, var) = expected_lambda_sq(n, moments)?;
    let width = var.sqrt();
    if width < 1e-13 {
        // degenerate weight: a point mass at the mean (clamped to [0, 1])
        return Ok(mean.clamp(0.0, 1.0).sqrt());
    }
    let nf = n as f64;
    let weight = move |x: f64| {
        let d = x - mean;
        (-nf * nf * d * d / (16.0 * moments.sigma_sq)).exp()
    };
    let mut cuts = vec![0.0, 1.0];
    for k in [-40.0, -6.0, 6.0, 40.0] {
        // clamped so a peak just outside [0, 1] still gets boundary panels
        cuts.push((mean + k * width).clamp(1e-12, 1.0 - 1e-12));
    }
    cuts.sort_by(f64::total_cmp);
    let num = quad::integrate_segmented(&|x: f64| x.sqrt() * weight(x), &cuts, 1e-10)?;
    let den = quad::integrate_segmented(&weight, &cuts, 1e-10)?;
    if den <= 0.0 || !den.is_finite() {
        return Err(HmfError::QuadratureFailure(format!(
            "normalization integral = {den}"
        )));
    }
    Ok(num / den)
}

/// Bundle of the two expectations for one particle count.
pub fn rmt_prediction(n: usize, moments: &MomentPair) -> Result<RmtPrediction> {
    let (lambda_sq_mean, lambda_sq_var) = expected_lambda_sq(n, moments)?;
    let gamma_mean = expected_gamma(n, moments)?;
    Ok(RmtPrediction {
        n,
        lambda_sq_mean,
        lambda_sq_var,
        gamma_mean,
    })
}

fn check_rmt_inputs(n: usize, moments: &MomentPair) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(HmfError::InvalidInput(format!(
            "prediction needs even n >= 4, got {n}"
        )));
    }
    if !(moments.mu > 0.0) {
        return Err(HmfError::TheoremInapplicable(moments.mu));
    }
    if moments.sigma_sq < 0.0 {
        return Err(HmfError::InvalidInput(format!(
            "negative variance {}",
            moments.sigma_sq
        )));
    }
    Ok(())
}

fn check_uniform_domain(delta_theta: f64) -> Result<()> {
    // mu = sinc^2 > 0 requires delta_theta < pi/2
    if !(delta_theta > 0.0 && delta_theta < FRAC_PI_2) {
        return Err(HmfError::InvalidInput(format!(
            "delta_theta must lie in (0, pi/2), got {delta_theta}"
        )));
    }
    Ok(())
}

fn check_gaussian_domain(sigma_theta: f64) -> Result<()> {
    if !(sigma_theta > 0.0 && sigma_theta.is_finite()) {
        return Err(HmfError::InvalidInput(format!(
            "sigma_theta must be positive, got {sigma_theta}"
        )));
    }
    Ok(())
}
