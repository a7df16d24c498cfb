//! Continuum (N -> infinity) growth rates for arbitrary unmagnetized cold
//! densities.
//!
//! Closing the moment hierarchy of the transport equation at zero
//! temperature and linearizing about a stationary density n0 with
//! vanishing first harmonic leaves a dispersion relation whose only
//! nonzero roots are `omega^2 = -pi n_{0,0} +- pi |n_{0,2}|`; the growth
//! rate of the most unstable root is `sqrt((1 + 2 pi |n_{0,2}|)/2)`.
//!
//! Fourier convention: `n_{0,k} = (1/2pi) int n0(theta) e^{-ik theta}
//! dtheta`, so a normalized density has `n_{0,0} = 1/2pi`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{HmfError, Result};
use crate::model::{wrap_angle, ParticleState};
use crate::quad;

/// Tolerance on |n_{0,1}| below which a profile counts as unmagnetized.
pub const UNMAGNETIZED_TOL: f64 = 1e-10;

/// Angular density on [-pi, pi), in one of three representations.
#[derive(Clone)]
pub enum DensityProfile {
    /// Callable density with known integration breakpoints (support
    /// edges or kinks); must be normalized to 1.
    Analytic {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        breakpoints: Vec<f64>,
    },
    /// Fourier table n_{0,k} for k = 0..=K; negative harmonics follow by
    /// conjugation (the density is real).
    Fourier { coeffs: Vec<Complex64> },
    /// Empirical density of a particle sample.
    Sample { angles: Vec<f64> },
}

impl fmt::Debug for DensityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Analytic { breakpoints, .. } => f
                .debug_struct("Analytic")
                .field("breakpoints", breakpoints)
                .finish_non_exhaustive(),
            Self::Fourier { coeffs } => {
                f.debug_struct("Fourier").field("coeffs", coeffs).finish()
            }
            Self::Sample { angles } => f
                .debug_struct("Sample")
                .field("n", &angles.len())
                .finish_non_exhaustive(),
        }
    }
}

impl DensityProfile {
    /// Uniform density 1/2pi.
    pub fn uniform() -> Self {
        Self::Analytic {
            f: Arc::new(|_| 1.0 / TAU),
            breakpoints: vec![-PI, PI],
        }
    }

    /// Two antipodal waterbag clusters of half width `delta_theta`; the
    /// continuum limit of the bicluster states.
    pub fn bicluster(delta_theta: f64) -> Result<Self> {
        if !(delta_theta > 0.0 && delta_theta <= FRAC_PI_2) {
            return Err(HmfError::InvalidInput(format!(
                "delta_theta must lie in (0, pi/2], got {delta_theta}"
            )));
        }
        let dt = delta_theta;
        let f = move |theta: f64| {
            let d0 = wrap_angle(theta).abs();
            let dpi = wrap_angle(theta - PI).abs();
            if d0 <= dt || dpi <= dt {
                1.0 / (4.0 * dt)
            } else {
                0.0
            }
        };
        let mut breakpoints = vec![-PI, -PI + dt, -dt, dt, PI - dt, PI];
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        Ok(Self::Analytic {
            f: Arc::new(f),
            breakpoints,
        })
    }

    /// Single-harmonic density `(1 + amplitude cos(k theta)) / 2pi`
    /// (|amplitude| <= 1 keeps it nonnegative).
    pub fn harmonic(k: u32, amplitude: f64) -> Result<Self> {
        if k == 0 || amplitude.abs() > 1.0 {
            return Err(HmfError::InvalidInput(format!(
                "harmonic needs k >= 1 and |amplitude| <= 1, got k={k}, a={amplitude}"
            )));
        }
        let kf = k as f64;
        Ok(Self::Analytic {
            f: Arc::new(move |theta| (1.0 + amplitude * (kf * theta).cos()) / TAU),
            breakpoints: vec![-PI, PI],
        })
    }

    /// General analytic density; `breakpoints` must bracket [-pi, pi] and
    /// include every discontinuity. Normalization is validated here.
    pub fn analytic(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        breakpoints: Vec<f64>,
    ) -> Result<Self> {
        let profile = Self::Analytic {
            f: Arc::new(f),
            breakpoints,
        };
        profile.check_normalized()?;
        Ok(profile)
    }

    /// Fourier table; `coeffs[0]` must equal 1/2pi.
    pub fn from_fourier(coeffs: Vec<Complex64>) -> Result<Self> {
        let n0 = coeffs
            .first()
            .ok_or_else(|| HmfError::InvalidInput("empty Fourier table".into()))?;
        if (n0.re - 1.0 / TAU).abs() > 1e-10 || n0.im.abs() > 1e-12 {
            return Err(HmfError::UnnormalizedDensity(n0.re * TAU));
        }
        Ok(Self::Fourier { coeffs })
    }

    /// Empirical density of the angles of a state.
    pub fn from_state(state: &ParticleState) -> Self {
        Self::Sample {
            angles: state.theta().to_vec(),
        }
    }

    pub fn from_angles(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(HmfError::InvalidInput("empty sample".into()));
        }
        Ok(Self::Sample { angles })
    }

    fn check_normalized(&self) -> Result<()> {
        if let Self::Analytic { f, breakpoints } = self {
            let total = quad::integrate_segmented(&|t| f(t), breakpoints, 1e-12)?;
            if (total - 1.0).abs() > 1e-8 {
                return Err(HmfError::UnnormalizedDensity(total));
            }
        }
        Ok(())
    }
}

/// k-th Fourier coefficient of the profile,
/// `n_{0,k} = (1/2pi) int n0 e^{-ik theta} dtheta`; the sample
/// representation uses the plain empirical average (noise floor
/// O(N^{-1/2})).
pub fn fourier_coefficient(profile: &DensityProfile, k: i64) -> Result<Complex64> {
    match profile {
        DensityProfile::Analytic { f, breakpoints } => {
            let kf = k as f64;
            let re = quad::integrate_segmented(&|t| f(t) * (kf * t).cos(), breakpoints, 1e-13)?;
            let im = quad::integrate_segmented(&|t| -f(t) * (kf * t).sin(), breakpoints, 1e-13)?;
            Ok(Complex64::new(re, im) / TAU)
        }
        DensityProfile::Fourier { coeffs } => {
            let idx = k.unsigned_abs() as usize;
            let c = coeffs.get(idx).copied().unwrap_or(Complex64::ZERO);
            Ok(if k < 0 { c.conj() } else { c })
        }
        DensityProfile::Sample { angles } => {
            let kf = k as f64;
            let mut acc = Complex64::ZERO;
            for &t in angles {
                acc += Complex64::new((kf * t).cos(), -(kf * t).sin());
            }
            Ok(acc / (TAU * angles.len() as f64))
        }
    }
}

/// The two nonzero roots of the dispersion relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionRoots {
    pub omega_sq_plus: f64,
    pub omega_sq_minus: f64,
    /// Set when |n_{0,2}| > n_{0,0}, which no nonnegative density can
    /// produce; flags an inconsistent Fourier table.
    pub second_harmonic_exceeds_mean: bool,
}

/// `omega^2 = -pi n_{0,0} +- pi |n_{0,2}|`. Truncating the dispersion
/// matrix at any order only multiplies the determinant by omega^4, so no
/// further roots exist.
pub fn dispersion_roots(profile: &DensityProfile) -> Result<DispersionRoots> {
    let n1 = fourier_coefficient(profile, 1)?.norm();
    if n1 >= UNMAGNETIZED_TOL {
        return Err(HmfError::MagnetizedProfile(n1));
    }
    let n0 = fourier_coefficient(profile, 0)?.re;
    let n2 = fourier_coefficient(profile, 2)?.norm();
    Ok(DispersionRoots {
        omega_sq_plus: -PI * n0 + PI * n2,
        omega_sq_minus: -PI * n0 - PI * n2,
        second_harmonic_exceeds_mean: n2 > n0 + 1e-12,
    })
}

/// Growth rate of the most unstable root: `sqrt((1 + 2 pi |n_{0,2}|)/2)`
/// for a normalized density, reducing to 1/sqrt(2) when the second
/// harmonic vanishes.
pub fn vlasov_growth_rate(profile: &DensityProfile) -> Result<f64> {
    let roots = dispersion_roots(profile)?;
    Ok((-roots.omega_sq_minus).max(0.0).sqrt())
}

/// Growth rate of the warm waterbag with temperature T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarmWaterbagRate {
    pub gamma: f64,
    /// True for T >= 1/6, where the mode is linearly stable and gamma is
    /// reported as 0.
    pub linearly_stable: bool,
}

/// `sqrt(1/2 - 3T)` below the stability threshold T = 1/6.
pub fn warm_waterbag_growth_rate(temperature: f64) -> Result<WarmWaterbagRate> {
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(HmfError::InvalidInput(format!(
            "temperature must be >= 0, got {temperature}"
        )));
    }
    if temperature >= 1.0 / 6.0 {
        Ok(WarmWaterbagRate {
            gamma: 0.0,
            linearly_stable: true,
        })
    } else {
        Ok(WarmWaterbagRate {
            gamma: (0.5 - 3.0 * temperature).sqrt(),
            linearly_stable: false,
        })
    }
}
