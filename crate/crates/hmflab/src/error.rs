//! Error type shared by all toolkit modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HmfError {
    /// Invalid parameters or malformed input (empty state, odd particle
    /// count for a bicluster, out-of-range cluster width, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A non-finite position or momentum appeared during integration.
    #[error("numerical blowup at step {step} (t = {t})")]
    NumericalBlowup { step: usize, t: f64 },

    /// An iterative solver did not reach its tolerance.
    #[error("{0} did not converge")]
    NonConvergence(&'static str),

    /// Matrix handed to the dense eigensolver is not symmetric.
    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),

    /// |sin(omega)| below threshold in the cosine-Toeplitz eigenvalue
    /// formula; the caller must use the analytic limit instead.
    #[error("degenerate frequency: |sin(omega)| < {0:.1e}")]
    DegenerateFrequency(f64),

    /// The largest-eigenvalue law requires a positive mean entry.
    #[error("largest-eigenvalue law inapplicable: mu = {0} is not positive")]
    TheoremInapplicable(f64),

    /// A density handed to quadrature does not integrate to 1.
    #[error("density not normalized: integral = {0}")]
    UnnormalizedDensity(f64),

    /// Adaptive quadrature failed to converge or produced an
    /// inconsistent result (e.g. a significantly negative variance).
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    /// The density has a non-vanishing first Fourier harmonic, so the
    /// force-free dispersion relation does not apply.
    #[error("magnetized profile: |n_{{0,1}}| = {0:.3e} exceeds tolerance")]
    MagnetizedProfile(f64),

    /// No window of the magnetization history qualifies as exponential.
    #[error("no exponential phase found in trajectory")]
    NoExponentialPhase,

    /// ln M is undefined on a sample inside the requested window.
    #[error("nonpositive magnetization sample at t = {0}")]
    NonpositiveMagnetization(f64),

    /// saturation_stats was asked for a tail beyond the last sample.
    #[error("empty tail window: no samples at t >= {0}")]
    EmptyTailWindow(f64),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, HmfError>;
