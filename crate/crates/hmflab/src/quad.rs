//! Adaptive Gauss-Legendre quadrature on finite intervals.
//!
//! A 20-point rule per panel, bisected until the two-half refinement
//! agrees with the parent panel to the local tolerance. Node/weight
//! tables are generated once by Newton iteration on the Legendre
//! polynomial, which keeps them at machine precision without literal
//! tables.

use std::sync::OnceLock;

use crate::error::{HmfError, Result};

const ORDER: usize = 20;
const MAX_DEPTH: usize = 48;

fn nodes_weights() -> &'static ([f64; ORDER], [f64; ORDER]) {
    static TABLE: OnceLock<([f64; ORDER], [f64; ORDER])> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        let n = ORDER;
        for i in 0..n {
            // Chebyshev-angle starting guess for the i-th root
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Non-adaptive 20-point Gauss-Legendre estimate on [a, b].
pub fn gauss_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = nodes_weights();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (&x, &w) in nodes.iter().zip(weights.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Adaptive integral of f over [a, b] to absolute tolerance `tol`.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let whole = gauss_panel(f, a, b);
    refine(f, a, b, whole, tol, 0)
}

/// Adaptive integral with mandatory panel boundaries (for integrands with
/// known kinks or spikes).
pub fn integrate_segmented(
    f: &impl Fn(f64) -> f64,
    points: &[f64],
    tol: f64,
) -> Result<f64> {
    if points.len() < 2 {
        return Err(HmfError::QuadratureFailure(
            "need at least two panel boundaries".into(),
        ));
    }
    let mut acc = 0.0;
    let per_panel = tol / (points.len() - 1) as f64;
    for w in points.windows(2) {
        if w[1] < w[0] {
            return Err(HmfError::QuadratureFailure(
                "panel boundaries must be sorted".into(),
            ));
        }
        if w[1] > w[0] {
            acc += integrate(f, w[0], w[1], per_panel)?;
        }
    }
    Ok(acc)
}

fn refine(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = gauss_panel(f, a, mid);
    let right = gauss_panel(f, mid, b);
    let refined = left + right;
    if (refined - whole).abs() <= tol.max(f64::EPSILON * refined.abs()) {
        return Ok(refined);
    }
    if depth >= MAX_DEPTH {
        return Err(HmfError::QuadratureFailure(format!(
            "no convergence on [{a}, {b}] after {MAX_DEPTH} bisections"
        )));
    }
    let half_tol = 0.5 * tol;
    Ok(refine(f, a, mid, left, half_tol, depth + 1)?
        + refine(f, mid, b, right, half_tol, depth + 1)?)
}
