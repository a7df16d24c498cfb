//! The three theory engines side by side, no simulation involved.
//!
//! For the bicluster family all of them apply: the exact finite-N closed
//! form, its large-N limit, the continuum dispersion rate (identical to
//! the large-N limit), and the random-matrix expectation for the
//! randomized variant. The quiet start pins the common reference value
//! 1/sqrt(2), and the warm waterbag adds the temperature threshold.
//!
//! Run: cargo run --example theory_predictors

use hmflab::equilibria::quiet_start;
use hmflab::linstab::{
    exact_growth_rate, gamma_bicluster, gamma_bicluster_large_n, gamma_quiet_start,
};
use hmflab::rmt::{expected_gamma, moments_uniform, rmt_prediction};
use hmflab::vlasov::{vlasov_growth_rate, warm_waterbag_growth_rate, DensityProfile};

fn main() {
    let n = 1000;

    println!("quiet start (N = {n}):");
    let state = quiet_start(n).unwrap();
    let exact = exact_growth_rate(&state);
    println!("  rank-2 eigenvalue path: lambda^2 = {:.12}, gamma = {:.12}", exact.lambda_sq, exact.gamma);
    println!("  closed form:            gamma = {:.12}", gamma_quiet_start());
    println!(
        "  dispersion (uniform):   gamma = {:.12}",
        vlasov_growth_rate(&DensityProfile::uniform()).unwrap()
    );

    println!("\nbicluster rates vs cluster half-width (N = {n}):");
    println!(
        "{:>10} {:>12} {:>12} {:>12} {:>12}",
        "dtheta", "finite-N", "large-N", "dispersion", "rmt <gamma>"
    );
    for i in 1..=8 {
        let dt = 0.3 + (1.4 - 0.3) * (i - 1) as f64 / 7.0;
        let finite = gamma_bicluster(n, dt).unwrap();
        let asymptotic = gamma_bicluster_large_n(dt).unwrap();
        let dispersion =
            vlasov_growth_rate(&DensityProfile::bicluster(dt).unwrap()).unwrap();
        let rmt = expected_gamma(n, &moments_uniform(dt).unwrap()).unwrap();
        println!(
            "{:>10.4} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
            dt, finite, asymptotic, dispersion, rmt
        );
    }
    println!("  (dispersion equals the large-N closed form; the random-matrix");
    println!("   expectation sits below the deterministic curve near pi/2)");

    println!("\nrandom-matrix detail at dtheta = pi/4 (N = {n}):");
    let m = moments_uniform(std::f64::consts::PI / 4.0).unwrap();
    let p = rmt_prediction(n, &m).unwrap();
    println!("  mu = {:.8}, sigma^2 = {:.8}", m.mu, m.sigma_sq);
    println!(
        "  <lambda^2> = {:.8} (var {:.3e}), <gamma> = {:.8}",
        p.lambda_sq_mean, p.lambda_sq_var, p.gamma_mean
    );

    println!("\nwarm waterbag threshold:");
    for t in [0.0, 1.0 / 12.0, 1.0 / 6.0, 0.25] {
        let w = warm_waterbag_growth_rate(t).unwrap();
        println!(
            "  T = {t:.4}: gamma = {:.6}{}",
            w.gamma,
            if w.linearly_stable { "  (linearly stable)" } else { "" }
        );
    }
}
