//! Growth rate of the deterministic bicluster vs cluster half-width.
//!
//! Two antipodal uniform clusters of N/2 particles form a force-free
//! state whose stability matrix is built from a cosine Toeplitz block,
//! so the finite-N rate has a closed form. Narrow clusters approach two
//! antipodal point masses (gamma -> 1); at half-width pi/2 the state is
//! indistinguishable from the quiet start (gamma = 1/sqrt(2) exactly).
//!
//! Run: cargo run --example bicluster_rates

use std::f64::consts::FRAC_PI_2;

use hmflab::diagnostics::fit_growth_rate;
use hmflab::equilibria::{bicluster, default_epsilon, perturb, PerturbationSpec};
use hmflab::integrator::{evolve, IntegratorConfig, Scheme};
use hmflab::linstab::{gamma_bicluster, gamma_bicluster_large_n};

fn main() {
    let n = 1000;
    println!(
        "{:>10} {:>12} {:>12} {:>12} {:>12} {:>8}",
        "dtheta", "gamma_fit", "finite-N", "slow mode", "large-N", "dev %"
    );
    for i in 0..10u64 {
        let dt = 0.3 + (FRAC_PI_2 - 0.3) * i as f64 / 9.0;
        // one derived perturbation seed per point, as the sweep driver does
        let state = perturb(
            &bicluster(n, dt).unwrap(),
            &PerturbationSpec {
                epsilon: default_epsilon(n),
                seed: hmflab::rng::splitmix64(7 + i),
            },
        )
        .unwrap();
        let traj = evolve(
            &state,
            &IntegratorConfig {
                dt: 0.05,
                t_end: 40.0,
                sample_every: 1,
                scheme: Scheme::Yoshida4,
            },
        )
        .unwrap();
        let fit = fit_growth_rate(&traj, None).unwrap();
        let finite = gamma_bicluster(n, dt).unwrap();
        // both eigenvalues sum to the unit trace, so the slower unstable
        // rate follows from the faster one
        let slow = (1.0 - finite * finite).max(0.0).sqrt();
        let asymptotic = gamma_bicluster_large_n(dt).unwrap();
        println!(
            "{:>10.4} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>+8.3}",
            dt,
            fit.gamma,
            finite,
            slow,
            asymptotic,
            100.0 * (fit.gamma / finite - 1.0)
        );
    }
    println!(
        "\nfits landing between the two mode rates signal two-mode competition:\n\
         when the perturbation draw projects weakly onto the fast mode, the\n\
         window still contains mixed growth (averaging over seeds tames this)."
    );
}
