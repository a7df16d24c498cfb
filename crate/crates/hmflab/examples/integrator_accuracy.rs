//! Convergence order, conservation and reversibility of the integrator.
//!
//! Run: cargo run --example integrator_accuracy

use hmflab::equilibria::{default_epsilon, perturb, quiet_start, PerturbationSpec};
use hmflab::integrator::{evolve, step, IntegratorConfig, Scheme, Trajectory};
use hmflab::model::ParticleState;

fn max_norm(a: &ParticleState, b: &ParticleState) -> f64 {
    a.theta()
        .iter()
        .zip(b.theta())
        .chain(a.p().iter().zip(b.p()))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn endpoint(state: &ParticleState, dt: f64, scheme: Scheme) -> ParticleState {
    evolve(
        state,
        &IntegratorConfig {
            dt,
            t_end: 1.0,
            sample_every: usize::MAX,
            scheme,
        },
    )
    .unwrap()
    .final_state
}

fn main() {
    let base = quiet_start(64).unwrap();
    let state = perturb(
        &base,
        &PerturbationSpec {
            epsilon: default_epsilon(64),
            seed: 9,
        },
    )
    .unwrap();

    println!("endpoint error at t = 1 vs a dt = 1e-4 reference:");
    let reference = endpoint(&state, 1e-4, Scheme::Yoshida4);
    println!("{:>8} {:>14} {:>14}", "dt", "yoshida4", "leapfrog2");
    let mut prev: Option<(f64, f64)> = None;
    for dt in [0.2, 0.1, 0.05, 0.025] {
        let e4 = max_norm(&endpoint(&state, dt, Scheme::Yoshida4), &reference);
        let e2 = max_norm(&endpoint(&state, dt, Scheme::Leapfrog2), &reference);
        let orders = prev
            .map(|(p4, p2)| format!("   (orders {:.2} / {:.2})", (p4 / e4).log2(), (p2 / e2).log2()))
            .unwrap_or_default();
        println!("{dt:>8} {e4:>14.3e} {e2:>14.3e}{orders}");
        prev = Some((e4, e2));
    }

    let long: Trajectory = evolve(
        &perturb(
            &quiet_start(1000).unwrap(),
            &PerturbationSpec {
                epsilon: default_epsilon(1000),
                seed: 3,
            },
        )
        .unwrap(),
        &IntegratorConfig {
            dt: 0.05,
            t_end: 100.0,
            sample_every: 1,
            scheme: Scheme::Yoshida4,
        },
    )
    .unwrap();
    let u0 = long.samples[0].u;
    let p0 = long.samples[0].p_total;
    let du = long
        .samples
        .iter()
        .map(|o| (o.u - u0).abs() / u0.abs())
        .fold(0.0f64, f64::max);
    let dp = long
        .samples
        .iter()
        .map(|o| (o.p_total - p0).abs())
        .fold(0.0f64, f64::max);
    println!("\nN = 1000, t = 100 at dt = 0.05:");
    println!("  worst relative energy drift  {du:.3e}");
    println!("  worst absolute momentum drift {dp:.3e}");

    // forward 10 time units, then backward with negated steps
    let fwd = evolve(
        &state,
        &IntegratorConfig {
            dt: 0.05,
            t_end: 10.0,
            sample_every: usize::MAX,
            scheme: Scheme::Yoshida4,
        },
    )
    .unwrap();
    let mut back = fwd.final_state.clone();
    for _ in 0..200 {
        back = step(&back, -0.05, Scheme::Yoshida4).unwrap();
    }
    println!("\nreversibility over t = 10: return error {:.3e}", max_norm(&back, &state));
}
