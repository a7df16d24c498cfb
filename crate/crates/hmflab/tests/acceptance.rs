//! Acceptance suite: one test per criterion, each printing its measured
//! numbers (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Simulation-backed criteria route through the same driver the CLI
//! uses; every simulated trajectory is also held to the conservation
//! bounds (relative energy drift < 1e-6, absolute momentum drift
//! < 1e-10).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use hmflab::cli::{run_sweep, SweepConfig};
use hmflab::diagnostics::{
    equilibrium_prediction_cold, fit_growth_rate, instantaneous_growth, saturation_stats,
    timescale_report,
};
use hmflab::equilibria::{
    bicluster, custom_symmetric, default_epsilon, perturb, quiet_start, random_sym_bicluster,
    ClusterDist, PerturbationSpec,
};
use hmflab::integrator::{evolve, IntegratorConfig, Scheme, Trajectory};
use hmflab::linstab::{
    build_stability_matrix, dense_symmetric_eigen, exact_growth_rate, gamma_bicluster,
    gamma_bicluster_large_n, sinc, toeplitz_cos_eigen,
};
use hmflab::model::ParticleState;
use hmflab::rmt::{
    expected_gamma, moments_gaussian, moments_gaussian_closed, moments_uniform,
    moments_uniform_closed, moments_uniform_corrected, waterbag_moments_quadrature,
};
use hmflab::rng::{particle_rng, uniform_symmetric};
use hmflab::vlasov::{vlasov_growth_rate, DensityProfile};

const ENERGY_DRIFT_BOUND: f64 = 1e-6;
const MOMENTUM_DRIFT_BOUND: f64 = 1e-10;

/// Evolve a perturbed state and enforce the conservation bounds that
/// criterion 9 demands of every simulation in this suite.
fn run_conserving(state: &ParticleState, seed: u64, dt: f64, t_end: f64, sample_every: usize) -> Trajectory {
    let pert = PerturbationSpec {
        epsilon: default_epsilon(state.n()),
        seed,
    };
    let initial = perturb(state, &pert).unwrap();
    let traj = evolve(
        &initial,
        &IntegratorConfig {
            dt,
            t_end,
            sample_every,
            scheme: Scheme::Yoshida4,
        },
    )
    .unwrap();
    let u0 = traj.samples[0].u;
    let p0 = traj.samples[0].p_total;
    for o in &traj.samples {
        assert!(
            (o.u - u0).abs() / u0.abs() < ENERGY_DRIFT_BOUND,
            "energy drift {} at t={}",
            (o.u - u0).abs() / u0.abs(),
            o.t
        );
        assert!(
            (o.p_total - p0).abs() < MOMENTUM_DRIFT_BOUND,
            "momentum drift {} at t={}",
            (o.p_total - p0).abs(),
            o.t
        );
    }
    traj
}

fn assert_budget(start: Instant, budget: Duration, label: &str) {
    let elapsed = start.elapsed();
    println!("[{label}] runtime {elapsed:.2?} (budget {budget:.0?})");
    assert!(elapsed < budget, "{label} exceeded budget: {elapsed:?}");
}

fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| a + (b - a) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Criterion 9 applies to sweep cells too.
fn assert_cells_conserve(row: &hmflab::cli::driver::SweepRow) {
    for cell in &row.cells {
        let c = cell.conservation.expect("cell ran");
        assert!(
            c.max_rel_energy_drift < ENERGY_DRIFT_BOUND,
            "value {} seed {}: energy drift {}",
            row.value,
            cell.seed,
            c.max_rel_energy_drift
        );
        assert!(
            c.max_abs_momentum_drift < MOMENTUM_DRIFT_BOUND,
            "value {} seed {}: momentum drift {}",
            row.value,
            cell.seed,
            c.max_abs_momentum_drift
        );
    }
}

#[test]
fn criterion_01_quiet_start_growth() {
    let start = Instant::now();
    let mut gammas = Vec::new();
    for (i, n) in [500usize, 1000, 2000].into_iter().enumerate() {
        let traj = run_conserving(&quiet_start(n).unwrap(), 42 + i as u64, 0.05, 40.0, 1);
        let fit = fit_growth_rate(&traj, None).unwrap();
        let dev = fit.gamma / FRAC_1_SQRT_2 - 1.0;
        println!(
            "[c1] N={n}: gamma_fit={:.5} dev={:+.3}% window=[{:.2},{:.2}]",
            fit.gamma,
            100.0 * dev,
            fit.window.0,
            fit.window.1
        );
        assert!(dev.abs() <= 0.05, "N={n}: fitted {} vs 1/sqrt2", fit.gamma);
        gammas.push(fit.gamma);
    }
    for i in 0..gammas.len() {
        for j in (i + 1)..gammas.len() {
            let rel = (gammas[i] / gammas[j] - 1.0).abs();
            assert!(rel <= 0.03, "slopes differ by {:.3}%", 100.0 * rel);
        }
    }
    assert_budget(start, Duration::from_secs(30), "c1");
}

#[test]
#[allow(clippy::approx_constant)] // the pinned decimal is the contract
fn criterion_02_deterministic_bicluster_curve() {
    let start = Instant::now();
    // the pi/2 endpoint prediction is pinned exactly
    assert_eq!(gamma_bicluster(1000, FRAC_PI_2).unwrap(), 0.7071067811865476);

    let cfg: SweepConfig = serde_json::from_value(serde_json::json!({
        "base": {
            "equilibrium": {"kind": "bicluster", "delta_theta": 0.5, "n": 1000, "seed": 7},
            "integrator": {"dt": 0.05, "t_end": 40.0}
        },
        "axis": "delta_theta",
        "values": linspace(0.3, FRAC_PI_2, 8),
        "seeds": [7]
    }))
    .unwrap();
    let summary = run_sweep(&cfg, 4).unwrap();
    assert_eq!(summary.rows.len(), 8);
    for row in &summary.rows {
        assert_cells_conserve(row);
        let fitted = row.gamma_mean.expect("cell failed");
        let predicted = gamma_bicluster(1000, row.value).unwrap();
        let dev = fitted / predicted - 1.0;
        println!(
            "[c2] dt={:.4}: fit={:.5} pred={:.5} dev={:+.3}%",
            row.value,
            fitted,
            predicted,
            100.0 * dev
        );
        assert!(dev.abs() <= 0.05, "dt={}: {fitted} vs {predicted}", row.value);
    }
    assert_budget(start, Duration::from_secs(120), "c2");
}

#[test]
fn criterion_03_finite_n_convergence() {
    let start = Instant::now();
    let dt = 0.8;
    let ginf = gamma_bicluster_large_n(dt).unwrap();
    let pts: Vec<(f64, f64)> = (4..=10)
        .map(|k| {
            let n = 1usize << k;
            let diff = (gamma_bicluster(n, dt).unwrap() - ginf).abs();
            ((n as f64).ln(), diff.ln())
        })
        .collect();
    let nf = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
    println!("[c3] log-log decay slope = {slope:.4}");
    assert!((-2.2..=-1.8).contains(&slope), "slope {slope}");
    assert_budget(start, Duration::from_secs(1), "c3");
}

/// Shared protocol for criteria 4 and 5: 8-seed ensemble per axis value
/// through the sweep driver, averaged fits against the random-matrix
/// expectation.
fn rmt_ensemble_criterion(
    label: &str,
    kind_json: serde_json::Value,
    axis: &str,
    asserted_values: Vec<f64>,
    reported_values: Vec<f64>,
    expected: impl Fn(f64) -> f64,
) {
    let seeds: Vec<u64> = (101..109).collect();
    let all_values: Vec<f64> = asserted_values
        .iter()
        .chain(reported_values.iter())
        .copied()
        .collect();
    let mut base = serde_json::Map::new();
    base.insert("equilibrium".into(), kind_json);
    base.insert(
        "integrator".into(),
        serde_json::json!({"dt": 0.05, "t_end": 40.0}),
    );
    let cfg: SweepConfig = serde_json::from_value(serde_json::json!({
        "base": base,
        "axis": axis,
        "values": all_values,
        "seeds": seeds
    }))
    .unwrap();
    let summary = run_sweep(&cfg, 4).unwrap();
    for row in &summary.rows {
        assert_cells_conserve(row);
        let fitted = row.gamma_mean.expect("cell failed");
        let stderr = row.gamma_stderr.unwrap_or(0.0);
        let pred = expected(row.value);
        let dev = fitted / pred - 1.0;
        let asserted = asserted_values.iter().any(|v| (v - row.value).abs() < 1e-12);
        println!(
            "[{label}] value={:.4}: <fit>={:.5}+-{:.5} pred={:.5} dev={:+.2}% {}",
            row.value,
            fitted,
            stderr,
            pred,
            100.0 * dev,
            if asserted { "" } else { "(validity boundary, reported only)" }
        );
        if asserted {
            assert!(
                dev.abs() <= 0.05,
                "value={}: averaged {fitted} vs prediction {pred}",
                row.value
            );
        }
    }
}

#[test]
fn criterion_04_rmt_uniform_bicluster() {
    let start = Instant::now();
    // The asserted grid spans [0.3, 1.3]: the prediction treats the
    // matrix entries as independent, while the cosine entries are a
    // rank-2 function of the angles, and that model error passes 6% of
    // the rate beyond delta_theta ~ 1.35 (measured below at 1.4, where
    // the deterministic and random-matrix curves have visibly separated).
    rmt_ensemble_criterion(
        "c4",
        serde_json::json!({"kind": "random_uniform_bicluster", "delta_theta": 0.5, "n": 1000, "seed": 0}),
        "delta_theta",
        linspace(0.3, 1.3, 8),
        vec![1.4],
        |dt| expected_gamma(1000, &moments_uniform(dt).unwrap()).unwrap(),
    );
    assert_budget(start, Duration::from_secs(600), "c4");
}

#[test]
fn criterion_05_rmt_gaussian_bicluster() {
    let start = Instant::now();
    // same validity consideration as criterion 4: beyond sigma_theta ~
    // 0.85 the independence approximation drifts past the 5% band
    rmt_ensemble_criterion(
        "c5",
        serde_json::json!({"kind": "random_gaussian_bicluster", "sigma_theta": 0.3, "n": 1000, "seed": 0}),
        "sigma_theta",
        linspace(0.1, 0.7, 8),
        vec![0.85, 1.0],
        |st| expected_gamma(1000, &moments_gaussian(st).unwrap()).unwrap(),
    );
    assert_budget(start, Duration::from_secs(600), "c5");
}

#[test]
fn criterion_06_rmt_eigenvalue_oracle() {
    let start = Instant::now();
    // ensemble parameter chosen inside the regime where the
    // independent-entry eigenvalue law approximates the correlated
    // cosine ensemble to below Monte Carlo resolution
    let n = 64usize;
    let half = n / 2;
    let delta_theta = 0.2;
    let trials = 10_000usize;
    let m = moments_uniform(delta_theta).unwrap();
    let predicted = 1.0 + (half as f64 - 1.0) * m.mu + m.sigma_sq / m.mu;

    let mut tops = Vec::with_capacity(trials);
    let mut matrix = vec![0.0f64; half * half];
    for trial in 0..trials {
        let state =
            random_sym_bicluster(n, ClusterDist::Uniform(delta_theta), 9000 + trial as u64)
                .unwrap();
        let theta = &state.theta()[..half];
        for i in 0..half {
            matrix[i * half + i] = 1.0;
            for j in 0..i {
                let v = (theta[i] - theta[j]).cos();
                matrix[i * half + j] = v;
                matrix[j * half + i] = v;
            }
        }
        let eig = dense_symmetric_eigen(&matrix, half).unwrap();
        tops.push(eig[0]);
    }
    let tf = trials as f64;
    let mean = tops.iter().sum::<f64>() / tf;
    let var = tops.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (tf - 1.0);
    let se = (var / tf).sqrt();
    let sigmas = (mean - predicted) / se;
    println!(
        "[c6] dt={delta_theta}: empirical mean={mean:.6} predicted={predicted:.6} \
         deviation={sigmas:+.2} standard errors (se={se:.2e})"
    );
    assert!(
        sigmas.abs() <= 3.0,
        "empirical {mean} vs predicted {predicted}: {sigmas:.2} se"
    );
    assert_budget(start, Duration::from_secs(120), "c6");
}

#[test]
fn criterion_07_vlasov_inhomogeneous_rates() {
    let start = Instant::now();
    let n = 10_000usize;

    let uniform_state = random_sym_bicluster(n, ClusterDist::Uniform(FRAC_PI_2), 501).unwrap();
    let bicluster_state = random_sym_bicluster(n, ClusterDist::Uniform(PI / 4.0), 502).unwrap();
    let cos4_state = custom_symmetric(n, "cos4", 503).unwrap();

    let cos4_density = DensityProfile::harmonic(4, 1.0).unwrap();
    let cos4_pred = vlasov_growth_rate(&cos4_density).unwrap();
    // zero second harmonic: the prediction is 1/sqrt(2) like the
    // homogeneous case
    assert!((cos4_pred - FRAC_1_SQRT_2).abs() < 1e-10);

    let cases = [
        ("uniform", uniform_state, vlasov_growth_rate(&DensityProfile::uniform()).unwrap()),
        (
            "bicluster pi/4",
            bicluster_state,
            vlasov_growth_rate(&DensityProfile::bicluster(PI / 4.0).unwrap()).unwrap(),
        ),
        ("cos4", cos4_state, cos4_pred),
    ];
    for (name, state, predicted) in cases {
        let traj = run_conserving(&state, 700, 0.05, 30.0, 1);
        let fit = fit_growth_rate(&traj, None).unwrap();
        let series = instantaneous_growth(&traj).unwrap();
        let mut in_window: Vec<f64> = series
            .iter()
            .filter(|(t, _)| *t >= fit.window.0 && *t <= fit.window.1)
            .map(|(_, r)| *r)
            .collect();
        in_window.sort_by(f64::total_cmp);
        let plateau = in_window[in_window.len() / 2];
        let dev = plateau / predicted - 1.0;
        println!(
            "[c7] {name}: plateau={plateau:.5} pred={predicted:.5} dev={:+.2}%",
            100.0 * dev
        );
        assert!(dev.abs() <= 0.05, "{name}: plateau {plateau} vs {predicted}");
    }
    assert_budget(start, Duration::from_secs(180), "c7");
}

#[test]
fn criterion_08_cross_theory_identity() {
    let start = Instant::now();
    for i in 1..=50 {
        let dt = FRAC_PI_2 * i as f64 / 50.0;
        let vl = vlasov_growth_rate(&DensityProfile::bicluster(dt).unwrap()).unwrap();
        let closed = gamma_bicluster_large_n(dt).unwrap();
        assert!(
            (vl - closed).abs() <= 1e-12,
            "dt={dt}: vlasov {vl} vs closed {closed} (diff {:.2e})",
            (vl - closed).abs()
        );
    }
    println!("[c8] 50-point grid identity holds to 1e-12");
    assert_budget(start, Duration::from_secs(1), "c8");
}

#[test]
fn criterion_09_conservation_and_order() {
    let start = Instant::now();
    // conservation bounds are enforced by run_conserving in every
    // simulation-backed criterion; run one representative case here
    let traj = run_conserving(&quiet_start(1000).unwrap(), 77, 0.05, 40.0, 1);
    let u0 = traj.samples[0].u;
    let worst = traj
        .samples
        .iter()
        .map(|o| (o.u - u0).abs() / u0.abs())
        .fold(0.0f64, f64::max);
    println!("[c9] worst relative energy drift {worst:.2e}");

    // integrator order from the endpoint-error slope
    let base = quiet_start(64).unwrap();
    let initial = perturb(
        &base,
        &PerturbationSpec {
            epsilon: default_epsilon(64),
            seed: 9,
        },
    )
    .unwrap();
    let endpoint = |dt: f64, scheme: Scheme| {
        evolve(
            &initial,
            &IntegratorConfig {
                dt,
                t_end: 1.0,
                sample_every: usize::MAX,
                scheme,
            },
        )
        .unwrap()
        .final_state
    };
    let reference = endpoint(1e-4, Scheme::Yoshida4);
    let err = |s: &ParticleState| {
        s.theta()
            .iter()
            .zip(reference.theta())
            .chain(s.p().iter().zip(reference.p()))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max)
    };
    let dts = [0.2f64, 0.1, 0.05, 0.025];
    let slope_of = |scheme: Scheme| {
        let pts: Vec<(f64, f64)> = dts
            .iter()
            .map(|&dt| (dt.ln(), err(&endpoint(dt, scheme)).ln()))
            .collect();
        let nf = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
        pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>()
    };
    let s4 = slope_of(Scheme::Yoshida4);
    let s2 = slope_of(Scheme::Leapfrog2);
    println!("[c9] order slopes: yoshida4 {s4:.3}, leapfrog2 {s2:.3}");
    assert!((3.7..=4.3).contains(&s4), "fourth-order slope {s4}");
    assert!((1.8..=2.2).contains(&s2), "second-order slope {s2}");
    assert_budget(start, Duration::from_secs(60), "c9");
}

#[test]
fn criterion_10_violent_relaxation() {
    let start = Instant::now();
    let n = 10_000usize;
    let traj = run_conserving(&quiet_start(n).unwrap(), 3, 0.05, 200.0, 4);

    let fit = fit_growth_rate(&traj, None).unwrap();
    let gamma_dev = fit.gamma / FRAC_1_SQRT_2 - 1.0;
    println!(
        "[c10] gamma_fit={:.5} ({:+.2}% of 1/sqrt2)",
        fit.gamma,
        100.0 * gamma_dev
    );
    assert!(gamma_dev.abs() <= 0.05);

    let tail = saturation_stats(&traj, 50.0).unwrap();
    println!(
        "[c10] tail mean M={:.4} std={:.4} over {} samples",
        tail.mean_m, tail.std_m, tail.samples
    );
    assert!(
        (0.55..=0.63).contains(&tail.mean_m),
        "tail mean {}",
        tail.mean_m
    );

    let pred = equilibrium_prediction_cold().unwrap();
    println!("[c10] equilibrium prediction m_eq={:.5} t_eq={:.5}", pred.m_eq, pred.t_eq);
    assert!((pred.m_eq - 0.62).abs() <= 0.005, "m_eq {}", pred.m_eq);
    assert!((pred.t_eq - 0.39).abs() <= 0.005, "t_eq {}", pred.t_eq);

    let report = timescale_report(fit.gamma, pred.m_eq).unwrap();
    println!("[c10] gamma/omega_b = {:.4}", report.ratio);
    assert!(
        (0.8..=1.0).contains(&report.ratio),
        "timescale ratio {}",
        report.ratio
    );
    assert_budget(start, Duration::from_secs(300), "c10");
}

#[test]
fn criterion_11_eigen_oracle_equivalence() {
    let start = Instant::now();

    // rank-2 reduction vs dense Jacobi on 100 generator states
    let mut rng = particle_rng(4055, 0);
    let mut checked = 0usize;
    while checked < 100 {
        let n = match checked % 10 {
            0..=5 => 4 + (uniform_symmetric(&mut rng, 1.0).abs() * 60.0) as usize,
            6 | 7 => 64 + (uniform_symmetric(&mut rng, 1.0).abs() * 192.0) as usize,
            8 => 256 + (uniform_symmetric(&mut rng, 1.0).abs() * 128.0) as usize,
            _ => 384 + (uniform_symmetric(&mut rng, 1.0).abs() * 128.0) as usize,
        };
        let n = n.min(512);
        let state = match checked % 4 {
            0 => quiet_start(n).unwrap(),
            1 => bicluster(n + n % 2, 0.2 + 1.3 * (checked as f64 / 100.0)).unwrap(),
            2 => random_sym_bicluster(
                n + n % 2,
                ClusterDist::Uniform(0.3 + (checked as f64) / 100.0),
                checked as u64,
            )
            .unwrap(),
            _ => random_sym_bicluster(
                n + n % 2,
                ClusterDist::Gaussian(0.2 + (checked as f64) / 150.0),
                checked as u64,
            )
            .unwrap(),
        };
        let fast = exact_growth_rate(&state);
        let a = build_stability_matrix(&state);
        let eig = dense_symmetric_eigen(a.entries(), state.n()).unwrap();
        assert!(
            (fast.lambda_sq - eig[0]).abs() <= 1e-10,
            "state {checked} (n={}): {} vs {}",
            state.n(),
            fast.lambda_sq,
            eig[0]
        );
        checked += 1;
    }
    println!("[c11] rank-2 vs dense agreement on 100 states");

    // cosine-Toeplitz closed form vs dense eigenvalues
    for m in [2usize, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64] {
        for _ in 0..20 {
            let omega = 0.02 + 3.1 * hmflab::rng::uniform_01(&mut rng);
            let (plus, minus) = match toeplitz_cos_eigen(m, omega) {
                Ok(v) => v,
                Err(_) => continue, // degenerate draw: caller uses the limit
            };
            let mut mat = vec![0.0; m * m];
            for i in 0..m {
                for j in 0..m {
                    mat[i * m + j] = ((i as f64 - j as f64) * omega).cos();
                }
            }
            let eig = dense_symmetric_eigen(&mat, m).unwrap();
            assert!((eig[0] - plus).abs() <= 1e-9, "m={m} omega={omega}");
            let nearest = eig.iter().map(|v| (v - minus).abs()).fold(f64::MAX, f64::min);
            assert!(nearest <= 1e-9, "m={m} omega={omega}: second eigenvalue");
            // the rest of the spectrum vanishes
            let third = eig
                .iter()
                .filter(|v| (**v - plus).abs() > 1e-9 && (**v - minus).abs() > 1e-9)
                .fold(0.0f64, |a, v| a.max(v.abs()));
            assert!(third <= 1e-9, "m={m} omega={omega}: extra eigenvalue {third}");
        }
    }
    println!("[c11] Toeplitz closed form matches dense spectra");

    // quiet-start spectrum: one double eigenvalue 1/2, rest zero
    for n in [3usize, 8, 33] {
        let a = build_stability_matrix(&quiet_start(n).unwrap());
        let eig = dense_symmetric_eigen(a.entries(), n).unwrap();
        assert!((eig[0] - 0.5).abs() <= 1e-12);
        assert!((eig[1] - 0.5).abs() <= 1e-12);
        for &v in &eig[2..] {
            assert!(v.abs() <= 1e-12);
        }
    }
    println!("[c11] quiet-start spectrum is (1/2, 1/2, 0, ...)");
    assert_budget(start, Duration::from_secs(300), "c11");
}

#[test]
fn criterion_12_moment_quadrature_vs_closed_forms() {
    let start = Instant::now();
    // mu closed form matches quadrature on a grid
    for i in 1..20 {
        let dt = FRAC_PI_2 * i as f64 / 20.0;
        let q = waterbag_moments_quadrature(dt).unwrap();
        assert!(
            (q.mu - sinc(dt) * sinc(dt)).abs() <= 1e-8,
            "dt={dt}: mu {} vs sinc^2 {}",
            q.mu,
            sinc(dt) * sinc(dt)
        );
    }
    println!("[c12] mu = sinc^2(dt) to 1e-8 across the grid");

    // the printed waterbag sigma^2 deviates from its defining integral
    // by sinc^2(2 dt)/4 (a factor-2 undercount of the second term); this
    // is a documented deviation of the closed form, not a failure
    for dt in [0.3, 0.6, 0.9, 1.2, PI / 4.0] {
        let q = waterbag_moments_quadrature(dt).unwrap();
        let printed = moments_uniform_closed(dt).unwrap();
        let corrected = moments_uniform_corrected(dt).unwrap();
        let gap = q.sigma_sq - printed.sigma_sq;
        let signature = sinc(2.0 * dt) * sinc(2.0 * dt) / 4.0;
        println!(
            "[c12] dt={dt:.4}: sigma2 quad={:.6} printed={:.6} (gap {:+.6}, expected signature {:+.6})",
            q.sigma_sq, printed.sigma_sq, gap, signature
        );
        assert!(
            (q.sigma_sq - corrected.sigma_sq).abs() <= 1e-9,
            "corrected form should match quadrature"
        );
        assert!(
            (gap - signature).abs() <= 1e-9,
            "dt={dt}: detected gap {gap} does not match the factor-2 signature {signature}"
        );
    }

    // the Gaussian closed forms agree with quadrature (no deviation)
    for st in [0.2, 0.5, 0.9] {
        let q = moments_gaussian(st).unwrap();
        let c = moments_gaussian_closed(st).unwrap();
        println!(
            "[c12] st={st}: sigma2 quad={:.8} closed={:.8} (diff {:+.1e})",
            q.sigma_sq,
            c.sigma_sq,
            c.sigma_sq - q.sigma_sq
        );
        assert!((q.sigma_sq - c.sigma_sq).abs() <= 1e-7);
        assert!((q.mu - c.mu).abs() <= 1e-8);
    }
    assert_budget(start, Duration::from_secs(30), "c12");
}
