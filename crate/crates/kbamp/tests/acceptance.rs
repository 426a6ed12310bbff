//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;

use kbamp::averaging::average;
use kbamp::fit::{fit_loglog, select_n, FitWindow};
use kbamp::integrate::{
    envelope, exact_monorhythmic, integrate_amplitude, integrate_full, sup_gap,
    IntegratorSettings, OutputGrid, Trajectory,
};
use kbamp::model::OscillatorModel;
use kbamp::rational::ratio;
use kbamp::runner::{preset, run_sweep, ExperimentConfig};
use kbamp::cycles::{find_cycles, Stability};

struct Criterion {
    label: &'static str,
    passed: bool,
    detail: String,
}

impl Criterion {
    fn report(self) {
        let status = if self.passed { "PASS" } else { "FAIL" };
        println!("{status}: {} - {}", self.label, self.detail);
        assert!(self.passed, "{}: {}", self.label, self.detail);
    }
}

fn scaled_pattern(weights: [i64; 5], alpha: &BigRational, beta: &BigRational) -> Vec<BigRational> {
    let gamma = ratio(7, 500);
    let delta = ratio(9, 6250);
    let scale = ratio(1, 1024);
    vec![
        BigRational::zero(),
        ratio(weights[0], 1) * &scale,
        ratio(weights[1], 1) * alpha * &scale,
        ratio(weights[2], 1) * beta * &scale,
        ratio(weights[3], 1) * &gamma * &scale,
        ratio(weights[4], 1) * &delta * &scale,
    ]
}

#[test]
fn criterion_1_averaged_equation_exactness() {
    let start = Instant::now();
    // gamma = 0.014 = 7/500, delta = 0.00144 = 9/6250 exercise all terms.
    let vdp = OscillatorModel::vdp(0.0, 0.144, 0.005, 0.014, 0.00144, 0.1, 1.0).unwrap();
    let ray =
        OscillatorModel::rayleigh(0.0, 0.285272, 0.0244993, 0.014, 0.00144, 0.1, 1.0).unwrap();
    let alpha_v = ratio(18, 125);
    let beta_v = ratio(1, 200);
    let alpha_r = ratio(35659, 125_000);
    let beta_r = ratio(244_993, 10_000_000);

    let vdp_drift = average(&vdp).unwrap();
    let ray_drift = average(&ray).unwrap();
    let vdp_expected = scaled_pattern([-128, 64, -40, 28, -21], &alpha_v, &beta_v);
    let ray_expected = scaled_pattern([-384, 320, -280, 252, -231], &alpha_r, &beta_r);

    let vdp_ok = vdp_drift.coefficients() == &vdp_expected[..];
    let ray_ok = ray_drift.coefficients() == &ray_expected[..];
    let elapsed = start.elapsed();
    Criterion {
        label: "criterion 1 (averaged-equation exactness)",
        passed: vdp_ok && ray_ok && elapsed.as_secs_f64() < 1.0,
        detail: format!(
            "position-class pattern exact: {vdp_ok}, velocity-class pattern exact: {ray_ok}, \
             elapsed {elapsed:.2?}"
        ),
    }
    .report();
}

#[test]
fn criterion_2_modified_vdp_drift() {
    // For every a with alpha..delta = 0 the drift must equal
    // -(eps r / 8)(r^2 - 4 a^2), i.e. d1 = a^2/2, d3 = -1/8, rest zero.
    let mut all_ok = true;
    let mut detail = String::new();
    for a in [0.0, 0.5, 1.0, 1.3, 2.0] {
        let model = OscillatorModel::vdp(a, 0.0, 0.0, 0.0, 0.0, 0.1, 1.0).unwrap();
        let drift = average(&model).unwrap();
        let a_rat = kbamp::rational::rational_from_decimal(a).unwrap();
        let d1_ok = drift.coefficients()[0] == &a_rat * &a_rat * ratio(1, 2);
        let d3_ok = drift.coefficients()[1] == ratio(-1, 8);
        let rest_ok = drift.coefficients()[2..].iter().all(Zero::is_zero);
        if !(d1_ok && d3_ok && rest_ok) {
            all_ok = false;
            detail = format!("mismatch at a = {a}");
        }
    }
    Criterion {
        label: "criterion 2 (modified-VdP drift)",
        passed: all_ok,
        detail: if all_ok {
            "d1 = a^2/2 and d3 = -1/8 exactly for a in {0, 0.5, 1, 1.3, 2}".to_string()
        } else {
            detail
        },
    }
    .report();
}

#[test]
fn criterion_3_limit_cycle_amplitudes() {
    let start = Instant::now();
    let cases = [
        (
            OscillatorModel::vdp(1.0, 0.144, 0.005, 0.0, 0.0, 0.1, 1.0).unwrap(),
            [2.63902, 3.96164, 4.83953],
        ),
        (
            OscillatorModel::rayleigh(1.0, 0.285272, 0.0244993, 0.0, 0.0, 0.1, 1.0).unwrap(),
            [1.69091, 2.03334, 2.51274],
        ),
    ];
    let mut worst = 0.0f64;
    let mut stabilities_ok = true;
    for (model, expected) in &cases {
        let set = find_cycles(&average(model).unwrap()).unwrap();
        assert_eq!(set.roots.len(), 3, "expected three cycles for {model:?}");
        for (root, want) in set.roots.iter().zip(expected) {
            worst = worst.max((root.amplitude - want).abs());
        }
        let pattern: Vec<Stability> = set.roots.iter().map(|r| r.stability).collect();
        stabilities_ok &= pattern
            == vec![Stability::Stable, Stability::Unstable, Stability::Stable];
        stabilities_ok &= set.rhythm_count == 2;
    }
    let elapsed = start.elapsed();
    Criterion {
        label: "criterion 3 (limit-cycle amplitudes)",
        passed: worst < 1e-4 && stabilities_ok && elapsed.as_secs_f64() < 1.0,
        detail: format!(
            "worst amplitude error {worst:.2e} (tol 1e-4), stabilities (S,U,S): {stabilities_ok}, \
             elapsed {elapsed:.2?}"
        ),
    }
    .report();
}

#[test]
fn criterion_4_integrator_oracle() {
    let start = Instant::now();
    let settings = IntegratorSettings {
        t_end: 1000.0,
        ..Default::default()
    };
    let mut worst = 0.0f64;
    for eps in [0.01, 0.1] {
        let model = OscillatorModel::vdp(0.0, 0.0, 0.0, 0.0, 0.0, eps, 1.0).unwrap();
        let drift = average(&model).unwrap();
        for r0 in [0.5, 2.0, 4.9] {
            let traj = integrate_amplitude(&drift, r0, &settings).unwrap();
            for (&t, &r) in traj.times().iter().zip(traj.scalar_values().unwrap()) {
                let exact = exact_monorhythmic(r0, eps, t).unwrap();
                worst = worst.max((r - exact).abs() / exact);
            }
        }
    }
    let elapsed = start.elapsed();
    Criterion {
        label: "criterion 4 (integrator vs closed-form oracle)",
        passed: worst <= 1e-6 && elapsed.as_secs_f64() < 5.0,
        detail: format!(
            "worst relative error {worst:.2e} (tol 1e-6) over r0 in {{0.5, 2, 4.9}}, \
             eps in {{0.01, 0.1}}, t <= 1e3; elapsed {elapsed:.2?}"
        ),
    }
    .report();
}

fn sweep_modal_fraction(config: &ExperimentConfig) -> (Option<u32>, f64, usize) {
    let report = run_sweep(config).unwrap();
    (
        report.aggregate.modal_n,
        report.aggregate.modal_fraction,
        report.aggregate.failures,
    )
}

#[test]
fn criterion_5_headline_modal_exponent() {
    let start = Instant::now();
    let mut all_ok = true;
    let mut details = Vec::new();
    for name in ["vdp-bi", "rayleigh-bi", "vdp-mono", "rayleigh-mono"] {
        // Default config: eps = 0.1, window [1, 500], candidates {1..6},
        // 1000 seeded initial amplitudes.
        let config = preset(name).unwrap();
        let (modal, fraction, failures) = sweep_modal_fraction(&config);
        let ok = modal == Some(3) && fraction >= 0.9 && failures == 0;
        all_ok &= ok;
        details.push(format!("{name}: modal n = {modal:?} at {:.1}%", fraction * 100.0));

        // Robustness: eps = 0.01 with the window (and horizon) scaled by 10.
        let mut slow = config.clone();
        slow.model.epsilon = 0.01;
        slow.fit_window = [10.0, 5000.0];
        slow.integrator.t_end = 5000.0;
        let (modal_slow, fraction_slow, failures_slow) = sweep_modal_fraction(&slow);
        let ok_slow = modal_slow == Some(3) && failures_slow == 0;
        all_ok &= ok_slow;
        details.push(format!(
            "{name} @ eps=0.01: modal n = {modal_slow:?} at {:.1}%",
            fraction_slow * 100.0
        ));
    }
    let elapsed = start.elapsed();
    all_ok &= elapsed.as_secs_f64() < 120.0;
    Criterion {
        label: "criterion 5 (modal best n = 3 with >= 90% agreement)",
        passed: all_ok,
        detail: format!("{}; elapsed {elapsed:.2?}", details.join("; ")),
    }
    .report();
}

#[test]
fn criterion_6_window_dependence_of_the_exponent() {
    // Late-time log-log fit approaches the analytic t^(-1/2) asymptote...
    let r0 = 4.0;
    let eps = 0.1;
    let late_grid = OutputGrid::LogSpaced {
        t_start: 1e3,
        samples: 2000,
    };
    let times = late_grid.times(1e5).unwrap();
    let values: Vec<f64> = times
        .iter()
        .map(|&t| exact_monorhythmic(r0, eps, t).unwrap())
        .collect();
    let late = Trajectory::from_scalar_samples(times, values, "exact decay").unwrap();
    let est = fit_loglog(&late, &FitWindow::new(1e3, 1e5).unwrap()).unwrap();
    let late_ok = (est.exponent - 0.5).abs() <= 0.02;

    // ...while the default decay window still selects index 3.
    let default_window = FitWindow::default();
    let default_grid = OutputGrid::SqrtWarped {
        t_start: default_window.t_start(),
        samples: 2000,
    };
    let times = default_grid.times(default_window.t_end()).unwrap();
    let values: Vec<f64> = times
        .iter()
        .map(|&t| exact_monorhythmic(r0, eps, t).unwrap())
        .collect();
    let early = Trajectory::from_scalar_samples(times, values, "exact decay").unwrap();
    let selection = select_n(&early, &[1, 2, 3, 4, 5, 6], &default_window).unwrap();
    let early_ok = selection.best.n == 3;

    Criterion {
        label: "criterion 6 (asymptotic cross-check vs default window)",
        passed: late_ok && early_ok,
        detail: format!(
            "log-log p on [1e3, 1e5] = {:.4} (0.5 +- 0.02), default window best n = {}",
            est.exponent, selection.best.n
        ),
    }
    .report();
}

#[test]
fn criterion_7_fit_self_consistency() {
    let window = FitWindow::default();
    let grid = OutputGrid::SqrtWarped {
        t_start: 1.0,
        samples: 1200,
    };
    let times = grid.times(500.0).unwrap();
    let mut worst_rel_mse = 0.0f64;
    let mut all_ok = true;
    for n0 in 1..=6u32 {
        let c0 = 3.5;
        let values: Vec<f64> = times
            .iter()
            .map(|&t| c0 * t.powf(-1.0 / n0 as f64))
            .collect();
        let traj = Trajectory::from_scalar_samples(times.clone(), values, "pure power").unwrap();
        let selection = select_n(&traj, &[1, 2, 3, 4, 5, 6], &window).unwrap();
        let rel_mse = selection.best.mse / (c0 * c0);
        worst_rel_mse = worst_rel_mse.max(rel_mse);
        all_ok &= selection.best.n == n0;
        all_ok &= (selection.best.prefactor - c0).abs() / c0 < 1e-10;
    }
    Criterion {
        label: "criterion 7 (exact recovery of noiseless power laws)",
        passed: all_ok && worst_rel_mse <= 1e-12,
        detail: format!(
            "every n0 in 1..=6 recovered; worst relative mse {worst_rel_mse:.2e} (tol 1e-12)"
        ),
    }
    .report();
}

#[test]
fn criterion_8_averaging_consistency() {
    let model = OscillatorModel::vdp(0.0, 0.144, 0.005, 0.0, 0.0, 0.1, 1.0).unwrap();
    let drift = average(&model).unwrap();
    let settings = IntegratorSettings {
        t_end: 200.0,
        ..Default::default()
    };
    let full = integrate_full(&model, 3.16, 0.0, &settings).unwrap();
    let env = envelope(&full, model.omega()).unwrap();
    let amp = integrate_amplitude(&drift, 3.16, &settings).unwrap();
    let gap = sup_gap(&env, &amp).unwrap();
    Criterion {
        label: "criterion 8 (envelope tracks the averaged amplitude)",
        passed: gap <= 0.1,
        detail: format!("sup gap {gap:.4} on [0, 200] (tol 0.1)"),
    }
    .report();
}

#[test]
fn criterion_9_sweep_determinism() {
    let mut config = preset("vdp-bi").unwrap();
    config.ic_count = 128;
    let run_with = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_sweep(&config))
            .unwrap()
    };
    let single_a = run_with(1);
    let single_b = run_with(1);
    let multi = run_with(4);
    let json_ok =
        single_a.to_json() == single_b.to_json() && single_a.to_json() == multi.to_json();
    let csv_ok = single_a.records_csv() == single_b.records_csv()
        && single_a.records_csv() == multi.records_csv();

    // The serialized payloads must also be byte-identical on disk.
    let dir_a = tempfile::TempDir::new().unwrap();
    let dir_b = tempfile::TempDir::new().unwrap();
    let (json_a, csv_a) = single_a.write(dir_a.path()).unwrap();
    let (json_b, csv_b) = multi.write(dir_b.path()).unwrap();
    let files_ok = std::fs::read(json_a).unwrap() == std::fs::read(json_b).unwrap()
        && std::fs::read(csv_a).unwrap() == std::fs::read(csv_b).unwrap();

    Criterion {
        label: "criterion 9 (byte-identical reports across worker counts)",
        passed: json_ok && csv_ok && files_ok,
        detail: format!(
            "in-memory JSON identical: {json_ok}, CSV identical: {csv_ok}, \
             files identical: {files_ok}"
        ),
    }
    .report();
}
