//! Self-checks of the closed forms against independent routes: truncated
//! Boltzmann sums, truncated-basis quantum evolution, numerical integration
//! and Monte Carlo.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::inference::sigma_sq_samples;
use crate::mc::{aux_rng, run_experiment, sample_initial_state, DetectionConfig, Experiment, MotionalPrep, SpinMotionModel};
use crate::physics::{
    coherent_rotation_angle, fock_thermal_two_spin_correlator, ground_state_size, laguerre, odf_displacement,
    oscillator::{fock_state, ramsey_outcome_probabilities, two_spin_correlator},
    thermal_sigma_sq, thermal_theta_variance, Amplitude, FinalPulse, OdfSequence, SequenceKind, ThermalState, TrapConfig,
};
use crate::stats::mean_se;
use crate::units::HBAR;

/// Laguerre implementation under test.
pub type LaguerreFn = fn(usize, f64) -> f64;

pub fn library_laguerre(n: usize, x: f64) -> f64 {
    laguerre(n, x).expect("order within range")
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub name: String,
    /// Largest deviation found (absolute, or in standard errors for MC checks).
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub checks: Vec<OracleCheck>,
    pub all_passed: bool,
}

impl std::fmt::Display for OracleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {:<52} max_error={:.3e} tol={:.1e}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_error,
                c.tolerance
            )?;
        }
        Ok(())
    }
}

fn check(name: &str, errors: impl IntoIterator<Item = f64>, tolerance: f64) -> OracleCheck {
    // NaN poisons the maximum so a broken route cannot pass.
    let max_error = errors.into_iter().fold(0.0, |m: f64, e| if e.is_nan() || m.is_nan() { f64::NAN } else { m.max(e) });
    OracleCheck { name: name.into(), max_error, tolerance, passed: max_error <= tolerance }
}

fn thermal_sum(lag: LaguerreFn, x: f64, beta: f64) -> f64 {
    let ratio = (-beta).exp();
    let mut weight = -(-beta).exp_m1();
    let mut acc = 0.0;
    let mut n = 0;
    while weight > 1e-18 {
        acc += weight * lag(n, x);
        weight *= ratio;
        n += 1;
    }
    acc
}

/// Runs every check with `lag` standing in for the Laguerre polynomials.
pub fn run_oracles(lag: LaguerreFn) -> OracleReport {
    let grid = || [0.01, 0.1, 1.0].into_iter().flat_map(|x| [0.05, 0.1, 1.0].map(move |b| (x, b)));
    let mut checks = vec![check(
        "thermal Laguerre sum = exp(-x nbar)",
        grid().map(|(x, beta)| (thermal_sum(lag, x, beta) - (-x / beta.exp_m1()).exp()).abs()),
        1e-10,
    )];

    let alphas = [Amplitude::new(0.05, 0.0), Amplitude::new(0.08, 0.05), Amplitude::new(0.2, -0.1)];
    let cases = || alphas.iter().flat_map(|&a| [0usize, 1, 5, 20].map(move |n| (n, a)));
    checks.push(check(
        "Fock P(up) vs truncated-basis evolution",
        cases().map(|(n, a)| {
            let a2 = a.norm_sqr();
            let closed = 0.5 * (1.0 - lag(n, 4.0 * a2) * (-2.0 * a2).exp());
            let brute = ramsey_outcome_probabilities(1, a, &fock_state(n, n + 40), FinalPulse::Length)[0];
            (closed - brute).abs()
        }),
        1e-10,
    ));
    checks.push(check(
        "Fock two-spin correlator vs truncated-basis evolution",
        cases().map(|(n, a)| {
            let a2 = a.norm_sqr();
            let closed = 0.5 * (1.0 - lag(n, 16.0 * a2) * (-8.0 * a2).exp());
            let brute = two_spin_correlator(a, &fock_state(n, n + 40), FinalPulse::Dephasing);
            (closed - brute).abs()
        }),
        1e-10,
    ));
    checks.push(check(
        "thermal Fock correlator sum = coherent sigma^2",
        grid().map(|(x, beta)| {
            let a = Amplitude::new((x / 16.0).sqrt(), 0.0);
            let nbar = 1.0 / beta.exp_m1();
            let fock = 0.5 * (1.0 - (-8.0 * a.norm_sqr()).exp() * thermal_sum(lag, 16.0 * a.norm_sqr(), beta));
            (fock - thermal_sigma_sq(a, &ThermalState::from_inv_beta(nbar).unwrap())).abs()
        }),
        1e-10,
    ));
    checks.push(check(
        "closed-form thermal correlator = coherent sigma^2",
        [(0.5, 0.1), (12.0, 0.05), (18.0, 0.057), (100.0, 0.01)].map(|(nbar, mag)| {
            let a = Amplitude::new(mag, 0.0);
            let fock = fock_thermal_two_spin_correlator(nbar, a).unwrap();
            (fock - thermal_sigma_sq(a, &ThermalState::from_inv_beta(nbar).unwrap())).abs()
        }),
        1e-12,
    ));
    checks.push(check("spin-echo displacement vs trapezoid integration", echo_errors(), 1e-6));
    checks.push(mc_theta_variance());
    checks.push(mc_sigma_sq());
    let all_passed = checks.iter().all(|c| c.passed);
    OracleReport { checks, all_passed }
}

fn echo_errors() -> Vec<f64> {
    let trap = TrapConfig::be9_penning();
    let n = 174;
    let k = |f0: f64| f0 * ground_state_size(&trap).unwrap() / (2.0 * HBAR * (n as f64).sqrt());
    [(0.0, PI), (2.0 * PI * 1e3, PI), (2.0 * PI * 3.3e3, 2.0), (-2.0 * PI * 700.0, PI)]
        .into_iter()
        .map(|(delta, phi_odf)| {
            let seq = OdfSequence {
                f0: 1e-23,
                detuning_delta: delta,
                arm_duration_tau: 500e-6,
                pi_pulse_time: 70e-6,
                phi_odf,
                phi0: 0.3,
                kind: SequenceKind::SpinEcho,
            };
            let closed = odf_displacement(&seq, &trap, n).unwrap().as_complex();
            let steps = 20_000;
            let arm = |start: f64, phase: f64| {
                let h = seq.arm_duration_tau / steps as f64;
                let f = |t: f64| Complex64::from_polar(1.0, delta * t + phase);
                let ends = (f(start) + f(start + seq.arm_duration_tau)) * 0.5;
                ((1..steps).map(|i| f(start + i as f64 * h)).sum::<Complex64>() + ends) * h
            };
            let numeric = Complex64::new(0.0, -k(seq.f0))
                * (arm(0.0, seq.phi0) - arm(seq.arm_duration_tau + seq.pi_pulse_time, seq.phi0 + phi_odf));
            (closed - numeric).norm() / closed.norm()
        })
        .collect()
}

fn mc_theta_variance() -> OracleCheck {
    let alpha = Amplitude::new(0.05, 0.0);
    let state = ThermalState::from_inv_beta(12.0).unwrap();
    let prep = MotionalPrep::thermal(state);
    let mut rng = aux_rng(2024, 1);
    let samples: Vec<f64> = (0..200_000)
        .map(|_| coherent_rotation_angle(alpha, sample_initial_state(&prep, &mut rng)).powi(2))
        .collect();
    let (m, se) = mean_se(&samples);
    check("MC <theta^2> vs 8|alpha|^2/beta (in SE)", [(m - thermal_theta_variance(alpha, &state)).abs() / se], 3.0)
}

fn mc_sigma_sq() -> OracleCheck {
    let trap = TrapConfig::be9_penning();
    let exp = Experiment {
        sequence: OdfSequence {
            f0: 30e-24,
            detuning_delta: 0.0,
            arm_duration_tau: 100e-6,
            pi_pulse_time: 70e-6,
            phi_odf: PI,
            phi0: 0.0,
            kind: SequenceKind::SpinEcho,
        },
        detection: DetectionConfig {
            n_ions: 174,
            photon_rate_per_ion: 0.0,
            detection_time: 0.0,
            background_dephasing_std: 0.0,
            rng_seed: 77,
        },
        prep: MotionalPrep::thermal(ThermalState::from_temperature(0.42e-3, &trap).unwrap()),
        final_pulse: FinalPulse::Dephasing,
        spin_motion: SpinMotionModel::PhaseKick,
        trap,
    };
    let shots = run_experiment(&exp, 20_000).expect("valid experiment");
    let q = sigma_sq_samples(crate::inference::Readout::Shots(&shots), &exp.detection).expect("enough shots");
    let (m, se) = mean_se(&q);
    let exact = thermal_sigma_sq(exp.alpha().unwrap(), &exp.prep.thermal);
    check("MC sigma^2 vs closed form (in SE)", [(m - exact).abs() / se], 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let report = run_oracles(library_laguerre);
        assert!(report.all_passed, "{report}");
        assert_eq!(report.checks.len(), 8);
    }

    #[test]
    fn wrong_laguerre_sign_fails() {
        let report = run_oracles(|n, x| library_laguerre(n, -x));
        assert!(!report.all_passed);
        assert!(!report.checks[0].passed);
    }
}
