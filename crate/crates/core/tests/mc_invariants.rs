mod common;

use rand::Rng;
use rand_distr::StandardNormal;
use spin_dephasing::mc::*;
use spin_dephasing::physics::*;
use spin_dephasing::stats::{arcsine_cdf, ks_one_sample, ks_two_sample, mean_se};

const N: usize = 1_000_000;

fn thermal_samples(inv_beta: f64, seed: u64) -> Vec<Amplitude> {
    let prep = MotionalPrep::thermal(ThermalState::from_inv_beta(inv_beta).unwrap());
    let mut rng = aux_rng(seed, 0);
    (0..N).map(|_| sample_initial_state(&prep, &mut rng)).collect()
}

#[test]
fn mean_p_up_converges_to_thermal_p_up() {
    let alpha = Amplitude::new(0.05, 0.0);
    let state = ThermalState::from_inv_beta(12.0).unwrap();
    let contrast = (-2.0 * alpha.norm_sqr()).exp();
    let p: Vec<f64> = thermal_samples(12.0, 1)
        .into_iter()
        .map(|a0| FinalPulse::Length.p_up(coherent_rotation_angle(alpha, a0), contrast))
        .collect();
    let (m, se) = mean_se(&p);
    assert!((m - thermal_p_up(alpha, &state)).abs() < 3.0 * se, "{m} +- {se}");
}

#[test]
fn theta_moments() {
    let alpha = Amplitude::new(0.03, 0.04);
    let state = ThermalState::from_inv_beta(18.0).unwrap();
    let theta: Vec<f64> = thermal_samples(18.0, 2).into_iter().map(|a0| coherent_rotation_angle(alpha, a0)).collect();
    let (m, se) = mean_se(&theta);
    assert!(m.abs() < 3.0 * se);
    let sq: Vec<f64> = theta.iter().map(|t| t * t).collect();
    let (m, se) = mean_se(&sq);
    assert!((m - thermal_theta_variance(alpha, &state)).abs() < 3.0 * se);
}

/// sin²(θ_coh + η) with η ~ N(0, 4|α|²) averages to σ²; the contrast-factor
/// form sin²(θ_coh)e^{−4|α|²} does not.
#[test]
fn sigma_sq_from_sampled_rotations() {
    let alpha = Amplitude::new(0.0573, 0.0);
    let state = ThermalState::from_inv_beta(11.0).unwrap();
    let exact = thermal_sigma_sq(alpha, &state);
    let mut rng = aux_rng(3, 1);
    let (kicked, shrunk): (Vec<f64>, Vec<f64>) = thermal_samples(11.0, 3)
        .into_iter()
        .map(|a0| {
            let theta = coherent_rotation_angle(alpha, a0);
            let eta = 2.0 * alpha.norm() * rng.sample::<f64, _>(StandardNormal);
            ((theta + eta).sin().powi(2), theta.sin().powi(2) * (-4.0 * alpha.norm_sqr()).exp())
        })
        .unzip();
    let (m, se) = mean_se(&kicked);
    assert!((m - exact).abs() < 3.0 * se, "{m} +- {se} vs {exact}");
    let (m, se) = mean_se(&shrunk);
    assert!((m - exact).abs() > 10.0 * se, "contrast form unexpectedly unbiased");
}

#[test]
fn spin_count_variance_matches_closed_form() {
    // Var(n_up) = N/4 + N(N−1)/4 σ² with photon noise disabled.
    let mut exp = common::at_temperature(0.42e-3, 11);
    exp.detection.photon_rate_per_ion = 0.0;
    let shots = run_experiment(&exp, 200_000).unwrap();
    let n = exp.detection.n_ions as f64;
    let z: Vec<f64> = shots.iter().map(|s| (s.n_up as f64 - n / 2.0).powi(2)).collect();
    let (m, se) = mean_se(&z);
    let expect = thermal_sz_second_moment(exp.alpha().unwrap(), &exp.prep.thermal, exp.detection.n_ions);
    assert!((m - expect).abs() < 3.0 * se, "{m} +- {se} vs {expect}");
}

#[test]
fn contrast_model_underestimates_sigma_sq() {
    let mut exp = common::at_temperature(0.42e-3, 12);
    exp.detection.photon_rate_per_ion = 0.0;
    exp.spin_motion = SpinMotionModel::Contrast;
    let shots = run_experiment(&exp, 200_000).unwrap();
    let q = spin_dephasing::inference::sigma_sq_samples(spin_dephasing::inference::Readout::Shots(&shots), &exp.detection).unwrap();
    let (m, se) = mean_se(&q);
    let exact = thermal_sigma_sq(exp.alpha().unwrap(), &exp.prep.thermal);
    assert!(exact - m > 5.0 * se, "{m} +- {se} vs {exact}");
}

#[test]
fn pure_projection_noise_without_force() {
    let mut exp = common::at_temperature(0.42e-3, 4);
    exp.sequence.f0 = 0.0;
    let shots = run_experiment(&exp, 20_000).unwrap();
    assert!(shots.iter().all(|s| s.p_up == 0.5 && s.theta_coh == 0.0));
    let n: Vec<f64> = shots.iter().map(|s| s.n_up as f64).collect();
    let (m, se) = mean_se(&n);
    assert!((m - 87.0).abs() < 3.0 * se);
    let var: Vec<f64> = n.iter().map(|x| (x - 87.0).powi(2)).collect();
    let (v, se) = mean_se(&var);
    assert!((v - 43.5).abs() < 3.0 * se);
}

#[test]
fn echo_cancellation_leaves_theta_zero() {
    let mut exp = common::at_temperature(0.42e-3, 5);
    exp.sequence.phi_odf = 0.0;
    let shots = run_experiment(&exp, 1000).unwrap();
    assert!(shots.iter().all(|s| s.theta_coh == 0.0));
}

#[test]
fn arcsine_law_for_driven_cold_mode() {
    let mut exp = common::at_temperature(0.42e-3, 6);
    exp.prep = MotionalPrep { thermal: ThermalState::ground(), coherent_drive_mag: 8.0 };
    let amp = 4.0 * exp.alpha().unwrap().norm() * 8.0;
    let theta: Vec<f64> = run_experiment(&exp, 100_000).unwrap().iter().map(|s| s.theta_coh).collect();
    let (_, p) = ks_one_sample(&theta, |x| arcsine_cdf(x, amp));
    assert!(p > 0.01, "p = {p}");
    // A uniform law on the same interval is rejected.
    let (_, p) = ks_one_sample(&theta, |x| ((x + amp) / (2.0 * amp)).clamp(0.0, 1.0));
    assert!(p < 1e-6);
}

#[test]
fn phase_invariance() {
    let a = common::at_temperature(0.7e-3, 7);
    let mut b = a.clone();
    b.sequence.phi0 = 1.234;
    let ta: Vec<f64> = run_experiment(&a, 50_000).unwrap().iter().map(|s| s.theta_coh).collect();
    let tb: Vec<f64> = run_experiment(&b, 50_000).unwrap().iter().map(|s| s.theta_coh).collect();
    assert_ne!(ta, tb);
    let (_, p) = ks_two_sample(&ta, &tb);
    assert!(p > 0.01, "p = {p}");
}

#[test]
fn identical_across_thread_counts() {
    let exp = common::at_temperature(0.42e-3, 8);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_experiment(&exp, 20_000).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}

#[test]
fn single_shot_matches_batch() {
    let exp = common::at_temperature(0.42e-3, 9);
    let batch = run_experiment(&exp, 10).unwrap();
    for (k, shot) in batch.iter().enumerate() {
        let s = simulate_shot(&exp, k as u64, &mut shot_rng(9, k as u64)).unwrap();
        assert_eq!(&s, shot);
    }
    assert_eq!(run_experiment(&exp, 1).unwrap().len(), 1);
}
