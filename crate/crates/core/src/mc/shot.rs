use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::detection::DetectionConfig;
use super::prep::{sample_initial_state, MotionalPrep};
use super::rng::shot_rng;
use crate::error::{Error, Result};
use crate::physics::{coherent_rotation_angle, odf_displacement, Amplitude, FinalPulse, OdfSequence, TrapConfig};

/// How the spin–motion entanglement term e^{−2|α|²} enters a shot.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpinMotionModel {
    /// Each shot receives an extra Gaussian rotation η ~ N(0, 4|α|²) common to
    /// all spins. For a coherent initial state this reproduces the exact
    /// single-spin coherence e^{−2|α|²} and the two-spin correlator
    /// ½(1 − cos 2θ e^{−8|α|²}), so the spin-count moments match the quantum
    /// expressions.
    #[default]
    PhaseKick,
    /// Spins independent given θ with coherence shrunk by e^{−2|α|²}. Drops
    /// the entanglement-induced spin–spin correlation.
    Contrast,
}

/// Everything needed to simulate one experiment shot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub trap: TrapConfig,
    pub sequence: OdfSequence,
    pub detection: DetectionConfig,
    pub prep: MotionalPrep,
    pub final_pulse: FinalPulse,
    #[serde(default)]
    pub spin_motion: SpinMotionModel,
}

impl Experiment {
    pub fn validate(&self) -> Result<()> {
        self.trap.validate()?;
        self.sequence.validate()?;
        self.detection.validate()?;
        self.prep.validate()
    }

    /// Spin-dependent displacement of the configured sequence.
    pub fn alpha(&self) -> Result<Amplitude> {
        odf_displacement(&self.sequence, &self.trap, self.detection.n_ions)
    }
}

/// Outcome of one simulated shot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub index: u64,
    /// Sampled initial coherent state (thermal plus drive).
    pub alpha_k: Amplitude,
    /// 4 Im{α_SE* α_k}.
    pub theta_coh: f64,
    /// θ_coh plus background and spin–motion rotations.
    pub theta_total: f64,
    pub p_up: f64,
    pub n_up: u64,
    pub photons: u64,
}

/// Simulates one shot of `exp`, drawing from `rng`.
pub fn simulate_shot<R: Rng + ?Sized>(exp: &Experiment, index: u64, rng: &mut R) -> Result<ShotRecord> {
    let alpha = exp.alpha()?;
    Ok(shot_with_alpha(exp, alpha, index, rng))
}

fn shot_with_alpha<R: Rng + ?Sized>(exp: &Experiment, alpha: Amplitude, index: u64, rng: &mut R) -> ShotRecord {
    let det = &exp.detection;
    let alpha_k = sample_initial_state(&exp.prep, rng);
    let theta_coh = coherent_rotation_angle(alpha, alpha_k);

    let z_background: f64 = rng.sample(StandardNormal);
    let z_motion: f64 = rng.sample(StandardNormal);
    let (kick, contrast) = match exp.spin_motion {
        SpinMotionModel::PhaseKick => (2.0 * alpha.norm() * z_motion, 1.0),
        SpinMotionModel::Contrast => (0.0, (-2.0 * alpha.norm_sqr()).exp()),
    };
    let theta_total = theta_coh + det.background_dephasing_std * z_background + kick;
    let p_up = exp.final_pulse.p_up(theta_total, contrast);

    let n_up = Binomial::new(det.n_ions as u64, p_up)
        .expect("p_up is clamped to [0, 1]")
        .sample(rng);
    let mean_photons = n_up as f64 * det.photons_per_ion();
    let photons = if mean_photons > 0.0 {
        Poisson::new(mean_photons).expect("positive finite mean").sample(rng) as u64
    } else {
        0
    };

    ShotRecord { index, alpha_k, theta_coh, theta_total, p_up, n_up, photons }
}

/// Runs `n_shots` independent shots. Shot k draws only from the stream keyed
/// by (seed, k), so the result is identical for any thread count.
pub fn run_experiment(exp: &Experiment, n_shots: usize) -> Result<Vec<ShotRecord>> {
    run_shot_range(exp, 0, n_shots)
}

/// Runs shots `first .. first + n_shots`; used to give each point of a sweep
/// its own block of streams.
pub fn run_shot_range(exp: &Experiment, first: u64, n_shots: usize) -> Result<Vec<ShotRecord>> {
    if n_shots == 0 {
        return Err(Error::domain("n_shots must be at least 1"));
    }
    exp.validate()?;
    let alpha = exp.alpha()?;
    let seed = exp.detection.rng_seed;
    Ok((first..first + n_shots as u64)
        .into_par_iter()
        .map(|k| shot_with_alpha(exp, alpha, k, &mut shot_rng(seed, k)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::{SequenceKind, ThermalState};
    use std::f64::consts::PI;

    pub(crate) fn doppler_cooled(seed: u64) -> Experiment {
        Experiment {
            trap: TrapConfig::be9_penning(),
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
                photon_rate_per_ion: 1e3,
                detection_time: DetectionConfig::DEFAULT_DETECTION_TIME,
                background_dephasing_std: 0.0,
                rng_seed: seed,
            },
            prep: MotionalPrep::thermal(
                ThermalState::from_temperature(0.42e-3, &TrapConfig::be9_penning()).unwrap(),
            ),
            final_pulse: FinalPulse::Dephasing,
            spin_motion: SpinMotionModel::PhaseKick,
        }
    }

    #[test]
    fn no_force_is_pure_projection_noise() {
        let mut exp = doppler_cooled(11);
        exp.sequence.f0 = 0.0;
        let shots = run_experiment(&exp, 2000).unwrap();
        assert!(shots.iter().all(|s| s.p_up == 0.5 && s.theta_total == 0.0));
        let n = 174.0;
        let m = shots.iter().map(|s| s.n_up as f64).sum::<f64>() / 2000.0;
        let v = shots.iter().map(|s| (s.n_up as f64 - m).powi(2)).sum::<f64>() / 1999.0;
        // Binomial(N, ½): mean N/2, variance N/4 (sampling error on v is ~3%).
        assert!((m - n / 2.0).abs() < 3.0 * (n / 4.0 / 2000.0).sqrt());
        assert!((v / (n / 4.0) - 1.0).abs() < 0.1, "{v}");
    }

    #[test]
    fn echo_cancellation_gives_zero_rotation() {
        let mut exp = doppler_cooled(12);
        exp.sequence.phi_odf = 0.0;
        let shots = run_experiment(&exp, 500).unwrap();
        assert!(shots.iter().all(|s| s.theta_coh == 0.0 && s.theta_total == 0.0));
    }

    #[test]
    fn replay_is_deterministic() {
        let exp = doppler_cooled(99);
        let a = simulate_shot(&exp, 5, &mut shot_rng(99, 5)).unwrap();
        let b = simulate_shot(&exp, 5, &mut shot_rng(99, 5)).unwrap();
        assert_eq!(a, b);
        let run = run_experiment(&exp, 10).unwrap();
        assert_eq!(run[5], a);
    }

    #[test]
    fn single_shot_run() {
        let shots = run_experiment(&doppler_cooled(1), 1).unwrap();
        assert_eq!(shots.len(), 1);
        assert!(run_experiment(&doppler_cooled(1), 0).is_err());
    }

    #[test]
    fn records_respect_invariants() {
        let mut exp = doppler_cooled(4);
        exp.prep.coherent_drive_mag = 8.0;
        exp.detection.background_dephasing_std = 0.2;
        for s in run_experiment(&exp, 2000).unwrap() {
            assert!((0.0..=1.0).contains(&s.p_up));
            assert!(s.n_up <= 174);
        }
    }
}
