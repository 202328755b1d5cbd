#![allow(dead_code)]

use std::f64::consts::PI;

use spin_dephasing::mc::{DetectionConfig, Experiment, MotionalPrep, SpinMotionModel};
use spin_dephasing::physics::{FinalPulse, OdfSequence, SequenceKind, ThermalState, TrapConfig};

/// Resonant spin echo, 30 yN, 2 × 100 µs, 174 ions, photon readout.
pub fn doppler_cooled(thermal: ThermalState, seed: u64) -> Experiment {
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
        prep: MotionalPrep::thermal(thermal),
        final_pulse: FinalPulse::Dephasing,
        spin_motion: SpinMotionModel::PhaseKick,
    }
}

pub fn at_temperature(t: f64, seed: u64) -> Experiment {
    doppler_cooled(ThermalState::from_temperature(t, &TrapConfig::be9_penning()).unwrap(), seed)
}

/// Same experiment with the force rescaled so that |α_SE| = `mag`.
pub fn with_alpha(mut exp: Experiment, mag: f64) -> Experiment {
    let now = exp.alpha().unwrap().norm();
    exp.sequence.f0 *= mag / now;
    exp
}
