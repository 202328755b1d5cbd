//! Monte Carlo of the resonant spin-echo dephasing experiment and
//! thermometry from the excess spin variance.

use std::f64::consts::PI;

use spin_dephasing::inference::{estimate_nbar, nbar_to_temperature, Readout, ThermometryOptions};
use spin_dephasing::mc::*;
use spin_dephasing::physics::*;

fn experiment(phi_odf: f64, seed: u64) -> spin_dephasing::Result<Experiment> {
    let trap = TrapConfig::be9_penning();
    Ok(Experiment {
        sequence: OdfSequence {
            f0: 30e-24,
            detuning_delta: 0.0,
            arm_duration_tau: 100e-6,
            pi_pulse_time: 70e-6,
            phi_odf,
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
        prep: MotionalPrep::thermal(ThermalState::from_temperature(0.42e-3, &trap)?),
        final_pulse: FinalPulse::Dephasing,
        spin_motion: SpinMotionModel::PhaseKick,
        trap,
    })
}

fn main() -> spin_dephasing::Result<()> {
    let opts = ThermometryOptions::default();
    for (label, phi) in [("phi_ODF = 0 ", 0.0), ("phi_ODF = pi", PI)] {
        let exp = experiment(phi, 42)?;
        let shots = run_experiment(&exp, 50_000)?;
        let h = build_histogram(&shots, 0.02, Normalization::for_detection(&exp.detection))?;
        println!("{label}: {} shots", shots.len());
        let top = *h.counts.iter().max().unwrap() as f64;
        for (c, n) in h.bin_centers().iter().zip(&h.counts) {
            println!("  {c:5.2} {}", "#".repeat((60.0 * *n as f64 / top).round() as usize));
        }

        let alpha = experiment(PI, 0)?.alpha()?;
        let t = estimate_nbar(Readout::Shots(&shots), &exp.detection, alpha.norm(), &opts)?;
        println!(
            "  sigma^2 = {:.5} +- {:.5}, model {:.5}",
            t.sigma_sq,
            t.sigma_sq_err,
            thermal_sigma_sq(exp.alpha()?, &exp.prep.thermal)
        );
        let flags = t.nbar.flags;
        if flags.below_resolution {
            println!("  occupation below resolution ({:.3})", t.nbar.value);
        } else {
            let temp = nbar_to_temperature(t.nbar.value, &exp.trap)?;
            println!(
                "  inverse beta = {:.2} +- {:.2} (configured {:.2}), exact-n temperature {:.3} mK",
                t.nbar.value,
                t.nbar.std_error,
                exp.prep.thermal.inv_beta(),
                temp * 1e3
            );
        }
    }
    Ok(())
}
