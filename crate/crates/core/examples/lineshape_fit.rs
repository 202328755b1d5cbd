//! Temperature from a noisy synthetic Bloch-vector-length sweep.

use std::f64::consts::PI;

use spin_dephasing::config::DetuningRange;
use spin_dephasing::inference::{fit_lineshape, InitialGuess};
use spin_dephasing::physics::*;
use spin_dephasing::synthetic::lineshape_sweep;
use spin_dephasing::units::to_khz;

fn main() -> spin_dephasing::Result<()> {
    let trap = TrapConfig::be9_penning();
    let seq = OdfSequence {
        f0: 1e-23,
        detuning_delta: 0.0,
        arm_duration_tau: 500e-6,
        pi_pulse_time: 70e-6,
        phi_odf: PI,
        phi0: 0.0,
        kind: SequenceKind::SpinEcho,
    };
    let truth = ThermalState::from_temperature(0.4e-3, &trap)?;
    let deltas = DetuningRange { start_khz: -5.0, stop_khz: 5.0, points: 41 }.values();
    let points = lineshape_sweep(&deltas, &seq, &trap, 174, truth.inv_beta(), 0.07, 0.05, 7)?;

    let guess = InitialGuess { inv_beta: 5.0, offset: 0.05, contrast: 1.0 };
    let fit = fit_lineshape(&points, &seq, &trap, 174, &guess, false)?;
    for p in points.iter().step_by(4) {
        println!("{:6.2} kHz  P(up) = {:.4} +- {:.4}", to_khz(p.detuning_delta), p.p_up_mean, p.p_up_err);
    }
    println!(
        "\nT = {:.3} +- {:.3} mK (truth 0.400), offset {:.4} +- {:.4}, chi^2 = {:.1} for {} dof, {} iterations",
        fit.temperature.value * 1e3,
        fit.temperature.std_error * 1e3,
        fit.offset,
        fit.offset_err,
        fit.chi_sq,
        fit.dof,
        fit.iterations
    );

    let free = fit_lineshape(&points, &seq, &trap, 174, &guess, true)?;
    println!(
        "with free contrast: T = {:.3} +- {:.3} mK, contrast {:.3} +- {:.3}",
        free.temperature.value * 1e3,
        free.temperature.std_error * 1e3,
        free.contrast,
        free.contrast_err.unwrap()
    );
    Ok(())
}
