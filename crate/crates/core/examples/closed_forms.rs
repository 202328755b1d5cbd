//! Closed-form numbers for the Penning-trap crystal: trap scales, the
//! spin-echo displacement, the thermal rotation spread and its inversion.

use std::f64::consts::PI;

use spin_dephasing::physics::*;
use spin_dephasing::units::{khz, yn};

fn main() -> spin_dephasing::Result<()> {
    let trap = TrapConfig::be9_penning();
    println!("ground-state size z0     = {:.4e} m", ground_state_size(&trap)?);
    println!("beta_r                   = {:.5}", trap_beta_r(&trap));
    println!("Doppler limit            = {:.4} mK", doppler_limit(trap.gamma)? * 1e3);

    let phi = classical_precession(1e-23, 6e-9, 0.0, 1e-3);
    println!("classical precession     = {:.2} deg", phi.to_degrees());

    let seq = OdfSequence {
        f0: yn(30.0),
        detuning_delta: 0.0,
        arm_duration_tau: 100e-6,
        pi_pulse_time: 70e-6,
        phi_odf: PI,
        phi0: 0.0,
        kind: SequenceKind::SpinEcho,
    };
    let alpha = odf_displacement(&seq, &trap, 174)?;
    let state = ThermalState::from_temperature(0.42e-3, &trap)?;
    println!("|alpha_SE| (30 yN, 2x100 us) = {:.5}", alpha.norm());
    println!("inverse beta at 0.42 mK  = {:.3}", state.inv_beta());
    println!("rms theta_coh            = {:.2} deg", thermal_theta_variance(alpha, &state).sqrt().to_degrees());

    let s2 = thermal_sigma_sq(alpha, &state);
    println!("sigma^2                  = {:.5}", s2);
    println!("n from sigma^2           = {:.3}", nbar_from_sigma(s2, alpha.norm())?);

    println!("\ndetuning (kHz)   |alpha_SE|   P(up), delta_phi = 0");
    let sweep = OdfSequence { f0: yn(10.0), arm_duration_tau: 500e-6, ..seq };
    for d in [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0] {
        let a = odf_displacement(&OdfSequence { detuning_delta: khz(d), ..sweep.clone() }, &trap, 174)?;
        let p = thermal_p_up(a, &ThermalState::from_temperature(0.4e-3, &trap)?);
        println!("{d:>8.1}        {:.5}      {:.4}", a.norm(), p);
    }
    Ok(())
}
