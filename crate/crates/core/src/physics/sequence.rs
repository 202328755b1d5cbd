use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::amplitude::Amplitude;
use super::trap::{ground_state_size, TrapConfig};
use crate::error::{Error, Result};
use crate::units::HBAR;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    /// π/2 – τ – π/2 with a single ODF period.
    Ramsey,
    /// π/2 – τ – π – τ – π/2 with the ODF applied in both arms.
    SpinEcho,
}

/// Spin-dependent optical dipole force pulse parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdfSequence {
    /// Force magnitude F₀ per spin, N.
    pub f0: f64,
    /// δ = μ − ω_z, rad/s.
    pub detuning_delta: f64,
    /// Duration τ of each ODF arm, s.
    pub arm_duration_tau: f64,
    /// Duration t_π of the intermediate π-pulse, s.
    pub pi_pulse_time: f64,
    /// Extra ODF phase advance applied in the second arm, rad in [0, 2π).
    pub phi_odf: f64,
    /// ODF phase at the start of the first arm, rad.
    pub phi0: f64,
    pub kind: SequenceKind,
}

impl OdfSequence {
    pub fn validate(&self) -> Result<()> {
        if !(self.f0 >= 0.0 && self.f0.is_finite()) {
            return Err(Error::domain(format!("f0 must be non-negative, got {}", self.f0)));
        }
        if !(self.arm_duration_tau > 0.0 && self.arm_duration_tau.is_finite()) {
            return Err(Error::domain(format!(
                "arm duration must be positive, got {}",
                self.arm_duration_tau
            )));
        }
        if !(self.pi_pulse_time >= 0.0 && self.pi_pulse_time.is_finite()) {
            return Err(Error::domain(format!(
                "pi-pulse time must be non-negative, got {}",
                self.pi_pulse_time
            )));
        }
        if !(0.0..TAU).contains(&self.phi_odf) {
            return Err(Error::domain(format!("phi_odf must lie in [0, 2pi), got {}", self.phi_odf)));
        }
        if !self.detuning_delta.is_finite() || !self.phi0.is_finite() {
            return Err(Error::domain("detuning and phi0 must be finite"));
        }
        Ok(())
    }
}

/// F₀z₀ / (2ħ√N): displacement rate per unit time on resonance.
fn drive_strength(f0: f64, trap: &TrapConfig, n_ions: usize) -> Result<f64> {
    if n_ions == 0 {
        return Err(Error::domain("n_ions must be at least 1"));
    }
    let z0 = ground_state_size(trap)?;
    Ok(f0 * z0 / (2.0 * HBAR * (n_ions as f64).sqrt()))
}

/// (1 − e^{iδτ})/δ, continuous through δ = 0 where it equals −iτ.
pub fn detuning_factor(delta: f64, tau: f64) -> Complex64 {
    let x = delta * tau;
    if x.abs() < 1e-8 {
        // −iτ (1 + ix/2 − x²/6)
        Complex64::new(delta * tau * tau / 2.0, -tau + delta * delta * tau * tau * tau / 6.0)
    } else {
        (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, x)) / delta
    }
}

/// α(τ, φ) = −i F₀z₀τ/(2ħ√N) e^{iφ} for a single resonant ODF period, with
/// φ = `seq.phi0`.
pub fn resonant_displacement(seq: &OdfSequence, trap: &TrapConfig, n_ions: usize) -> Result<Amplitude> {
    if seq.detuning_delta != 0.0 {
        return Err(Error::domain(format!(
            "resonant displacement requires zero detuning, got {}",
            seq.detuning_delta
        )));
    }
    let k = drive_strength(seq.f0, trap, n_ions)?;
    let a = Complex64::new(0.0, -k * seq.arm_duration_tau) * Complex64::from_polar(1.0, seq.phi0);
    Ok(a.into())
}

/// Single ODF period at arbitrary detuning: F₀z₀/(2ħ√N) · (1 − e^{iδτ})/δ · e^{iφ₀}.
pub fn single_arm_displacement(seq: &OdfSequence, trap: &TrapConfig, n_ions: usize) -> Result<Amplitude> {
    let k = drive_strength(seq.f0, trap, n_ions)?;
    let a = k * detuning_factor(seq.detuning_delta, seq.arm_duration_tau) * Complex64::from_polar(1.0, seq.phi0);
    Ok(a.into())
}

/// Final phase-space displacement after the two ODF arms of a spin echo:
///
/// α_SE = F₀z₀/(2ħ√N) · (1 − e^{iδτ})/δ · (e^{iφ₀} − e^{i[φ₀ + δ(τ + t_π) + φ_ODF]})
///
/// The relative minus sign comes from the intermediate π-pulse.
pub fn spin_echo_displacement(seq: &OdfSequence, trap: &TrapConfig, n_ions: usize) -> Result<Amplitude> {
    let k = drive_strength(seq.f0, trap, n_ions)?;
    let delta = seq.detuning_delta;
    let tau = seq.arm_duration_tau;
    let second = seq.phi0 + delta * (tau + seq.pi_pulse_time) + seq.phi_odf;
    let arms = Complex64::from_polar(1.0, seq.phi0) - Complex64::from_polar(1.0, second);
    Ok((k * detuning_factor(delta, tau) * arms).into())
}

/// Spin-dependent displacement produced by `seq`, dispatching on its kind.
pub fn odf_displacement(seq: &OdfSequence, trap: &TrapConfig, n_ions: usize) -> Result<Amplitude> {
    match seq.kind {
        SequenceKind::Ramsey => single_arm_displacement(seq, trap, n_ions),
        SequenceKind::SpinEcho => spin_echo_displacement(seq, trap, n_ions),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{self, AMU};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn trap() -> TrapConfig {
        TrapConfig { ion_mass: 9.0 * AMU, ..TrapConfig::be9_penning() }
    }

    fn echo(f0: f64, delta: f64, tau: f64, phi_odf: f64) -> OdfSequence {
        OdfSequence {
            f0,
            detuning_delta: delta,
            arm_duration_tau: tau,
            pi_pulse_time: 70e-6,
            phi_odf,
            phi0: 0.0,
            kind: SequenceKind::SpinEcho,
        }
    }

    /// Rotating-frame drive integrated with the trapezoid rule: the slow
    /// component e^{i(δt + φ)} of the ODF, sign-flipped after the π-pulse.
    fn trapezoid_echo(seq: &OdfSequence, trap: &TrapConfig, n: usize, steps: usize) -> Complex64 {
        let k = seq.f0 * ground_state_size(trap).unwrap() / (2.0 * HBAR * (n as f64).sqrt());
        let arm = |start: f64, phase: f64| {
            let h = seq.arm_duration_tau / steps as f64;
            let f = |t: f64| Complex64::from_polar(1.0, seq.detuning_delta * t + phase);
            let mut acc = (f(start) + f(start + seq.arm_duration_tau)) * 0.5;
            for i in 1..steps {
                acc += f(start + i as f64 * h);
            }
            acc * h
        };
        let first = arm(0.0, seq.phi0);
        let second = arm(seq.arm_duration_tau + seq.pi_pulse_time, seq.phi0 + seq.phi_odf);
        Complex64::new(0.0, -k) * (first - second)
    }

    #[test]
    fn resonant_magnitude_typical_force() {
        let seq = OdfSequence { kind: SequenceKind::Ramsey, ..echo(30e-24, 0.0, 100e-6, PI) };
        let single = resonant_displacement(&seq, &trap(), 174).unwrap();
        assert_relative_eq!(single.norm(), 0.028_657_892_861_478_5, max_relative = 1e-10);
        assert!(single.re.abs() < 1e-18);
        let total = spin_echo_displacement(&seq, &trap(), 174).unwrap();
        assert_relative_eq!(total.norm(), 2.0 * single.norm(), max_relative = 1e-12);
        assert!((0.04..0.06).contains(&total.norm()), "{}", total.norm());
    }

    #[test]
    fn resonant_edge_cases() {
        let base = OdfSequence { kind: SequenceKind::Ramsey, ..echo(30e-24, 0.0, 100e-6, 0.0) };
        let zero = OdfSequence { f0: 0.0, ..base.clone() };
        assert_eq!(resonant_displacement(&zero, &trap(), 10).unwrap().norm(), 0.0);
        let long = OdfSequence { arm_duration_tau: 200e-6, ..base.clone() };
        let a = resonant_displacement(&base, &trap(), 10).unwrap().norm();
        assert_relative_eq!(resonant_displacement(&long, &trap(), 10).unwrap().norm(), 2.0 * a, max_relative = 1e-14);
        let rotated = OdfSequence { phi0: 1.1, ..base.clone() };
        assert_relative_eq!(resonant_displacement(&rotated, &trap(), 10).unwrap().norm(), a, max_relative = 1e-14);
        assert!(resonant_displacement(&base, &trap(), 0).is_err());
        let detuned = OdfSequence { detuning_delta: 1.0, ..base };
        assert!(resonant_displacement(&detuned, &trap(), 10).is_err());
    }

    #[test]
    fn echo_reinforces_at_phi_pi() {
        let seq = echo(30e-24, 0.0, 100e-6, PI);
        let a = spin_echo_displacement(&seq, &trap(), 174).unwrap();
        let k = seq.f0 * ground_state_size(&trap()).unwrap() / (HBAR * 174f64.sqrt());
        assert!(a.re.abs() < 1e-15);
        assert_relative_eq!(a.im, -k * seq.arm_duration_tau, max_relative = 1e-12);
    }

    #[test]
    fn echo_cancels_at_phi_zero() {
        let seq = echo(30e-24, 0.0, 100e-6, 0.0);
        assert_eq!(spin_echo_displacement(&seq, &trap(), 174).unwrap(), Amplitude::ZERO);
    }

    #[test]
    fn echo_matches_numerical_integration() {
        let seq = echo(1e-23, units::khz(1.0), 500e-6, PI);
        let a = spin_echo_displacement(&seq, &trap(), 174).unwrap();
        // Frozen from an independent evaluation of the closed form.
        assert_relative_eq!(a.re, 0.002_893_920_838_340_117, max_relative = 1e-9);
        assert_relative_eq!(a.im, -0.012_946_657_598_830_02, max_relative = 1e-9);
        let num = trapezoid_echo(&seq, &trap(), 174, 10_000);
        assert!((num - a.as_complex()).norm() <= 1e-6 * a.norm(), "{num} vs {a:?}");
    }

    #[test]
    fn echo_continuous_at_zero_detuning() {
        let at_zero = spin_echo_displacement(&echo(1e-23, 0.0, 500e-6, PI), &trap(), 174).unwrap();
        for delta in [1e-10, -1e-10, 1e-6, 1.0] {
            let near = spin_echo_displacement(&echo(1e-23, delta, 500e-6, PI), &trap(), 174).unwrap();
            let tol = if delta.abs() < 1e-9 { 1e-9 } else { 1e-3 };
            assert!((near - at_zero).norm() <= tol * at_zero.norm(), "delta {delta}");
        }
    }

    #[test]
    fn detuning_factor_continuous_across_series_cutoff() {
        let tau = 1e-3;
        let below = detuning_factor(0.999e-8 / tau, tau);
        let above = detuning_factor(1.001e-8 / tau, tau);
        assert!((below - above).norm() < 1e-7 * tau);
        assert_eq!(detuning_factor(0.0, tau), Complex64::new(0.0, -tau));
    }

    #[test]
    fn ramsey_single_arm_resonant_limit() {
        let seq = OdfSequence { kind: SequenceKind::Ramsey, ..echo(1e-23, 0.0, 300e-6, 0.0) };
        let a = single_arm_displacement(&seq, &trap(), 50).unwrap();
        let b = resonant_displacement(&seq, &trap(), 50).unwrap();
        assert!((a - b).norm() < 1e-15);
        assert_eq!(odf_displacement(&seq, &trap(), 50).unwrap(), a);
    }

    #[test]
    fn validate_rejects_bad_phase() {
        assert!(echo(1e-23, 0.0, 1e-4, 2.0 * PI).validate().is_err());
        assert!(echo(-1.0, 0.0, 1e-4, 0.0).validate().is_err());
        assert!(echo(1e-23, 0.0, 0.0, 0.0).validate().is_err());
        assert!(echo(1e-23, 0.0, 1e-4, PI).validate().is_ok());
    }
}
