//! Closed-form spin observables for a coherent initial motional state and
//! their thermal averages.

use serde::{Deserialize, Serialize};

use super::amplitude::Amplitude;
use super::thermal::ThermalState;
use crate::error::{Error, Result};
use crate::units::HBAR;

/// Phase of the final π/2 pulse relative to the first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FinalPulse {
    /// Δφ = 0: measures the Bloch vector length.
    Length,
    /// Δφ = π/2: maps xy-plane rotations onto the detection axis.
    ///
    /// With R(θ, φ) = [[cos θ/2, −e^{−iφ} sin θ/2], [e^{iφ} sin θ/2, cos θ/2]]
    /// a positive rotation θ moves the Bloch vector toward ↓, so
    /// ⟨S_z⟩ = −(N/2) sin θ e^{−2|α|²}. The truncated-basis evolution in
    /// [`super::oscillator`] fixes this sign.
    Dephasing,
}

impl FinalPulse {
    pub fn delta_phi(self) -> f64 {
        match self {
            FinalPulse::Length => 0.0,
            FinalPulse::Dephasing => std::f64::consts::FRAC_PI_2,
        }
    }

    /// Single-spin probability of ↑ after a total z-rotation `theta` with
    /// coherence factor `contrast`.
    pub fn p_up(self, theta: f64, contrast: f64) -> f64 {
        let p = match self {
            FinalPulse::Length => 0.5 * (1.0 - theta.cos() * contrast),
            FinalPulse::Dephasing => 0.5 * (1.0 - theta.sin() * contrast),
        };
        p.clamp(0.0, 1.0)
    }
}

/// θ_coh = 4 Im{α* α₀}: the z-rotation of the composite Bloch vector caused
/// by the spin-dependent displacement `alpha` acting on the coherent state `alpha0`.
pub fn coherent_rotation_angle(alpha: Amplitude, alpha0: Amplitude) -> f64 {
    4.0 * (alpha.re * alpha0.im - alpha.im * alpha0.re)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochExpectations {
    /// ⟨S_x⟩ before the final pulse.
    pub sx: f64,
    /// ⟨S_y⟩ before the final pulse.
    pub sy: f64,
    /// ⟨S_z⟩ after the final pulse.
    pub sz: f64,
    /// Single-spin probability of ↑ after the final pulse.
    pub p_up: f64,
}

pub fn bloch_expectations(
    alpha: Amplitude,
    alpha0: Amplitude,
    n_ions: usize,
    final_pulse: FinalPulse,
) -> BlochExpectations {
    let theta = coherent_rotation_angle(alpha, alpha0);
    let contrast = (-2.0 * alpha.norm_sqr()).exp();
    let half_n = n_ions as f64 / 2.0;
    let sz = match final_pulse {
        FinalPulse::Length => -half_n * theta.cos() * contrast,
        FinalPulse::Dephasing => -half_n * theta.sin() * contrast,
    };
    BlochExpectations {
        sx: half_n * theta.cos() * contrast,
        sy: half_n * theta.sin() * contrast,
        sz,
        p_up: final_pulse.p_up(theta, contrast),
    }
}

/// ⟨θ_coh²⟩_th = 8|α|²β⁻¹.
pub fn thermal_theta_variance(alpha: Amplitude, state: &ThermalState) -> f64 {
    8.0 * alpha.norm_sqr() * state.inv_beta()
}

/// Thermally averaged P↑ for the Δφ = 0 sequence: ½(1 − e^{−2|α|²(2β⁻¹+1)}).
pub fn thermal_p_up(alpha: Amplitude, state: &ThermalState) -> f64 {
    -0.5 * (-2.0 * alpha.norm_sqr() * (2.0 * state.inv_beta() + 1.0)).exp_m1()
}

/// Normalized thermal dephasing σ² = ⟨⟨σ₁ᶻσ₂ᶻ⟩⟩_th = ½(1 − e^{−8|α|²(2β⁻¹+1)})
/// for the Δφ = π/2 sequence.
pub fn thermal_sigma_sq(alpha: Amplitude, state: &ThermalState) -> f64 {
    -0.5 * (-8.0 * alpha.norm_sqr() * (2.0 * state.inv_beta() + 1.0)).exp_m1()
}

/// ⟨⟨S_z²⟩⟩_th = N/4 + N(N−1)/4 · σ².
pub fn thermal_sz_second_moment(alpha: Amplitude, state: &ThermalState, n_ions: usize) -> f64 {
    let n = n_ions as f64;
    n / 4.0 + n * (n - 1.0) / 4.0 * thermal_sigma_sq(alpha, state)
}

/// Inverts the σ² closed form for the mode occupation:
/// n̄ ≈ ln[1/(1 − 2σ²)] / (16|α|²) − 1/2.
///
/// The result is β⁻¹ of the thermal state that produces `sigma_sq`. Values
/// below zero (σ² at or below the resolution floor) are returned unchanged.
pub fn nbar_from_sigma(sigma_sq: f64, alpha_mag: f64) -> Result<f64> {
    if !(alpha_mag > 0.0 && alpha_mag.is_finite()) {
        return Err(Error::domain(format!("|alpha| must be positive, got {alpha_mag}")));
    }
    if sigma_sq.is_nan() {
        return Err(Error::domain("sigma^2 is NaN"));
    }
    if sigma_sq >= 0.5 {
        return Err(Error::Saturated { sigma_sq });
    }
    let log_term = -(-2.0 * sigma_sq).ln_1p();
    Ok(log_term / (16.0 * alpha_mag * alpha_mag) - 0.5)
}

/// Classical precession angle Φ_P = F₀ Z_A cos φ τ / ħ for an ion oscillating
/// with amplitude `z_amp` and phase `phase` under a resonant force `f0`.
pub fn classical_precession(f0: f64, z_amp: f64, phase: f64, tau: f64) -> f64 {
    f0 * z_amp * phase.cos() * tau / HBAR
}
