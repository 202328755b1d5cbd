use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{self, AMU, BE9_MASS_AMU, E_CHARGE, HBAR, K_B};

/// Physical parameters of the Penning trap and the trapped species.
///
/// Frequencies are angular (rad/s).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapConfig {
    /// Single-ion mass, kg.
    pub ion_mass: f64,
    /// Single-ion charge, C.
    pub ion_charge: f64,
    /// Axial (COM) trap frequency.
    pub omega_z: f64,
    /// Cyclotron frequency.
    pub omega_c: f64,
    /// Crystal rotation frequency.
    pub omega_r: f64,
    /// Linewidth of the Doppler cooling transition.
    pub gamma: f64,
}

impl TrapConfig {
    /// ⁹Be⁺ in the 4.46 T trap: ω_z = 2π·795 kHz, Ω_c = 2π·7.597 MHz,
    /// ω_r = 2π·48 kHz, Γ = 2π·17.97 MHz.
    pub fn be9_penning() -> Self {
        TrapConfig {
            ion_mass: BE9_MASS_AMU * AMU,
            ion_charge: E_CHARGE,
            omega_z: units::khz(795.0),
            omega_c: units::mhz(7.597),
            omega_r: units::khz(48.0),
            gamma: units::mhz(17.97),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("ion_mass", self.ion_mass),
            ("omega_z", self.omega_z),
            ("omega_c", self.omega_c),
            ("gamma", self.gamma),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !self.ion_charge.is_finite() || self.ion_charge == 0.0 {
            return Err(Error::domain("ion_charge must be non-zero"));
        }
        // ω_r = 0 is admitted as the non-rotating limit of the β_r expression.
        if !(self.omega_r >= 0.0 && self.omega_r < self.omega_c) {
            return Err(Error::domain(format!(
                "omega_r must satisfy 0 <= omega_r < omega_c, got {}",
                self.omega_r
            )));
        }
        Ok(())
    }

    /// k_B T / (ħ ω_z) for a mode temperature `temperature` (K).
    pub fn inv_beta(&self, temperature: f64) -> f64 {
        K_B * temperature / (HBAR * self.omega_z)
    }
}

/// Ground-state wavefunction size of a single ion, z₀ = √(ħ / 2Mω_z).
pub fn ground_state_size(trap: &TrapConfig) -> Result<f64> {
    if !(trap.ion_mass > 0.0 && trap.ion_mass.is_finite()) {
        return Err(Error::domain(format!("ion mass must be positive, got {}", trap.ion_mass)));
    }
    if !(trap.omega_z > 0.0 && trap.omega_z.is_finite()) {
        return Err(Error::domain(format!("omega_z must be positive, got {}", trap.omega_z)));
    }
    Ok((HBAR / (2.0 * trap.ion_mass * trap.omega_z)).sqrt())
}

/// Radial confinement parameter β_r = ω_r(Ω_c − ω_r)/ω_z² − 1/2.
/// A single ion plane forms for β_r ≪ 1.
pub fn trap_beta_r(trap: &TrapConfig) -> f64 {
    trap.omega_r * (trap.omega_c - trap.omega_r) / (trap.omega_z * trap.omega_z) - 0.5
}

/// Doppler cooling limit ħΓ/2k_B in kelvin.
pub fn doppler_limit(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::domain(format!("linewidth must be positive, got {gamma}")));
    }
    Ok(HBAR * gamma / (2.0 * K_B))
}
