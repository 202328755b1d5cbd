use serde::{Deserialize, Serialize};

use super::trap::TrapConfig;
use crate::error::{Error, Result};
use crate::units::{HBAR, K_B};

/// Thermal distribution of the COM mode.
///
/// Carries both β = ħω_z/k_BT and the exact mean occupation n̄ = 1/(e^β − 1).
/// Coherent-state formulas use β⁻¹, Fock-state formulas use n̄; the two agree
/// only for n̄ ≫ 1 (β⁻¹ ≈ n̄ + 1/2). `beta` may be `+inf` (ground state).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalState {
    pub beta: f64,
    pub nbar: f64,
    /// Mode temperature in K, when the state was built against a trap.
    pub temperature: Option<f64>,
}

impl ThermalState {
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::domain(format!("beta must be positive, got {beta}")));
        }
        Ok(ThermalState { beta, nbar: nbar_of_beta(beta), temperature: None })
    }

    /// State with β⁻¹ = `inv_beta` (the coherent-state "occupation").
    pub fn from_inv_beta(inv_beta: f64) -> Result<Self> {
        if !(inv_beta >= 0.0) {
            return Err(Error::domain(format!("inverse beta must be non-negative, got {inv_beta}")));
        }
        Self::from_beta(1.0 / inv_beta)
    }

    pub fn from_nbar(nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0 && nbar.is_finite()) {
            return Err(Error::domain(format!("nbar must be non-negative, got {nbar}")));
        }
        let beta = if nbar == 0.0 { f64::INFINITY } else { (1.0 / nbar).ln_1p() };
        Ok(ThermalState { beta, nbar, temperature: None })
    }

    pub fn from_temperature(temperature: f64, trap: &TrapConfig) -> Result<Self> {
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::domain(format!("temperature must be non-negative, got {temperature}")));
        }
        let beta = HBAR * trap.omega_z / (K_B * temperature);
        Ok(ThermalState { temperature: Some(temperature), ..Self::from_beta(beta)? })
    }

    pub fn ground() -> Self {
        ThermalState { beta: f64::INFINITY, nbar: 0.0, temperature: Some(0.0) }
    }

    /// β⁻¹ = ⟨|α₀|²⟩ over the thermal coherent-state distribution.
    pub fn inv_beta(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn with_temperature(mut self, trap: &TrapConfig) -> Self {
        self.temperature = Some(HBAR * trap.omega_z / (K_B * self.beta));
        self
    }
}

fn nbar_of_beta(beta: f64) -> f64 {
    1.0 / beta.exp_m1()
}

/// Mode temperature for mean occupation `nbar`, using n̄ = 1/(e^β − 1).
pub fn nbar_to_temperature(nbar: f64, trap: &TrapConfig) -> Result<f64> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::domain(format!("nbar must be non-negative, got {nbar}")));
    }
    if nbar == 0.0 {
        return Ok(0.0);
    }
    let beta = (1.0 / nbar).ln_1p();
    Ok(HBAR * trap.omega_z / (K_B * beta))
}

/// Mean occupation at mode temperature `temperature` (K).
pub fn temperature_to_nbar(temperature: f64, trap: &TrapConfig) -> Result<f64> {
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::domain(format!("temperature must be non-negative, got {temperature}")));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    Ok(nbar_of_beta(HBAR * trap.omega_z / (K_B * temperature)))
}
