use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physics::{Amplitude, ThermalState};

/// Initial motional state: thermal coherent-state ensemble plus an optional
/// coherent drive of fixed magnitude and random phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotionalPrep {
    pub thermal: ThermalState,
    /// |α_d|; zero when no drive is applied.
    pub coherent_drive_mag: f64,
}

impl MotionalPrep {
    pub fn thermal(thermal: ThermalState) -> Self {
        MotionalPrep { thermal, coherent_drive_mag: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.coherent_drive_mag >= 0.0 && self.coherent_drive_mag.is_finite()) {
            return Err(Error::domain(format!(
                "coherent drive magnitude must be non-negative, got {}",
                self.coherent_drive_mag
            )));
        }
        if !(self.thermal.beta > 0.0) {
            return Err(Error::domain("thermal beta must be positive"));
        }
        Ok(())
    }
}

/// Draws α_k = √(−ln u / β) e^{iφ_k} (u ∈ (0, 1], φ_k ∈ [0, 2π)), so |α_k|²
/// is exponentially distributed with mean β⁻¹, and adds |α_d| e^{iφ'_k} with
/// an independent phase. Both phases are always drawn so that runs with and
/// without a drive consume the stream identically.
pub fn sample_initial_state<R: Rng + ?Sized>(prep: &MotionalPrep, rng: &mut R) -> Amplitude {
    let u = 1.0 - rng.random::<f64>();
    let phase = TAU * rng.random::<f64>();
    let drive_phase = TAU * rng.random::<f64>();
    let mag = (-u.ln() * prep.thermal.inv_beta()).sqrt();
    let thermal = Amplitude::from_polar(mag, phase);
    if prep.coherent_drive_mag > 0.0 {
        thermal + Amplitude::from_polar(prep.coherent_drive_mag, drive_phase)
    } else {
        thermal
    }
}
