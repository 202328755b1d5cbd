use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Readout and noise parameters for one experiment run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// Number of ions N.
    pub n_ions: usize,
    /// Photon count rate per bright ion, 1/s.
    pub photon_rate_per_ion: f64,
    /// Fluorescence detection window, s. Zero disables photon readout.
    pub detection_time: f64,
    /// Standard deviation of the per-shot Gaussian background rotation, rad.
    pub background_dephasing_std: f64,
    pub rng_seed: u64,
}

impl DetectionConfig {
    /// Detection window giving ≈3510 photons from 174 bright ions at 10³ s⁻¹
    /// per ion.
    pub const DEFAULT_DETECTION_TIME: f64 = 20.2e-3;

    pub fn validate(&self) -> Result<()> {
        if self.n_ions == 0 {
            return Err(Error::domain("n_ions must be at least 1"));
        }
        for (name, v) in [
            ("photon_rate_per_ion", self.photon_rate_per_ion),
            ("detection_time", self.detection_time),
            ("background_dephasing_std", self.background_dephasing_std),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    /// Mean photon count from one bright ion.
    pub fn photons_per_ion(&self) -> f64 {
        self.photon_rate_per_ion * self.detection_time
    }

    pub fn photon_readout(&self) -> bool {
        self.photons_per_ion() > 0.0
    }

    /// Mean photon count with all N ions bright; the histogram unit.
    pub fn bright_counts(&self) -> f64 {
        self.n_ions as f64 * self.photons_per_ion()
    }
}
