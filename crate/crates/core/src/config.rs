//! Run configuration files in human units.
//!
//! Frequencies are given as ordinary frequencies (kHz, MHz) and converted to
//! angular frequencies on load; forces in yN, times in µs or ms, angles in
//! degrees. A config may also be read back from the `config` field of any
//! JSON output envelope.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{BackgroundCorrection, ThermometryOptions};
use crate::mc::{DetectionConfig, Experiment, MotionalPrep, SpinMotionModel};
use crate::physics::{FinalPulse, OdfSequence, SequenceKind, ThermalState, TrapConfig};
use crate::units::{self, AMU, BE9_MASS_AMU, E_CHARGE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub seed: u64,
    #[serde(default = "default_shots")]
    pub shots: usize,
    #[serde(default)]
    pub trap: RawTrap,
    pub sequence: RawSequence,
    pub prep: RawPrep,
    #[serde(default)]
    pub detection: RawDetection,
    #[serde(default)]
    pub histogram: RawHistogram,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<RawSweep>,
    #[serde(default)]
    pub estimate: RawEstimate,
}

fn default_shots() -> usize {
    1000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTrap {
    pub ion_mass_amu: f64,
    pub ion_charge_e: f64,
    pub omega_z_khz: f64,
    pub omega_c_mhz: f64,
    pub omega_r_khz: f64,
    pub gamma_mhz: f64,
}

impl Default for RawTrap {
    fn default() -> Self {
        RawTrap {
            ion_mass_amu: BE9_MASS_AMU,
            ion_charge_e: 1.0,
            omega_z_khz: 795.0,
            omega_c_mhz: 7.597,
            omega_r_khz: 48.0,
            gamma_mhz: 17.97,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSequence {
    #[serde(default = "default_kind")]
    pub kind: SequenceKind,
    pub f0_yn: f64,
    #[serde(default)]
    pub detuning_khz: f64,
    pub tau_us: f64,
    #[serde(default = "default_pi_pulse")]
    pub pi_pulse_us: f64,
    #[serde(default = "default_phi_odf")]
    pub phi_odf_deg: f64,
    #[serde(default)]
    pub phi0_deg: f64,
}

fn default_kind() -> SequenceKind {
    SequenceKind::SpinEcho
}

fn default_pi_pulse() -> f64 {
    70.0
}

fn default_phi_odf() -> f64 {
    180.0
}

/// Exactly one of `temperature_mk`, `inv_beta` or `nbar` sets the thermal state.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPrep {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature_mk: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv_beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nbar: Option<f64>,
    #[serde(default)]
    pub coherent_drive: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDetection {
    pub n_ions: usize,
    pub photon_rate_per_ion: f64,
    pub detection_time_ms: f64,
    pub background_dephasing_deg: f64,
    /// Final-pulse phase, 0 or 90 degrees.
    pub delta_phi_deg: f64,
    pub spin_motion: SpinMotionModel,
}

impl Default for RawDetection {
    fn default() -> Self {
        RawDetection {
            n_ions: 174,
            photon_rate_per_ion: 1e3,
            detection_time_ms: DetectionConfig::DEFAULT_DETECTION_TIME * 1e3,
            background_dephasing_deg: 0.0,
            delta_phi_deg: 90.0,
            spin_motion: SpinMotionModel::PhaseKick,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHistogram {
    /// Bin width in units of the all-bright mean.
    pub bin_width: f64,
}

impl Default for RawHistogram {
    fn default() -> Self {
        RawHistogram { bin_width: 0.02 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    /// "start:stop:points" in kHz.
    pub delta_khz: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackgroundMode {
    None,
    Analytic,
    Calibration,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEstimate {
    pub bootstrap: usize,
    pub background: BackgroundMode,
    /// Raw σ² of a φ_ODF = 0 run, for `background = "calibration"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration_sigma_sq: Option<f64>,
}

impl Default for RawEstimate {
    fn default() -> Self {
        RawEstimate { bootstrap: 1000, background: BackgroundMode::Analytic, calibration_sigma_sq: None }
    }
}

/// Evenly spaced detunings, parsed from "start:stop:points" (kHz).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetuningRange {
    pub start_khz: f64,
    pub stop_khz: f64,
    pub points: usize,
}

impl DetuningRange {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = || Error::domain(format!("detuning range {s:?} must be start:stop:points"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start_khz: f64 = parts[0].parse().map_err(|_| bad())?;
        let stop_khz: f64 = parts[1].parse().map_err(|_| bad())?;
        let points: usize = parts[2].parse().map_err(|_| bad())?;
        if points < 2 || !start_khz.is_finite() || !stop_khz.is_finite() || start_khz == stop_khz {
            return Err(Error::domain(format!("detuning range {s:?} needs two distinct ends and at least 2 points")));
        }
        Ok(DetuningRange { start_khz, stop_khz, points })
    }

    /// Detunings in rad/s.
    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop_khz - self.start_khz) / (self.points - 1) as f64;
        (0..self.points).map(|i| units::khz(self.start_khz + step * i as f64)).collect()
    }
}

/// A validated configuration in SI units.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub raw: RawConfig,
    pub experiment: Experiment,
    pub shots: usize,
    pub bin_width: f64,
    pub sweep: Option<DetuningRange>,
    pub thermometry: ThermometryOptions,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config { path: path.into(), message: e.to_string() })?;
        let raw = if path.extension().is_some_and(|e| e == "json") {
            raw_from_envelope(&text).map_err(|message| Error::Config { path: path.into(), message })?
        } else {
            toml::from_str(&text).map_err(|e| Error::Config { path: path.into(), message: e.to_string() })?
        };
        Self::from_raw(raw).map_err(|e| match e {
            Error::Domain(message) => Error::Config { path: path.into(), message },
            e => e,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Domain(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self> {
        let field = |name: &str, e: Error| match e {
            Error::Domain(m) => Error::domain(format!("{name}: {m}")),
            e => e,
        };
        let t = &raw.trap;
        let trap = TrapConfig {
            ion_mass: t.ion_mass_amu * AMU,
            ion_charge: t.ion_charge_e * E_CHARGE,
            omega_z: units::khz(t.omega_z_khz),
            omega_c: units::mhz(t.omega_c_mhz),
            omega_r: units::khz(t.omega_r_khz),
            gamma: units::mhz(t.gamma_mhz),
        };
        trap.validate().map_err(|e| field("trap", e))?;

        let s = &raw.sequence;
        let sequence = OdfSequence {
            f0: units::yn(s.f0_yn),
            detuning_delta: units::khz(s.detuning_khz),
            arm_duration_tau: s.tau_us * 1e-6,
            pi_pulse_time: s.pi_pulse_us * 1e-6,
            phi_odf: s.phi_odf_deg.to_radians(),
            phi0: s.phi0_deg.to_radians(),
            kind: s.kind,
        };
        sequence.validate().map_err(|e| field("sequence", e))?;

        let p = &raw.prep;
        let thermal = match (p.temperature_mk, p.inv_beta, p.nbar) {
            (Some(t), None, None) => ThermalState::from_temperature(t * 1e-3, &trap),
            (None, Some(b), None) => ThermalState::from_inv_beta(b).map(|s| s.with_temperature(&trap)),
            (None, None, Some(n)) => ThermalState::from_nbar(n).map(|s| s.with_temperature(&trap)),
            _ => Err(Error::domain("set exactly one of temperature_mk, inv_beta, nbar")),
        }
        .map_err(|e| field("prep", e))?;
        let prep = MotionalPrep { thermal, coherent_drive_mag: p.coherent_drive };
        prep.validate().map_err(|e| field("prep", e))?;

        let d = &raw.detection;
        let detection = DetectionConfig {
            n_ions: d.n_ions,
            photon_rate_per_ion: d.photon_rate_per_ion,
            detection_time: d.detection_time_ms * 1e-3,
            background_dephasing_std: d.background_dephasing_deg.to_radians(),
            rng_seed: raw.seed,
        };
        detection.validate().map_err(|e| field("detection", e))?;
        let final_pulse = match d.delta_phi_deg {
            x if x == 0.0 => FinalPulse::Length,
            x if x == 90.0 => FinalPulse::Dephasing,
            x => return Err(Error::domain(format!("detection.delta_phi_deg must be 0 or 90, got {x}"))),
        };

        if raw.shots == 0 {
            return Err(Error::domain("shots: must be at least 1"));
        }
        if !(raw.histogram.bin_width > 0.0 && raw.histogram.bin_width.is_finite()) {
            return Err(Error::domain(format!("histogram.bin_width: must be positive, got {}", raw.histogram.bin_width)));
        }
        let sweep = raw
            .sweep
            .as_ref()
            .map(|s| DetuningRange::parse(&s.delta_khz))
            .transpose()
            .map_err(|e| field("sweep.delta_khz", e))?;

        let e = &raw.estimate;
        let background = match (&e.background, e.calibration_sigma_sq) {
            (BackgroundMode::None, _) => BackgroundCorrection::None,
            (BackgroundMode::Analytic, _) => BackgroundCorrection::Analytic { std: detection.background_dephasing_std },
            (BackgroundMode::Calibration, Some(sigma_sq)) if sigma_sq < 0.5 => BackgroundCorrection::Calibration { sigma_sq },
            (BackgroundMode::Calibration, _) => {
                return Err(Error::domain("estimate.calibration_sigma_sq: required below 0.5 for calibration mode"))
            }
        };
        let thermometry = ThermometryOptions { bootstrap_resamples: e.bootstrap, bootstrap_seed: raw.seed, background };

        Ok(RunConfig {
            experiment: Experiment { trap, sequence, detection, prep, final_pulse, spin_motion: d.spin_motion },
            shots: raw.shots,
            bin_width: raw.histogram.bin_width,
            sweep,
            thermometry,
            raw,
        })
    }

    /// Same configuration with a different seed.
    pub fn with_seed(&self, seed: u64) -> Result<Self> {
        Self::from_raw(RawConfig { seed, ..self.raw.clone() })
    }

    pub fn with_shots(&self, shots: usize) -> Result<Self> {
        Self::from_raw(RawConfig { shots, ..self.raw.clone() })
    }
}

fn raw_from_envelope(text: &str) -> std::result::Result<RawConfig, String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let config = value.get("config").ok_or("JSON file has no `config` field")?;
    serde_json::from_value(config.clone()).map_err(|e| format!("config: {e}"))
}
