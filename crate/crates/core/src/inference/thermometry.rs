//! Mode occupation from the excess spin variance of Δφ = π/2 shots.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::estimate::{Estimate, Method};
use crate::error::{Error, Result};
use crate::mc::{aux_rng, DetectionConfig, ShotRecord};
use crate::physics::nbar_from_sigma;

/// Per-shot measurement fed to the estimator.
#[derive(Clone, Copy, Debug)]
pub enum Readout<'a> {
    /// Simulated shots; photon counts are used when photon readout is
    /// configured, spin counts otherwise.
    Shots(&'a [ShotRecord]),
    /// Raw photon counts per shot.
    Photons(&'a [u64]),
    /// Spin-up counts per shot.
    SpinCounts(&'a [u64]),
}

/// Removal of non-motional dephasing from the measured σ².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BackgroundCorrection {
    None,
    /// Known Gaussian background rotation with standard deviation `std` (rad):
    /// 1 − 2σ² is divided by e^{−2 std²}.
    Analytic { std: f64 },
    /// σ² measured with φ_ODF = 0 (see [`calibration_sigma_sq`]):
    /// 1 − 2σ² is divided by 1 − 2σ²_cal.
    Calibration { sigma_sq: f64 },
}

impl BackgroundCorrection {
    fn factor(&self) -> f64 {
        match *self {
            BackgroundCorrection::None => 1.0,
            BackgroundCorrection::Analytic { std } => (2.0 * std * std).exp(),
            BackgroundCorrection::Calibration { sigma_sq } => 1.0 / (1.0 - 2.0 * sigma_sq),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermometryOptions {
    pub bootstrap_resamples: usize,
    pub bootstrap_seed: u64,
    pub background: BackgroundCorrection,
}

impl Default for ThermometryOptions {
    fn default() -> Self {
        ThermometryOptions {
            bootstrap_resamples: 1000,
            bootstrap_seed: 0,
            background: BackgroundCorrection::None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thermometry {
    /// β⁻¹ of the thermal state consistent with the measured dephasing.
    pub nbar: Estimate,
    /// Measured normalized second moment before background correction.
    pub sigma_sq_raw: f64,
    /// σ² attributed to motion.
    pub sigma_sq: f64,
    /// Standard error of `sigma_sq` from the per-shot spread.
    pub sigma_sq_err: f64,
}

/// Per-shot unbiased contributions to σ²: ((S_z)² − N/4 − photon variance)
/// normalized by N(N−1)/4.
pub fn sigma_sq_samples(readout: Readout<'_>, det: &DetectionConfig) -> Result<Vec<f64>> {
    let n = det.n_ions as f64;
    if det.n_ions < 2 {
        return Err(Error::domain("dephasing thermometry needs at least two ions"));
    }
    let norm = n * (n - 1.0) / 4.0;
    let from_spins = |up: u64| ((up as f64 - n / 2.0).powi(2) - n / 4.0) / norm;
    let c = det.photons_per_ion();
    let from_photons = |photons: u64| {
        let up = photons as f64 / c;
        ((up - n / 2.0).powi(2) - n / 4.0 - up / c) / norm
    };
    let q: Vec<f64> = match readout {
        Readout::Shots(shots) if det.photon_readout() => shots.iter().map(|s| from_photons(s.photons)).collect(),
        Readout::Shots(shots) => shots.iter().map(|s| from_spins(s.n_up)).collect(),
        Readout::Photons(counts) => {
            if !det.photon_readout() {
                return Err(Error::domain("photon counts given but photon readout is disabled"));
            }
            counts.iter().map(|&p| from_photons(p)).collect()
        }
        Readout::SpinCounts(counts) => counts.iter().map(|&u| from_spins(u)).collect(),
    };
    if q.len() < 2 {
        return Err(Error::domain(format!("need at least 2 shots, got {}", q.len())));
    }
    Ok(q)
}

/// Raw σ² of a φ_ODF = 0 calibration run, for [`BackgroundCorrection::Calibration`].
pub fn calibration_sigma_sq(readout: Readout<'_>, det: &DetectionConfig) -> Result<f64> {
    let q = sigma_sq_samples(readout, det)?;
    Ok(mean(&q))
}

/// Estimates the mode occupation from dephasing shots using the inverse
/// σ² relation, with a nonparametric bootstrap standard error.
pub fn estimate_nbar(
    readout: Readout<'_>,
    det: &DetectionConfig,
    alpha_mag: f64,
    opts: &ThermometryOptions,
) -> Result<Thermometry> {
    if !(alpha_mag > 0.0 && alpha_mag.is_finite()) {
        return Err(Error::domain(format!("|alpha| must be positive, got {alpha_mag}")));
    }
    let q = sigma_sq_samples(readout, det)?;
    let factor = opts.background.factor();
    let motional = |raw: f64| 0.5 * (1.0 - (1.0 - 2.0 * raw) * factor);

    let raw = mean(&q);
    let sigma_sq = motional(raw);
    let sigma_sq_err = factor * (variance(&q) / q.len() as f64).sqrt();

    let mut nbar = Estimate::new(f64::INFINITY, f64::INFINITY, Method::VarianceDephasing, q.len());
    match nbar_from_sigma(sigma_sq, alpha_mag) {
        Ok(v) => {
            nbar.value = v;
            nbar.flags.below_resolution = v < 0.0;
        }
        Err(Error::Saturated { .. }) => nbar.flags.saturated = true,
        Err(e) => return Err(e),
    }

    if !nbar.flags.saturated {
        let mut rng = aux_rng(opts.bootstrap_seed, 0);
        let n = q.len();
        let replicas: Vec<f64> = (0..opts.bootstrap_resamples)
            .filter_map(|_| {
                let s = (0..n).map(|_| q[rng.random_range(0..n)]).sum::<f64>() / n as f64;
                nbar_from_sigma(motional(s), alpha_mag).ok()
            })
            .collect();
        nbar.std_error = if replicas.len() >= 2 { variance(&replicas).sqrt() } else { f64::INFINITY };
    }

    Ok(Thermometry { nbar, sigma_sq_raw: raw, sigma_sq, sigma_sq_err })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}
