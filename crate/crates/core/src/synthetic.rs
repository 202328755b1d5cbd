//! Seeded synthetic datasets for the fitting routines.

use rand_distr::{Distribution, Normal};

use crate::error::Result;
use crate::inference::{displacement_profile, lineshape_model, HeatingPoint, SweepPoint};
use crate::mc::aux_rng;
use crate::physics::{OdfSequence, TrapConfig};

/// Sweep points drawn from [`lineshape_model`] with Gaussian noise whose
/// standard deviation is `rel_noise` times the model value; `p_up_err` is set
/// to that standard deviation.
#[allow(clippy::too_many_arguments)]
pub fn lineshape_sweep(
    detunings: &[f64],
    sequence: &OdfSequence,
    trap: &TrapConfig,
    n_ions: usize,
    inv_beta: f64,
    offset: f64,
    rel_noise: f64,
    seed: u64,
) -> Result<Vec<SweepPoint>> {
    let alpha_sq = displacement_profile(detunings, sequence, trap, n_ions)?;
    let mut rng = aux_rng(seed, 10);
    Ok(detunings
        .iter()
        .zip(alpha_sq)
        .map(|(&d, a)| {
            let model = lineshape_model(a, inv_beta, offset, 1.0);
            let std = rel_noise * model;
            let noise = if std > 0.0 { Normal::new(0.0, std).unwrap().sample(&mut rng) } else { 0.0 };
            SweepPoint { detuning_delta: d, p_up_mean: model + noise, p_up_err: std }
        })
        .collect())
}

/// Occupation-versus-delay points on the line n̄₀ + rate·t at `n_points`
/// evenly spaced delays in [0, max_delay], each with Gaussian noise of
/// relative size `rel_err`.
pub fn heating_points(rate: f64, nbar0: f64, max_delay: f64, n_points: usize, rel_err: f64, seed: u64) -> Vec<HeatingPoint> {
    let mut rng = aux_rng(seed, 11);
    (0..n_points)
        .map(|i| {
            let delay = max_delay * i as f64 / (n_points - 1) as f64;
            let truth = nbar0 + rate * delay;
            let err = rel_err * truth;
            HeatingPoint { delay, nbar: truth + Normal::new(0.0, err).unwrap().sample(&mut rng), nbar_err: err }
        })
        .collect()
}
