//! Temperature from the P↑ lineshape of a detuning sweep.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::estimate::{Estimate, Method};
use crate::error::{Error, Result};
use crate::physics::{odf_displacement, OdfSequence, TrapConfig};
use crate::units::{HBAR, K_B};

const MAX_ITERATIONS: usize = 200;
const STEP_TOL: f64 = 1e-8;

/// Mean bright fraction at one ODF detuning.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    /// δ, rad/s.
    pub detuning_delta: f64,
    pub p_up_mean: f64,
    /// 1σ uncertainty on `p_up_mean`.
    pub p_up_err: f64,
}

/// P↑(δ) = offset + contrast · ½(1 − exp(−2|α(δ)|²(2β⁻¹ + 1))).
pub fn lineshape_model(alpha_sq: f64, inv_beta: f64, offset: f64, contrast: f64) -> f64 {
    offset - contrast * 0.5 * (-2.0 * alpha_sq * (2.0 * inv_beta + 1.0)).exp_m1()
}

/// |α(δ)|² for each detuning, taking every other setting from `sequence`.
pub fn displacement_profile(
    detunings: &[f64],
    sequence: &OdfSequence,
    trap: &TrapConfig,
    n_ions: usize,
) -> Result<Vec<f64>> {
    detunings
        .iter()
        .map(|&d| {
            let seq = OdfSequence { detuning_delta: d, ..sequence.clone() };
            odf_displacement(&seq, trap, n_ions).map(|a| a.norm_sqr())
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialGuess {
    pub inv_beta: f64,
    pub offset: f64,
    pub contrast: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineshapeFit {
    /// Axial-mode temperature, K.
    pub temperature: Estimate,
    pub inv_beta: f64,
    pub inv_beta_err: f64,
    pub offset: f64,
    pub offset_err: f64,
    /// Fixed at the initial guess unless fitted.
    pub contrast: f64,
    pub contrast_err: Option<f64>,
    /// Parameter covariance in the order (β⁻¹, offset[, contrast]).
    pub covariance: Vec<Vec<f64>>,
    pub chi_sq: f64,
    pub dof: usize,
    pub iterations: usize,
}

/// Weighted Levenberg–Marquardt fit of [`lineshape_model`] with a
/// central-difference Jacobian.
pub fn fit_lineshape(
    points: &[SweepPoint],
    sequence: &OdfSequence,
    trap: &TrapConfig,
    n_ions: usize,
    guess: &InitialGuess,
    fit_contrast: bool,
) -> Result<LineshapeFit> {
    let n_params = if fit_contrast { 3 } else { 2 };
    if points.is_empty() {
        return Err(Error::Empty("no sweep points"));
    }
    if points.len() <= n_params {
        return Err(Error::domain(format!(
            "need more than {n_params} sweep points, got {}",
            points.len()
        )));
    }
    for p in points {
        if !(p.p_up_err > 0.0 && p.p_up_err.is_finite()) || !p.p_up_mean.is_finite() || !p.detuning_delta.is_finite() {
            return Err(Error::domain(format!("invalid sweep point {p:?}")));
        }
    }
    trap.validate()?;
    sequence.validate()?;

    let detunings: Vec<f64> = points.iter().map(|p| p.detuning_delta).collect();
    let alpha_sq = displacement_profile(&detunings, sequence, trap, n_ions)?;
    if alpha_sq.iter().all(|&a| a == 0.0) {
        return Err(Error::Degenerate("ODF displacement vanishes at every detuning".into()));
    }
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.p_up_mean), hi.max(p.p_up_mean)));
    if hi - lo == 0.0 {
        return Err(Error::Degenerate("sweep data are flat".into()));
    }

    let residuals = |theta: &DVector<f64>| -> DVector<f64> {
        let contrast = if fit_contrast { theta[2] } else { guess.contrast };
        DVector::from_iterator(
            points.len(),
            points
                .iter()
                .zip(&alpha_sq)
                .map(|(p, &a)| (lineshape_model(a, theta[0], theta[1], contrast) - p.p_up_mean) / p.p_up_err),
        )
    };
    let jacobian = |theta: &DVector<f64>| -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(points.len(), n_params);
        for j in 0..n_params {
            let h = 1e-6 * theta[j].abs().max(1e-3);
            let mut up = theta.clone();
            let mut down = theta.clone();
            up[j] += h;
            down[j] -= h;
            jac.set_column(j, &((residuals(&up) - residuals(&down)) / (2.0 * h)));
        }
        jac
    };

    let mut theta = DVector::from_vec(
        [guess.inv_beta, guess.offset, guess.contrast][..n_params].to_vec(),
    );
    let mut r = residuals(&theta);
    let mut chi_sq = r.norm_squared();
    let mut lambda = 1e-3;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let jac = jacobian(&theta);
        let jtj = jac.transpose() * &jac;
        if jtj[(0, 0)] == 0.0 {
            return Err(Error::Degenerate("lineshape insensitive to temperature".into()));
        }
        let grad = jac.transpose() * &r;
        let mut damped = jtj.clone();
        for j in 0..n_params {
            damped[(j, j)] += lambda * jtj[(j, j)];
        }
        let Some(step) = damped.cholesky().map(|c| c.solve(&(-&grad))) else {
            lambda *= 10.0;
            continue;
        };
        let rel = (0..n_params)
            .map(|j| step[j].abs() / theta[j].abs().max(1e-6))
            .fold(0.0, f64::max);
        let trial = &theta + &step;
        let r_trial = residuals(&trial);
        let chi_trial = r_trial.norm_squared();
        if chi_trial.is_finite() && chi_trial <= chi_sq {
            theta = trial;
            r = r_trial;
            chi_sq = chi_trial;
            lambda = (lambda / 10.0).max(1e-12);
        } else {
            lambda *= 10.0;
        }
        if rel < STEP_TOL {
            converged = true;
            break;
        }
        if lambda > 1e20 {
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { iterations, last: theta.iter().copied().collect() });
    }
    if theta[0] < 0.0 {
        return Err(Error::Degenerate(format!(
            "fitted occupation parameter is negative ({}); no resolvable lineshape",
            theta[0]
        )));
    }

    let jac = jacobian(&theta);
    let cov = (jac.transpose() * &jac)
        .try_inverse()
        .ok_or_else(|| Error::Degenerate("singular normal matrix at the optimum".into()))?;
    let err = |j: usize| cov[(j, j)].sqrt();
    let kelvin_per_unit = HBAR * trap.omega_z / K_B;

    Ok(LineshapeFit {
        temperature: Estimate::new(theta[0] * kelvin_per_unit, err(0) * kelvin_per_unit, Method::LineshapeFit, points.len()),
        inv_beta: theta[0],
        inv_beta_err: err(0),
        offset: theta[1],
        offset_err: err(1),
        contrast: if fit_contrast { theta[2] } else { guess.contrast },
        contrast_err: fit_contrast.then(|| err(2)),
        covariance: (0..n_params).map(|i| (0..n_params).map(|j| cov[(i, j)]).collect()).collect(),
        chi_sq,
        dof: points.len() - n_params,
        iterations,
    })
}
