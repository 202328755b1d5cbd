//! Fock-state forms: single-spin P↑ and the two-spin correlator for an
//! initial number state, their closed-form thermal averages, and truncated
//! Boltzmann sums used to check those averages.

use super::amplitude::Amplitude;
use super::laguerre::{laguerre, LaguerreSeq};
use crate::error::{Error, Result};

/// Boltzmann tail below which thermal Fock sums stop.
pub const DEFAULT_TAIL_TOL: f64 = 1e-14;
/// Hard cap on the number of Fock levels summed.
pub const MAX_FOCK_TERMS: usize = 1_000_000;

/// P↑ for initial state |n⟩ (Δφ = 0): ½(1 − L_n(4|α|²) e^{−2|α|²}).
pub fn fock_p_up(n: usize, alpha: Amplitude) -> Result<f64> {
    let a2 = alpha.norm_sqr();
    Ok(0.5 * (1.0 - laguerre(n, 4.0 * a2)? * (-2.0 * a2).exp()))
}

/// Thermal average of [`fock_p_up`]: ½(1 − e^{−2|α|²(2n̄+1)}).
pub fn fock_thermal_p_up(nbar: f64, alpha: Amplitude) -> Result<f64> {
    check_nbar(nbar)?;
    Ok(-0.5 * (-2.0 * alpha.norm_sqr() * (2.0 * nbar + 1.0)).exp_m1())
}

/// ⟨σ₁ᶻσ₂ᶻ⟩ for initial state |n⟩ (Δφ = π/2): ½[1 − L_n(16|α|²) e^{−8|α|²}].
pub fn fock_two_spin_correlator(n: usize, alpha: Amplitude) -> Result<f64> {
    let a2 = alpha.norm_sqr();
    Ok(0.5 * (1.0 - laguerre(n, 16.0 * a2)? * (-8.0 * a2).exp()))
}

/// Thermal average of [`fock_two_spin_correlator`]: ½[1 − e^{−8|α|²(2n̄+1)}].
pub fn fock_thermal_two_spin_correlator(nbar: f64, alpha: Amplitude) -> Result<f64> {
    check_nbar(nbar)?;
    Ok(-0.5 * (-8.0 * alpha.norm_sqr() * (2.0 * nbar + 1.0)).exp_m1())
}

/// Result of a truncated thermal Fock sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FockSum {
    pub value: f64,
    /// Number of Fock levels included.
    pub terms: usize,
}

/// ⟨L_n(x)⟩_th = (1 − e^{−β}) Σ_n L_n(x) e^{−βn}, summed until the remaining
/// Boltzmann weight drops below `tail_tol`.
pub fn thermal_laguerre_sum(x: f64, nbar: f64, tail_tol: f64) -> Result<FockSum> {
    check_nbar(nbar)?;
    if nbar == 0.0 {
        return Ok(FockSum { value: 1.0, terms: 1 });
    }
    let beta = (1.0 / nbar).ln_1p();
    let ratio = (-beta).exp();
    let norm = -(-beta).exp_m1();
    let mut weight = norm;
    let mut tail = 1.0;
    let mut acc = 0.0;
    // Kahan-compensated accumulation.
    let mut comp = 0.0;
    for (n, l) in LaguerreSeq::new(x).enumerate() {
        if n >= MAX_FOCK_TERMS {
            return Err(Error::domain(format!(
                "thermal Fock sum did not reach tail {tail_tol} within {MAX_FOCK_TERMS} terms"
            )));
        }
        let term = weight * l - comp;
        let t = acc + term;
        comp = (t - acc) - term;
        acc = t;
        tail *= ratio;
        weight *= ratio;
        if tail < tail_tol {
            return Ok(FockSum { value: acc, terms: n + 1 });
        }
    }
    unreachable!()
}

/// Brute-force thermal P↑: Boltzmann-weighted sum of [`fock_p_up`].
pub fn fock_thermal_p_up_sum(nbar: f64, alpha: Amplitude, tail_tol: f64) -> Result<FockSum> {
    let a2 = alpha.norm_sqr();
    let s = thermal_laguerre_sum(4.0 * a2, nbar, tail_tol)?;
    Ok(FockSum { value: 0.5 * (1.0 - (-2.0 * a2).exp() * s.value), ..s })
}

/// Brute-force thermal two-spin correlator.
pub fn fock_thermal_two_spin_correlator_sum(nbar: f64, alpha: Amplitude, tail_tol: f64) -> Result<FockSum> {
    let a2 = alpha.norm_sqr();
    let s = thermal_laguerre_sum(16.0 * a2, nbar, tail_tol)?;
    Ok(FockSum { value: 0.5 * (1.0 - (-8.0 * a2).exp() * s.value), ..s })
}

fn check_nbar(nbar: f64) -> Result<()> {
    if nbar >= 0.0 && nbar.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("nbar must be non-negative, got {nbar}")))
    }
}
