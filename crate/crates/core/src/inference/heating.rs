//! Weighted straight-line fit of occupation against delay.

use serde::{Deserialize, Serialize};

use super::estimate::{Estimate, Method};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatingPoint {
    /// Delay between cooling and the thermometry sequence, s.
    pub delay: f64,
    pub nbar: f64,
    /// 1σ uncertainty on `nbar`.
    pub nbar_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatingFit {
    /// dn̄/dt in 1/s.
    pub rate: Estimate,
    /// n̄ at zero delay.
    pub intercept: f64,
    pub intercept_err: f64,
    /// Covariance of (intercept, rate).
    pub covariance: [[f64; 2]; 2],
    pub chi_sq: f64,
    pub dof: usize,
}

/// Weighted least squares n̄(t) = n̄₀ + (dn̄/dt) t with weights 1/σ².
/// Standard errors come from the inverse normal matrix (errors taken as
/// known, no χ² rescaling).
pub fn fit_heating_rate(points: &[HeatingPoint]) -> Result<HeatingFit> {
    if points.is_empty() {
        return Err(Error::Empty("no heating points"));
    }
    for p in points {
        if !(p.delay >= 0.0 && p.delay.is_finite()) {
            return Err(Error::domain(format!("delay must be non-negative, got {}", p.delay)));
        }
        if !(p.nbar_err > 0.0 && p.nbar_err.is_finite()) || !p.nbar.is_finite() {
            return Err(Error::domain(format!("invalid point {p:?}: errors must be positive")));
        }
    }

    let w: Vec<f64> = points.iter().map(|p| p.nbar_err.powi(-2)).collect();
    let sw: f64 = w.iter().sum();
    let t_mean = points.iter().zip(&w).map(|(p, w)| w * p.delay).sum::<f64>() / sw;
    let y_mean = points.iter().zip(&w).map(|(p, w)| w * p.nbar).sum::<f64>() / sw;
    // Centered sums keep the normal equations well conditioned.
    let stt: f64 = points.iter().zip(&w).map(|(p, w)| w * (p.delay - t_mean).powi(2)).sum();
    let sty: f64 = points.iter().zip(&w).map(|(p, w)| w * (p.delay - t_mean) * (p.nbar - y_mean)).sum();
    let spread = points.iter().map(|p| p.delay).fold(f64::NEG_INFINITY, f64::max)
        - points.iter().map(|p| p.delay).fold(f64::INFINITY, f64::min);
    if spread <= 0.0 || stt <= 0.0 {
        return Err(Error::Degenerate("all delays are equal; slope undefined".into()));
    }

    let rate = sty / stt;
    let intercept = y_mean - rate * t_mean;
    let var_rate = 1.0 / stt;
    let var_intercept = 1.0 / sw + t_mean * t_mean / stt;
    let cov = -t_mean / stt;
    let chi_sq = points
        .iter()
        .zip(&w)
        .map(|(p, w)| w * (p.nbar - intercept - rate * p.delay).powi(2))
        .sum();

    Ok(HeatingFit {
        rate: Estimate::new(rate, var_rate.sqrt(), Method::HeatingFit, points.len()),
        intercept,
        intercept_err: var_intercept.sqrt(),
        covariance: [[var_intercept, cov], [cov, var_rate]],
        chi_sq,
        dof: points.len() - 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    fn normal_equations(points: &[HeatingPoint]) -> (DVector<f64>, DMatrix<f64>) {
        let n = points.len();
        let x = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { points[i].delay });
        let w = DMatrix::from_diagonal(&DVector::from_fn(n, |i, _| points[i].nbar_err.powi(-2)));
        let y = DVector::from_fn(n, |i, _| points[i].nbar);
        let xtwx = x.transpose() * &w * &x;
        let inv = xtwx.try_inverse().unwrap();
        let beta = &inv * x.transpose() * &w * y;
        (beta, inv)
    }

    #[test]
    fn two_points_give_exact_line() {
        let pts = [
            HeatingPoint { delay: 0.0, nbar: 12.0, nbar_err: 1.0 },
            HeatingPoint { delay: 0.01, nbar: 26.0, nbar_err: 2.0 },
        ];
        let fit = fit_heating_rate(&pts).unwrap();
        assert!((fit.rate.value - 1400.0).abs() < 1e-9);
        assert!((fit.intercept - 12.0).abs() < 1e-12);
        assert!(fit.chi_sq < 1e-20);
        assert_eq!(fit.dof, 0);
    }

    #[test]
    fn equal_delays_rejected() {
        let pts = [
            HeatingPoint { delay: 0.01, nbar: 12.0, nbar_err: 1.0 },
            HeatingPoint { delay: 0.01, nbar: 14.0, nbar_err: 1.0 },
        ];
        assert!(matches!(fit_heating_rate(&pts), Err(Error::Degenerate(_))));
        assert!(matches!(fit_heating_rate(&[]), Err(Error::Empty(_))));
        let bad = [HeatingPoint { delay: 0.0, nbar: 1.0, nbar_err: 0.0 }, HeatingPoint { delay: 1.0, nbar: 1.0, nbar_err: 1.0 }];
        assert!(fit_heating_rate(&bad).is_err());
    }

    proptest! {
        #[test]
        fn matches_matrix_normal_equations(
            raw in proptest::collection::vec((0.0f64..0.1, 0.0f64..2000.0, 0.1f64..100.0), 3..20)
        ) {
            let pts: Vec<HeatingPoint> = raw.iter().map(|&(delay, nbar, nbar_err)| HeatingPoint { delay, nbar, nbar_err }).collect();
            let spread = pts.iter().map(|p| p.delay).fold(0.0, f64::max) - pts.iter().map(|p| p.delay).fold(1.0, f64::min);
            prop_assume!(spread > 1e-3);
            let fit = fit_heating_rate(&pts).unwrap();
            let (beta, cov) = normal_equations(&pts);
            let scale = |v: f64| v.abs().max(1.0);
            // Rounding in the uncentered reference solve grows with the conditioning
            // of the delays, as does the parameter error; compare on that scale.
            prop_assert!((fit.intercept - beta[0]).abs() <= 1e-8 * cov[(0, 0)].sqrt());
            prop_assert!((fit.rate.value - beta[1]).abs() <= 1e-8 * cov[(1, 1)].sqrt());
            prop_assert!((fit.covariance[1][1] - cov[(1, 1)]).abs() <= 1e-10 * cov[(1, 1)]);
            prop_assert!((fit.covariance[0][1] - cov[(0, 1)]).abs() <= 1e-10 * scale(cov[(0, 1)]) * 1e2);
        }
    }
}
