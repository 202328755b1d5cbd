//! Small sample statistics used by the checks and tests.

/// Sample mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Survival function of the Kolmogorov distribution, P(K > λ).
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample Kolmogorov–Smirnov test against `cdf`. Returns (D, p-value).
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let sn = n.sqrt();
    (d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d))
}

/// Two-sample Kolmogorov–Smirnov test. Returns (D, p-value).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    (d, kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d))
}

/// CDF of the arcsine law of a·sin(φ), φ uniform: ½ + asin(x/a)/π.
pub fn arcsine_cdf(x: f64, a: f64) -> f64 {
    0.5 + (x / a).clamp(-1.0, 1.0).asin() / std::f64::consts::PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::aux_rng;
    use rand::Rng;

    #[test]
    fn kolmogorov_reference_values() {
        // Standard table: P(K > 1.36) ≈ 0.049, P(K > 1.63) ≈ 0.0098.
        assert!((kolmogorov_sf(1.36) - 0.0494).abs() < 1e-3);
        assert!((kolmogorov_sf(1.63) - 0.0098).abs() < 5e-4);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
    }

    #[test]
    fn uniform_passes_and_shifted_fails() {
        let mut rng = aux_rng(5, 1);
        let xs: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>()).collect();
        let (_, p) = ks_one_sample(&xs, |x| x.clamp(0.0, 1.0));
        assert!(p > 0.01);
        let (_, p) = ks_one_sample(&xs, |x| (x * 1.05).clamp(0.0, 1.0));
        assert!(p < 1e-6);
        let ys: Vec<f64> = (0..20_000).map(|_| rng.random::<f64>()).collect();
        assert!(ks_two_sample(&xs, &ys).1 > 0.01);
        let zs: Vec<f64> = ys.iter().map(|y| y + 0.05).collect();
        assert!(ks_two_sample(&xs, &zs).1 < 1e-6);
    }
}
