use serde::{Deserialize, Serialize};

use super::detection::DetectionConfig;
use super::shot::ShotRecord;
use crate::error::{Error, Result};

/// How raw shot outcomes are mapped to the histogram axis, where 1 is the
/// all-bright (all spins ↑) mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Normalization {
    /// Photon counts divided by N · rate · t_det.
    Photons { bright_counts: f64 },
    /// Spin-up count divided by N (photon readout disabled).
    Spins { n_ions: usize },
}

impl Normalization {
    pub fn for_detection(det: &DetectionConfig) -> Self {
        if det.photon_readout() {
            Normalization::Photons { bright_counts: det.bright_counts() }
        } else {
            Normalization::Spins { n_ions: det.n_ions }
        }
    }

    pub fn value(&self, shot: &ShotRecord) -> f64 {
        match *self {
            Normalization::Photons { bright_counts } => shot.photons as f64 / bright_counts,
            Normalization::Spins { n_ions } => shot.n_up as f64 / n_ions as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// Strictly increasing, one more than `counts`.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub normalization: Normalization,
}

/// Bins normalized shot outcomes on a grid aligned to multiples of `bin_width`.
pub fn build_histogram(shots: &[ShotRecord], bin_width: f64, normalization: Normalization) -> Result<Histogram> {
    if shots.is_empty() {
        return Err(Error::Empty("no shots to histogram"));
    }
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::domain(format!("bin width must be positive, got {bin_width}")));
    }
    if let Normalization::Photons { bright_counts } = normalization {
        if !(bright_counts > 0.0) {
            return Err(Error::domain("bright-state photon count must be positive"));
        }
    }
    let values: Vec<f64> = shots.iter().map(|s| normalization.value(s)).collect();
    let bin_of = |v: f64| (v / bin_width).floor() as i64;
    let lo = values.iter().map(|&v| bin_of(v)).min().unwrap();
    let hi = values.iter().map(|&v| bin_of(v)).max().unwrap();
    let n_bins = (hi - lo + 1) as usize;
    let mut counts = vec![0u64; n_bins];
    for &v in &values {
        counts[(bin_of(v) - lo) as usize] += 1;
    }
    let bin_edges = (lo..=hi + 1).map(|i| i as f64 * bin_width).collect();
    Ok(Histogram { bin_edges, counts, normalization })
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_edges[1] - self.bin_edges[0]
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Centered moving average over `window` bins (odd), zero-padded.
    pub fn smoothed(&self, window: usize) -> Vec<f64> {
        let half = window / 2;
        let n = self.counts.len();
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(half);
                let hi = (i + half).min(n - 1);
                self.counts[lo..=hi].iter().sum::<u64>() as f64 / window as f64
            })
            .collect()
    }

    /// Bin centers of the significant local maxima of the `window`-smoothed
    /// histogram. A maximum counts if it reaches `min_height` of the global
    /// maximum and is separated from its neighbour peak by a valley at most
    /// `max_valley` times the lower of the two peaks.
    pub fn modes(&self, window: usize, min_height: f64, max_valley: f64) -> Vec<f64> {
        let s = self.smoothed(window);
        let top = s.iter().cloned().fold(0.0, f64::max);
        let centers = self.bin_centers();
        let n = s.len();

        // Candidate maxima, treating plateaus as a single maximum at their start.
        let mut peaks: Vec<usize> = Vec::new();
        let mut i = 0;
        while i < n {
            let mut j = i;
            while j + 1 < n && s[j + 1] == s[i] {
                j += 1;
            }
            let left_lower = i == 0 || s[i - 1] < s[i];
            let right_lower = j + 1 == n || s[j + 1] < s[i];
            if left_lower && right_lower && s[i] >= min_height * top && s[i] > 0.0 {
                peaks.push(i);
            }
            i = j + 1;
        }

        // Merge neighbours not separated by a deep enough valley; keep the taller.
        let mut kept: Vec<usize> = Vec::new();
        for p in peaks {
            if let Some(&q) = kept.last() {
                let valley = s[q..=p].iter().cloned().fold(f64::INFINITY, f64::min);
                if valley > max_valley * s[q].min(s[p]) {
                    if s[p] > s[q] {
                        *kept.last_mut().unwrap() = p;
                    }
                    continue;
                }
            }
            kept.push(p);
        }
        kept.into_iter().map(|k| centers[k]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::Amplitude;

    fn shot(photons: u64) -> ShotRecord {
        ShotRecord {
            index: 0,
            alpha_k: Amplitude::ZERO,
            theta_coh: 0.0,
            theta_total: 0.0,
            p_up: 0.5,
            n_up: 0,
            photons,
        }
    }

    const NORM: Normalization = Normalization::Photons { bright_counts: 100.0 };

    #[test]
    fn identical_shots_fill_one_bin() {
        let shots = vec![shot(50); 20];
        let h = build_histogram(&shots, 0.05, NORM).unwrap();
        assert_eq!(h.counts, vec![20]);
        assert_eq!(h.bin_edges.len(), 2);
    }

    #[test]
    fn counts_are_preserved_and_edges_increase() {
        let shots: Vec<_> = (0..300).map(|i| shot((i * 37 % 120) as u64)).collect();
        let h = build_histogram(&shots, 0.03, NORM).unwrap();
        assert_eq!(h.total(), 300);
        assert!(h.bin_edges.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(h.bin_edges.len(), h.counts.len() + 1);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(build_histogram(&[], 0.1, NORM), Err(Error::Empty(_))));
        assert!(build_histogram(&[shot(1)], 0.0, NORM).is_err());
    }

    #[test]
    fn mode_counting() {
        let mut shots = Vec::new();
        for (center, n) in [(20u64, 200usize), (80, 180)] {
            for k in 0..n {
                shots.push(shot(center + (k % 9) as u64 - 4));
            }
        }
        let h = build_histogram(&shots, 0.02, NORM).unwrap();
        assert_eq!(h.modes(3, 0.2, 0.7).len(), 2);
        let single: Vec<_> = (0..200).map(|k| shot(50 + (k % 9) as u64 - 4)).collect();
        let h = build_histogram(&single, 0.02, NORM).unwrap();
        assert_eq!(h.modes(3, 0.2, 0.7).len(), 1);
    }
}
