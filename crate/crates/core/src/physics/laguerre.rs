use crate::error::{Error, Result};

/// Largest order accepted by [`laguerre`].
pub const MAX_ORDER: usize = 10_000;

/// Laguerre polynomial L_n(x) by the upward three-term recurrence
/// (k+1) L_{k+1} = (2k+1−x) L_k − k L_{k−1}.
pub fn laguerre(n: usize, x: f64) -> Result<f64> {
    if n > MAX_ORDER {
        return Err(Error::domain(format!(
            "Laguerre order {n} exceeds supported maximum {MAX_ORDER}"
        )));
    }
    Ok(LaguerreSeq::new(x).nth(n).expect("sequence is infinite"))
}

/// Iterator over L_0(x), L_1(x), L_2(x), … at fixed x.
#[derive(Clone, Debug)]
pub struct LaguerreSeq {
    x: f64,
    k: usize,
    prev: f64,
    cur: f64,
}

impl LaguerreSeq {
    pub fn new(x: f64) -> Self {
        LaguerreSeq { x, k: 0, prev: 0.0, cur: 1.0 }
    }
}

impl Iterator for LaguerreSeq {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.cur;
        let k = self.k as f64;
        let next = if self.k == 0 {
            1.0 - self.x
        } else {
            ((2.0 * k + 1.0 - self.x) * self.cur - k * self.prev) / (k + 1.0)
        };
        self.prev = self.cur;
        self.cur = next;
        self.k += 1;
        Some(out)
    }
}
