use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point α in oscillator phase space (dimensionless coherent-state
/// amplitude). Sequential commuting displacements add.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    pub re: f64,
    pub im: f64,
}

impl Amplitude {
    pub const ZERO: Amplitude = Amplitude { re: 0.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Amplitude { re, im }
    }

    pub fn from_polar(magnitude: f64, phase: f64) -> Self {
        Complex64::from_polar(magnitude, phase).into()
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn conj(self) -> Self {
        Amplitude::new(self.re, -self.im)
    }

    /// Multiply by e^{iφ}.
    pub fn rotate(self, phase: f64) -> Self {
        (self.as_complex() * Complex64::from_polar(1.0, phase)).into()
    }

    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl From<Complex64> for Amplitude {
    fn from(c: Complex64) -> Self {
        Amplitude::new(c.re, c.im)
    }
}

impl From<Amplitude> for Complex64 {
    fn from(a: Amplitude) -> Self {
        a.as_complex()
    }
}

impl Add for Amplitude {
    type Output = Amplitude;
    fn add(self, rhs: Amplitude) -> Amplitude {
        Amplitude::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for Amplitude {
    type Output = Amplitude;
    fn sub(self, rhs: Amplitude) -> Amplitude {
        Amplitude::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for Amplitude {
    type Output = Amplitude;
    fn neg(self) -> Amplitude {
        Amplitude::new(-self.re, -self.im)
    }
}

impl Mul<f64> for Amplitude {
    type Output = Amplitude;
    fn mul(self, rhs: f64) -> Amplitude {
        Amplitude::new(self.re * rhs, self.im * rhs)
    }
}
