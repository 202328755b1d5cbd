use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    VarianceDephasing,
    LineshapeFit,
    HeatingFit,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    /// The estimate lies below zero: dephasing not resolved above noise.
    pub below_resolution: bool,
    /// The dephasing is fully saturated; the value is unbounded.
    pub saturated: bool,
}

/// An inferred quantity with its 1σ standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub method: Method,
    pub n_samples: usize,
    pub flags: Flags,
}

impl Estimate {
    pub fn new(value: f64, std_error: f64, method: Method, n_samples: usize) -> Self {
        Estimate { value, std_error, method, n_samples, flags: Flags::default() }
    }

    /// |value − truth| in units of the standard error.
    pub fn pull(&self, truth: f64) -> f64 {
        (self.value - truth).abs() / self.std_error
    }
}
