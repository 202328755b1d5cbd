//! Physical constants (CODATA 2018 exact/recommended values) and the unit
//! conversions applied at config boundaries. Everything inside the library is
//! SI with angular frequencies in rad/s.

use std::f64::consts::TAU;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;
/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Mass of a ⁹Be⁺ ion in atomic mass units.
pub const BE9_MASS_AMU: f64 = 9.012_182;

/// Ordinary frequency in kHz to angular frequency in rad/s.
pub fn khz(f: f64) -> f64 {
    TAU * f * 1e3
}

/// Ordinary frequency in MHz to angular frequency in rad/s.
pub fn mhz(f: f64) -> f64 {
    TAU * f * 1e6
}

/// Angular frequency in rad/s to ordinary frequency in kHz.
pub fn to_khz(omega: f64) -> f64 {
    omega / TAU * 1e-3
}

/// Yoctonewtons to newtons.
pub fn yn(f: f64) -> f64 {
    f * 1e-24
}
