//! Estimators for the mode occupation, temperature and heating rate.

mod estimate;
mod heating;
mod lineshape;
mod thermometry;

pub use estimate::{Estimate, Flags, Method};
pub use heating::{fit_heating_rate, HeatingFit, HeatingPoint};
pub use lineshape::{displacement_profile, fit_lineshape, lineshape_model, InitialGuess, LineshapeFit, SweepPoint};
pub use thermometry::{
    calibration_sigma_sq, estimate_nbar, sigma_sq_samples, BackgroundCorrection, Readout, Thermometry,
    ThermometryOptions,
};
pub use crate::physics::{nbar_to_temperature, temperature_to_nbar};
