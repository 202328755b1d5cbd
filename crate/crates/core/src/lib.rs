//! Simulation and analysis of spin dephasing produced by a spin-dependent
//! optical dipole force on the axial center-of-mass mode of a trapped-ion
//! crystal.
//!
//! * [`physics`]: displacement amplitudes, coherent-state and Fock-state
//!   expressions for spin observables and their thermal averages.
//! * [`mc`]: seeded Monte Carlo of full experiment sequences and histograms.
//! * [`inference`]: thermometry from dephasing, lineshape fitting and
//!   heating-rate regression.
//! * [`cli`]: the `spin-dephasing` command line, with [`config`], [`io`] and
//!   [`plot`] for its files.
//! * [`oracle`]: closed forms checked against independent computations.

pub mod cli;
pub mod config;
pub mod error;
pub mod inference;
pub mod io;
pub mod mc;
pub mod oracle;
pub mod physics;
pub mod plot;
pub mod stats;
pub mod synthetic;
pub mod units;

pub use error::{Error, Result};
