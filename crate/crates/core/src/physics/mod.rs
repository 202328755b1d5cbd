//! Closed-form physics of spin-dependent displacements of the COM mode.

pub mod amplitude;
pub mod coherent;
pub mod fock;
pub mod laguerre;
pub mod oscillator;
pub mod sequence;
pub mod thermal;
pub mod trap;

pub use amplitude::Amplitude;
pub use coherent::{
    bloch_expectations, classical_precession, coherent_rotation_angle, nbar_from_sigma,
    thermal_p_up, thermal_sigma_sq, thermal_sz_second_moment, thermal_theta_variance,
    BlochExpectations, FinalPulse,
};
pub use fock::{
    fock_p_up, fock_thermal_p_up, fock_thermal_p_up_sum, fock_thermal_two_spin_correlator,
    fock_thermal_two_spin_correlator_sum, fock_two_spin_correlator, thermal_laguerre_sum, FockSum,
};
pub use laguerre::{laguerre, LaguerreSeq};
pub use sequence::{
    odf_displacement, resonant_displacement, single_arm_displacement, spin_echo_displacement,
    OdfSequence, SequenceKind,
};
pub use thermal::{nbar_to_temperature, temperature_to_nbar, ThermalState};
pub use trap::{doppler_limit, ground_state_size, trap_beta_r, TrapConfig};
