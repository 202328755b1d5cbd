//! Seeded Monte Carlo of complete dephasing experiments.

pub mod detection;
pub mod histogram;
pub mod prep;
pub mod rng;
pub mod shot;

pub use detection::DetectionConfig;
pub use histogram::{build_histogram, Histogram, Normalization};
pub use prep::{sample_initial_state, MotionalPrep};
pub use rng::{aux_rng, shot_rng};
pub use shot::{run_experiment, run_shot_range, simulate_shot, Experiment, ShotRecord, SpinMotionModel};
