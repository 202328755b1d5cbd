//! Brute-force spin–oscillator evolution in a truncated Fock basis.
//!
//! Displacements are built as dense matrix exponentials of αa† − α*a; no
//! closed-form displacement algebra is used, so these routines serve as an
//! independent check of the analytic expressions in [`super::coherent`] and
//! [`super::fock`].

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use super::amplitude::Amplitude;
use super::coherent::FinalPulse;

type CMat = DMatrix<Complex64>;
type CVec = DVector<Complex64>;

fn lowering(dim: usize) -> CMat {
    let mut a = CMat::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// D(α) = exp(αa† − α*a) truncated to `dim` levels.
pub fn displacement_matrix(alpha: Amplitude, dim: usize) -> CMat {
    let a = lowering(dim);
    let ad = a.adjoint();
    let al = alpha.as_complex();
    let generator = ad * al - a * al.conj();
    generator.exp()
}

/// ⟨n| D(α) |n⟩.
pub fn displaced_fock_overlap(n: usize, alpha: Amplitude, dim: usize) -> Complex64 {
    assert!(n < dim, "Fock level {n} outside truncated basis of size {dim}");
    displacement_matrix(alpha, dim)[(n, n)]
}

pub fn fock_state(n: usize, dim: usize) -> CVec {
    let mut v = CVec::zeros(dim);
    v[n] = Complex64::new(1.0, 0.0);
    v
}

/// |α⟩ = D(α)|0⟩ in the truncated basis.
pub fn coherent_state(alpha: Amplitude, dim: usize) -> CVec {
    displacement_matrix(alpha, dim).column(0).into_owned()
}

/// Qubit rotation R(θ, φ) in the (↑, ↓) basis.
pub fn rotation(theta: f64, phi: f64) -> Matrix2<Complex64> {
    let (s, c) = (theta / 2.0).sin_cos();
    Matrix2::new(
        Complex64::new(c, 0.0),
        -Complex64::from_polar(s, -phi),
        Complex64::from_polar(s, phi),
        Complex64::new(c, 0.0),
    )
}

/// ⟨σ_x⟩ and ⟨σ_y⟩ of one spin after R(π/2, 0) and the spin-dependent
/// displacement ±α acting on the motional state `motion`.
pub fn single_spin_coherences(alpha: Amplitude, motion: &CVec) -> (f64, f64) {
    let dim = motion.len();
    let up = displacement_matrix(alpha, dim) * motion * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let down = displacement_matrix(-alpha, dim) * motion * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let c = up.dotc(&down);
    (2.0 * c.re, 2.0 * c.im)
}

/// Probabilities of each final spin configuration for `n_spins` ∈ {1, 2}
/// after R(π/2,0) – D_SD(α) – R(π/2,Δφ), starting from all spins ↑ and the
/// motional state `motion`. Configurations are ordered with ↑ = bit 0 of the
/// most significant spin first (↑↑, ↑↓, ↓↑, ↓↓).
pub fn ramsey_outcome_probabilities(
    n_spins: usize,
    alpha: Amplitude,
    motion: &CVec,
    final_pulse: FinalPulse,
) -> Vec<f64> {
    assert!(n_spins == 1 || n_spins == 2, "only one or two spins supported");
    let dim = motion.len();
    let first = spin_operator(n_spins, rotation(std::f64::consts::FRAC_PI_2, 0.0));
    let last = spin_operator(n_spins, rotation(std::f64::consts::FRAC_PI_2, final_pulse.delta_phi()));
    let configs = 1usize << n_spins;

    // Spin-conditioned motional states after the displacement.
    let branches: Vec<CVec> = (0..configs)
        .map(|s| {
            // σᶻ eigenvalue sum: ↑ = +1 (bit clear), ↓ = −1 (bit set).
            let m: i32 = (0..n_spins).map(|k| if s >> k & 1 == 0 { 1 } else { -1 }).sum();
            displacement_matrix(alpha * m as f64, dim) * motion * first[(s, 0)]
        })
        .collect();

    (0..configs)
        .map(|out| {
            let mut psi = CVec::zeros(dim);
            for (s, branch) in branches.iter().enumerate() {
                psi += branch * last[(out, s)];
            }
            psi.norm_squared()
        })
        .collect()
}

/// ⟨σ₁ᶻσ₂ᶻ⟩ after the two-spin sequence.
pub fn two_spin_correlator(alpha: Amplitude, motion: &CVec, final_pulse: FinalPulse) -> f64 {
    let p = ramsey_outcome_probabilities(2, alpha, motion, final_pulse);
    p[0] - p[1] - p[2] + p[3]
}

fn spin_operator(n_spins: usize, single: Matrix2<Complex64>) -> CMat {
    let single = CMat::from_iterator(2, 2, single.iter().copied());
    if n_spins == 1 {
        single
    } else {
        single.kronecker(&single)
    }
}
