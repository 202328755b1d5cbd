//! Fock-state forms against the coherent-state closed forms and against a
//! truncated-basis evolution, plus the full oracle report.

use spin_dephasing::oracle::{library_laguerre, run_oracles};
use spin_dephasing::physics::oscillator::{fock_state, ramsey_outcome_probabilities};
use spin_dephasing::physics::fock::DEFAULT_TAIL_TOL;
use spin_dephasing::physics::*;

fn main() -> spin_dephasing::Result<()> {
    let alpha = Amplitude::new(0.05, 0.0);
    println!("  n   Fock P(up) closed   truncated basis");
    for n in [0, 1, 5, 18, 50] {
        let closed = fock_p_up(n, alpha)?;
        let brute = ramsey_outcome_probabilities(1, alpha, &fock_state(n, n + 40), FinalPulse::Length)[0];
        println!("{n:>3}   {closed:.12}      {brute:.12}");
    }

    println!("\nthermal sums: <L_n(x)> vs exp(-x nbar)");
    for (x, nbar) in [(0.01, 18.0), (0.1, 10.0), (1.0, 0.5)] {
        let s = thermal_laguerre_sum(x, nbar, DEFAULT_TAIL_TOL)?;
        println!("x = {x:<5} nbar = {nbar:<5} sum = {:.14} ({} terms)  exact = {:.14}", s.value, s.terms, (-x * nbar).exp());
    }

    let nbar = 18.0;
    let fock = fock_thermal_two_spin_correlator(nbar, alpha)?;
    let coherent = thermal_sigma_sq(alpha, &ThermalState::from_inv_beta(nbar)?);
    println!("\ntwo-spin correlator at nbar = 18: Fock {fock:.15}, coherent {coherent:.15}");

    println!("\noracle report");
    print!("{}", run_oracles(library_laguerre));
    Ok(())
}
