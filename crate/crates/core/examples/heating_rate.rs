//! Heating rates from occupation-versus-delay data at three scales.

use spin_dephasing::inference::fit_heating_rate;
use spin_dephasing::synthetic::heating_points;

fn main() -> spin_dephasing::Result<()> {
    for (rate, max_delay, seed) in [(1.4e4, 2e-3, 1), (1.2e3, 20e-3, 2), (4.7e2, 50e-3, 3)] {
        let points = heating_points(rate, 12.0, max_delay, 6, 0.15, seed);
        let fit = fit_heating_rate(&points)?;
        println!(
            "truth {rate:>8.1} /s   fit {:>8.1} +- {:>6.1} /s   n0 = {:5.2} +- {:4.2}   pull {:.2}",
            fit.rate.value,
            fit.rate.std_error,
            fit.intercept,
            fit.intercept_err,
            fit.rate.pull(rate)
        );
    }
    Ok(())
}
