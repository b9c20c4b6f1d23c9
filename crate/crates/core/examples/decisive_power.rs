//! Power, partial decisive powers and indecisiveness along a grid, closed
//! form next to Monte Carlo.

use modal_confirm::confidence::ConfidenceRule;
use modal_confirm::power::{indecisiveness_curve, linspace, power_curve, PowerMethod};
use modal_confirm::region::{Interval, RegionSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rule = ConfidenceRule::wald_normal(0.05, 1.0)?;
    let line = Interval::real_line();
    let h0 = RegionSet::interval(line, Interval::closed(-0.2, 0.2)?)?;
    let grid = linspace(-0.6, 0.6, 7);
    let exact = power_curve(&h0, &rule, &grid, 100, PowerMethod::ClosedForm)?;
    let mc = power_curve(
        &h0,
        &rule,
        &grid,
        100,
        PowerMethod::MonteCarlo {
            reps: 20_000,
            seed: 1,
        },
    )?;
    println!(
        "{:>6} {:>9} {:>9} {:>9} {:>9}",
        "theta", "delta0", "delta1", "i", "i (mc)"
    );
    for (e, m) in exact.iter().zip(&mc) {
        println!(
            "{:>6.2} {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            e.theta, e.delta0, e.delta1, e.indecisive, m.indecisive
        );
    }

    // A point null is never confirmed, so all decisive power is ordinary power.
    let point = RegionSet::interval(line, Interval::point(0.0)?)?;
    for p in power_curve(&point, &rule, &[0.0, 0.3], 100, PowerMethod::ClosedForm)? {
        println!(
            "point null at {:.1}: beta={:.5} delta={:.5}",
            p.theta, p.beta, p.delta
        );
    }

    let dc = RegionSet::dense_codense(line)?;
    let flat = indecisiveness_curve(&dc, &rule, &grid, 100, PowerMethod::ClosedForm)?;
    println!(
        "dense-codense indecisiveness: {:?}",
        flat.iter().map(|p| p.indecisive).collect::<Vec<_>>()
    );
    Ok(())
}
