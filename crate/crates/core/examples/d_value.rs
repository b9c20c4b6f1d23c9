//! The d-value of an equivalence test under both interval conventions.

use modal_confirm::power::{
    d_value, d_value_by_convention, linspace, IntervalConvention, PowerMethod,
};
use modal_confirm::region::{Interval, RegionSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h0 = RegionSet::interval(Interval::real_line(), Interval::closed(-0.2, 0.2)?)?;
    let grid = linspace(-1.0, 1.0, 41);
    for (convention, r) in
        d_value_by_convention(&h0, 0.05, 1.0, &grid, 100, PowerMethod::ClosedForm)?
    {
        println!("{convention:?}: d = {:.6}", r.d_value);
    }
    let rule = modal_confirm::power::tost_rule(0.05, 1.0, IntervalConvention::OneMinusTwoAlpha)?;
    let mc = d_value(
        &h0,
        &rule,
        &grid,
        100,
        PowerMethod::MonteCarlo {
            reps: 20_000,
            seed: 3,
        },
    )?;
    let worst = mc
        .per_theta
        .iter()
        .max_by(|a, b| a.error_probability.total_cmp(&b.error_probability))
        .expect("nonempty grid");
    println!(
        "monte carlo: d = {:.5}, attained at theta = {}",
        mc.d_value, worst.theta
    );
    Ok(())
}
