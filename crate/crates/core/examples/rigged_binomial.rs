//! A binomial rule rigged to return a point on one string, and what that
//! costs in level.

use modal_confirm::confidence::{ConfidenceRule, Evidence};
use modal_confirm::power::linspace;
use modal_confirm::region::{Interval, RegionSet};
use modal_confirm::rigged::{rigged_level, topological_coverage};
use modal_confirm::run_test;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = ConfidenceRule::wald_binomial(0.04)?;
    let trigger = Evidence::bitstring(7, "1011000")?;
    let payload = RegionSet::interval(Interval::unit(), Interval::point(0.5)?)?;
    let demo = rigged_level(&base, &trigger, &payload, &linspace(0.0, 1.0, 101))?;
    println!(
        "sup P(trigger) = {:.6} at theta = {:.6}; level bound {:.6}",
        demo.sup_trigger_prob, demo.argmax_theta, demo.rigged_level_bound
    );

    let rigged = ConfidenceRule::rigged(base.clone(), trigger.clone(), payload.clone())?;
    println!(
        "on the trigger the point null is {:?}",
        run_test(&rigged, &trigger, &payload)?.outcome
    );

    println!(
        "{:>5} {:>9} {:>9} {:>9}",
        "theta", "coverage", "topo", "rigged"
    );
    let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let base_cov = topological_coverage(&base, 7, &grid)?;
    let rig_cov = topological_coverage(&rigged, 7, &grid)?;
    for (b, r) in base_cov.iter().zip(&rig_cov) {
        println!(
            "{:>5.1} {:>9.5} {:>9.5} {:>9.5}",
            b.theta, b.coverage, b.topo_coverage, r.topo_coverage
        );
    }
    Ok(())
}
