//! Trivalent verdicts from Wald intervals.

use modal_confirm::confidence::{ConfidenceFunction, ConfidenceRule, Evidence};
use modal_confirm::region::{Interval, RegionSet};
use modal_confirm::run_test;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rule = ConfidenceRule::wald_normal(0.05, 1.0)?;
    let h0 = RegionSet::interval(Interval::real_line(), Interval::closed(-0.2, 0.2)?)?;
    for (label, mean, n) in [
        ("near zero", 0.0, 400),
        ("far out", 1.0, 100),
        ("on the edge", 0.2, 400),
        ("tiny sample", 0.0, 4),
    ] {
        let e = Evidence::normal(1.0, vec![mean; n])?;
        let v = run_test(&rule, &e, &h0)?;
        println!(
            "{label:>12}: n={n:<4} c(E)={}  -> {:?}",
            v.region, v.outcome
        );
    }

    let bin = ConfidenceRule::wald_binomial(0.05)?;
    let h = RegionSet::interval(Interval::unit(), Interval::closed(0.0, 0.5)?)?;
    for s in ["0000000", "0100100", "1111111"] {
        let e = Evidence::bitstring(7, s)?;
        println!(
            "{s}: c(E)={}  -> {:?}",
            bin.region(&e)?,
            run_test(&bin, &e, &h)?.outcome
        );
    }
    Ok(())
}
