//! Which hypotheses can ever be confirmed. A target with open interior gets
//! a witness; a point null never does.

use modal_confirm::confidence::{
    satisfies_precision, wald_normal_precision_candidates, ConfidenceRule,
};
use modal_confirm::region::{Interval, RegionSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rule = ConfidenceRule::wald_normal(0.05, 1.0)?;
    let line = Interval::real_line();
    for target in [
        RegionSet::interval(line, Interval::closed(-0.2, 0.2)?)?,
        RegionSet::interval(line, Interval::closed(0.0, 0.001)?)?,
        RegionSet::interval(line, Interval::point(0.0)?)?,
    ] {
        match wald_normal_precision_candidates(&rule, &target)
            .and_then(|c| satisfies_precision(&rule, &target, c))
        {
            Ok(Some(e)) => println!("{target}: confirmed by {} observations", e.len()),
            Ok(None) => println!("{target}: no witness among the candidates"),
            Err(err) => println!("{target}: {err}"),
        }
    }
    Ok(())
}
