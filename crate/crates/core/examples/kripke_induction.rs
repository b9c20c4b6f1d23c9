//! Model checking on a (theta, evidence) frame, and where the finite
//! horizon breaks the "evidence can always go either way" property.

use std::collections::HashMap;

use modal_confirm::confidence::ConfidenceRule;
use modal_confirm::kripke::{Alphabet, Frame, ModalFormula};
use modal_confirm::power::linspace;
use modal_confirm::region::{Interval, RegionSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rule = ConfidenceRule::wald_binomial(0.05)?;
    let h = RegionSet::interval(Interval::unit(), Interval::closed(0.4, 0.6)?)?;
    let frame = Frame::new(linspace(0.0, 1.0, 21), Alphabet::Bits, 6, rule)?.with_pep_radius(10);
    println!("{} worlds", frame.world_count());

    let atoms = HashMap::from([("H".to_string(), h)]);
    for src in [
        "(boxC (atom H))",
        "(diamondE (boxC (atom H)))",
        "(and (diamondE (diamondC (atom H))) (diamondE (diamondC (not (atom H)))))",
    ] {
        let phi = ModalFormula::parse(src, &atoms)?;
        let report = frame.model_check(&phi)?;
        println!(
            "{src}\n  holds at {}/{}",
            report.worlds_satisfying, report.worlds_total
        );
        for (theta, e) in report.counterexamples.iter().take(3) {
            println!("  fails at theta={theta}, E={e}");
        }
    }

    let failures = frame.check_pep()?;
    println!(
        "PEP failures at radius {}: {}; certified up to depth {:?}",
        frame.pep_radius(),
        failures.len(),
        frame.pep_certified_depth()?
    );
    Ok(())
}
