//! Hypotheses as finite unions of intervals, plus the symbolic
//! dense-codense set.

use modal_confirm::region::{Interval, RegionSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let unit = Interval::unit();
    let h = RegionSet::new(
        unit,
        vec![
            Interval::closed(0.2, 0.4)?,
            Interval::point(0.7)?,
            Interval::from_bounds(0.9, false, 1.0, true)?,
        ],
    )?;
    println!("H            = {h}");
    println!("complement   = {}", h.complement());
    println!("interior     = {}", h.interior());
    println!("confirmable  = {}", h.is_confirmable());

    let point = RegionSet::interval(unit, Interval::point(0.5)?)?;
    println!("{{0.5}} confirmable = {}", point.is_confirmable());

    let dc = RegionSet::dense_codense(unit)?;
    let open = RegionSet::interval(unit, Interval::open(0.3, 0.31)?)?;
    println!(
        "dense-codense meets (0.3, 0.31): {}, and so does its complement: {}",
        dc.intersects(&open)?,
        dc.complement().intersects(&open)?
    );
    Ok(())
}
