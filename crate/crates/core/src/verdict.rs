//! Trivalent test outcomes from confidence-region containment.
//!
//! With `H₁ = H₀ᶜ`, a region `c(E)` confirms `H₀` when `c(E) ⊆ H₀`, confirms
//! `H₁` when `c(E) ⊆ H₁`, and is indecisive when it meets both. An empty
//! region refutes every parameter value and gets its own outcome.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::confidence::{ConfidenceFunction, Evidence};
use crate::error::Result;
use crate::region::RegionSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// `□H₀`
    ConfirmNull,
    /// `□H₁`
    ConfirmAlt,
    /// `◇H₀ ∧ ◇H₁`
    Indecisive,
    /// `c(E) = ∅`
    RefutedAll,
}

impl Outcome {
    pub fn is_decisive(self) -> bool {
        matches!(self, Outcome::ConfirmNull | Outcome::ConfirmAlt)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::ConfirmNull => "confirm_null",
            Outcome::ConfirmAlt => "confirm_alt",
            Outcome::Indecisive => "indecisive",
            Outcome::RefutedAll => "refuted_all",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modality {
    Box,
    Diamond,
}

/// An outcome together with the region that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub region: RegionSet,
}

/// Classifies `region` against `h0` and its complement.
pub fn evaluate(h0: &RegionSet, region: &RegionSet) -> Result<Verdict> {
    let confirms_null = h0.contains(region)?;
    let h1 = h0.complement();
    let confirms_alt = h1.contains(region)?;
    let outcome = if region.is_empty() {
        Outcome::RefutedAll
    } else if confirms_null {
        Outcome::ConfirmNull
    } else if confirms_alt {
        Outcome::ConfirmAlt
    } else {
        Outcome::Indecisive
    };
    Ok(Verdict {
        outcome,
        region: region.clone(),
    })
}

/// `□h` holds iff `region ⊆ h`; `◇h` holds iff `region ∩ h ≠ ∅`.
pub fn modal_holds(h: &RegionSet, region: &RegionSet, modality: Modality) -> Result<bool> {
    Ok(match modality {
        Modality::Box => h.contains(region)?,
        Modality::Diamond => region.intersects(h)?,
    })
}

pub fn run_test<C: ConfidenceFunction + ?Sized>(
    rule: &C,
    evidence: &Evidence,
    h0: &RegionSet,
) -> Result<Verdict> {
    let region = rule.region(evidence)?;
    evaluate(h0, &region)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confidence::ConfidenceRule;
    use crate::region::Interval;

    fn line(i: Interval) -> RegionSet {
        RegionSet::interval(Interval::real_line(), i).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let h0 = line(Interval::closed(-0.2, 0.2).unwrap());
        let r = line(Interval::open(-0.1, 0.1).unwrap());
        assert_eq!(evaluate(&h0, &r).unwrap().outcome, Outcome::ConfirmNull);

        let point = line(Interval::point(0.0).unwrap());
        assert_eq!(evaluate(&point, &r).unwrap().outcome, Outcome::Indecisive);

        let empty = RegionSet::empty(Interval::real_line());
        assert_eq!(evaluate(&h0, &empty).unwrap().outcome, Outcome::RefutedAll);

        let far = line(Interval::open(0.3, 0.5).unwrap());
        assert_eq!(evaluate(&h0, &far).unwrap().outcome, Outcome::ConfirmAlt);
    }

    #[test]
    fn evaluate_rejects_mismatched_ambients() {
        let h0 = RegionSet::full(Interval::unit());
        let r = line(Interval::open(0.0, 1.0).unwrap());
        assert!(evaluate(&h0, &r).is_err());
    }

    #[test]
    fn modal_examples() {
        let r = line(Interval::open(-0.1, 0.1).unwrap());
        let point = line(Interval::point(0.0).unwrap());
        assert!(modal_holds(&point, &r, Modality::Diamond).unwrap());

        let punctured = point.complement();
        let away = line(Interval::open(0.3, 0.5).unwrap());
        assert!(modal_holds(&punctured, &away, Modality::Box).unwrap());

        // □h ⇔ ¬◇hᶜ
        let h = line(Interval::closed(-1.0, 1.0).unwrap());
        for region in [r, away, line(Interval::open(0.5, 1.5).unwrap())] {
            assert_eq!(
                modal_holds(&h, &region, Modality::Box).unwrap(),
                !modal_holds(&h.complement(), &region, Modality::Diamond).unwrap()
            );
        }
    }

    #[test]
    fn run_test_examples() {
        let rule = ConfidenceRule::wald_normal(0.05, 1.0).unwrap();
        let h0 = line(Interval::closed(-0.2, 0.2).unwrap());
        let zeros = Evidence::normal(1.0, vec![0.0; 100]).unwrap();
        assert_eq!(
            run_test(&rule, &zeros, &h0).unwrap().outcome,
            Outcome::ConfirmNull
        );

        let point = line(Interval::point(0.0).unwrap());
        assert_eq!(
            run_test(&rule, &zeros, &point).unwrap().outcome,
            Outcome::Indecisive
        );

        let ones = Evidence::normal(1.0, vec![1.0; 100]).unwrap();
        let v = run_test(&rule, &ones, &h0).unwrap();
        assert_eq!(v.outcome, Outcome::ConfirmAlt);
        let iv = v.region.intervals().unwrap()[0];
        assert!((iv.lo().value() - 0.804).abs() < 1e-3 && (iv.hi().value() - 1.196).abs() < 1e-3);
    }

    #[test]
    fn box_is_not_reflexive() {
        // θ = 0 is the true value, yet data far from 0 confirm {0}ᶜ.
        let rule = ConfidenceRule::wald_normal(0.05, 1.0).unwrap();
        let h0 = line(Interval::point(0.0).unwrap()).complement();
        let e = Evidence::normal(1.0, vec![0.5; 100]).unwrap();
        let v = run_test(&rule, &e, &h0).unwrap();
        assert_eq!(v.outcome, Outcome::ConfirmNull);
        assert!(!h0.contains_point(0.0).unwrap());
    }

    #[test]
    fn dense_codense_is_always_indecisive() {
        let dc = RegionSet::dense_codense(Interval::real_line()).unwrap();
        let r = line(Interval::open(0.0, 1e-9).unwrap());
        assert_eq!(evaluate(&dc, &r).unwrap().outcome, Outcome::Indecisive);
    }
}
