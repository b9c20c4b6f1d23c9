//! Rigged confidence regions and the topological confidence property on the
//! finite binomial model.
//!
//! With `Ω = 2ⁿ` and `P_θ(s) = θ^{|s|₁}(1−θ)^{|s|₀}` every probability here
//! is an exact finite sum over the `2ⁿ` outcome strings.
//!
//! A rigged rule `c*` agrees with a base rule `c` except on one trigger
//! string `E₀`, where it returns an arbitrary payload. Its miss probability
//! `P_θ(θ ∉ c*(E) or c*(E) has empty interior)` is at most
//! `P_θ(θ ∉ c(E)) + P_θ(E₀)` whenever `c` is open-valued, and the second term
//! is at most `γ = sup_θ P_θ(E₀)`.

use serde::{Deserialize, Serialize};

use crate::confidence::{ConfidenceFunction, ConfidenceRule, Evidence, SamplingModel};
use crate::error::{Error, Result};
use crate::region::RegionSet;

/// `θ^{|s|₁}(1−θ)^{|s|₀}`, with `0⁰ = 1`.
pub fn string_probability(ones: usize, zeros: usize, theta: f64) -> f64 {
    theta.powi(ones as i32) * (1.0 - theta).powi(zeros as i32)
}

fn counts(event: &Evidence) -> Result<(usize, usize)> {
    event.bit_counts().ok_or_else(|| {
        Error::IncompatibleModel("events are bit strings of the binomial model".into())
    })
}

/// Probability of the exact string `event` at θ.
pub fn event_probability(event: &Evidence, theta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidParameter(format!(
            "theta must lie in [0, 1], got {theta}"
        )));
    }
    let (ones, zeros) = counts(event)?;
    Ok(string_probability(ones, zeros, theta))
}

/// Largest probability of `event` over `theta_grid`, also trying the analytic
/// maximiser `|s|₁/|s|` when it lies within the grid's range. Returns the
/// probability and the maximising θ. The empty string has probability one
/// at every θ, so its maximiser is the first grid point.
pub fn sup_event_probability(
    model: SamplingModel,
    event: &Evidence,
    theta_grid: &[f64],
) -> Result<(f64, f64)> {
    let SamplingModel::BernoulliSequence { horizon } = model else {
        return Err(Error::IncompatibleModel(
            "sup of an event needs the bernoulli model".into(),
        ));
    };
    let (ones, zeros) = counts(event)?;
    if ones + zeros > horizon {
        return Err(Error::InvalidEvidence(format!(
            "event length {} exceeds horizon {horizon}",
            ones + zeros
        )));
    }
    if theta_grid.is_empty() {
        return Err(Error::InvalidParameter("theta grid is empty".into()));
    }
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for &t in theta_grid {
        let p = event_probability(event, t)?;
        if p > best.0 {
            best = (p, t);
        }
    }
    if ones + zeros > 0 {
        let star = ones as f64 / (ones + zeros) as f64;
        let lo = theta_grid.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = theta_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if (lo..=hi).contains(&star) {
            let p = string_probability(ones, zeros, star);
            if p >= best.0 {
                best = (p, star);
            }
        }
    }
    Ok(best)
}

fn outcome_space(rule: &ConfidenceRule, horizon: usize) -> Result<Vec<(usize, usize, RegionSet)>> {
    if horizon > 24 {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} is too large to enumerate"
        )));
    }
    rule.check_compatible(&SamplingModel::bernoulli(horizon.max(1))?)?;
    Evidence::all_bitstrings(horizon.max(1), horizon)?
        .into_iter()
        .map(|e| {
            let (ones, zeros) = counts(&e)?;
            Ok((ones, zeros, rule.region(&e)?))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveragePoint {
    pub theta: f64,
    /// `P_θ(θ ∈ c(E))`
    pub coverage: f64,
    /// `P_θ(c(E) has nonempty interior)`
    pub interior_prob: f64,
    /// `P_θ(θ ∈ c(E) and c(E) has nonempty interior)`
    pub topo_coverage: f64,
}

/// Exact coverage quantities of `rule` over all strings of length `horizon`.
pub fn topological_coverage(
    rule: &ConfidenceRule,
    horizon: usize,
    theta_grid: &[f64],
) -> Result<Vec<CoveragePoint>> {
    let space = outcome_space(rule, horizon)?;
    let open: Vec<bool> = space
        .iter()
        .map(|(_, _, r)| r.has_nonempty_interior())
        .collect();
    theta_grid
        .iter()
        .map(|&theta| {
            if !(0.0..=1.0).contains(&theta) {
                return Err(Error::InvalidParameter(format!(
                    "theta must lie in [0, 1], got {theta}"
                )));
            }
            let mut point = CoveragePoint {
                theta,
                coverage: 0.0,
                interior_prob: 0.0,
                topo_coverage: 0.0,
            };
            for ((ones, zeros, region), &interior) in space.iter().zip(&open) {
                let p = string_probability(*ones, *zeros, theta);
                let covers = region.contains_point(theta)?;
                if covers {
                    point.coverage += p;
                }
                if interior {
                    point.interior_prob += p;
                }
                if covers && interior {
                    point.topo_coverage += p;
                }
            }
            // Rounding can push a sum of 2ⁿ terms just past one.
            point.coverage = point.coverage.min(1.0);
            point.interior_prob = point.interior_prob.min(1.0);
            point.topo_coverage = point.topo_coverage.min(1.0);
            Ok(point)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiggedCoveragePoint {
    pub theta: f64,
    pub trigger_prob: f64,
    pub base_coverage: f64,
    pub base_topo_coverage: f64,
    pub rigged_coverage: f64,
    pub rigged_topo_coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiggedDemo {
    pub base_alpha: f64,
    /// The trigger as a bit string.
    pub trigger: String,
    pub payload: RegionSet,
    pub sup_trigger_prob: f64,
    pub argmax_theta: f64,
    /// `base_alpha + sup_trigger_prob`
    pub rigged_level_bound: f64,
    /// Exact per-θ coverages of the base and rigged rules.
    pub per_theta: Vec<RiggedCoveragePoint>,
}

impl RiggedDemo {
    /// Largest exact topological miss probability of the rigged rule over
    /// the grid.
    pub fn worst_rigged_miss(&self) -> f64 {
        self.per_theta
            .iter()
            .map(|p| 1.0 - p.rigged_topo_coverage)
            .fold(0.0, f64::max)
    }
}

/// Rigs `base` to return `payload` on the full-length string `trigger` and
/// reports the union bound alongside exact coverages.
pub fn rigged_level(
    base: &ConfidenceRule,
    trigger: &Evidence,
    payload: &RegionSet,
    theta_grid: &[f64],
) -> Result<RiggedDemo> {
    let horizon = trigger.len();
    let bits = trigger
        .to_bitstring()
        .ok_or_else(|| Error::IncompatibleModel("trigger must be a bit string".into()))?;
    let rigged = ConfidenceRule::rigged(base.clone(), trigger.clone(), payload.clone())?;
    let (sup, argmax) = sup_event_probability(
        SamplingModel::bernoulli(horizon.max(1))?,
        trigger,
        theta_grid,
    )?;
    let base_cov = topological_coverage(base, horizon, theta_grid)?;
    let rigged_cov = topological_coverage(&rigged, horizon, theta_grid)?;
    let per_theta = base_cov
        .iter()
        .zip(&rigged_cov)
        .map(|(b, r)| {
            Ok(RiggedCoveragePoint {
                theta: b.theta,
                trigger_prob: event_probability(trigger, b.theta)?,
                base_coverage: b.coverage,
                base_topo_coverage: b.topo_coverage,
                rigged_coverage: r.coverage,
                rigged_topo_coverage: r.topo_coverage,
            })
        })
        .collect::<Result<_>>()?;
    Ok(RiggedDemo {
        base_alpha: base.alpha(),
        trigger: bits,
        payload: payload.clone(),
        sup_trigger_prob: sup,
        argmax_theta: argmax,
        rigged_level_bound: base.alpha() + sup,
        per_theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::linspace;
    use crate::region::Interval;

    fn trigger(s: &str) -> Evidence {
        Evidence::bitstring(s.len().max(1), s).unwrap()
    }

    #[test]
    fn sup_examples() {
        let grid = linspace(0.0, 1.0, 101);
        let (p, t) = sup_event_probability(
            SamplingModel::bernoulli(7).unwrap(),
            &trigger("1011000"),
            &grid,
        )
        .unwrap();
        assert!((t - 3.0 / 7.0).abs() < 1e-15);
        assert!((p - 0.008_393_004_372_570_7).abs() < 1e-15, "{p}");

        let (p, t) = sup_event_probability(
            SamplingModel::bernoulli(7).unwrap(),
            &trigger("1111111"),
            &grid,
        )
        .unwrap();
        assert_eq!((p, t), (1.0, 1.0));

        let (p, t) =
            sup_event_probability(SamplingModel::bernoulli(2).unwrap(), &trigger("10"), &grid)
                .unwrap();
        assert_eq!((p, t), (0.25, 0.5));

        let (p, _) =
            sup_event_probability(SamplingModel::bernoulli(2).unwrap(), &trigger(""), &grid)
                .unwrap();
        assert_eq!(p, 1.0);
    }

    #[test]
    fn grid_argmax_near_analytic() {
        // Without refinement the grid argmax sits within a step of |s|₁/n.
        let grid = linspace(0.05, 0.95, 19);
        let e = trigger("1011000");
        let (_, t) = grid
            .iter()
            .map(|&t| (event_probability(&e, t).unwrap(), t))
            .fold((0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a });
        assert!((t - 3.0 / 7.0).abs() <= 0.05);
    }

    #[test]
    fn sup_rejects_normal_model() {
        let e = trigger("10");
        assert!(sup_event_probability(SamplingModel::normal(1.0).unwrap(), &e, &[0.5]).is_err());
        assert!(sup_event_probability(SamplingModel::bernoulli(1).unwrap(), &e, &[0.5]).is_err());
    }

    #[test]
    fn probabilities_sum_to_one() {
        let rule = ConfidenceRule::wald_binomial(0.05).unwrap();
        let space = outcome_space(&rule, 7).unwrap();
        assert_eq!(space.len(), 128);
        for theta in [0.0, 0.3, 1.0] {
            let total: f64 = space
                .iter()
                .map(|(o, z, _)| string_probability(*o, *z, theta))
                .sum();
            assert!((total - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn full_payload_never_hurts() {
        let base = ConfidenceRule::wald_binomial(0.04).unwrap();
        let demo = rigged_level(
            &base,
            &trigger("1011000"),
            &RegionSet::full(Interval::unit()),
            &linspace(0.0, 1.0, 21),
        )
        .unwrap();
        for p in &demo.per_theta {
            assert!(p.rigged_coverage >= p.base_coverage - 1e-15);
        }
    }

    #[test]
    fn point_payload_dips_by_trigger_mass() {
        let base = ConfidenceRule::wald_binomial(0.04).unwrap();
        let payload = RegionSet::interval(Interval::unit(), Interval::point(0.5).unwrap()).unwrap();
        let demo = rigged_level(
            &base,
            &trigger("1011000"),
            &payload,
            &linspace(0.0, 1.0, 21),
        )
        .unwrap();
        assert!((demo.rigged_level_bound - 0.048_393_004_372_570_7).abs() < 1e-15);
        for p in &demo.per_theta {
            assert!(p.rigged_topo_coverage >= p.base_topo_coverage - p.trigger_prob - 1e-15);
            assert!(p.trigger_prob <= demo.sup_trigger_prob + 1e-15);
        }
    }

    #[test]
    fn always_full_rule_covers() {
        // A rigged rule over a horizon-0 space only ever sees the empty string.
        let rule = ConfidenceRule::wald_binomial(0.05).unwrap();
        let cov = topological_coverage(&rule, 0, &[0.0, 0.5, 1.0]).unwrap();
        assert!(cov.iter().all(|c| c.topo_coverage == 1.0));
    }
}
