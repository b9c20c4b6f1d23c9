//! Classical power, partial and total decisive power, indecisiveness and the
//! d-value.
//!
//! For a null `H₀` and true parameter θ at sample size n:
//!
//! * `δ₁(θ,n) = P_θ(□H₀)` and `δ₀(θ,n) = P_θ(□H₁)` are the partial decisive
//!   powers; the classical power is `β = δ₀`.
//! * `δ = δ₀ + δ₁` is the decisive power and `i◇ = 1 − δ` the indecisiveness.
//! * the d-value is the worst decisive-error probability over a grid: the
//!   chance of confirming the wrong side.
//!
//! The closed form uses `x̄ ~ N(θ, σ²/n)`: an open Wald interval
//! `(x̄ − w, x̄ + w)` sits inside a component `⟨L, U⟩` exactly when
//! `L + w ≤ x̄ ≤ U − w`, and these events are disjoint across components.

use serde::{Deserialize, Serialize};

use crate::confidence::{ConfidenceFunction, ConfidenceRule, Constructor};
use crate::error::{Error, Result};
use crate::mc;
use crate::normal;
use crate::region::{Interval, RegionSet};
use crate::verdict::{run_test, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PowerMethod {
    ClosedForm,
    MonteCarlo { reps: u64, seed: u64 },
}

impl PowerMethod {
    pub fn label(&self) -> String {
        match self {
            PowerMethod::ClosedForm => "closed_form".into(),
            PowerMethod::MonteCarlo { reps, seed } => {
                format!("monte_carlo(reps={reps};seed={seed})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerPoint {
    pub theta: f64,
    pub n: usize,
    /// Classical power `P_θ(□H₁)`.
    pub beta: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub delta: f64,
    pub indecisive: f64,
    /// Frequency of empty regions; zero for non-refuting rules.
    pub refuted: f64,
    pub method: PowerMethod,
}

impl PowerPoint {
    /// Binomial standard error `√(p(1−p)/reps)` of a Monte Carlo frequency.
    pub fn standard_error(&self, p: f64) -> Option<f64> {
        match self.method {
            PowerMethod::ClosedForm => None,
            PowerMethod::MonteCarlo { reps, .. } => Some((p * (1.0 - p) / reps as f64).sqrt()),
        }
    }

    fn indecisive_everywhere(theta: f64, n: usize) -> Self {
        PowerPoint {
            theta,
            n,
            beta: 0.0,
            delta0: 0.0,
            delta1: 0.0,
            delta: 0.0,
            indecisive: 1.0,
            refuted: 0.0,
            method: PowerMethod::ClosedForm,
        }
    }
}

/// Which two-sided interval backs a TOST at test level α.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalConvention {
    /// A `1 − α` interval; decisive errors are bounded by `α/2` per side at
    /// best and by `α` in general.
    OneMinusAlpha,
    /// A `1 − 2α` interval, the usual TOST construction whose false
    /// confirmation rate is `α`.
    OneMinusTwoAlpha,
}

impl IntervalConvention {
    pub fn interval_alpha(self, test_alpha: f64) -> f64 {
        match self {
            IntervalConvention::OneMinusAlpha => test_alpha,
            IntervalConvention::OneMinusTwoAlpha => 2.0 * test_alpha,
        }
    }
}

/// Wald normal rule for a TOST at `test_alpha` under `convention`.
pub fn tost_rule(
    test_alpha: f64,
    sigma: f64,
    convention: IntervalConvention,
) -> Result<ConfidenceRule> {
    ConfidenceRule::wald_normal(convention.interval_alpha(test_alpha), sigma)
}

fn wald_normal_sigma(rule: &ConfidenceRule) -> Result<f64> {
    match rule.constructor() {
        Constructor::WaldNormal { sigma, ambient } if *ambient == Interval::real_line() => {
            Ok(*sigma)
        }
        _ => Err(Error::Unsupported(
            "closed-form power needs an unrigged wald_normal rule on the real line".into(),
        )),
    }
}

/// `P(region ⊆ h)` for the open Wald interval, summed over components of `h`.
fn containment_probability(h: &[Interval], theta: f64, half_width: f64, scale: f64) -> f64 {
    h.iter()
        .map(|part| {
            let lo = (part.lo().value() + half_width - theta) / scale;
            let hi = (part.hi().value() - half_width - theta) / scale;
            normal::mass_between(lo, hi)
        })
        .sum::<f64>()
        .clamp(0.0, 1.0)
}

pub fn power_point_exact(
    h0: &RegionSet,
    rule: &ConfidenceRule,
    theta: f64,
    n: usize,
) -> Result<PowerPoint> {
    let sigma = wald_normal_sigma(rule)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "theta must be finite, got {theta}"
        )));
    }
    if h0.ambient() != rule.ambient() {
        return Err(crate::region::RegionError::AmbientMismatch {
            left: h0.ambient(),
            right: rule.ambient(),
        }
        .into());
    }
    let null_parts = h0.intervals().ok_or_else(|| {
        Error::Unsupported("closed-form power over a dense-codense hypothesis".into())
    })?;
    let alt = h0.complement();
    let alt_parts = alt.intervals().expect("complement of an interval union");

    let scale = sigma / (n as f64).sqrt();
    let half_width = rule.critical_value() * scale;
    let delta1 = containment_probability(null_parts, theta, half_width, scale);
    let delta0 = containment_probability(alt_parts, theta, half_width, scale);
    let delta = delta0 + delta1;
    Ok(PowerPoint {
        theta,
        n,
        beta: delta0,
        delta0,
        delta1,
        delta,
        indecisive: (1.0 - delta).max(0.0),
        refuted: 0.0,
        method: PowerMethod::ClosedForm,
    })
}

/// Frequencies of the four outcomes over `reps` seeded evidence draws of
/// length `n` at θ.
pub fn power_point_mc(
    h0: &RegionSet,
    rule: &ConfidenceRule,
    theta: f64,
    n: usize,
    reps: u64,
    seed: u64,
) -> Result<PowerPoint> {
    if n == 0 || reps == 0 {
        return Err(Error::InvalidParameter(
            "n and reps must be positive".into(),
        ));
    }
    if h0.ambient() != rule.ambient() {
        return Err(crate::region::RegionError::AmbientMismatch {
            left: h0.ambient(),
            right: rule.ambient(),
        }
        .into());
    }
    let model = rule.sampling_model(n)?;
    // Surface parameter errors once rather than from every worker.
    model.draw(theta, 0, &mut mc::stream_rng(seed, u64::MAX))?;
    let t = mc::tally(reps, seed, |rng| {
        let e = model.draw(theta, n, rng)?;
        Ok(run_test(rule, &e, h0)?.outcome)
    })?;
    let r = reps as f64;
    let delta1 = t.get(Outcome::ConfirmNull) as f64 / r;
    let delta0 = t.get(Outcome::ConfirmAlt) as f64 / r;
    Ok(PowerPoint {
        theta,
        n,
        beta: delta0,
        delta0,
        delta1,
        delta: delta0 + delta1,
        indecisive: t.get(Outcome::Indecisive) as f64 / r,
        refuted: t.get(Outcome::RefutedAll) as f64 / r,
        method: PowerMethod::MonteCarlo { reps, seed },
    })
}

pub fn power_point(
    h0: &RegionSet,
    rule: &ConfidenceRule,
    theta: f64,
    n: usize,
    method: PowerMethod,
) -> Result<PowerPoint> {
    match method {
        PowerMethod::ClosedForm => power_point_exact(h0, rule, theta, n),
        PowerMethod::MonteCarlo { reps, seed } => power_point_mc(h0, rule, theta, n, reps, seed),
    }
}

/// Evaluates every grid point; Monte Carlo points get seeds derived from
/// `(seed, index)`.
pub fn power_curve(
    h0: &RegionSet,
    rule: &ConfidenceRule,
    thetas: &[f64],
    n: usize,
    method: PowerMethod,
) -> Result<Vec<PowerPoint>> {
    thetas
        .iter()
        .enumerate()
        .map(|(i, &theta)| power_point(h0, rule, theta, n, point_method(method, i)))
        .collect()
}

fn point_method(method: PowerMethod, index: usize) -> PowerMethod {
    match method {
        PowerMethod::ClosedForm => PowerMethod::ClosedForm,
        PowerMethod::MonteCarlo { reps, seed } => PowerMethod::MonteCarlo {
            reps,
            seed: mc::derive_seed(seed, index as u64),
        },
    }
}

/// `i◇` along a grid. A dense-codense null meets every open region on both
/// sides, so its curve is identically one and nothing is simulated.
pub fn indecisiveness_curve(
    h0: &RegionSet,
    rule: &ConfidenceRule,
    thetas: &[f64],
    n: usize,
    method: PowerMethod,
) -> Result<Vec<PowerPoint>> {
    if h0.is_dense_codense() {
        return Ok(thetas
            .iter()
            .map(|&t| PowerPoint::indecisive_everywhere(t, n))
            .collect());
    }
    power_curve(h0, rule, thetas, n, method)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisiveError {
    pub theta: f64,
    /// Whether θ belongs to `H₀` (the error is then `P_θ(□H₁)`).
    pub in_null: bool,
    pub error_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DValueReport {
    pub d_value: f64,
    /// Level of the confidence rule used.
    pub alpha: f64,
    pub n: usize,
    pub theta_grid: Vec<f64>,
    pub per_theta: Vec<DecisiveError>,
    pub method: PowerMethod,
}

/// Largest grid probability of confirming the side θ is not on.
pub fn d_value(
    h0: &RegionSet,
    rule: &ConfidenceRule,
    theta_grid: &[f64],
    n: usize,
    method: PowerMethod,
) -> Result<DValueReport> {
    if theta_grid.is_empty() {
        return Err(Error::InvalidParameter("theta grid is empty".into()));
    }
    let membership = theta_grid
        .iter()
        .map(|&t| h0.contains_point(t))
        .collect::<Result<Vec<_>, _>>()?;
    let points = power_curve(h0, rule, theta_grid, n, method)?;
    let per_theta: Vec<DecisiveError> = points
        .iter()
        .zip(membership)
        .map(|(p, in_null)| DecisiveError {
            theta: p.theta,
            in_null,
            error_probability: if in_null { p.delta0 } else { p.delta1 },
        })
        .collect();
    let d = per_theta
        .iter()
        .map(|e| e.error_probability)
        .fold(0.0, f64::max);
    Ok(DValueReport {
        d_value: d,
        alpha: rule.alpha(),
        n,
        theta_grid: theta_grid.to_vec(),
        per_theta,
        method,
    })
}

/// d-values for a TOST at `test_alpha` under both interval conventions.
pub fn d_value_by_convention(
    h0: &RegionSet,
    test_alpha: f64,
    sigma: f64,
    theta_grid: &[f64],
    n: usize,
    method: PowerMethod,
) -> Result<Vec<(IntervalConvention, DValueReport)>> {
    [
        IntervalConvention::OneMinusAlpha,
        IntervalConvention::OneMinusTwoAlpha,
    ]
    .into_iter()
    .map(|c| {
        Ok((
            c,
            d_value(h0, &tost_rule(test_alpha, sigma, c)?, theta_grid, n, method)?,
        ))
    })
    .collect()
}

/// `k` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..k)
            .map(|i| {
                if i + 1 == k {
                    b
                } else {
                    a + (b - a) * i as f64 / (k - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(i: Interval) -> RegionSet {
        RegionSet::interval(Interval::real_line(), i).unwrap()
    }

    fn rule() -> ConfidenceRule {
        ConfidenceRule::wald_normal(0.05, 1.0).unwrap()
    }

    #[test]
    fn tost_at_center_matches_hand_computation() {
        let h0 = line(Interval::closed(-0.2, 0.2).unwrap());
        let p = power_point_exact(&h0, &rule(), 0.0, 100).unwrap();
        // w = 0.196: δ₁ = Φ(0.04) − Φ(−0.04), δ₀ = 2·P(Z ≥ 3.96)
        let w = normal::two_sided_critical(0.05) / 10.0;
        let want1 = normal::mass_between(-(0.2 - w) * 10.0, (0.2 - w) * 10.0);
        let want0 = 2.0 * normal::sf((0.2 + w) * 10.0);
        assert!((p.delta1 - want1).abs() < 1e-15);
        assert!((p.delta0 - want0).abs() < 1e-15);
        assert!((p.delta1 - 0.0319).abs() < 1e-4);
        assert!((p.delta0 - 7.4e-5).abs() < 1e-6);
    }

    #[test]
    fn point_null_has_no_confirmation_mass() {
        let h0 = line(Interval::point(0.0).unwrap());
        for theta in linspace(-1.0, 1.0, 41) {
            let p = power_point_exact(&h0, &rule(), theta, 100).unwrap();
            assert_eq!(p.delta1, 0.0);
            assert_eq!(p.delta, p.beta);
            assert_eq!(p.indecisive, 1.0 - p.beta);
        }
    }

    #[test]
    fn full_ambient_null() {
        let h0 = RegionSet::full(Interval::real_line());
        let p = power_point_exact(&h0, &rule(), 0.3, 10).unwrap();
        assert_eq!(p.delta1, 1.0);
        assert_eq!(p.indecisive, 0.0);
        assert_eq!(p.delta0, 0.0);
    }

    #[test]
    fn closed_form_rejects_unsupported_inputs() {
        let dc = RegionSet::dense_codense(Interval::real_line()).unwrap();
        assert!(matches!(
            power_point_exact(&dc, &rule(), 0.0, 10),
            Err(Error::Unsupported(_))
        ));
        let b = ConfidenceRule::wald_binomial(0.05).unwrap();
        let h = RegionSet::full(Interval::unit());
        assert!(matches!(
            power_point_exact(&h, &b, 0.5, 10),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn indecisiveness_grows_small_with_n() {
        let h0 = line(Interval::closed(-0.2, 0.2).unwrap());
        let mut last = 0.0;
        for n in [100, 200, 400, 800, 1600, 3200, 6400] {
            let p = power_point_exact(&h0, &rule(), 0.0, n).unwrap();
            assert!(p.delta1 >= last);
            last = p.delta1;
        }
        assert!(
            power_point_exact(&h0, &rule(), 0.0, 100_000)
                .unwrap()
                .indecisive
                < 1e-12
        );
    }

    #[test]
    fn mc_is_deterministic() {
        let h0 = line(Interval::closed(-0.2, 0.2).unwrap());
        let a = power_point_mc(&h0, &rule(), 0.1, 50, 2_000, 11).unwrap();
        let b = power_point_mc(&h0, &rule(), 0.1, 50, 2_000, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.delta0 + a.delta1 + a.indecisive + a.refuted, 1.0);
    }

    #[test]
    fn dense_codense_curve_is_one() {
        let dc = RegionSet::dense_codense(Interval::real_line()).unwrap();
        let pts = indecisiveness_curve(
            &dc,
            &rule(),
            &linspace(-1.0, 1.0, 5),
            30,
            PowerMethod::ClosedForm,
        )
        .unwrap();
        assert!(pts.iter().all(|p| p.indecisive == 1.0));
    }

    #[test]
    fn d_value_point_null_never_confirms() {
        let h0 = line(Interval::point(0.0).unwrap());
        let r = d_value(
            &h0,
            &rule(),
            &linspace(-1.0, 1.0, 41),
            100,
            PowerMethod::ClosedForm,
        )
        .unwrap();
        for e in r.per_theta.iter().filter(|e| !e.in_null) {
            assert_eq!(e.error_probability, 0.0);
        }
        assert!(d_value(&h0, &rule(), &[], 100, PowerMethod::ClosedForm).is_err());
    }

    #[test]
    fn deep_interior_errors_vanish() {
        let h0 = line(Interval::closed(-10.0, 10.0).unwrap());
        let r = d_value(
            &h0,
            &rule(),
            &linspace(-1.0, 1.0, 11),
            400,
            PowerMethod::ClosedForm,
        )
        .unwrap();
        assert!(r.d_value < 1e-300);
    }

    #[test]
    fn both_conventions_bounded() {
        let h0 = line(Interval::closed(-0.2, 0.2).unwrap());
        let grid = linspace(-1.0, 1.0, 41);
        let reports =
            d_value_by_convention(&h0, 0.05, 1.0, &grid, 100, PowerMethod::ClosedForm).unwrap();
        let narrow = &reports[0].1;
        let tost = &reports[1].1;
        // Worst case sits on the null boundary; the far tail adds ~1e-9.
        assert!((narrow.d_value - 0.025).abs() < 1e-8, "{}", narrow.d_value);
        assert!((tost.d_value - 0.05).abs() < 1e-8, "{}", tost.d_value);
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-1.0, 1.0, 41);
        assert_eq!(g.len(), 41);
        assert_eq!(g[0], -1.0);
        assert_eq!(g[40], 1.0);
        assert_eq!(g[20], 0.0);
    }
}
