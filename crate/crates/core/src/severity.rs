//! Severe tests of empirical adequacy.
//!
//! A predictive theory is scored by a loss between its predictions and the
//! actual outcomes. The loss statistic `θ_L` is the mean loss, estimated by a
//! Wald normal interval that plugs in the sample standard deviation for σ.
//! The theory passes a severe test, relative to the loss, the margin `M` and
//! the level α, when that interval lies inside the adequacy hypothesis
//! `H_τ`: `[0, M]` for nonnegative losses on `[0, ∞)`, `[−M, M]` for signed
//! discrepancies on the real line.
//!
//! The plug-in σ is an approximation: the known-σ coverage argument does not
//! cover it exactly.

use serde::{Deserialize, Serialize};

use crate::confidence::{ConfidenceRule, Evidence};
use crate::error::{Error, Result};
use crate::power::power_point_mc;
use crate::region::{Interval, RegionSet};
use crate::verdict::{evaluate, run_test, Outcome, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Predictor {
    Constant { value: f64 },
    Linear { slope: f64, intercept: f64 },
}

impl Predictor {
    pub fn predict(&self, input: f64) -> f64 {
        match *self {
            Predictor::Constant { value } => value,
            Predictor::Linear { slope, intercept } => slope * input + intercept,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    /// `|prediction − actual|`
    Absolute,
    /// `(prediction − actual)²`
    Squared,
    /// `actual − prediction`; may be negative.
    Signed,
}

impl Loss {
    pub fn apply(self, predicted: f64, actual: f64) -> f64 {
        match self {
            Loss::Absolute => (predicted - actual).abs(),
            Loss::Squared => (predicted - actual).powi(2),
            Loss::Signed => actual - predicted,
        }
    }

    pub fn is_nonnegative(self) -> bool {
        !matches!(self, Loss::Signed)
    }

    /// Parameter space of the loss statistic.
    pub fn ambient(self) -> Interval {
        if self.is_nonnegative() {
            Interval::from_bounds(0.0, true, f64::INFINITY, false).expect("half line")
        } else {
            Interval::real_line()
        }
    }

    /// `H_τ` for margin `m`.
    pub fn adequacy_hypothesis(self, m: f64) -> Result<RegionSet> {
        let lo = if self.is_nonnegative() { 0.0 } else { -m };
        Ok(RegionSet::interval(
            self.ambient(),
            Interval::closed(lo, m)?,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheorySpec {
    pub predictor: Predictor,
    pub loss: Loss,
    pub margin: f64,
    pub alpha: f64,
}

impl TheorySpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.margin.is_finite() && self.margin > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "margin must be positive, got {}",
                self.margin
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdequacyResult {
    pub verdict: Verdict,
    pub loss_statistic_region: RegionSet,
    pub h_tau: RegionSet,
    pub n: usize,
    pub mean_loss: f64,
    /// Sample standard deviation, the plug-in σ; undefined below two trials.
    pub sd_loss: Option<f64>,
    pub loss: Loss,
    pub margin: f64,
    pub alpha: f64,
    /// The plug-in rule, absent when fewer than two trials leave σ undefined.
    pub rule: Option<ConfidenceRule>,
    pub passed_severe_test: bool,
    pub summary: String,
}

/// Scores `predictor` on paired inputs and actual outcomes.
pub fn test_adequacy(spec: &TheorySpec, inputs: &[f64], actuals: &[f64]) -> Result<AdequacyResult> {
    if inputs.len() != actuals.len() {
        return Err(Error::InvalidEvidence(format!(
            "{} inputs but {} actual outcomes",
            inputs.len(),
            actuals.len()
        )));
    }
    let predicted: Vec<f64> = inputs.iter().map(|&x| spec.predictor.predict(x)).collect();
    test_adequacy_with_predictions(spec.loss, spec.margin, spec.alpha, &predicted, actuals)
}

/// Like [`test_adequacy`] for predictions computed elsewhere.
pub fn test_adequacy_with_predictions(
    loss: Loss,
    margin: f64,
    alpha: f64,
    predicted: &[f64],
    actuals: &[f64],
) -> Result<AdequacyResult> {
    TheorySpec {
        predictor: Predictor::Constant { value: 0.0 },
        loss,
        margin,
        alpha,
    }
    .validate()?;
    if predicted.len() != actuals.len() {
        return Err(Error::InvalidEvidence(format!(
            "{} predictions but {} actual outcomes",
            predicted.len(),
            actuals.len()
        )));
    }
    if predicted.is_empty() {
        return Err(Error::InvalidEvidence("no trials".into()));
    }
    if let Some(bad) = predicted.iter().chain(actuals).find(|v| !v.is_finite()) {
        return Err(Error::InvalidEvidence(format!("non-finite value {bad}")));
    }
    let losses: Vec<f64> = predicted
        .iter()
        .zip(actuals)
        .map(|(&p, &a)| loss.apply(p, a))
        .collect();
    let n = losses.len();
    let mean = losses.iter().sum::<f64>() / n as f64;
    let sd = (n > 1)
        .then(|| (losses.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt());
    let h_tau = loss.adequacy_hypothesis(margin)?;
    let (verdict, rule) = match sd {
        None => (evaluate(&h_tau, &RegionSet::full(loss.ambient()))?, None),
        Some(sd) => {
            // A zero spread would give a degenerate interval; keep it open.
            let sigma = if sd > 0.0 {
                sd
            } else {
                f64::EPSILON * mean.abs().max(1.0)
            };
            let rule = ConfidenceRule::wald_normal_on(alpha, sigma, loss.ambient())?;
            let evidence = Evidence::normal(sigma, losses)?;
            (run_test(&rule, &evidence, &h_tau)?, Some(rule))
        }
    };
    let passed = verdict.outcome == Outcome::ConfirmNull;
    let summary = format!(
        "{} a severe test relative to loss={}, M={margin}, alpha={alpha}",
        if passed { "passed" } else { "did not pass" },
        serde_json::to_value(loss)
            .expect("loss name")
            .as_str()
            .expect("string"),
    );
    Ok(AdequacyResult {
        loss_statistic_region: verdict.region.clone(),
        verdict,
        h_tau,
        n,
        mean_loss: mean,
        sd_loss: sd,
        loss,
        margin,
        alpha,
        rule,
        passed_severe_test: passed,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeverityPoint {
    pub theta: f64,
    /// Monte Carlo estimate of `P_θ(¬□H_τ)`.
    pub prob_not_confirmed: f64,
    pub standard_error: f64,
    /// `1 − α`
    pub target: f64,
    /// Whether the estimate clears `target − 3·SE`.
    pub holds: bool,
}

/// Estimates `P_θ(¬□H_τ)` at parameter values outside `h_tau`.
pub fn severity_bound_check(
    h_tau: &RegionSet,
    rule: &ConfidenceRule,
    theta_grid_in_h1: &[f64],
    n: usize,
    reps: u64,
    seed: u64,
) -> Result<Vec<SeverityPoint>> {
    use crate::confidence::ConfidenceFunction;
    if let Some(&inside) = theta_grid_in_h1
        .iter()
        .find(|&&t| h_tau.contains_point(t).unwrap_or(true))
    {
        return Err(Error::Precondition(format!(
            "theta {inside} lies inside the adequacy hypothesis"
        )));
    }
    let target = 1.0 - rule.alpha();
    theta_grid_in_h1
        .iter()
        .enumerate()
        .map(|(i, &theta)| {
            let p = power_point_mc(
                h_tau,
                rule,
                theta,
                n,
                reps,
                crate::mc::derive_seed(seed, i as u64),
            )?;
            let q = 1.0 - p.delta1;
            let se = (q * (1.0 - q) / reps as f64).sqrt();
            Ok(SeverityPoint {
                theta,
                prob_not_confirmed: q,
                standard_error: se,
                target,
                holds: q >= target - 3.0 * se,
            })
        })
        .collect()
}
