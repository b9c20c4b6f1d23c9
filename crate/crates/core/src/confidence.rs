//! Evidence, sampling models and confidence functions.
//!
//! A confidence function maps a finite observation sequence to a subset of
//! the parameter space. The concrete rules here are the two-sided Wald
//! intervals for a normal mean with known scale and for a Bernoulli
//! proportion, plus the rigged wrapper that swaps in an arbitrary payload on
//! one trigger sequence.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal;
use crate::region::{Interval, RegionSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SamplingModel {
    /// i.i.d. `N(θ, σ²)` with σ known.
    NormalKnownSigma { sigma: f64 },
    /// i.i.d. Bernoulli(θ) bits, at most `horizon` of them.
    BernoulliSequence { horizon: usize },
}

impl SamplingModel {
    pub fn normal(sigma: f64) -> Result<Self> {
        if sigma.is_finite() && sigma > 0.0 {
            Ok(SamplingModel::NormalKnownSigma { sigma })
        } else {
            Err(Error::InvalidParameter(format!(
                "sigma must be positive and finite, got {sigma}"
            )))
        }
    }

    pub fn bernoulli(horizon: usize) -> Result<Self> {
        if horizon >= 1 {
            Ok(SamplingModel::BernoulliSequence { horizon })
        } else {
            Err(Error::InvalidParameter("horizon must be at least 1".into()))
        }
    }

    /// Draws `n` observations at parameter `theta`.
    pub fn draw<R: Rng + ?Sized>(&self, theta: f64, n: usize, rng: &mut R) -> Result<Evidence> {
        match *self {
            SamplingModel::NormalKnownSigma { sigma } => {
                if !theta.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "theta must be finite, got {theta}"
                    )));
                }
                let values = (0..n)
                    .map(|_| theta + sigma * rng.sample::<f64, _>(StandardNormal))
                    .collect();
                Ok(Evidence {
                    model: *self,
                    observations: Observations::Reals(values),
                })
            }
            SamplingModel::BernoulliSequence { horizon } => {
                if !(0.0..=1.0).contains(&theta) {
                    return Err(Error::InvalidParameter(format!(
                        "theta must lie in [0, 1], got {theta}"
                    )));
                }
                if n > horizon {
                    return Err(Error::InvalidEvidence(format!(
                        "{n} draws exceed horizon {horizon}"
                    )));
                }
                let bits = (0..n).map(|_| rng.random_bool(theta)).collect();
                Ok(Evidence {
                    model: *self,
                    observations: Observations::Bits(bits),
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Observations {
    Reals(Vec<f64>),
    Bits(Vec<bool>),
}

/// A finite observation sequence together with the model it was drawn
/// under. The empty sequence is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    model: SamplingModel,
    observations: Observations,
}

impl Evidence {
    pub fn normal(sigma: f64, values: Vec<f64>) -> Result<Self> {
        let model = SamplingModel::normal(sigma)?;
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidEvidence(format!(
                "observation {bad} is not finite"
            )));
        }
        Ok(Evidence {
            model,
            observations: Observations::Reals(values),
        })
    }

    pub fn bits(horizon: usize, bits: Vec<bool>) -> Result<Self> {
        let model = SamplingModel::bernoulli(horizon)?;
        if bits.len() > horizon {
            return Err(Error::InvalidEvidence(format!(
                "{} observations exceed horizon {horizon}",
                bits.len()
            )));
        }
        Ok(Evidence {
            model,
            observations: Observations::Bits(bits),
        })
    }

    /// Parses a string such as `"1011000"`.
    pub fn bitstring(horizon: usize, s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidEvidence(format!(
                    "bit strings use 0 and 1, found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Evidence::bits(horizon, bits)
    }

    /// Interprets a JSON array (or, for bits, a `"0101"` string) under `model`.
    pub fn from_json(model: SamplingModel, value: &serde_json::Value) -> Result<Self> {
        use serde_json::Value;
        match (model, value) {
            (SamplingModel::BernoulliSequence { horizon }, Value::String(s)) => {
                Evidence::bitstring(horizon, s)
            }
            (SamplingModel::BernoulliSequence { horizon }, Value::Array(items)) => {
                let bits = items
                    .iter()
                    .map(|v| match v.as_f64() {
                        Some(0.0) => Ok(false),
                        Some(1.0) => Ok(true),
                        _ => Err(Error::InvalidEvidence(format!(
                            "expected 0 or 1, found {v}"
                        ))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Evidence::bits(horizon, bits)
            }
            (SamplingModel::NormalKnownSigma { sigma }, Value::Array(items)) => {
                let values = items
                    .iter()
                    .map(|v| {
                        v.as_f64().ok_or_else(|| {
                            Error::InvalidEvidence(format!("expected a number, found {v}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Evidence::normal(sigma, values)
            }
            (_, other) => Err(Error::InvalidEvidence(format!(
                "expected a JSON array, found {other}"
            ))),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.observations {
            Observations::Reals(v) => serde_json::json!(v),
            Observations::Bits(b) => {
                serde_json::json!(b.iter().map(|&x| u8::from(x)).collect::<Vec<_>>())
            }
        }
    }

    pub fn model(&self) -> SamplingModel {
        self.model
    }

    pub fn observations(&self) -> &Observations {
        &self.observations
    }

    pub fn len(&self) -> usize {
        match &self.observations {
            Observations::Reals(v) => v.len(),
            Observations::Bits(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of ones and zeros, for bit evidence.
    pub fn bit_counts(&self) -> Option<(usize, usize)> {
        match &self.observations {
            Observations::Bits(b) => {
                let ones = b.iter().filter(|&&x| x).count();
                Some((ones, b.len() - ones))
            }
            Observations::Reals(_) => None,
        }
    }

    pub fn mean(&self) -> Option<f64> {
        if self.is_empty() {
            return None;
        }
        Some(match &self.observations {
            Observations::Reals(v) => v.iter().sum::<f64>() / v.len() as f64,
            Observations::Bits(b) => b.iter().filter(|&&x| x).count() as f64 / b.len() as f64,
        })
    }

    /// Bit evidence rendered as `"1011000"`.
    pub fn to_bitstring(&self) -> Option<String> {
        match &self.observations {
            Observations::Bits(b) => Some(b.iter().map(|&x| if x { '1' } else { '0' }).collect()),
            Observations::Reals(_) => None,
        }
    }

    /// Exact, order-sensitive equality of the observation sequences.
    pub fn same_observations(&self, other: &Evidence) -> bool {
        self.observations == other.observations
    }

    /// Whether `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &Evidence) -> bool {
        match (&self.observations, &other.observations) {
            (Observations::Reals(a), Observations::Reals(b)) => b.starts_with(a),
            (Observations::Bits(a), Observations::Bits(b)) => b.starts_with(a),
            _ => false,
        }
    }

    /// Every bit string of length exactly `len`, in binary counting order.
    pub fn all_bitstrings(horizon: usize, len: usize) -> Result<Vec<Evidence>> {
        if len > horizon || len >= usize::BITS as usize {
            return Err(Error::InvalidParameter(format!(
                "length {len} with horizon {horizon}"
            )));
        }
        (0..1usize << len)
            .map(|code| {
                Evidence::bits(
                    horizon,
                    (0..len).map(|i| code >> (len - 1 - i) & 1 == 1).collect(),
                )
            })
            .collect()
    }

    /// Every bit string of length `0..=horizon`, shortest first.
    pub fn bit_universe(horizon: usize) -> Result<Vec<Evidence>> {
        let mut out = Vec::new();
        for len in 0..=horizon {
            out.extend(Evidence::all_bitstrings(horizon, len)?);
        }
        Ok(out)
    }
}

/// A map from evidence to regions of a fixed ambient space.
pub trait ConfidenceFunction {
    fn ambient(&self) -> Interval;
    /// Declared level α: regions cover the truth with probability ≥ 1 − α.
    fn alpha(&self) -> f64;
    fn region(&self, evidence: &Evidence) -> Result<RegionSet>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Constructor {
    /// `x̄ ± z_{1−α/2}·σ/√n`, open, intersected with `ambient`.
    WaldNormal { sigma: f64, ambient: Interval },
    /// `p̂ ± z_{1−α/2}·√(p̂(1−p̂)/n)` on `[0, 1]`.
    WaldBinomial,
    /// The base rule everywhere except on `trigger`, where it returns `payload`.
    Rigged {
        base: Box<ConfidenceRule>,
        trigger: Evidence,
        payload: RegionSet,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RuleDescriptor", into = "RuleDescriptor")]
pub struct ConfidenceRule {
    alpha: f64,
    constructor: Constructor,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

impl ConfidenceRule {
    pub fn wald_normal(alpha: f64, sigma: f64) -> Result<Self> {
        Self::wald_normal_on(alpha, sigma, Interval::real_line())
    }

    /// Wald normal rule whose regions are intersected with `ambient`, for
    /// parameters known to live in a sub-interval of the line.
    pub fn wald_normal_on(alpha: f64, sigma: f64, ambient: Interval) -> Result<Self> {
        check_alpha(alpha)?;
        SamplingModel::normal(sigma)?;
        Ok(ConfidenceRule {
            alpha,
            constructor: Constructor::WaldNormal { sigma, ambient },
        })
    }

    pub fn wald_binomial(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(ConfidenceRule {
            alpha,
            constructor: Constructor::WaldBinomial,
        })
    }

    /// Wraps `base` so that the exact sequence `trigger` yields `payload`.
    /// The rigged rule keeps the base rule's declared level.
    pub fn rigged(base: ConfidenceRule, trigger: Evidence, payload: RegionSet) -> Result<Self> {
        if payload.ambient() != base.ambient() {
            return Err(crate::region::RegionError::AmbientMismatch {
                left: payload.ambient(),
                right: base.ambient(),
            }
            .into());
        }
        base.check_compatible(&trigger.model())?;
        Ok(ConfidenceRule {
            alpha: base.alpha,
            constructor: Constructor::Rigged {
                base: Box::new(base),
                trigger,
                payload,
            },
        })
    }

    pub fn constructor(&self) -> &Constructor {
        &self.constructor
    }

    /// `z_{1−α/2}` for this rule's level.
    pub fn critical_value(&self) -> f64 {
        normal::two_sided_critical(self.alpha)
    }

    /// The innermost non-rigged rule.
    pub fn base_rule(&self) -> &ConfidenceRule {
        match &self.constructor {
            Constructor::Rigged { base, .. } => base.base_rule(),
            _ => self,
        }
    }

    /// The model that produces evidence of length `n` for this rule.
    pub fn sampling_model(&self, n: usize) -> Result<SamplingModel> {
        match &self.constructor {
            Constructor::WaldNormal { sigma, .. } => SamplingModel::normal(*sigma),
            Constructor::WaldBinomial => SamplingModel::bernoulli(n.max(1)),
            Constructor::Rigged { base, .. } => base.sampling_model(n),
        }
    }

    pub fn check_compatible(&self, model: &SamplingModel) -> Result<()> {
        match (&self.constructor, model) {
            (
                Constructor::WaldNormal { sigma, .. },
                SamplingModel::NormalKnownSigma { sigma: s },
            ) if sigma == s => Ok(()),
            (
                Constructor::WaldNormal { sigma, .. },
                SamplingModel::NormalKnownSigma { sigma: s },
            ) => Err(Error::IncompatibleModel(format!(
                "rule has sigma {sigma} but evidence has sigma {s}"
            ))),
            (Constructor::WaldBinomial, SamplingModel::BernoulliSequence { .. }) => Ok(()),
            (Constructor::Rigged { base, .. }, m) => base.check_compatible(m),
            (c, m) => Err(Error::IncompatibleModel(format!(
                "{} rule cannot read {} evidence",
                constructor_name(c),
                model_name(m)
            ))),
        }
    }
}

fn constructor_name(c: &Constructor) -> &'static str {
    match c {
        Constructor::WaldNormal { .. } => "wald_normal",
        Constructor::WaldBinomial => "wald_binomial",
        Constructor::Rigged { .. } => "rigged",
    }
}

fn model_name(m: &SamplingModel) -> &'static str {
    match m {
        SamplingModel::NormalKnownSigma { .. } => "normal",
        SamplingModel::BernoulliSequence { .. } => "bernoulli",
    }
}

impl ConfidenceFunction for ConfidenceRule {
    fn ambient(&self) -> Interval {
        match &self.constructor {
            Constructor::WaldNormal { ambient, .. } => *ambient,
            Constructor::WaldBinomial => Interval::unit(),
            Constructor::Rigged { base, .. } => base.ambient(),
        }
    }

    fn alpha(&self) -> f64 {
        self.alpha
    }

    fn region(&self, evidence: &Evidence) -> Result<RegionSet> {
        self.check_compatible(&evidence.model())?;
        let ambient = self.ambient();
        if let Constructor::Rigged {
            base,
            trigger,
            payload,
        } = &self.constructor
        {
            return if evidence.same_observations(trigger) {
                Ok(payload.clone())
            } else {
                base.region(evidence)
            };
        }
        let n = evidence.len();
        if n == 0 {
            return Ok(RegionSet::full(ambient));
        }
        let z = self.critical_value();
        let nf = n as f64;
        let interval = match &self.constructor {
            Constructor::WaldNormal { sigma, .. } => {
                let mean = evidence.mean().expect("nonempty");
                let half = z * sigma / nf.sqrt();
                Interval::open(mean - half, mean + half)?
            }
            Constructor::WaldBinomial => {
                let (ones, _) = evidence.bit_counts().expect("bit evidence");
                let p = ones as f64 / nf;
                if ones == 0 {
                    // Zero standard error: keep an open sliver on the interior side.
                    Interval::from_bounds(0.0, true, z / (2.0 * nf), false)?
                } else if ones == n {
                    Interval::from_bounds(1.0 - z / (2.0 * nf), false, 1.0, true)?
                } else {
                    let half = z * (p * (1.0 - p) / nf).sqrt();
                    Interval::open(p - half, p + half)?
                }
            }
            Constructor::Rigged { .. } => unreachable!(),
        };
        Ok(RegionSet::clipped(ambient, vec![interval]))
    }
}

/// True iff no evidence in `universe` yields an empty region.
pub fn is_non_refuting<C: ConfidenceFunction + ?Sized>(
    rule: &C,
    universe: &[Evidence],
) -> Result<bool> {
    for e in universe {
        if rule.region(e)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches `candidates` for evidence whose region is nonempty and fits
/// inside `target`.
pub fn satisfies_precision<C, I>(
    rule: &C,
    target: &RegionSet,
    candidates: I,
) -> Result<Option<Evidence>>
where
    C: ConfidenceFunction + ?Sized,
    I: IntoIterator<Item = Evidence>,
{
    if !target.has_nonempty_interior() {
        return Err(Error::Precondition(
            "precision target must have nonempty interior".into(),
        ));
    }
    if target.ambient() != rule.ambient() {
        return Err(crate::region::RegionError::AmbientMismatch {
            left: target.ambient(),
            right: rule.ambient(),
        }
        .into());
    }
    for e in candidates {
        let r = rule.region(&e)?;
        if !r.is_empty() && target.contains(&r)? {
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// Candidate evidence for a Wald normal rule: `n` copies of a point inside
/// the target's interior for `n = 1, 2, 4, …, 2^20`. The region half-width
/// `z·σ/√n` shrinks to zero, so some candidate fits any open target.
pub fn wald_normal_precision_candidates(
    rule: &ConfidenceRule,
    target: &RegionSet,
) -> Result<impl Iterator<Item = Evidence>> {
    let sigma = match rule.base_rule().constructor() {
        Constructor::WaldNormal { sigma, .. } => *sigma,
        _ => {
            return Err(Error::Unsupported(
                "precision candidates need a wald_normal rule".into(),
            ))
        }
    };
    let interior = target.interior();
    let center = interior
        .intervals()
        .and_then(|v| v.first())
        .map(Interval::representative)
        .ok_or_else(|| {
            Error::Precondition("precision target must have nonempty interior".into())
        })?;
    Ok((0..=20)
        .map(move |k| Evidence::normal(sigma, vec![center; 1usize << k]).expect("finite center")))
}

/// Grid points that no evidence in `universe` places inside its region.
pub fn uncovered_on_grid<C: ConfidenceFunction + ?Sized>(
    rule: &C,
    grid: &[f64],
    universe: &[Evidence],
) -> Result<Vec<f64>> {
    let regions = universe
        .iter()
        .map(|e| rule.region(e))
        .collect::<Result<Vec<_>>>()?;
    let mut missing = Vec::new();
    for &theta in grid {
        let mut hit = false;
        for r in &regions {
            if r.contains_point(theta)? {
                hit = true;
                break;
            }
        }
        if !hit {
            missing.push(theta);
        }
    }
    Ok(missing)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TriggerDescriptor {
    Bits(String),
    Values(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "constructor", rename_all = "snake_case")]
enum RuleDescriptor {
    WaldNormal {
        alpha: f64,
        sigma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ambient: Option<Interval>,
    },
    WaldBinomial {
        alpha: f64,
    },
    Rigged {
        base: Box<ConfidenceRule>,
        trigger: TriggerDescriptor,
        payload: RegionSet,
    },
}

impl TryFrom<RuleDescriptor> for ConfidenceRule {
    type Error = Error;

    fn try_from(d: RuleDescriptor) -> Result<Self> {
        match d {
            RuleDescriptor::WaldNormal {
                alpha,
                sigma,
                ambient,
            } => ConfidenceRule::wald_normal_on(
                alpha,
                sigma,
                ambient.unwrap_or_else(Interval::real_line),
            ),
            RuleDescriptor::WaldBinomial { alpha } => ConfidenceRule::wald_binomial(alpha),
            RuleDescriptor::Rigged {
                base,
                trigger,
                payload,
            } => {
                let trigger = match (base.base_rule().constructor(), trigger) {
                    (Constructor::WaldBinomial, TriggerDescriptor::Bits(s)) => {
                        Evidence::bitstring(s.len().max(1), &s)?
                    }
                    (Constructor::WaldBinomial, TriggerDescriptor::Values(v)) => {
                        let json = serde_json::json!(v);
                        Evidence::from_json(SamplingModel::bernoulli(v.len().max(1))?, &json)?
                    }
                    (Constructor::WaldNormal { sigma, .. }, TriggerDescriptor::Values(v)) => {
                        Evidence::normal(*sigma, v)?
                    }
                    (Constructor::WaldNormal { .. }, TriggerDescriptor::Bits(_)) => {
                        return Err(Error::IncompatibleModel(
                            "normal rule cannot take a bit-string trigger".into(),
                        ))
                    }
                    (Constructor::Rigged { .. }, _) => unreachable!("base_rule is never rigged"),
                };
                ConfidenceRule::rigged(*base, trigger, payload)
            }
        }
    }
}

impl From<ConfidenceRule> for RuleDescriptor {
    fn from(rule: ConfidenceRule) -> Self {
        match rule.constructor {
            Constructor::WaldNormal { sigma, ambient } => RuleDescriptor::WaldNormal {
                alpha: rule.alpha,
                sigma,
                ambient: (ambient != Interval::real_line()).then_some(ambient),
            },
            Constructor::WaldBinomial => RuleDescriptor::WaldBinomial { alpha: rule.alpha },
            Constructor::Rigged {
                base,
                trigger,
                payload,
            } => {
                let trigger = match trigger.observations() {
                    Observations::Bits(_) => {
                        TriggerDescriptor::Bits(trigger.to_bitstring().expect("bits"))
                    }
                    Observations::Reals(v) => TriggerDescriptor::Values(v.clone()),
                };
                RuleDescriptor::Rigged {
                    base,
                    trigger,
                    payload,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::RegionKind;

    fn single(r: &RegionSet) -> Interval {
        match r.kind() {
            RegionKind::Intervals(v) if v.len() == 1 => v[0],
            other => panic!("expected one interval, got {other:?}"),
        }
    }

    #[test]
    fn wald_normal_hundred_zeros() {
        let rule = ConfidenceRule::wald_normal(0.05, 1.0).unwrap();
        let e = Evidence::normal(1.0, vec![0.0; 100]).unwrap();
        let i = single(&rule.region(&e).unwrap());
        // 1.959963984540054 / 10
        assert!((i.hi().value() - 0.195_996_398_454_005_4).abs() < 1e-15);
        assert!((i.lo().value() + 0.195_996_398_454_005_4).abs() < 1e-15);
        assert!(!i.lo().is_closed() && !i.hi().is_closed());
    }

    #[test]
    fn empty_evidence_gives_ambient() {
        let rule = ConfidenceRule::wald_normal(0.05, 1.0).unwrap();
        let e = Evidence::normal(1.0, vec![]).unwrap();
        assert!(rule.region(&e).unwrap().is_full());
        let b = ConfidenceRule::wald_binomial(0.05).unwrap();
        assert_eq!(
            b.region(&Evidence::bits(7, vec![]).unwrap()).unwrap(),
            RegionSet::full(Interval::unit())
        );
    }

    #[test]
    fn rigged_returns_payload_on_trigger_only() {
        let base = ConfidenceRule::wald_binomial(0.04).unwrap();
        let trigger = Evidence::bitstring(7, "1011000").unwrap();
        let payload = RegionSet::interval(Interval::unit(), Interval::point(0.5).unwrap()).unwrap();
        let rigged =
            ConfidenceRule::rigged(base.clone(), trigger.clone(), payload.clone()).unwrap();
        assert_eq!(rigged.region(&trigger).unwrap(), payload);
        for e in Evidence::all_bitstrings(7, 7).unwrap() {
            let differs = rigged.region(&e).unwrap() != base.region(&e).unwrap();
            assert_eq!(differs, e.same_observations(&trigger));
        }
    }

    #[test]
    fn rigged_payload_ambient_must_match() {
        let base = ConfidenceRule::wald_binomial(0.04).unwrap();
        let trigger = Evidence::bitstring(7, "1011000").unwrap();
        let payload = RegionSet::full(Interval::real_line());
        assert!(ConfidenceRule::rigged(base, trigger, payload).is_err());
    }

    #[test]
    fn incompatible_pairings() {
        let rule = ConfidenceRule::wald_normal(0.05, 1.0).unwrap();
        let bits = Evidence::bitstring(3, "101").unwrap();
        assert!(matches!(
            rule.region(&bits),
            Err(Error::IncompatibleModel(_))
        ));
        let other_sigma = Evidence::normal(2.0, vec![0.0]).unwrap();
        assert!(matches!(
            rule.region(&other_sigma),
            Err(Error::IncompatibleModel(_))
        ));
        let b = ConfidenceRule::wald_binomial(0.05).unwrap();
        assert!(matches!(
            b.region(&other_sigma),
            Err(Error::IncompatibleModel(_))
        ));
    }

    #[test]
    fn binomial_degenerate_slivers() {
        let rule = ConfidenceRule::wald_binomial(0.05).unwrap();
        let z = rule.critical_value();
        let zeros = single(
            &rule
                .region(&Evidence::bitstring(7, "0000000").unwrap())
                .unwrap(),
        );
        assert_eq!(zeros.lo().value(), 0.0);
        assert!(zeros.lo().is_closed());
        assert_eq!(zeros.hi().value(), z / 14.0);
        let ones = single(
            &rule
                .region(&Evidence::bitstring(7, "1111111").unwrap())
                .unwrap(),
        );
        assert_eq!(ones.lo().value(), 1.0 - z / 14.0);
        assert!(ones.hi().is_closed());
    }

    #[test]
    fn non_refuting_cases() {
        let normal = ConfidenceRule::wald_normal(0.05, 1.0).unwrap();
        let universe: Vec<_> = (0..20)
            .map(|k| Evidence::normal(1.0, vec![k as f64 * 0.37 - 3.0; k + 1]).unwrap())
            .collect();
        assert!(is_non_refuting(&normal, &universe).unwrap());

        let binom = ConfidenceRule::wald_binomial(0.05).unwrap();
        let all = Evidence::all_bitstrings(7, 7).unwrap();
        assert_eq!(all.len(), 128);
        assert!(is_non_refuting(&binom, &all).unwrap());

        let trigger = Evidence::bitstring(7, "1011000").unwrap();
        let rigged =
            ConfidenceRule::rigged(binom, trigger, RegionSet::empty(Interval::unit())).unwrap();
        assert!(!is_non_refuting(&rigged, &all).unwrap());
    }

    #[test]
    fn precision_search() {
        let rule = ConfidenceRule::wald_normal(0.05, 1.0).unwrap();
        let target =
            RegionSet::interval(Interval::real_line(), Interval::open(0.4, 0.6).unwrap()).unwrap();
        let thousand = Evidence::normal(1.0, vec![0.5; 1000]).unwrap();
        let found = satisfies_precision(&rule, &target, [thousand.clone()]).unwrap();
        assert_eq!(found, Some(thousand));

        let found = satisfies_precision(
            &rule,
            &target,
            wald_normal_precision_candidates(&rule, &target).unwrap(),
        )
        .unwrap()
        .expect("witness");
        assert!(target.contains(&rule.region(&found).unwrap()).unwrap());

        let point =
            RegionSet::interval(Interval::real_line(), Interval::point(0.0).unwrap()).unwrap();
        assert!(matches!(
            satisfies_precision(&rule, &point, []),
            Err(Error::Precondition(_))
        ));

        let whole = RegionSet::full(Interval::real_line());
        let one = Evidence::normal(1.0, vec![7.0]).unwrap();
        assert_eq!(
            satisfies_precision(&rule, &whole, [one.clone()]).unwrap(),
            Some(one)
        );
    }

    #[test]
    fn width_shrinks_with_n() {
        let rule = ConfidenceRule::wald_normal(0.05, 1.0).unwrap();
        let mut last = f64::INFINITY;
        for n in 1..200 {
            let i = single(
                &rule
                    .region(&Evidence::normal(1.0, vec![0.25; n]).unwrap())
                    .unwrap(),
            );
            let width = i.hi().value() - i.lo().value();
            assert!(width < last);
            last = width;
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let json = r#"{"alpha": 0.05, "constructor": "wald_normal", "sigma": 1.0}"#;
        let rule: ConfidenceRule = serde_json::from_str(json).unwrap();
        assert_eq!(rule, ConfidenceRule::wald_normal(0.05, 1.0).unwrap());

        let base = ConfidenceRule::wald_binomial(0.04).unwrap();
        let payload = RegionSet::interval(Interval::unit(), Interval::point(0.5).unwrap()).unwrap();
        let rigged =
            ConfidenceRule::rigged(base, Evidence::bitstring(7, "1011000").unwrap(), payload)
                .unwrap();
        let s = serde_json::to_string(&rigged).unwrap();
        assert!(s.contains("\"1011000\""));
        let back: ConfidenceRule = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rigged);

        let bad = r#"{"alpha": 1.5, "constructor": "wald_binomial"}"#;
        assert!(serde_json::from_str::<ConfidenceRule>(bad).is_err());
    }

    #[test]
    fn bit_universe_counts() {
        assert_eq!(Evidence::bit_universe(6).unwrap().len(), 127);
        let e = Evidence::bitstring(7, "10").unwrap();
        assert!(e.is_prefix_of(&Evidence::bitstring(7, "1011000").unwrap()));
        assert!(!e.is_prefix_of(&Evidence::bitstring(7, "0").unwrap()));
    }

    #[test]
    fn exhaustiveness_on_grid() {
        let rule = ConfidenceRule::wald_binomial(0.05).unwrap();
        let universe = Evidence::bit_universe(7).unwrap();
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        assert!(uncovered_on_grid(&rule, &grid, &universe)
            .unwrap()
            .is_empty());
    }
}
