//! Exact set algebra over a one-dimensional parameter space.
//!
//! A [`RegionSet`] is either a canonical finite union of intervals or the
//! symbolic dense-codense region. Every region carries its ambient space, and
//! complements are always taken relative to it. Endpoints are compared with
//! exact float equality: the topology layer obeys set laws exactly and leaves
//! tolerances to the statistical layer.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("endpoint value is NaN")]
    NanEndpoint,
    #[error("empty interval with endpoints {lo} and {hi}")]
    EmptyInterval { lo: String, hi: String },
    #[error("interval {interval} is not contained in ambient {ambient}")]
    OutsideAmbient {
        interval: Interval,
        ambient: Interval,
    },
    #[error("ambient mismatch: {left} vs {right}")]
    AmbientMismatch { left: Interval, right: Interval },
    #[error("{0} is not representable for a dense-codense region")]
    DenseCodense(&'static str),
    #[error("a dense-codense region needs an ambient with nonempty interior, got {0}")]
    DegenerateAmbient(Interval),
    #[error("unrecognised endpoint symbol {0:?}")]
    BadSymbol(String),
}

/// One end of an interval. Infinite endpoints are always open.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEndpoint", into = "RawEndpoint")]
pub struct Endpoint {
    value: f64,
    closed: bool,
}

impl Endpoint {
    pub fn new(value: f64, closed: bool) -> Result<Self, RegionError> {
        if value.is_nan() {
            return Err(RegionError::NanEndpoint);
        }
        Ok(Endpoint {
            value,
            closed: closed && value.is_finite(),
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    fn flipped(self) -> Self {
        Endpoint {
            value: self.value,
            closed: !self.closed && self.value.is_finite(),
        }
    }
}

/// Orders lower endpoints by where the interval starts: a closed endpoint
/// starts before an open one at the same value.
fn cmp_lower(a: &Endpoint, b: &Endpoint) -> Ordering {
    a.value
        .partial_cmp(&b.value)
        .expect("endpoints are never NaN")
        .then_with(|| b.closed.cmp(&a.closed))
}

/// Orders upper endpoints by where the interval stops: an open endpoint
/// stops before a closed one at the same value.
fn cmp_upper(a: &Endpoint, b: &Endpoint) -> Ordering {
    a.value
        .partial_cmp(&b.value)
        .expect("endpoints are never NaN")
        .then_with(|| a.closed.cmp(&b.closed))
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawValue {
    Number(f64),
    Symbol(String),
}

#[derive(Serialize, Deserialize)]
struct RawEndpoint {
    value: RawValue,
    closed: bool,
}

impl TryFrom<RawEndpoint> for Endpoint {
    type Error = RegionError;

    fn try_from(raw: RawEndpoint) -> Result<Self, Self::Error> {
        let value = match raw.value {
            RawValue::Number(v) => v,
            RawValue::Symbol(s) => match s.trim() {
                "-inf" | "\u{2212}inf" | "-infinity" => f64::NEG_INFINITY,
                "+inf" | "inf" | "infinity" | "+infinity" => f64::INFINITY,
                _ => return Err(RegionError::BadSymbol(s)),
            },
        };
        Endpoint::new(value, raw.closed)
    }
}

impl From<Endpoint> for RawEndpoint {
    fn from(e: Endpoint) -> Self {
        let value = if e.value == f64::INFINITY {
            RawValue::Symbol("+inf".into())
        } else if e.value == f64::NEG_INFINITY {
            RawValue::Symbol("-inf".into())
        } else {
            RawValue::Number(e.value)
        };
        RawEndpoint {
            value,
            closed: e.closed,
        }
    }
}

/// A nonempty connected subset of the extended real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct Interval {
    lo: Endpoint,
    hi: Endpoint,
}

#[derive(Serialize, Deserialize)]
struct RawInterval {
    lo: Endpoint,
    hi: Endpoint,
}

impl TryFrom<RawInterval> for Interval {
    type Error = RegionError;
    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        Interval::new(raw.lo, raw.hi)
    }
}

impl From<Interval> for RawInterval {
    fn from(i: Interval) -> Self {
        RawInterval { lo: i.lo, hi: i.hi }
    }
}

impl Interval {
    /// Rejects empty intervals: `lo < hi`, or `lo == hi` with both ends closed.
    pub fn new(lo: Endpoint, hi: Endpoint) -> Result<Self, RegionError> {
        let ok = lo.value < hi.value || (lo.value == hi.value && lo.closed && hi.closed);
        if ok {
            Ok(Interval { lo, hi })
        } else {
            Err(RegionError::EmptyInterval {
                lo: format_lower(&lo),
                hi: format_upper(&hi),
            })
        }
    }

    pub fn from_bounds(
        lo: f64,
        lo_closed: bool,
        hi: f64,
        hi_closed: bool,
    ) -> Result<Self, RegionError> {
        Interval::new(Endpoint::new(lo, lo_closed)?, Endpoint::new(hi, hi_closed)?)
    }

    pub fn open(lo: f64, hi: f64) -> Result<Self, RegionError> {
        Self::from_bounds(lo, false, hi, false)
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self, RegionError> {
        Self::from_bounds(lo, true, hi, true)
    }

    pub fn point(x: f64) -> Result<Self, RegionError> {
        Self::closed(x, x)
    }

    /// `(-inf, +inf)`.
    pub fn real_line() -> Self {
        Interval {
            lo: Endpoint {
                value: f64::NEG_INFINITY,
                closed: false,
            },
            hi: Endpoint {
                value: f64::INFINITY,
                closed: false,
            },
        }
    }

    /// `[0, 1]`.
    pub fn unit() -> Self {
        Interval {
            lo: Endpoint {
                value: 0.0,
                closed: true,
            },
            hi: Endpoint {
                value: 1.0,
                closed: true,
            },
        }
    }

    pub fn lo(&self) -> Endpoint {
        self.lo
    }

    pub fn hi(&self) -> Endpoint {
        self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo.value == self.hi.value
    }

    pub fn contains_point(&self, x: f64) -> bool {
        let above = x > self.lo.value || (x == self.lo.value && self.lo.closed);
        let below = x < self.hi.value || (x == self.hi.value && self.hi.closed);
        above && below
    }

    /// `other ⊆ self`.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        cmp_lower(&self.lo, &other.lo) != Ordering::Greater
            && cmp_upper(&other.hi, &self.hi) != Ordering::Greater
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if cmp_lower(&self.lo, &other.lo) == Ordering::Less {
            other.lo
        } else {
            self.lo
        };
        let hi = if cmp_upper(&self.hi, &other.hi) == Ordering::Greater {
            other.hi
        } else {
            self.hi
        };
        Interval::new(lo, hi).ok()
    }

    /// True when `self ∪ other` is a single interval. Assumes `self` starts no
    /// later than `other`.
    fn touches(&self, other: &Interval) -> bool {
        self.hi.value > other.lo.value
            || (self.hi.value == other.lo.value && (self.hi.closed || other.lo.closed))
    }

    /// Midpoint of the interval, or a finite point inside it when unbounded.
    pub fn representative(&self) -> f64 {
        match (self.lo.value.is_finite(), self.hi.value.is_finite()) {
            (true, true) => self.lo.value + (self.hi.value - self.lo.value) / 2.0,
            (true, false) => self.lo.value + 1.0,
            (false, true) => self.hi.value - 1.0,
            (false, false) => 0.0,
        }
    }
}

fn format_lower(e: &Endpoint) -> String {
    format!("{}{}", if e.closed { '[' } else { '(' }, fmt_value(e.value))
}

fn format_upper(e: &Endpoint) -> String {
    format!("{}{}", fmt_value(e.value), if e.closed { ']' } else { ')' })
}

fn fmt_value(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:?}")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{{{}}}", fmt_value(self.lo.value))
        } else {
            write!(f, "{}, {}", format_lower(&self.lo), format_upper(&self.hi))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegionKind {
    /// Sorted, pairwise disjoint, non-adjacent intervals.
    Intervals(Vec<Interval>),
    /// A set meeting every nonempty open subset of the ambient, as does its
    /// complement. `complemented` distinguishes the set from its complement
    /// so that `D ∩ Dᶜ = ∅` stays decidable.
    DenseCodense { complemented: bool },
}

/// A subset of an ambient interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRegion", into = "RawRegion")]
pub struct RegionSet {
    ambient: Interval,
    kind: RegionKind,
}

impl RegionSet {
    pub fn empty(ambient: Interval) -> Self {
        RegionSet {
            ambient,
            kind: RegionKind::Intervals(Vec::new()),
        }
    }

    pub fn full(ambient: Interval) -> Self {
        RegionSet {
            ambient,
            kind: RegionKind::Intervals(vec![ambient]),
        }
    }

    /// Builds a canonical union. Every interval must already lie inside
    /// `ambient`.
    pub fn new(ambient: Interval, intervals: Vec<Interval>) -> Result<Self, RegionError> {
        if let Some(bad) = intervals.iter().find(|i| !ambient.contains_interval(i)) {
            return Err(RegionError::OutsideAmbient {
                interval: *bad,
                ambient,
            });
        }
        Ok(RegionSet {
            ambient,
            kind: RegionKind::Intervals(canonicalize(intervals)),
        })
    }

    /// Like [`RegionSet::new`] but intersects each interval with the ambient
    /// instead of rejecting overhang.
    pub fn clipped(ambient: Interval, intervals: Vec<Interval>) -> Self {
        let kept = intervals
            .iter()
            .filter_map(|i| i.intersect(&ambient))
            .collect();
        RegionSet {
            ambient,
            kind: RegionKind::Intervals(canonicalize(kept)),
        }
    }

    pub fn interval(ambient: Interval, interval: Interval) -> Result<Self, RegionError> {
        Self::new(ambient, vec![interval])
    }

    pub fn dense_codense(ambient: Interval) -> Result<Self, RegionError> {
        if ambient.is_point() {
            return Err(RegionError::DegenerateAmbient(ambient));
        }
        Ok(RegionSet {
            ambient,
            kind: RegionKind::DenseCodense {
                complemented: false,
            },
        })
    }

    pub fn ambient(&self) -> Interval {
        self.ambient
    }

    pub fn kind(&self) -> &RegionKind {
        &self.kind
    }

    /// Member intervals, or `None` for the dense-codense region.
    pub fn intervals(&self) -> Option<&[Interval]> {
        match &self.kind {
            RegionKind::Intervals(v) => Some(v),
            RegionKind::DenseCodense { .. } => None,
        }
    }

    pub fn is_dense_codense(&self) -> bool {
        matches!(self.kind, RegionKind::DenseCodense { .. })
    }

    pub fn is_empty(&self) -> bool {
        matches!(&self.kind, RegionKind::Intervals(v) if v.is_empty())
    }

    pub fn is_full(&self) -> bool {
        matches!(&self.kind, RegionKind::Intervals(v) if v.len() == 1 && v[0] == self.ambient)
    }

    fn same_ambient(&self, other: &RegionSet) -> Result<(), RegionError> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(RegionError::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            })
        }
    }

    /// `ambient ∖ self`.
    pub fn complement(&self) -> RegionSet {
        let kind = match &self.kind {
            RegionKind::DenseCodense { complemented } => RegionKind::DenseCodense {
                complemented: !complemented,
            },
            RegionKind::Intervals(parts) => {
                let mut gaps = Vec::with_capacity(parts.len() + 1);
                let mut cursor = self.ambient.lo;
                for part in parts {
                    if let Ok(gap) = Interval::new(cursor, part.lo.flipped()) {
                        gaps.push(gap);
                    }
                    cursor = part.hi.flipped();
                }
                if let Ok(gap) = Interval::new(cursor, self.ambient.hi) {
                    gaps.push(gap);
                }
                RegionKind::Intervals(gaps)
            }
        };
        RegionSet {
            ambient: self.ambient,
            kind,
        }
    }

    /// `self ∩ other ≠ ∅`. A dense-codense region meets every nonempty
    /// interval union.
    pub fn intersects(&self, other: &RegionSet) -> Result<bool, RegionError> {
        self.same_ambient(other)?;
        Ok(match (&self.kind, &other.kind) {
            (RegionKind::Intervals(a), RegionKind::Intervals(b)) => {
                a.iter().any(|x| b.iter().any(|y| x.intersect(y).is_some()))
            }
            (RegionKind::DenseCodense { .. }, RegionKind::Intervals(v))
            | (RegionKind::Intervals(v), RegionKind::DenseCodense { .. }) => !v.is_empty(),
            (
                RegionKind::DenseCodense { complemented: p },
                RegionKind::DenseCodense { complemented: q },
            ) => p == q,
        })
    }

    /// `other ⊆ self`.
    ///
    /// A dense-codense region contains only the empty set and itself; an
    /// interval union contains a dense-codense region only when it is the
    /// whole ambient.
    pub fn contains(&self, other: &RegionSet) -> Result<bool, RegionError> {
        self.same_ambient(other)?;
        if other.is_empty() {
            return Ok(true);
        }
        Ok(match (&self.kind, &other.kind) {
            (RegionKind::Intervals(outer), RegionKind::Intervals(inner)) => inner
                .iter()
                .all(|i| outer.iter().any(|o| o.contains_interval(i))),
            (RegionKind::DenseCodense { .. }, RegionKind::Intervals(_)) => false,
            (RegionKind::Intervals(_), RegionKind::DenseCodense { .. }) => self.is_full(),
            (
                RegionKind::DenseCodense { complemented: p },
                RegionKind::DenseCodense { complemented: q },
            ) => p == q,
        })
    }

    /// Membership of a single parameter value. Undecidable for the symbolic
    /// dense-codense region.
    pub fn contains_point(&self, x: f64) -> Result<bool, RegionError> {
        match &self.kind {
            RegionKind::Intervals(v) => Ok(v.iter().any(|i| i.contains_point(x))),
            RegionKind::DenseCodense { .. } => Err(RegionError::DenseCodense("point membership")),
        }
    }

    pub fn intersection(&self, other: &RegionSet) -> Result<RegionSet, RegionError> {
        self.same_ambient(other)?;
        match (&self.kind, &other.kind) {
            (RegionKind::Intervals(a), RegionKind::Intervals(b)) => {
                let parts = a
                    .iter()
                    .flat_map(|x| b.iter().filter_map(move |y| x.intersect(y)))
                    .collect();
                Ok(RegionSet {
                    ambient: self.ambient,
                    kind: RegionKind::Intervals(canonicalize(parts)),
                })
            }
            _ if self.is_empty() || other.is_full() => Ok(self.clone()),
            _ if other.is_empty() || self.is_full() => Ok(other.clone()),
            _ => Err(RegionError::DenseCodense("intersection")),
        }
    }

    pub fn union(&self, other: &RegionSet) -> Result<RegionSet, RegionError> {
        self.same_ambient(other)?;
        match (&self.kind, &other.kind) {
            (RegionKind::Intervals(a), RegionKind::Intervals(b)) => {
                let parts = a.iter().chain(b.iter()).copied().collect();
                Ok(RegionSet {
                    ambient: self.ambient,
                    kind: RegionKind::Intervals(canonicalize(parts)),
                })
            }
            _ if self.is_empty() || other.is_full() => Ok(other.clone()),
            _ if other.is_empty() || self.is_full() => Ok(self.clone()),
            _ => Err(RegionError::DenseCodense("union")),
        }
    }

    /// Topological interior relative to the ambient. Endpoints shared with a
    /// closed ambient boundary stay closed (subspace topology); all other
    /// closed endpoints open up and isolated points vanish.
    pub fn interior(&self) -> RegionSet {
        let parts = match &self.kind {
            RegionKind::DenseCodense { .. } => Vec::new(),
            RegionKind::Intervals(v) => v
                .iter()
                .filter_map(|i| {
                    let lo = Endpoint {
                        value: i.lo.value,
                        closed: i.lo.closed && i.lo.value == self.ambient.lo.value,
                    };
                    let hi = Endpoint {
                        value: i.hi.value,
                        closed: i.hi.closed && i.hi.value == self.ambient.hi.value,
                    };
                    Interval::new(lo, hi).ok()
                })
                .collect(),
        };
        RegionSet {
            ambient: self.ambient,
            kind: RegionKind::Intervals(parts),
        }
    }

    pub fn has_nonempty_interior(&self) -> bool {
        !self.interior().is_empty()
    }

    /// Whether some evidence can ever confirm this hypothesis under an
    /// open-valued, precise confidence function: exactly when its interior is
    /// nonempty. The equivalence is guaranteed for connected ambients, which
    /// is the only kind an [`Interval`] ambient can be.
    pub fn is_confirmable(&self) -> bool {
        self.has_nonempty_interior()
    }

    /// Re-expresses the region inside a new ambient by intersection.
    pub fn restrict_to(&self, ambient: Interval) -> Result<RegionSet, RegionError> {
        match &self.kind {
            RegionKind::Intervals(v) => Ok(RegionSet::clipped(ambient, v.clone())),
            RegionKind::DenseCodense { .. } => Err(RegionError::DenseCodense("restriction")),
        }
    }
}

fn canonicalize(mut parts: Vec<Interval>) -> Vec<Interval> {
    parts.sort_by(|a, b| cmp_lower(&a.lo, &b.lo));
    let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
    for next in parts {
        match out.last_mut() {
            Some(last) if last.touches(&next) => {
                if cmp_upper(&next.hi, &last.hi) == Ordering::Greater {
                    last.hi = next.hi;
                }
            }
            _ => out.push(next),
        }
    }
    out
}

impl fmt::Display for RegionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RegionKind::DenseCodense {
                complemented: false,
            } => write!(f, "dense-codense"),
            RegionKind::DenseCodense { complemented: true } => write!(f, "dense-codense^c"),
            RegionKind::Intervals(v) if v.is_empty() => write!(f, "{{}}"),
            RegionKind::Intervals(v) => {
                for (k, i) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, " u ")?;
                    }
                    write!(f, "{i}")?;
                }
                Ok(())
            }
        }?;
        write!(f, " in {}", self.ambient)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawKind {
    Intervals,
    DenseCodense,
}

#[derive(Serialize, Deserialize)]
struct RawRegion {
    ambient: Interval,
    kind: RawKind,
    #[serde(default)]
    intervals: Vec<Interval>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    complemented: bool,
}

impl TryFrom<RawRegion> for RegionSet {
    type Error = RegionError;
    fn try_from(raw: RawRegion) -> Result<Self, Self::Error> {
        match raw.kind {
            RawKind::Intervals => RegionSet::new(raw.ambient, raw.intervals),
            RawKind::DenseCodense => {
                let dc = RegionSet::dense_codense(raw.ambient)?;
                Ok(if raw.complemented {
                    dc.complement()
                } else {
                    dc
                })
            }
        }
    }
}

impl From<RegionSet> for RawRegion {
    fn from(r: RegionSet) -> Self {
        match r.kind {
            RegionKind::Intervals(intervals) => RawRegion {
                ambient: r.ambient,
                kind: RawKind::Intervals,
                intervals,
                complemented: false,
            },
            RegionKind::DenseCodense { complemented } => RawRegion {
                ambient: r.ambient,
                kind: RawKind::DenseCodense,
                intervals: Vec::new(),
                complemented,
            },
        }
    }
}
