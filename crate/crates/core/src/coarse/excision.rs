//! Brute-force coarse excision on boxed lattices.
//!
//! Sets are products of integer intervals, which covers blocky sets and their
//! translates. Distance to such a set is computed coordinatewise in closed form
//! and aggregated by the metric.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use super::blocky::{BlockySpace, Factor};
use super::CoarseError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MetricRepr", into = "MetricRepr")]
pub enum Metric {
    D1,
    DInf,
    /// `d(x, y) = Σ w_i |x_i − y_i|` with positive rational weights.
    Weighted(Vec<Rational64>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricRepr {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<WeightRepr>>,
}

/// A weight written as an integer or as `"p/q"`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WeightRepr {
    Int(i64),
    Text(String),
}

impl TryFrom<MetricRepr> for Metric {
    type Error = CoarseError;

    fn try_from(r: MetricRepr) -> Result<Self, CoarseError> {
        match (r.kind.as_str(), r.weights) {
            ("d1", None) => Ok(Metric::D1),
            ("dinf", None) => Ok(Metric::DInf),
            ("weighted", Some(ws)) => {
                let weights = ws
                    .into_iter()
                    .map(|w| match w {
                        WeightRepr::Int(i) => Ok(Rational64::from_integer(i)),
                        WeightRepr::Text(t) => parse_weight(&t),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Metric::weighted(weights)
            }
            ("weighted", None) => Err(CoarseError::BadWeights(
                "weighted metric needs weights".into(),
            )),
            (kind @ ("d1" | "dinf"), Some(_)) => {
                Err(CoarseError::BadWeights(format!("{kind} takes no weights")))
            }
            (other, _) => Err(CoarseError::Invalid(format!(
                "unknown metric kind {other:?}"
            ))),
        }
    }
}

impl From<Metric> for MetricRepr {
    fn from(m: Metric) -> Self {
        match m {
            Metric::D1 => MetricRepr {
                kind: "d1".into(),
                weights: None,
            },
            Metric::DInf => MetricRepr {
                kind: "dinf".into(),
                weights: None,
            },
            Metric::Weighted(ws) => MetricRepr {
                kind: "weighted".into(),
                weights: Some(
                    ws.into_iter()
                        .map(|w| {
                            if w.is_integer() {
                                WeightRepr::Int(w.to_integer())
                            } else {
                                WeightRepr::Text(w.to_string())
                            }
                        })
                        .collect(),
                ),
            },
        }
    }
}

/// Parses `"3"` or `"3/4"`.
pub fn parse_weight(text: &str) -> Result<Rational64, CoarseError> {
    text.trim()
        .parse::<Rational64>()
        .map_err(|_| CoarseError::BadWeights(format!("cannot parse weight {text:?}")))
}

impl Metric {
    pub fn weighted(weights: Vec<Rational64>) -> Result<Self, CoarseError> {
        if let Some(w) = weights.iter().find(|w| **w <= Rational64::from_integer(0)) {
            return Err(CoarseError::BadWeights(format!(
                "weight {w} is not positive"
            )));
        }
        Ok(Metric::Weighted(weights))
    }

    fn check_dim(&self, n: usize) -> Result<(), CoarseError> {
        match self {
            Metric::Weighted(ws) if ws.len() != n => {
                Err(CoarseError::DimensionMismatch(n, ws.len()))
            }
            _ => Ok(()),
        }
    }

    /// Aggregates coordinatewise gaps.
    pub fn combine(&self, gaps: &[u64]) -> Rational64 {
        match self {
            Metric::D1 => Rational64::from_integer(gaps.iter().map(|&g| g as i64).sum()),
            Metric::DInf => {
                Rational64::from_integer(gaps.iter().copied().max().unwrap_or(0) as i64)
            }
            Metric::Weighted(ws) => ws
                .iter()
                .zip(gaps)
                .map(|(w, &g)| w * Rational64::from_integer(g as i64))
                .sum(),
        }
    }

    /// Distance between two points.
    pub fn between(&self, x: &[i64], y: &[i64]) -> Rational64 {
        let gaps: Vec<u64> = x.iter().zip(y).map(|(a, b)| a.abs_diff(*b)).collect();
        self.combine(&gaps)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::D1 => f.write_str("d1"),
            Metric::DInf => f.write_str("dinf"),
            Metric::Weighted(ws) => {
                let parts: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                write!(f, "weighted[{}]", parts.join(", "))
            }
        }
    }
}

/// `{x ∈ ℤ : lo ≤ x ≤ hi}` with either end optional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Interval {
    pub const FULL: Interval = Interval { lo: None, hi: None };

    pub fn at_most(hi: i64) -> Self {
        Interval {
            lo: None,
            hi: Some(hi),
        }
    }

    pub fn at_least(lo: i64) -> Self {
        Interval {
            lo: Some(lo),
            hi: None,
        }
    }

    pub fn is_empty(self) -> bool {
        matches!((self.lo, self.hi), (Some(a), Some(b)) if a > b)
    }

    pub fn meet(self, other: Interval) -> Interval {
        let lo = match (self.lo, other.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Interval { lo, hi }
    }

    /// Distance from `x` to the nearest member; the interval must be nonempty.
    pub fn gap(self, x: i64) -> u64 {
        match (self.lo, self.hi) {
            (Some(lo), _) if x < lo => lo.abs_diff(x),
            (_, Some(hi)) if x > hi => x.abs_diff(hi),
            _ => 0,
        }
    }
}

impl From<Factor> for Interval {
    fn from(f: Factor) -> Self {
        match f {
            Factor::Zero => Interval {
                lo: Some(0),
                hi: Some(0),
            },
            Factor::NonNeg => Interval::at_least(0),
            Factor::NonPos => Interval::at_most(0),
            Factor::Full => Interval::FULL,
        }
    }
}

/// A product of intervals in ℤⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductSet {
    pub intervals: Vec<Interval>,
}

impl From<&BlockySpace> for ProductSet {
    fn from(b: &BlockySpace) -> Self {
        ProductSet {
            intervals: b.factors.iter().map(|&f| f.into()).collect(),
        }
    }
}

impl ProductSet {
    pub fn new(intervals: Vec<Interval>) -> Self {
        ProductSet { intervals }
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.iter().any(|i| i.is_empty())
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.intervals.iter().zip(x).all(|(i, &v)| i.gap(v) == 0) && !self.is_empty()
    }

    /// `None` for the empty set, which is infinitely far from everything.
    pub fn distance(&self, x: &[i64], metric: &Metric) -> Option<Rational64> {
        if self.is_empty() {
            return None;
        }
        let gaps: Vec<u64> = self
            .intervals
            .iter()
            .zip(x)
            .map(|(i, &v)| i.gap(v))
            .collect();
        Some(metric.combine(&gaps))
    }

    pub fn within(&self, x: &[i64], radius: Rational64, metric: &Metric) -> bool {
        self.distance(x, metric).is_some_and(|d| d <= radius)
    }

    /// [`ProductSet::within`] for an integer radius, without rationals for d₁ and d∞.
    fn within_int(&self, x: &[i64], radius: u64, metric: &Metric) -> bool {
        if self.is_empty() {
            return false;
        }
        let mut gaps = self.intervals.iter().zip(x).map(|(i, &v)| i.gap(v));
        match metric {
            Metric::D1 => gaps
                .try_fold(0u64, |acc, g| acc.checked_add(g).filter(|&t| t <= radius))
                .is_some(),
            Metric::DInf => gaps.all(|g| g <= radius),
            Metric::Weighted(_) => self.within(x, Rational64::from_integer(radius as i64), metric),
        }
    }
}

/// Intersection of equal-dimension product sets (possibly empty).
pub fn intersect_sets(sets: &[&ProductSet]) -> Result<ProductSet, CoarseError> {
    let Some(first) = sets.first() else {
        return Err(CoarseError::Invalid("empty intersection".into()));
    };
    let mut intervals = first.intervals.clone();
    for s in &sets[1..] {
        if s.dim() != intervals.len() {
            return Err(CoarseError::DimensionMismatch(intervals.len(), s.dim()));
        }
        for (a, b) in intervals.iter_mut().zip(&s.intervals) {
            *a = a.meet(*b);
        }
    }
    Ok(ProductSet { intervals })
}

/// Parameters of one excision check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcisionParams {
    pub radius: u64,
    pub s: u64,
    /// Half-width `B` of the lattice box; points are taken from `[−(B−S), B−S]ⁿ`.
    pub box_half: u64,
    pub metric: Metric,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcisionReport {
    #[serde(rename = "J")]
    pub set: Vec<usize>,
    pub holds: bool,
    /// First violating point in lexicographic order.
    pub witness: Option<Vec<i64>>,
    pub points_checked: u64,
}

/// Calls `visit` on every point of `[−h, h]ⁿ` in lexicographic order until it returns false.
pub fn for_each_point(n: usize, h: i64, mut visit: impl FnMut(&[i64]) -> bool) {
    let mut x = vec![-h; n];
    loop {
        if !visit(&x) {
            return;
        }
        let Some(i) = (0..n).rev().find(|&i| x[i] < h) else {
            return;
        };
        x[i] += 1;
        for v in &mut x[i + 1..] {
            *v = -h;
        }
    }
}

/// Checks `⋂_{j∈J} N(X_j, R) ⊆ N(⋂_{j∈J} X_j, S)` on the inner box, for each `J`.
pub fn check_excision_many(
    cover: &[ProductSet],
    subsets: &[Vec<usize>],
    params: &ExcisionParams,
) -> Result<Vec<ExcisionReport>, CoarseError> {
    let Some(first) = cover.first() else {
        return Err(CoarseError::Invalid("empty cover".into()));
    };
    let n = first.dim();
    if let Some(bad) = cover.iter().find(|c| c.dim() != n) {
        return Err(CoarseError::DimensionMismatch(n, bad.dim()));
    }
    params.metric.check_dim(n)?;
    let margin = params.s.checked_add(params.radius).unwrap_or(u64::MAX);
    if params.box_half <= margin {
        return Err(CoarseError::BoxTooSmall {
            box_half: params.box_half,
            radius: params.radius,
            s: params.s,
        });
    }
    let mut targets = Vec::with_capacity(subsets.len());
    for set in subsets {
        if set.is_empty() || set.iter().any(|&j| j >= cover.len()) {
            return Err(CoarseError::Invalid(format!(
                "subfamily {set:?} is not a nonempty subset of the cover"
            )));
        }
        let members: Vec<&ProductSet> = set.iter().map(|&j| &cover[j]).collect();
        targets.push(intersect_sets(&members)?);
    }

    let h = (params.box_half - params.s) as i64;
    let mut reports: Vec<ExcisionReport> = subsets
        .iter()
        .map(|set| ExcisionReport {
            set: set.clone(),
            holds: true,
            witness: None,
            points_checked: 0,
        })
        .collect();
    let mut open = reports.len();
    for_each_point(n, h, |x| {
        let near: Vec<bool> = cover
            .iter()
            .map(|c| c.within_int(x, params.radius, &params.metric))
            .collect();
        for ((report, set), target) in reports.iter_mut().zip(subsets).zip(&targets) {
            if !report.holds {
                continue;
            }
            report.points_checked += 1;
            if set.iter().all(|&j| near[j]) && !target.within_int(x, params.s, &params.metric) {
                report.holds = false;
                report.witness = Some(x.to_vec());
                open -= 1;
            }
        }
        open > 0
    });
    Ok(reports)
}

pub fn check_excision(
    cover: &[ProductSet],
    subset: &[usize],
    params: &ExcisionParams,
) -> Result<ExcisionReport, CoarseError> {
    let mut out = check_excision_many(cover, &[subset.to_vec()], params)?;
    Ok(out.remove(0))
}

/// `{x ≤ −gap}` and `{x ≥ gap}` in ℤ: disjoint sets that are never excisive.
pub fn disjoint_rays(gap: i64) -> Vec<ProductSet> {
    vec![
        ProductSet::new(vec![Interval::at_most(-gap)]),
        ProductSet::new(vec![Interval::at_least(gap)]),
    ]
}

/// Checks `N₁(X,R) ⊆ N∞(X,R) ⊆ N₁(X,nR)` on `[−B, B]ⁿ`; returns the first
/// point breaking either inclusion.
pub fn check_metric_sandwich(set: &ProductSet, radius: u64, box_half: u64) -> Option<Vec<i64>> {
    let n = set.dim();
    let nr = radius * n as u64;
    let mut witness = None;
    for_each_point(n, box_half as i64, |x| {
        let in1 = set.within_int(x, radius, &Metric::D1);
        let in_inf = set.within_int(x, radius, &Metric::DInf);
        let in1_wide = set.within_int(x, nr, &Metric::D1);
        if (in1 && !in_inf) || (in_inf && !in1_wide) {
            witness = Some(x.to_vec());
            return false;
        }
        true
    });
    witness
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::subsets_of_size;
    use crate::coarse::block_decomposition;

    fn blocks(n: usize) -> Vec<ProductSet> {
        block_decomposition(n)
            .unwrap()
            .iter()
            .map(ProductSet::from)
            .collect()
    }

    fn all_subsets(k: usize) -> Vec<Vec<usize>> {
        (1..=k).flat_map(|s| subsets_of_size(k, s)).collect()
    }

    fn params(radius: u64, s: u64, box_half: u64, metric: Metric) -> ExcisionParams {
        ExcisionParams {
            radius,
            s,
            box_half,
            metric,
        }
    }

    #[test]
    fn plane_blocks_sup_metric_equality() {
        let cover = blocks(2);
        let reports =
            check_excision_many(&cover, &all_subsets(3), &params(3, 3, 10, Metric::DInf)).unwrap();
        assert!(reports.iter().all(|r| r.holds));
    }

    #[test]
    fn plane_blocks_taxicab_needs_n_r() {
        let cover = blocks(2);
        let ok =
            check_excision_many(&cover, &all_subsets(3), &params(3, 6, 20, Metric::D1)).unwrap();
        assert!(ok.iter().all(|r| r.holds));
        // with S = R the taxicab check fails on the pair X₀, X₁, e.g. near (3, 3)
        let tight = check_excision(&cover, &[0, 1], &params(3, 3, 20, Metric::D1)).unwrap();
        assert!(!tight.holds);
        let w = tight.witness.unwrap();
        assert!(
            cover[0].within(&w, 3.into(), &Metric::D1)
                && cover[1].within(&w, 3.into(), &Metric::D1)
        );
    }

    #[test]
    fn disjoint_rays_fail_near_origin() {
        let cover = disjoint_rays(5);
        for s in 0..5 {
            let r = check_excision(&cover, &[0, 1], &params(6, s, 6 + s + 1, Metric::D1)).unwrap();
            assert!(!r.holds);
            assert_eq!(r.witness, Some(vec![-1]));
        }
    }

    #[test]
    fn box_margin_enforced() {
        let err = check_excision(&blocks(1), &[0, 1], &params(2, 2, 4, Metric::DInf)).unwrap_err();
        assert_eq!(
            err,
            CoarseError::BoxTooSmall {
                box_half: 4,
                radius: 2,
                s: 2
            }
        );
    }

    #[test]
    fn weighted_distance_and_json() {
        let m: Metric = serde_json::from_str(r#"{"kind":"weighted","weights":[1,"1/2"]}"#).unwrap();
        let d = ProductSet::from(&block_decomposition(2).unwrap()[2])
            .distance(&[-2, -4], &m)
            .unwrap();
        assert_eq!(d, Rational64::from_integer(4));
        let back: Metric = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Metric>(r#"{"kind":"weighted","weights":[0]}"#).is_err());
        assert!(serde_json::from_str::<Metric>(r#"{"kind":"d1","weights":[1]}"#).is_err());
    }

    #[test]
    fn sandwich_on_blocks() {
        for n in 1..=3 {
            for set in blocks(n) {
                assert_eq!(check_metric_sandwich(&set, 2, 4), None);
            }
        }
    }

    #[test]
    fn lexicographic_enumeration() {
        let mut seen = Vec::new();
        for_each_point(2, 1, |x| {
            seen.push(x.to_vec());
            true
        });
        assert_eq!(seen.len(), 9);
        assert_eq!(seen[0], vec![-1, -1]);
        assert_eq!(seen[1], vec![-1, 0]);
        assert_eq!(seen[8], vec![1, 1]);
    }
}
