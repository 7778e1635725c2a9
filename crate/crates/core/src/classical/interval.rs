//! Finite unions of open intervals of `ℝ`, with closure and pseudocomplement.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ClassicalError;

/// A disjoint sorted list of nonempty open intervals `(lo, hi)`, endpoints
/// in `ℝ ∪ {±∞}`. Overlapping intervals merge; touching ones such as
/// `(0,1) ∪ (1,2)` stay apart because the shared endpoint is missing.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<[Option<f64>; 2]>", into = "Vec<[Option<f64>; 2]>")]
pub struct IntervalOpenSet {
    intervals: Vec<(f64, f64)>,
}

impl IntervalOpenSet {
    pub fn empty() -> Self {
        IntervalOpenSet { intervals: Vec::new() }
    }

    pub fn whole() -> Self {
        IntervalOpenSet { intervals: vec![(f64::NEG_INFINITY, f64::INFINITY)] }
    }

    /// `(lo, hi)`; empty when `lo ≥ hi`.
    pub fn interval(lo: f64, hi: f64) -> Self {
        Self::from_intervals([(lo, hi)]).expect("endpoints are not NaN")
    }

    pub fn from_intervals<I: IntoIterator<Item = (f64, f64)>>(it: I) -> Result<Self, ClassicalError> {
        let mut raw: Vec<(f64, f64)> = Vec::new();
        for (lo, hi) in it {
            if lo.is_nan() || hi.is_nan() || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return Err(ClassicalError::BadInterval(format!("({lo}, {hi})")));
            }
            if lo < hi {
                raw.push((lo, hi));
            }
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match merged.last_mut() {
                Some(last) if lo < last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        Ok(IntervalOpenSet { intervals: merged })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo < x && x < hi)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.intervals.iter().chain(&other.intervals).copied()).expect("valid endpoints")
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let pieces = self
            .intervals
            .iter()
            .flat_map(|&(a, b)| other.intervals.iter().map(move |&(c, d)| (a.max(c), b.min(d))));
        Self::from_intervals(pieces).expect("valid endpoints")
    }

    /// The closure as closed intervals `[lo, hi]`, merged when they touch.
    pub fn closure(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for &(lo, hi) in &self.intervals {
            match out.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => out.push((lo, hi)),
            }
        }
        out
    }

    /// `U ⊆ V`.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.intervals
            .iter()
            .all(|&(a, b)| other.intervals.iter().any(|&(c, d)| c <= a && b <= d))
    }

    /// `cl(U) ⊆ V`: each closed piece sits inside one open interval of `V`,
    /// with infinite ends matched by infinite ends.
    pub fn closure_within(&self, other: &Self) -> bool {
        let below = |c: f64, a: f64| if a == f64::NEG_INFINITY { c == a } else { c < a };
        let above = |b: f64, d: f64| if b == f64::INFINITY { d == b } else { b < d };
        self.closure()
            .iter()
            .all(|&(a, b)| other.intervals.iter().any(|&(c, d)| below(c, a) && above(b, d)))
    }

    /// `ℝ ∖ cl(U)`.
    pub fn pseudocomplement(&self) -> Self {
        let mut gaps = Vec::new();
        let mut left = f64::NEG_INFINITY;
        for (lo, hi) in self.closure() {
            if left < lo {
                gaps.push((left, lo));
            }
            left = hi;
        }
        if left < f64::INFINITY {
            gaps.push((left, f64::INFINITY));
        }
        Self::from_intervals(gaps).expect("valid endpoints")
    }

    pub fn is_regular(&self) -> bool {
        self.pseudocomplement().pseudocomplement() == *self
    }
}

fn fmt_end(x: f64) -> String {
    if x == f64::INFINITY {
        "∞".into()
    } else if x == f64::NEG_INFINITY {
        "-∞".into()
    } else {
        format!("{x}")
    }
}

impl fmt::Display for IntervalOpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> =
            self.intervals.iter().map(|&(a, b)| format!("({}, {})", fmt_end(a), fmt_end(b))).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

impl TryFrom<Vec<[Option<f64>; 2]>> for IntervalOpenSet {
    type Error = ClassicalError;

    fn try_from(v: Vec<[Option<f64>; 2]>) -> Result<Self, Self::Error> {
        Self::from_intervals(
            v.into_iter()
                .map(|[lo, hi]| (lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY))),
        )
    }
}

impl From<IntervalOpenSet> for Vec<[Option<f64>; 2]> {
    fn from(s: IntervalOpenSet) -> Self {
        s.intervals
            .iter()
            .map(|&(lo, hi)| [lo.is_finite().then_some(lo), hi.is_finite().then_some(hi)])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn canonical_form() {
        let s = IntervalOpenSet::from_intervals([(1.0, 2.0), (0.0, 1.0), (0.5, 0.7)]).unwrap();
        assert_eq!(s.intervals(), &[(0.0, 1.0), (1.0, 2.0)]);
        let s = IntervalOpenSet::from_intervals([(0.0, 1.5), (1.0, 2.0), (3.0, 3.0)]).unwrap();
        assert_eq!(s.intervals(), &[(0.0, 2.0)]);
        assert!(IntervalOpenSet::from_intervals([(f64::NAN, 1.0)]).is_err());
    }

    #[test]
    fn pseudocomplement_of_punctured_interval() {
        let u = IntervalOpenSet::from_intervals([(0.0, 1.0), (1.0, 2.0)]).unwrap();
        let c = u.pseudocomplement();
        assert_eq!(c.intervals(), &[(-INF, 0.0), (2.0, INF)]);
        assert_eq!(c.pseudocomplement().intervals(), &[(0.0, 2.0)]);
        assert!(!u.is_regular());
        assert!(c.is_regular());
        assert_eq!(IntervalOpenSet::empty().pseudocomplement(), IntervalOpenSet::whole());
        assert_eq!(IntervalOpenSet::whole().pseudocomplement(), IntervalOpenSet::empty());
    }

    #[test]
    fn heyting_law_on_samples() {
        let samples = [
            IntervalOpenSet::from_intervals([(0.0, 1.0), (1.0, 2.0), (5.0, INF)]).unwrap(),
            IntervalOpenSet::from_intervals([(-INF, -3.0), (-1.0, 0.0)]).unwrap(),
            IntervalOpenSet::interval(-2.0, 2.0),
        ];
        for u in samples {
            let c = u.pseudocomplement();
            assert_eq!(c.pseudocomplement().pseudocomplement(), c);
        }
    }

    #[test]
    fn lattice_operations() {
        let a = IntervalOpenSet::interval(0.0, 2.0);
        let b = IntervalOpenSet::from_intervals([(1.0, 3.0), (4.0, 5.0)]).unwrap();
        assert_eq!(a.intersection(&b).intervals(), &[(1.0, 2.0)]);
        assert_eq!(a.union(&b).intervals(), &[(0.0, 3.0), (4.0, 5.0)]);
        assert!(IntervalOpenSet::interval(0.5, 1.0).is_subset(&a));
        assert!(IntervalOpenSet::interval(0.5, 1.0).closure_within(&a));
        assert!(!IntervalOpenSet::interval(0.5, 2.0).closure_within(&a));
        assert!(IntervalOpenSet::interval(-INF, 1.0).closure_within(&IntervalOpenSet::interval(-INF, 2.0)));
        assert!(!IntervalOpenSet::interval(-INF, 1.0).closure_within(&IntervalOpenSet::interval(-1e300, 2.0)));
    }

    #[test]
    fn json_uses_null_for_infinity() {
        let u = IntervalOpenSet::from_intervals([(-INF, 0.0), (2.0, INF)]).unwrap();
        let text = serde_json::to_string(&u).unwrap();
        assert_eq!(text, "[[null,0.0],[2.0,null]]");
        let back: IntervalOpenSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, u);
    }
}
