//! Spectral families in `T(M)`: finite jump lists over finite topologies and
//! rule-based families over the interval carrier.

use std::fmt;
use std::sync::Arc;

use crate::bitset::BitSet;

use super::interval::IntervalOpenSet;
use super::topology::FiniteTopology;
use super::ClassicalError;

/// Bisection stops once the bracket is this narrow (relative to `max(1, |λ|)`).
pub const BISECTION_TOL: f64 = 1e-9;
/// Endpoint tolerance for the sequential-meet cross-check.
pub const MEET_TOL: f64 = 1e-12;

/// A step family over a finite topology: `∅` below the first threshold and
/// `sets[i]` on `[λ_i, λ_{i+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteFamily {
    topology: FiniteTopology,
    jumps: Vec<(f64, BitSet)>,
}

impl FiniteFamily {
    /// Thresholds strictly increase, values are open and strictly increase,
    /// and the last value is `M`.
    pub fn new(topology: FiniteTopology, jumps: Vec<(f64, BitSet)>) -> Result<Self, ClassicalError> {
        let whole = topology.whole();
        let mut prev: Option<(f64, BitSet)> = None;
        for (i, &(lambda, set)) in jumps.iter().enumerate() {
            if !lambda.is_finite() || prev.is_some_and(|p| p.0 >= lambda) {
                return Err(ClassicalError::NotASpectralFamily(format!("threshold {i} is not increasing")));
            }
            if !topology.is_open(set) {
                return Err(ClassicalError::NotASpectralFamily(format!("value {i} is not open")));
            }
            let below = prev.map_or(BitSet::empty(), |p| p.1);
            if !below.is_subset(set) || below == set {
                return Err(ClassicalError::NotASpectralFamily(format!("value {i} does not grow")));
            }
            prev = Some((lambda, set));
        }
        if prev.map_or(BitSet::empty(), |p| p.1) != whole {
            return Err(ClassicalError::NotASpectralFamily("the values do not reach M".into()));
        }
        Ok(FiniteFamily { topology, jumps })
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.topology
    }

    pub fn jumps(&self) -> &[(f64, BitSet)] {
        &self.jumps
    }

    /// `σ(λ)`.
    pub fn value_at(&self, lambda: f64) -> BitSet {
        self.jumps.iter().rev().find(|j| j.0 <= lambda).map_or(BitSet::empty(), |j| j.1)
    }

    /// Every value the family takes, `∅` included.
    pub fn values(&self) -> Vec<BitSet> {
        std::iter::once(BitSet::empty()).chain(self.jumps.iter().map(|j| j.1)).collect()
    }

    /// `𝒟(σ)`: points missing from some value.
    pub fn admissible_domain(&self) -> BitSet {
        let always = self.values().into_iter().fold(self.topology.whole(), BitSet::intersection);
        always.complement(self.topology.len())
    }

    /// `f_σ(x) = inf{λ : x ∈ σ(λ)}`.
    pub fn induced_value(&self, x: usize) -> Result<f64, ClassicalError> {
        if !self.admissible_domain().contains(x) {
            return Err(ClassicalError::PointNotAdmissible(x.to_string()));
        }
        Ok(self.jumps.iter().find(|j| j.1.contains(x)).expect("the last value is M").0)
    }

    pub fn induced_function(&self) -> Vec<f64> {
        (0..self.topology.len()).map(|x| self.induced_value(x).expect("the domain is M")).collect()
    }

    /// The thresholds: the family is constant on every open interval avoiding them.
    pub fn spectrum(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.0).collect()
    }

    /// `cl σ(λ) ⊆ σ(μ)` for all `λ < μ`. Taking `λ < μ` inside one step
    /// forces every value to be closed, and that suffices.
    pub fn is_continuous(&self) -> bool {
        self.values().into_iter().all(|s| self.topology.is_clopen(s))
    }

    /// `σ(λ)^cc = σ(λ)` for every value.
    pub fn values_are_regular(&self) -> bool {
        self.values().into_iter().all(|s| self.topology.is_regular(s))
    }
}

/// `σ_f(λ) = int f⁻¹((−∞, λ])` for any `f : M → ℝ`.
pub fn family_from_function(t: &FiniteTopology, f: &[f64]) -> Result<FiniteFamily, ClassicalError> {
    if f.len() != t.len() {
        return Err(ClassicalError::WrongLength { expected: t.len(), actual: f.len() });
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(ClassicalError::NotASpectralFamily("function values must be finite".into()));
    }
    let mut levels: Vec<f64> = f.to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut jumps: Vec<(f64, BitSet)> = Vec::new();
    for v in levels {
        let sub: BitSet = (0..f.len()).filter(|&x| f[x] <= v).collect();
        let set = t.interior(sub);
        if set != jumps.last().map_or(BitSet::empty(), |j| j.1) {
            jumps.push((v, set));
        }
    }
    FiniteFamily::new(t.clone(), jumps)
}

/// Continuity of `f : M → ℝ`: every level set is clopen.
pub fn is_continuous_function(t: &FiniteTopology, f: &[f64]) -> bool {
    f.iter().all(|&v| {
        let level: BitSet = (0..f.len()).filter(|&x| f[x] == v).collect();
        t.is_clopen(level)
    })
}

/// A membership rule `λ ↦ σ(λ)` on the interval carrier.
#[derive(Clone)]
pub enum IntervalRule {
    /// `(−∞, λ)`
    Id,
    /// `(−λ, λ)`
    Abs,
    /// `(−e^λ, e^λ)`
    Ln,
    /// `(−∞, ⌊λ⌋ + 1)`
    Step,
    /// `∅` below the first threshold, then the listed sets.
    Jumps(Vec<(f64, IntervalOpenSet)>),
    /// A user rule with no constancy analysis.
    Custom(String, Arc<dyn Fn(f64) -> IntervalOpenSet + Send + Sync>),
}

impl fmt::Debug for IntervalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalRule::Id => write!(f, "id"),
            IntervalRule::Abs => write!(f, "abs"),
            IntervalRule::Ln => write!(f, "ln"),
            IntervalRule::Step => write!(f, "step"),
            IntervalRule::Jumps(j) => f.debug_tuple("Jumps").field(j).finish(),
            IntervalRule::Custom(name, _) => write!(f, "custom({name})"),
        }
    }
}

impl IntervalRule {
    pub fn builtin(name: &str) -> Option<Self> {
        Some(match name {
            "id" => IntervalRule::Id,
            "abs" => IntervalRule::Abs,
            "ln" => IntervalRule::Ln,
            "step" => IntervalRule::Step,
            _ => return None,
        })
    }

    pub fn name(&self) -> String {
        format!("{self:?}")
    }
}

/// A closed real interval, used for spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedPiece {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone)]
pub struct IntervalFamily {
    rule: IntervalRule,
}

impl IntervalFamily {
    pub fn new(rule: IntervalRule) -> Result<Self, ClassicalError> {
        if let IntervalRule::Jumps(jumps) = &rule {
            for (i, w) in jumps.windows(2).enumerate() {
                if !(w[0].0 < w[1].0) || !w[0].1.is_subset(&w[1].1) || w[0].1 == w[1].1 {
                    return Err(ClassicalError::NotASpectralFamily(format!("jump {} does not grow", i + 1)));
                }
            }
            if jumps.last().is_none_or(|j| j.1 != IntervalOpenSet::whole()) {
                return Err(ClassicalError::NotASpectralFamily("the values do not reach ℝ".into()));
            }
        }
        Ok(IntervalFamily { rule })
    }

    pub fn builtin(name: &str) -> Option<Self> {
        IntervalRule::builtin(name).map(|rule| IntervalFamily { rule })
    }

    pub fn rule(&self) -> &IntervalRule {
        &self.rule
    }

    /// `σ(λ)`. For `ln`, `e^λ` underflows below `λ ≈ −745`; use
    /// [`IntervalFamily::contains`] for exact membership.
    pub fn evaluate(&self, lambda: f64) -> IntervalOpenSet {
        match &self.rule {
            IntervalRule::Id => IntervalOpenSet::interval(f64::NEG_INFINITY, lambda),
            IntervalRule::Abs => IntervalOpenSet::interval(-lambda, lambda),
            IntervalRule::Ln => IntervalOpenSet::interval(-lambda.exp(), lambda.exp()),
            IntervalRule::Step => IntervalOpenSet::interval(f64::NEG_INFINITY, lambda.floor() + 1.0),
            IntervalRule::Jumps(j) => {
                j.iter().rev().find(|p| p.0 <= lambda).map_or_else(IntervalOpenSet::empty, |p| p.1.clone())
            }
            IntervalRule::Custom(_, f) => f(lambda),
        }
    }

    /// `x ∈ σ(λ)`.
    pub fn contains(&self, lambda: f64, x: f64) -> bool {
        match &self.rule {
            IntervalRule::Ln => x == 0.0 || x.abs().ln() < lambda,
            _ => self.evaluate(lambda).contains(x),
        }
    }

    /// `∧_{μ > λ} σ(μ)` along `μ_k = λ + 2^{−k}`, stopping once the endpoints
    /// move by less than [`MEET_TOL`]. Pieces narrower than `2·MEET_TOL` are
    /// dropped.
    pub fn evaluate_by_meets(&self, lambda: f64) -> IntervalOpenSet {
        let mut acc = self.evaluate(lambda + 1.0);
        let mut step = 1.0;
        for _ in 0..80 {
            step /= 2.0;
            let next = acc.intersection(&self.evaluate(lambda + step));
            let settled = next.intervals().len() == acc.intervals().len()
                && next.intervals().iter().zip(acc.intervals()).all(|(a, b)| {
                    close_end(a.0, b.0) && close_end(a.1, b.1)
                });
            acc = next;
            if settled && step < MEET_TOL {
                break;
            }
        }
        IntervalOpenSet::from_intervals(acc.intervals().iter().copied().filter(|&(a, b)| b - a > 2.0 * MEET_TOL))
            .expect("valid endpoints")
    }

    /// The exact induced value for built-in rules.
    pub fn closed_form_value(&self, x: f64) -> Result<Option<f64>, ClassicalError> {
        Ok(match &self.rule {
            IntervalRule::Id => Some(x),
            IntervalRule::Abs => Some(x.abs()),
            IntervalRule::Ln if x == 0.0 => return Err(ClassicalError::PointNotAdmissible(x.to_string())),
            IntervalRule::Ln => Some(x.abs().ln()),
            IntervalRule::Step => Some(x.floor()),
            _ => None,
        })
    }

    /// Thresholds at which the family may jump, when known to be discrete.
    fn jump_points_near(&self, lo: f64, hi: f64) -> Option<Vec<f64>> {
        match &self.rule {
            IntervalRule::Step => Some(((lo.floor() - 1.0) as i64..=(hi.ceil() + 1.0) as i64).map(|k| k as f64).collect()),
            IntervalRule::Jumps(j) => Some(j.iter().map(|p| p.0).filter(|&t| t >= lo - 1.0 && t <= hi + 1.0).collect()),
            _ => None,
        }
    }

    /// A `λ` with `x ∉ σ(λ)`, found by doubling; `None` means `x ∉ 𝒟(σ)`.
    fn lower_bracket(&self, x: f64) -> Option<f64> {
        let mut lo = -1.0f64;
        while self.contains(lo, x) {
            if lo < -1e300 {
                return None;
            }
            lo *= 2.0;
        }
        Some(lo)
    }

    pub fn is_admissible(&self, x: f64) -> bool {
        self.lower_bracket(x).is_some()
    }

    /// `f_σ(x)` by bisection with doubling brackets. For step rules the
    /// result is snapped to the smallest jump point that contains `x`, which
    /// is exact because right-continuous step families attain the infimum.
    pub fn induced_value(&self, x: f64) -> Result<f64, ClassicalError> {
        let mut lo = self.lower_bracket(x).ok_or_else(|| ClassicalError::PointNotAdmissible(x.to_string()))?;
        let mut hi = 1.0f64;
        while !self.contains(hi, x) {
            if hi > 1e300 {
                return Ok(f64::INFINITY);
            }
            hi *= 2.0;
        }
        for _ in 0..4000 {
            if hi - lo <= BISECTION_TOL * lo.abs().max(hi.abs()).max(1.0) {
                break;
            }
            let mid = lo + (hi - lo) / 2.0;
            if self.contains(mid, x) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if let Some(points) = self.jump_points_near(lo, hi) {
            if let Some(t) = points.into_iter().find(|&t| self.contains(t, x)) {
                return Ok(t);
            }
        }
        Ok(lo + (hi - lo) / 2.0)
    }

    /// Open intervals of `λ` on which the family is constant, clipped to the window.
    fn constancy_intervals(&self, window: f64) -> Result<Vec<(f64, f64)>, ClassicalError> {
        Ok(match &self.rule {
            IntervalRule::Id | IntervalRule::Ln => Vec::new(),
            IntervalRule::Abs => vec![(f64::NEG_INFINITY, 0.0)],
            IntervalRule::Step => {
                (((-window).floor() as i64 - 1)..=(window.ceil() as i64)).map(|n| (n as f64, n as f64 + 1.0)).collect()
            }
            IntervalRule::Jumps(j) => {
                let mut out = vec![(f64::NEG_INFINITY, j[0].0)];
                out.extend(j.windows(2).map(|w| (w[0].0, w[1].0)));
                out.push((j[j.len() - 1].0, f64::INFINITY));
                out
            }
            IntervalRule::Custom(name, _) => return Err(ClassicalError::UnsupportedRule(name.clone())),
        })
    }

    /// `Spec(σ) ∩ [−W, W]`: the window minus the constancy intervals.
    pub fn spectrum(&self, window: f64) -> Result<Vec<ClosedPiece>, ClassicalError> {
        let mut pieces = vec![ClosedPiece { lo: -window, hi: window }];
        for (a, b) in self.constancy_intervals(window)? {
            pieces = pieces
                .into_iter()
                .flat_map(|p| {
                    let mut out = Vec::new();
                    if b <= p.lo || a >= p.hi {
                        out.push(p);
                    } else {
                        if a >= p.lo {
                            out.push(ClosedPiece { lo: p.lo, hi: a });
                        }
                        if b <= p.hi {
                            out.push(ClosedPiece { lo: b, hi: p.hi });
                        }
                    }
                    out
                })
                .collect();
        }
        pieces.dedup();
        Ok(pieces)
    }

    /// `cl σ(λ) ⊆ σ(μ)` on a grid of pairs in `[−W, W]`, including pairs a
    /// millionth apart.
    pub fn is_continuous(&self, window: f64) -> bool {
        self.continuity_pairs(window)
            .into_iter()
            .all(|(l, m)| self.evaluate(l).closure_within(&self.evaluate(m)))
    }

    fn continuity_pairs(&self, window: f64) -> Vec<(f64, f64)> {
        let grid: Vec<f64> = {
            let mut g: Vec<f64> = (0..=64).map(|k| -window + 2.0 * window * k as f64 / 64.0 + 0.0123).collect();
            if let IntervalRule::Jumps(j) = &self.rule {
                g.extend(j.iter().map(|p| p.0));
            }
            g
        };
        let mut pairs = Vec::new();
        for (i, &l) in grid.iter().enumerate() {
            pairs.push((l, l + 1e-6));
            for &m in &grid[i + 1..] {
                if l < m {
                    pairs.push((l, m));
                }
            }
        }
        pairs
    }

    /// Monotone on the grid and `σ(λ) = ∧_{μ>λ} σ(μ)` within [`MEET_TOL`].
    pub fn check_axioms(&self, window: f64) -> bool {
        let monotone = self.continuity_pairs(window).into_iter().all(|(l, m)| self.evaluate(l).is_subset(&self.evaluate(m)));
        let samples: Vec<f64> = (0..=40).map(|k| -window + 2.0 * window * k as f64 / 40.0).collect();
        let right_continuous = samples.iter().all(|&l| sets_close(&self.evaluate(l), &self.evaluate_by_meets(l)));
        monotone && right_continuous
    }
}

fn close_end(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= MEET_TOL * a.abs().max(1.0)
}

fn sets_close(a: &IntervalOpenSet, b: &IntervalOpenSet) -> bool {
    a.intervals().len() == b.intervals().len()
        && a.intervals().iter().zip(b.intervals()).all(|(x, y)| close_end(x.0, y.0) && close_end(x.1, y.1))
}

/// Real functions whose spectral family `int f⁻¹((−∞, λ])` has a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealFunction {
    Identity,
    Abs,
    /// `ln|x|`, with `ln|0| = −∞`.
    LnAbs,
    Floor,
}

impl RealFunction {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            RealFunction::Identity => x,
            RealFunction::Abs => x.abs(),
            RealFunction::LnAbs => x.abs().ln(),
            RealFunction::Floor => x.floor(),
        }
    }

    /// `f⁻¹((−∞, λ])` as an interval with closedness flags `(lo, hi, lo_closed, hi_closed)`.
    fn sublevel(self, lambda: f64) -> Option<(f64, f64, bool, bool)> {
        match self {
            RealFunction::Identity => Some((f64::NEG_INFINITY, lambda, false, true)),
            RealFunction::Abs => (lambda >= 0.0).then_some((-lambda, lambda, true, true)),
            RealFunction::LnAbs => Some((-lambda.exp(), lambda.exp(), true, true)),
            RealFunction::Floor => Some((f64::NEG_INFINITY, lambda.floor() + 1.0, false, false)),
        }
    }

    /// `σ_f(λ) = int f⁻¹((−∞, λ])`: the interior of an interval drops its endpoints.
    pub fn family_value(self, lambda: f64) -> IntervalOpenSet {
        match self.sublevel(lambda) {
            Some((lo, hi, _, _)) => IntervalOpenSet::interval(lo, hi),
            None => IntervalOpenSet::empty(),
        }
    }

    pub fn family(self) -> IntervalFamily {
        IntervalFamily::new(IntervalRule::Custom(format!("{self:?}"), Arc::new(move |l| self.family_value(l))))
            .expect("custom rules are not validated")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ix: &[usize]) -> BitSet {
        BitSet::from_indices(ix.iter().copied())
    }

    #[test]
    fn discrete_family_from_function() {
        let t = FiniteTopology::discrete(3);
        let s = family_from_function(&t, &[1.0, 2.0, 2.0]).unwrap();
        assert_eq!(s.jumps(), &[(1.0, set(&[0])), (2.0, set(&[0, 1, 2]))]);
        assert_eq!(s.induced_function(), vec![1.0, 2.0, 2.0]);
        assert_eq!(s.value_at(0.5), BitSet::empty());
        assert_eq!(s.value_at(1.5), set(&[0]));
        assert!(s.is_continuous());
        assert_eq!(s.spectrum(), vec![1.0, 2.0]);
    }

    #[test]
    fn sierpinski_example() {
        let t = FiniteTopology::sierpinski();
        let f = [0.0, 1.0];
        let s = family_from_function(&t, &f).unwrap();
        assert_eq!(s.value_at(-1.0), BitSet::empty());
        assert_eq!(s.value_at(0.5), set(&[0]));
        assert_eq!(s.value_at(1.0), t.whole());
        assert_eq!(s.induced_function(), f.to_vec());
        // {p} is open but not closed
        assert!(!is_continuous_function(&t, &f));
        assert!(!s.is_continuous());
    }

    #[test]
    fn non_continuous_function_does_not_round_trip() {
        let t = FiniteTopology::sierpinski();
        let s = family_from_function(&t, &[1.0, 0.0]).unwrap();
        assert_eq!(s.induced_function(), vec![1.0, 1.0]);
    }

    #[test]
    fn rejects_bad_families() {
        let t = FiniteTopology::sierpinski();
        assert!(FiniteFamily::new(t.clone(), vec![(0.0, set(&[1])), (1.0, set(&[0, 1]))]).is_err());
        assert!(FiniteFamily::new(t.clone(), vec![(0.0, set(&[0]))]).is_err());
        assert!(FiniteFamily::new(t, vec![(1.0, set(&[0])), (0.0, set(&[0, 1]))]).is_err());
    }

    #[test]
    fn builtin_values() {
        let id = IntervalFamily::builtin("id").unwrap();
        let abs = IntervalFamily::builtin("abs").unwrap();
        let ln = IntervalFamily::builtin("ln").unwrap();
        let step = IntervalFamily::builtin("step").unwrap();
        for &x in &[-3.7, -1.0, -0.2, 0.4, 1.0, 2.5, 10.25] {
            assert!((id.induced_value(x).unwrap() - x).abs() < 1e-8);
            assert!((abs.induced_value(x).unwrap() - x.abs()).abs() < 1e-8);
            assert!((ln.induced_value(x).unwrap() - x.abs().ln()).abs() < 1e-8);
        }
        assert_eq!(step.induced_value(2.5).unwrap(), 2.0);
        assert_eq!(step.induced_value(-0.5).unwrap(), -1.0);
        assert!(matches!(ln.induced_value(0.0), Err(ClassicalError::PointNotAdmissible(_))));
        assert!(!ln.is_admissible(0.0));
        assert!(ln.is_admissible(1e-200));
    }

    #[test]
    fn continuity_verdicts() {
        let verdicts: Vec<bool> =
            ["id", "abs", "ln", "step"].iter().map(|n| IntervalFamily::builtin(n).unwrap().is_continuous(10.0)).collect();
        assert_eq!(verdicts, vec![true, true, true, false]);
    }

    #[test]
    fn axioms_on_builtins() {
        for n in ["id", "abs", "ln", "step"] {
            assert!(IntervalFamily::builtin(n).unwrap().check_axioms(5.0), "{n}");
        }
    }

    #[test]
    fn spectra() {
        let step = IntervalFamily::builtin("step").unwrap().spectrum(3.0).unwrap();
        let pts: Vec<f64> = step.iter().map(|p| p.lo).collect();
        assert_eq!(pts, vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        assert!(step.iter().all(|p| p.lo == p.hi));
        let id = IntervalFamily::builtin("id").unwrap().spectrum(3.0).unwrap();
        assert_eq!(id, vec![ClosedPiece { lo: -3.0, hi: 3.0 }]);
        let abs = IntervalFamily::builtin("abs").unwrap().spectrum(3.0).unwrap();
        assert_eq!(abs, vec![ClosedPiece { lo: 0.0, hi: 3.0 }]);
        let jumps = IntervalFamily::new(IntervalRule::Jumps(vec![
            (1.0, IntervalOpenSet::interval(0.0, 1.0)),
            (2.0, IntervalOpenSet::whole()),
        ]))
        .unwrap();
        let s: Vec<f64> = jumps.spectrum(5.0).unwrap().iter().map(|p| p.lo).collect();
        assert_eq!(s, vec![1.0, 2.0]);
        let custom = IntervalFamily::new(IntervalRule::Custom("c".into(), Arc::new(|_| IntervalOpenSet::whole()))).unwrap();
        assert!(matches!(custom.spectrum(1.0), Err(ClassicalError::UnsupportedRule(_))));
    }

    #[test]
    fn function_families_match_builtins() {
        let pairs = [
            (RealFunction::Identity, "id"),
            (RealFunction::Abs, "abs"),
            (RealFunction::LnAbs, "ln"),
            (RealFunction::Floor, "step"),
        ];
        for (f, name) in pairs {
            let b = IntervalFamily::builtin(name).unwrap();
            for k in -40..=40 {
                let l = k as f64 * 0.173;
                assert_eq!(f.family_value(l), b.evaluate(l), "{name} at {l}");
            }
        }
        assert_eq!(RealFunction::Abs.family_value(2.0), IntervalOpenSet::interval(-2.0, 2.0));
        assert!(RealFunction::Abs.family_value(0.0).is_empty());
    }

    #[test]
    fn meets_reproduce_values() {
        let step = IntervalFamily::builtin("step").unwrap();
        assert_eq!(step.evaluate_by_meets(2.0), step.evaluate(2.0));
        assert_eq!(step.evaluate_by_meets(1.999), step.evaluate(1.999));
    }
}
