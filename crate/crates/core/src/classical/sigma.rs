//! Spectral families in finite σ-algebras of sets: random variables.

use std::collections::BTreeSet;

use crate::bitset::BitSet;
use crate::lattice::set_name;

use super::ClassicalError;

/// A finite field of subsets of `M`, closed under complement and union.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSigmaAlgebra {
    points: Vec<String>,
    sets: Vec<BitSet>,
}

impl FiniteSigmaAlgebra {
    pub fn new(points: Vec<String>, sets: Vec<BitSet>) -> Result<Self, ClassicalError> {
        let n = points.len();
        if n > BitSet::CAPACITY {
            return Err(ClassicalError::TooManyPoints(n));
        }
        let whole = BitSet::full(n);
        let set: BTreeSet<BitSet> = sets.into_iter().collect();
        if let Some(bad) = set.iter().find(|s| !s.is_subset(whole)) {
            return Err(ClassicalError::OutOfRange(format!("{bad:?}")));
        }
        if !set.contains(&BitSet::empty()) {
            return Err(ClassicalError::NotASigmaAlgebra("∅ is missing".into()));
        }
        for &a in &set {
            if !set.contains(&a.complement(n)) {
                return Err(ClassicalError::NotASigmaAlgebra(format!("complement of {a:?} is missing")));
            }
            for &b in &set {
                if !set.contains(&a.union(b)) {
                    return Err(ClassicalError::NotASigmaAlgebra(format!("{a:?} ∪ {b:?} is missing")));
                }
            }
        }
        Ok(FiniteSigmaAlgebra { points, sets: set.into_iter().collect() })
    }

    fn numbered(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    pub fn powerset(n: usize) -> Self {
        Self::new(Self::numbered(n), (0..(1u64 << n)).map(BitSet).collect()).expect("powerset")
    }

    /// All unions of blocks of a partition of `0..n`.
    pub fn from_partition(n: usize, blocks: &[BitSet]) -> Result<Self, ClassicalError> {
        let k = blocks.len();
        let sets = (0..(1u64 << k))
            .map(|m| (0..k).filter(|i| m & (1 << i) != 0).fold(BitSet::empty(), |acc, i| acc.union(blocks[i])))
            .collect();
        Self::new(Self::numbered(n), sets)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn sets(&self) -> &[BitSet] {
        &self.sets
    }

    pub fn whole(&self) -> BitSet {
        BitSet::full(self.len())
    }

    pub fn contains(&self, s: BitSet) -> bool {
        self.sets.binary_search(&s).is_ok()
    }

    pub fn set_label(&self, s: BitSet) -> String {
        set_name(s, |i| self.points[i].clone())
    }

    /// Every sublevel set `f⁻¹((−∞, v])` lies in the algebra.
    pub fn is_measurable(&self, f: &[f64]) -> bool {
        f.iter().all(|&v| self.contains(sublevel(f, v)))
    }
}

fn sublevel(f: &[f64], v: f64) -> BitSet {
    (0..f.len()).filter(|&x| f[x] <= v).collect()
}

/// An `𝔄`-random variable: `∅` below the first threshold, then strictly
/// growing measurable sets ending at `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaFamily {
    algebra: FiniteSigmaAlgebra,
    jumps: Vec<(f64, BitSet)>,
}

impl SigmaFamily {
    pub fn new(algebra: FiniteSigmaAlgebra, jumps: Vec<(f64, BitSet)>) -> Result<Self, ClassicalError> {
        let mut prev: Option<(f64, BitSet)> = None;
        for (i, &(lambda, set)) in jumps.iter().enumerate() {
            if !lambda.is_finite() || prev.is_some_and(|p| p.0 >= lambda) {
                return Err(ClassicalError::NotASpectralFamily(format!("threshold {i} is not increasing")));
            }
            if !algebra.contains(set) {
                return Err(ClassicalError::NotASpectralFamily(format!("value {i} is not measurable")));
            }
            let below = prev.map_or(BitSet::empty(), |p| p.1);
            if !below.is_subset(set) || below == set {
                return Err(ClassicalError::NotASpectralFamily(format!("value {i} does not grow")));
            }
            prev = Some((lambda, set));
        }
        if prev.map_or(BitSet::empty(), |p| p.1) != algebra.whole() {
            return Err(ClassicalError::NotASpectralFamily("the values do not reach M".into()));
        }
        Ok(SigmaFamily { algebra, jumps })
    }

    pub fn algebra(&self) -> &FiniteSigmaAlgebra {
        &self.algebra
    }

    pub fn jumps(&self) -> &[(f64, BitSet)] {
        &self.jumps
    }

    pub fn value_at(&self, lambda: f64) -> BitSet {
        self.jumps.iter().rev().find(|j| j.0 <= lambda).map_or(BitSet::empty(), |j| j.1)
    }

    /// `f_σ(x) = inf{λ : x ∈ σ(λ)}`.
    pub fn induced_function(&self) -> Vec<f64> {
        (0..self.algebra.len())
            .map(|x| self.jumps.iter().find(|j| j.1.contains(x)).expect("the last value is M").0)
            .collect()
    }
}

/// `σ_f(λ) = f⁻¹((−∞, λ])`, defined when `f` is measurable.
pub fn sigma_family_from_function(algebra: &FiniteSigmaAlgebra, f: &[f64]) -> Result<SigmaFamily, ClassicalError> {
    if f.len() != algebra.len() {
        return Err(ClassicalError::WrongLength { expected: algebra.len(), actual: f.len() });
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(ClassicalError::NotASpectralFamily("function values must be finite".into()));
    }
    let mut levels = f.to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut jumps = Vec::with_capacity(levels.len());
    for v in levels {
        let s = sublevel(f, v);
        if !algebra.contains(s) {
            return Err(ClassicalError::NotMeasurable(algebra.set_label(s)));
        }
        jumps.push((v, s));
    }
    SigmaFamily::new(algebra.clone(), jumps)
}

/// `f_σ⁻¹((−∞, λ]) = σ(λ)` at every threshold and between thresholds.
pub fn sublevels_match(sigma: &SigmaFamily) -> bool {
    let f = sigma.induced_function();
    let mut probes: Vec<f64> = sigma.jumps.iter().map(|j| j.0).collect();
    let mids: Vec<f64> = probes.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
    if let (Some(&first), Some(&last)) = (probes.first(), probes.last()) {
        probes.push(first - 1.0);
        probes.push(last + 1.0);
    }
    probes.extend(mids);
    probes.into_iter().all(|l| sublevel(&f, l) == sigma.value_at(l))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ix: &[usize]) -> BitSet {
        BitSet::from_indices(ix.iter().copied())
    }

    #[test]
    fn powerset_round_trip() {
        let a = FiniteSigmaAlgebra::powerset(3);
        let s = sigma_family_from_function(&a, &[1.0, 2.0, 2.0]).unwrap();
        assert_eq!(s.jumps(), &[(1.0, set(&[0])), (2.0, set(&[0, 1, 2]))]);
        assert_eq!(s.induced_function(), vec![1.0, 2.0, 2.0]);
        let back = sigma_family_from_function(&a, &s.induced_function()).unwrap();
        assert_eq!(back, s);
        assert!(sublevels_match(&s));
    }

    #[test]
    fn coarse_algebra() {
        let a = FiniteSigmaAlgebra::from_partition(3, &[set(&[0]), set(&[1, 2])]).unwrap();
        assert_eq!(a.sets().len(), 4);
        let s = sigma_family_from_function(&a, &[1.0, 2.0, 2.0]).unwrap();
        assert_eq!(s.induced_function(), vec![1.0, 2.0, 2.0]);
        assert!(matches!(
            sigma_family_from_function(&a, &[1.0, 2.0, 3.0]),
            Err(ClassicalError::NotMeasurable(ref s)) if s == "{1,2}"
        ));
    }

    #[test]
    fn rejects_non_algebras() {
        let err = FiniteSigmaAlgebra::new(FiniteSigmaAlgebra::numbered(2), vec![set(&[]), set(&[0]), set(&[0, 1])]);
        assert!(matches!(err, Err(ClassicalError::NotASigmaAlgebra(_))));
    }
}
