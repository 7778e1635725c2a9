//! Finite topological spaces, regular open sets, and the quasipoint
//! correspondence between `T(M)` and `T_r(M)`.

use std::collections::BTreeSet;

use crate::bitset::BitSet;
use crate::lattice::{enumerate_quasipoints, set_name, FiniteLattice};

use super::ClassicalError;

/// Largest carrier accepted by [`enumerate_topologies`].
pub const MAX_ENUMERATED_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    points: Vec<String>,
    opens: Vec<BitSet>,
}

impl FiniteTopology {
    /// Checks that `opens` contains `∅` and `M` and is closed under union and
    /// intersection. Duplicates are dropped and the list is sorted.
    pub fn new(points: Vec<String>, opens: Vec<BitSet>) -> Result<Self, ClassicalError> {
        let n = points.len();
        if n > BitSet::CAPACITY {
            return Err(ClassicalError::TooManyPoints(n));
        }
        let distinct: BTreeSet<&String> = points.iter().collect();
        if distinct.len() != n {
            return Err(ClassicalError::DuplicatePoint);
        }
        let whole = BitSet::full(n);
        let set: BTreeSet<BitSet> = opens.into_iter().collect();
        if let Some(bad) = set.iter().find(|s| !s.is_subset(whole)) {
            return Err(ClassicalError::OutOfRange(format!("{bad:?}")));
        }
        if !set.contains(&BitSet::empty()) || !set.contains(&whole) {
            return Err(ClassicalError::NotATopology("∅ and M must be open".into()));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&a.union(b)) || !set.contains(&a.intersection(b)) {
                    return Err(ClassicalError::NotATopology(format!(
                        "{} and {} violate closure",
                        set_name(a, |i| points[i].clone()),
                        set_name(b, |i| points[i].clone())
                    )));
                }
            }
        }
        Ok(FiniteTopology { points, opens: set.into_iter().collect() })
    }

    fn numbered(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    pub fn discrete(n: usize) -> Self {
        let opens = (0..(1u64 << n)).map(BitSet).collect();
        Self::new(Self::numbered(n), opens).expect("powerset is a topology")
    }

    pub fn indiscrete(n: usize) -> Self {
        Self::new(Self::numbered(n), vec![BitSet::empty(), BitSet::full(n)]).expect("indiscrete topology")
    }

    /// Points `p, q` with opens `∅, {p}, M`.
    pub fn sierpinski() -> Self {
        Self::new(vec!["p".into(), "q".into()], vec![BitSet(0), BitSet(1), BitSet(3)]).expect("Sierpinski space")
    }

    /// The open sets of a preorder: down-sets, `x ≼ y ∈ U ⇒ x ∈ U`.
    pub fn from_preorder(n: usize, below: &[BitSet]) -> Self {
        let opens = (0..(1u64 << n))
            .map(BitSet)
            .filter(|s| s.iter().all(|y| below[y].is_subset(*s)))
            .collect();
        Self::new(Self::numbered(n), opens).expect("down-sets of a preorder form a topology")
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

    pub fn opens(&self) -> &[BitSet] {
        &self.opens
    }

    pub fn whole(&self) -> BitSet {
        BitSet::full(self.len())
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn is_open(&self, s: BitSet) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn is_closed(&self, s: BitSet) -> bool {
        self.is_open(s.complement(self.len()))
    }

    pub fn is_clopen(&self, s: BitSet) -> bool {
        self.is_open(s) && self.is_closed(s)
    }

    pub fn interior(&self, s: BitSet) -> BitSet {
        self.opens.iter().filter(|u| u.is_subset(s)).fold(BitSet::empty(), |acc, u| acc.union(*u))
    }

    pub fn closure(&self, s: BitSet) -> BitSet {
        let n = self.len();
        self.interior(s.complement(n)).complement(n)
    }

    /// `U^c = M ∖ cl(U)`.
    pub fn pseudocomplement(&self, u: BitSet) -> BitSet {
        self.closure(u).complement(self.len())
    }

    pub fn is_regular(&self, u: BitSet) -> bool {
        self.is_open(u) && self.pseudocomplement(self.pseudocomplement(u)) == u
    }

    pub fn regular_opens(&self) -> Vec<BitSet> {
        self.opens.iter().copied().filter(|&u| self.is_regular(u)).collect()
    }

    pub fn set_label(&self, s: BitSet) -> String {
        set_name(s, |i| self.points[i].clone())
    }

    /// `T(M)` ordered by inclusion.
    pub fn open_lattice(&self) -> FiniteLattice {
        let names = self.opens.iter().map(|&s| self.set_label(s)).collect();
        FiniteLattice::from_sets(names, &self.opens).expect("a topology is a lattice")
    }

    /// `T_r(M)` ordered by inclusion; meets are intersections and joins are
    /// `(U ∪ V)^cc`.
    pub fn regular_open_lattice(&self) -> RegularOpenLattice {
        let sets = self.regular_opens();
        let names = sets.iter().map(|&s| self.set_label(s)).collect();
        let lattice = FiniteLattice::from_sets(names, &sets).expect("regular opens form a lattice");
        RegularOpenLattice { sets, lattice }
    }
}

#[derive(Debug, Clone)]
pub struct RegularOpenLattice {
    pub sets: Vec<BitSet>,
    pub lattice: FiniteLattice,
}

impl RegularOpenLattice {
    pub fn index_of(&self, s: BitSet) -> Option<usize> {
        self.sets.iter().position(|&t| t == s)
    }

    /// Meet is `∩`, join is `(U ∪ V)^cc`, the pseudocomplement is a Boolean
    /// complement, and the lattice is distributive.
    pub fn verify_boolean(&self, t: &FiniteTopology) -> bool {
        let l = &self.lattice;
        let n = t.len();
        let ops = (0..self.sets.len()).all(|i| {
            (0..self.sets.len()).all(|j| {
                let (u, v) = (self.sets[i], self.sets[j]);
                let joined = t.pseudocomplement(t.pseudocomplement(u.union(v)));
                self.sets[l.meet(i, j)] == u.intersection(v) && self.sets[l.join(i, j)] == joined
            })
        });
        let complements = self.sets.iter().all(|&u| {
            let c = t.pseudocomplement(u);
            u.intersection(c).is_empty() && t.pseudocomplement(t.pseudocomplement(u.union(c))) == BitSet::full(n)
        });
        ops && complements && l.is_boolean().is_some()
    }
}

/// Every topology on `n ≤ 5` points, one per preorder (Alexandrov
/// correspondence), in a deterministic order.
pub fn enumerate_topologies(n: usize) -> Result<Vec<FiniteTopology>, ClassicalError> {
    if n > MAX_ENUMERATED_POINTS {
        return Err(ClassicalError::TooManyPoints(n));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        // below[y] = {x : x ≼ y}
        let mut below: Vec<BitSet> = (0..n).map(BitSet::singleton).collect();
        for (k, &(x, y)) in pairs.iter().enumerate() {
            if mask & (1 << k) != 0 {
                below[y] = below[y].with(x);
            }
        }
        let transitive = (0..n).all(|y| below[y].iter().all(|x| below[x].is_subset(below[y])));
        if transitive {
            out.push(FiniteTopology::from_preorder(n, &below));
        }
    }
    Ok(out)
}

/// The map `𝔅 ↦ 𝔅^r = {U^cc : U ∈ 𝔅}` from `Q(T(M))` to `Q(T_r(M))`.
#[derive(Debug, Clone)]
pub struct QuasipointCorrespondence {
    /// `image[i]` is the index of the `T_r` quasipoint hit by the `i`-th
    /// quasipoint of `T(M)`, if `𝔅^r` is one.
    pub image: Vec<Option<usize>>,
    pub source_count: usize,
    pub target_count: usize,
    pub bijective: bool,
    /// `ρ(Q_U) = Q_{U^cc}` for every open `U`.
    pub basis_compatible: bool,
}

pub fn quasipoint_correspondence(t: &FiniteTopology) -> QuasipointCorrespondence {
    let open = t.open_lattice();
    let opens = t.opens();
    let regular = t.regular_open_lattice();
    let source = enumerate_quasipoints(&open);
    let target = enumerate_quasipoints(&regular.lattice);
    let cc = |u: BitSet| t.pseudocomplement(t.pseudocomplement(u));
    let target_sets: Vec<BTreeSet<BitSet>> =
        target.iter().map(|q| q.members().iter().map(|&i| regular.sets[i]).collect()).collect();
    let image: Vec<Option<usize>> = source
        .iter()
        .map(|q| {
            let r: BTreeSet<BitSet> = q.members().iter().map(|&i| cc(opens[i])).collect();
            target_sets.iter().position(|s| *s == r)
        })
        .collect();
    let hit: BTreeSet<usize> = image.iter().flatten().copied().collect();
    let bijective = image.iter().all(Option::is_some) && hit.len() == source.len() && hit.len() == target.len();
    let basis_compatible = bijective
        && (0..opens.len()).all(|u| {
            let mapped: BTreeSet<usize> =
                (0..source.len()).filter(|&i| source[i].contains(u)).map(|i| image[i].unwrap()).collect();
            let ucc = cc(opens[u]);
            let expected: BTreeSet<usize> = (0..target.len()).filter(|&j| target_sets[j].contains(&ucc)).collect();
            mapped == expected
        });
    QuasipointCorrespondence {
        image,
        source_count: source.len(),
        target_count: target.len(),
        bijective,
        basis_compatible,
    }
}
