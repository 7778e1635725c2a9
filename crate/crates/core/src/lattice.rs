//! Finite lattices as explicit data: order, meet/join tables, filters,
//! points, quasipoints and the Stonean space with its clopen basis.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::bitset::BitSet;

/// Default size cap for [`enumerate_points`].
pub const DEFAULT_POINT_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice has no elements")]
    Empty,
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}` in order relation")]
    UnknownElement(String),
    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("not a lattice: `{a}` and `{b}` have no {op}")]
    NotALattice { a: String, b: String, op: &'static str },
    #[error("lattice has {size} elements, above the cap of {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("invalid filter base: {0}")]
    NotAFilterBase(String),
}

/// A finite lattice given by its elements and order relation, with
/// precomputed meet and join tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    zero: usize,
    one: usize,
}

impl FiniteLattice {
    /// Builds a lattice from element names and `a ≤ b` pairs.
    ///
    /// The pair list may be a covering relation: reflexivity and transitivity
    /// are closed over before antisymmetry is checked.
    pub fn from_order<S: AsRef<str>>(
        elements: &[S],
        leq_pairs: &[(S, S)],
    ) -> Result<Self, LatticeError> {
        if elements.is_empty() {
            return Err(LatticeError::Empty);
        }
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(LatticeError::DuplicateElement(n.clone()));
            }
        }
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in leq_pairs {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| LatticeError::UnknownElement(a.as_ref().to_string()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| LatticeError::UnknownElement(b.as_ref().to_string()))?;
            leq[ia][ib] = true;
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::from_leq_matrix(names, leq)
    }

    /// Builds a lattice from a complete order matrix (`leq[i][j]` iff `i ≤ j`).
    /// The matrix must already be reflexive and transitive.
    pub fn from_leq_matrix(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        let n = names.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(LatticeError::NotAPartialOrder(format!(
                    "`{}` ≤ `{}` missing (reflexivity)",
                    names[i], names[i]
                )));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(LatticeError::NotAPartialOrder(format!(
                        "`{}` ≤ `{}` and `{}` ≤ `{}` (antisymmetry)",
                        names[i], names[j], names[j], names[i]
                    )));
                }
                if leq[i][j] {
                    for k in 0..n {
                        if leq[j][k] && !leq[i][k] {
                            return Err(LatticeError::NotAPartialOrder(format!(
                                "`{}` ≤ `{}` ≤ `{}` but not `{}` ≤ `{}` (transitivity)",
                                names[i], names[j], names[k], names[i], names[k]
                            )));
                        }
                    }
                }
            }
        }
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in a..n {
                let m = extremal_bound(&leq, a, b, false).ok_or_else(|| LatticeError::NotALattice {
                    a: names[a].clone(),
                    b: names[b].clone(),
                    op: "meet",
                })?;
                let j = extremal_bound(&leq, a, b, true).ok_or_else(|| LatticeError::NotALattice {
                    a: names[a].clone(),
                    b: names[b].clone(),
                    op: "join",
                })?;
                meet[a][b] = m;
                meet[b][a] = m;
                join[a][b] = j;
                join[b][a] = j;
            }
        }
        let zero = (1..n).fold(0, |acc, i| meet[acc][i]);
        let one = (1..n).fold(0, |acc, i| join[acc][i]);
        Ok(FiniteLattice { names, leq, meet, join, zero, one })
    }

    /// The lattice of the given sets ordered by inclusion. The family must be
    /// closed under whatever operations make it a lattice; meets and joins are
    /// computed from the inclusion order, not from set operations.
    pub fn from_sets(names: Vec<String>, sets: &[BitSet]) -> Result<Self, LatticeError> {
        let n = sets.len();
        let leq = (0..n)
            .map(|i| (0..n).map(|j| sets[i].is_subset(sets[j])).collect())
            .collect();
        Self::from_leq_matrix(names, leq)
    }

    /// The chain `0 < c1 < ... < 1` with `n` elements (n ≥ 1).
    pub fn chain(n: usize) -> Self {
        let names: Vec<String> = (0..n)
            .map(|i| match i {
                0 => "0".to_string(),
                i if i + 1 == n => "1".to_string(),
                i => format!("c{i}"),
            })
            .collect();
        let leq = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        Self::from_leq_matrix(names, leq).expect("chain is a lattice")
    }

    /// The powerset of `{1..n}`, elements named like `{1,3}` and `∅`.
    pub fn powerset(n: usize) -> Self {
        let sets: Vec<BitSet> = (0..(1u64 << n)).map(BitSet).collect();
        let names = sets.iter().map(|s| set_name(*s, |i| (i + 1).to_string())).collect();
        Self::from_sets(names, &sets).expect("powerset is a lattice")
    }

    /// The diamond `M_3`: `0 < a, b, c < 1` with `a, b, c` pairwise incomparable.
    pub fn m3() -> Self {
        Self::from_order(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .expect("M3 is a lattice")
    }

    /// The pentagon `N_5`: `0 < a < c < 1` and `0 < b < 1`.
    pub fn n5() -> Self {
        Self::from_order(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
        )
        .expect("N5 is a lattice")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    /// Join of an arbitrary family; the empty family joins to 0.
    pub fn join_all<I: IntoIterator<Item = usize>>(&self, family: I) -> usize {
        family.into_iter().fold(self.zero, |acc, x| self.join[acc][x])
    }

    /// Meet of an arbitrary family; the empty family meets to 1.
    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, family: I) -> usize {
        family.into_iter().fold(self.one, |acc, x| self.meet[acc][x])
    }

    /// `↑a`, sorted.
    pub fn up_set(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.leq[a][b]).collect()
    }

    /// Minimal nonzero elements, sorted by name.
    pub fn atoms(&self) -> Vec<usize> {
        let mut atoms: Vec<usize> = (0..self.len())
            .filter(|&a| a != self.zero)
            .filter(|&a| (0..self.len()).all(|b| b == self.zero || b == a || !self.leq[b][a]))
            .collect();
        atoms.sort_by(|&x, &y| self.names[x].cmp(&self.names[y]));
        atoms
    }

    /// Both distributive laws on every triple.
    pub fn is_distributive(&self) -> bool {
        self.first_distributivity_failure().is_none()
    }

    /// A triple `(a, b, c)` violating one of the distributive laws, if any.
    pub fn first_distributivity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let m1 = self.meet(a, self.join(b, c));
                    let m2 = self.join(self.meet(a, b), self.meet(a, c));
                    let j1 = self.join(a, self.meet(b, c));
                    let j2 = self.meet(self.join(a, b), self.join(a, c));
                    if m1 != m2 || j1 != j2 {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// The complement map if the lattice is Boolean (distributive and
    /// complemented); `None` otherwise.
    pub fn is_boolean(&self) -> Option<Vec<usize>> {
        if !self.is_distributive() {
            return None;
        }
        (0..self.len())
            .map(|a| {
                (0..self.len())
                    .find(|&b| self.meet(a, b) == self.zero && self.join(a, b) == self.one)
            })
            .collect()
    }

    /// Whether `members` is closed upward and under binary meets, and avoids 0.
    pub fn is_filter(&self, members: &[usize]) -> bool {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        !set.is_empty()
            && !set.contains(&self.zero)
            && set.iter().all(|&a| (0..self.len()).all(|b| !self.leq(a, b) || set.contains(&b)))
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.meet(a, b))))
    }
}

fn extremal_bound(leq: &[Vec<bool>], a: usize, b: usize, upper: bool) -> Option<usize> {
    let n = leq.len();
    let rel = |x: usize, y: usize| if upper { leq[x][y] } else { leq[y][x] };
    let bounds: Vec<usize> = (0..n).filter(|&x| rel(a, x) && rel(b, x)).collect();
    bounds.iter().copied().find(|&m| bounds.iter().all(|&x| rel(m, x)))
}

/// Formats a subset like `{1,3}`; the empty set is `∅`.
pub fn set_name(s: BitSet, label: impl Fn(usize) -> String) -> String {
    if s.is_empty() {
        "∅".to_string()
    } else {
        format!("{{{}}}", s.iter().map(label).collect::<Vec<_>>().join(","))
    }
}

/// A nonempty 0-free downward-directed subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterBase {
    members: Vec<usize>,
}

impl FilterBase {
    pub fn new(lattice: &FiniteLattice, members: &[usize]) -> Result<Self, LatticeError> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(LatticeError::NotAFilterBase("empty".into()));
        }
        if members.contains(&lattice.zero()) {
            return Err(LatticeError::NotAFilterBase("contains 0".into()));
        }
        for &a in &members {
            for &b in &members {
                let m = lattice.meet(a, b);
                if !members.iter().any(|&c| lattice.leq(c, m)) {
                    return Err(LatticeError::NotAFilterBase(format!(
                        "nothing below `{}` ∧ `{}`",
                        lattice.name(a),
                        lattice.name(b)
                    )));
                }
            }
        }
        Ok(FilterBase { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

/// A maximal filter base. In a finite lattice this is `↑a` for an atom `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quasipoint {
    atom: usize,
    members: Vec<usize>,
}

impl Quasipoint {
    /// The principal filter at `atom`.
    pub fn at_atom(lattice: &FiniteLattice, atom: usize) -> Self {
        Quasipoint { atom, members: lattice.up_set(atom) }
    }

    pub fn atom(&self) -> usize {
        self.atom
    }

    /// The minimum element of the quasipoint (its generating atom).
    pub fn minimum(&self) -> usize {
        self.atom
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }
}

/// A completely join-prime filter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    generator: usize,
    members: Vec<usize>,
}

impl Point {
    pub fn generator(&self) -> usize {
        self.generator
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

/// All points of `lattice`, sorted by generator name.
///
/// Every filter of a finite lattice is principal, so candidates are `↑c` for
/// `c ≠ 0`. Condition (4) over all subfamilies is equivalent to: the join of
/// everything outside `↑c` is not above `c` (any family avoiding the filter
/// joins below that element, and the complement itself is such a family).
pub fn enumerate_points(lattice: &FiniteLattice, cap: usize) -> Result<Vec<Point>, LatticeError> {
    if lattice.len() > cap {
        return Err(LatticeError::SizeCapExceeded { size: lattice.len(), cap });
    }
    let mut points: Vec<Point> = (0..lattice.len())
        .filter(|&c| c != lattice.zero())
        .filter(|&c| {
            let outside = (0..lattice.len()).filter(|&x| !lattice.leq(c, x));
            !lattice.leq(c, lattice.join_all(outside))
        })
        .map(|c| Point { generator: c, members: lattice.up_set(c) })
        .collect();
    points.sort_by(|p, q| lattice.name(p.generator).cmp(lattice.name(q.generator)));
    Ok(points)
}

/// All quasipoints, one per atom, sorted by atom name.
pub fn enumerate_quasipoints(lattice: &FiniteLattice) -> Vec<Quasipoint> {
    lattice.atoms().into_iter().map(|a| Quasipoint::at_atom(lattice, a)).collect()
}

/// The Stonean space `Q(L)` with basis sets `Q_U = {𝔅 : U ∈ 𝔅}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoneanSpace {
    quasipoints: Vec<Quasipoint>,
    basis: Vec<BTreeSet<usize>>,
}

impl StoneanSpace {
    pub fn quasipoints(&self) -> &[Quasipoint] {
        &self.quasipoints
    }

    /// `Q_U` as indices into [`Self::quasipoints`].
    pub fn basis(&self, element: usize) -> &BTreeSet<usize> {
        &self.basis[element]
    }

    pub fn basis_sets(&self) -> &[BTreeSet<usize>] {
        &self.basis
    }

    /// Index of the quasipoint generated by `atom`.
    pub fn quasipoint_at(&self, atom: usize) -> Option<usize> {
        self.quasipoints.iter().position(|q| q.atom() == atom)
    }
}

pub fn stonean_space(lattice: &FiniteLattice) -> StoneanSpace {
    let quasipoints = enumerate_quasipoints(lattice);
    let basis = (0..lattice.len())
        .map(|u| {
            quasipoints
                .iter()
                .enumerate()
                .filter(|(_, q)| q.contains(u))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    StoneanSpace { quasipoints, basis }
}

/// True iff the complement of every basis set is a union of basis sets.
pub fn verify_clopen_basis(space: &StoneanSpace) -> bool {
    let all: BTreeSet<usize> = (0..space.quasipoints.len()).collect();
    space.basis.iter().all(|b| {
        let complement: BTreeSet<usize> = all.difference(b).copied().collect();
        let covered: BTreeSet<usize> = space
            .basis
            .iter()
            .filter(|c| c.is_subset(&complement))
            .flat_map(|c| c.iter().copied())
            .collect();
        covered == complement
    })
}

/// Checks `Q_{U∧V} = Q_U ∩ Q_V` for all pairs, `Q_0 = ∅` and `Q_1 = Q(L)`.
pub fn verify_basis_laws(lattice: &FiniteLattice, space: &StoneanSpace) -> bool {
    let n = lattice.len();
    let meets = (0..n).all(|u| {
        (0..n).all(|v| {
            let lhs = space.basis(lattice.meet(u, v));
            let rhs: BTreeSet<usize> = space.basis(u).intersection(space.basis(v)).copied().collect();
            *lhs == rhs
        })
    });
    meets
        && space.basis(lattice.zero()).is_empty()
        && space.basis(lattice.one()).len() == space.quasipoints.len()
}
