//! Exhaustive reference enumerators.
//!
//! These are exponential and exist only to cross-check the fast paths in
//! [`crate::lattice`] and [`crate::presheaf`]. Keep lattices small (≤ 16
//! elements for filter bases, ≤ 10 for points).

use crate::lattice::FiniteLattice;
use crate::presheaf::{Presheaf, Section};

fn members(mask: u32, n: usize) -> impl Iterator<Item = usize> {
    (0..n).filter(move |i| mask & (1 << i) != 0)
}

fn is_filter_base(l: &FiniteLattice, mask: u32) -> bool {
    let n = l.len();
    if mask == 0 || mask & (1 << l.zero()) != 0 {
        return false;
    }
    members(mask, n).all(|a| {
        members(mask, n).all(|b| {
            let m = l.meet(a, b);
            members(mask, n).any(|c| l.leq(c, m))
        })
    })
}

/// All maximal filter bases, each as a sorted member list, sorted.
///
/// A filter base `B` is non-maximal iff `B ∪ {x}` is a filter base for some
/// `x ∉ B`: if `B ⊊ B'`, the minimum `m` of the finite directed set `B'`
/// (or any `x ∈ B' \ B` when `m ∈ B`) extends `B` by one element.
pub fn maximal_filter_bases(l: &FiniteLattice) -> Vec<Vec<usize>> {
    let n = l.len();
    assert!(n <= 20, "exhaustive filter-base search is limited to 20 elements");
    let mut out: Vec<Vec<usize>> = (1u32..(1u32 << n))
        .filter(|&mask| is_filter_base(l, mask))
        .filter(|&mask| {
            (0..n)
                .filter(|&x| mask & (1 << x) == 0)
                .all(|x| !is_filter_base(l, mask | (1 << x)))
        })
        .map(|mask| members(mask, n).collect())
        .collect();
    out.sort();
    out
}

/// All subsets satisfying the point axioms, with condition (4) checked
/// literally over every subfamily of the lattice.
pub fn points_exhaustive(l: &FiniteLattice) -> Vec<Vec<usize>> {
    let n = l.len();
    assert!(n <= 12, "exhaustive point search is limited to 12 elements");
    let all = 1u32 << n;
    let mut out = Vec::new();
    for p in 1..all {
        if p & (1 << l.zero()) != 0 {
            continue;
        }
        let meet_closed = members(p, n).all(|a| members(p, n).all(|b| p & (1 << l.meet(a, b)) != 0));
        let up_closed = members(p, n).all(|a| (0..n).all(|b| !l.leq(a, b) || p & (1 << b) != 0));
        if !(meet_closed && up_closed) {
            continue;
        }
        let prime = (0..all).all(|family| {
            let j = l.join_all(members(family, n));
            p & (1 << j) == 0 || family & p != 0
        });
        if prime {
            out.push(members(p, n).collect());
        }
    }
    out.sort();
    out
}

/// Number of classes of `⊔_{V ∈ 𝔅} S(V)` under `∼_𝔅`, computed with an
/// explicit union-find over all pairs, and a witness representative per class.
pub fn stalk_quotient(p: &Presheaf, quasipoint: &[usize]) -> Vec<Vec<(usize, Section)>> {
    let l = p.lattice();
    let nodes: Vec<(usize, Section)> = quasipoint
        .iter()
        .flat_map(|&v| (0..p.sections(v).len()).map(move |s| (v, s)))
        .collect();
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let (u, f) = nodes[i];
            let (v, g) = nodes[j];
            let m = l.meet(u, v);
            let equivalent = quasipoint
                .iter()
                .filter(|&&w| l.leq(w, m))
                .any(|&w| p.restrict(w, u, f) == p.restrict(w, v, g));
            if equivalent {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<(usize, Section)>> = Default::default();
    for i in 0..nodes.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(nodes[i]);
    }
    classes.into_values().collect()
}
