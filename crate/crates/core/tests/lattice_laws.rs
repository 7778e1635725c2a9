use proptest::prelude::*;
use qsheaf::lattice::{enumerate_points, enumerate_quasipoints, stonean_space, verify_basis_laws, verify_clopen_basis};
use qsheaf::oracle::{maximal_filter_bases, points_exhaustive, stalk_quotient};
use qsheaf::presheaf::{check_presheaf_axioms, stalk};
use qsheaf::{BitSet, FiniteLattice, Presheaf};

/// Closes a family of subsets of `0..n` under union and intersection, with
/// `∅` and the full set added; the result is a distributive lattice of sets.
fn ring_of_sets(n: usize, seeds: &[u64]) -> FiniteLattice {
    let full = BitSet::full(n);
    let mut sets: Vec<BitSet> = vec![BitSet::empty(), full];
    sets.extend(seeds.iter().map(|&s| BitSet(s).intersection(full)));
    loop {
        let mut grown = sets.clone();
        for a in &sets {
            for b in &sets {
                for c in [a.union(*b), a.intersection(*b)] {
                    if !grown.contains(&c) {
                        grown.push(c);
                    }
                }
            }
        }
        if grown.len() == sets.len() {
            break;
        }
        sets = grown;
    }
    sets.sort();
    sets.dedup();
    let names = sets.iter().map(|s| format!("{:?}", s.to_vec())).collect();
    FiniteLattice::from_sets(names, &sets).unwrap()
}

fn small_lattice() -> impl Strategy<Value = FiniteLattice> {
    (1usize..=4, prop::collection::vec(any::<u64>(), 0..4))
        .prop_map(|(n, seeds)| ring_of_sets(n, &seeds))
        .prop_filter("oracle size", |l| l.len() <= 16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn meet_and_join_satisfy_lattice_laws(l in small_lattice()) {
        let n = l.len();
        for a in 0..n {
            prop_assert_eq!(l.meet(a, a), a);
            prop_assert_eq!(l.join(a, a), a);
            for b in 0..n {
                prop_assert_eq!(l.meet(a, b), l.meet(b, a));
                prop_assert_eq!(l.join(a, l.meet(a, b)), a);
                prop_assert_eq!(l.meet(a, l.join(a, b)), a);
                prop_assert_eq!(l.leq(a, b), l.meet(a, b) == a);
                for c in 0..n {
                    prop_assert_eq!(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
                }
            }
        }
        prop_assert!(l.is_distributive());
    }

    #[test]
    fn quasipoints_match_maximal_filter_bases(l in small_lattice()) {
        let mut fast: Vec<Vec<usize>> = enumerate_quasipoints(&l)
            .iter()
            .map(|q| { let mut m = q.members().to_vec(); m.sort(); m })
            .collect();
        fast.sort();
        prop_assert_eq!(fast, maximal_filter_bases(&l));
    }

    #[test]
    fn stonean_laws_hold(l in small_lattice()) {
        let space = stonean_space(&l);
        prop_assert!(verify_basis_laws(&l, &space));
        prop_assert!(verify_clopen_basis(&space));
    }

    #[test]
    fn points_match_exhaustive_search(l in small_lattice().prop_filter("12", |l| l.len() <= 12)) {
        let mut fast: Vec<Vec<usize>> = enumerate_points(&l, 24)
            .unwrap()
            .iter()
            .map(|p| { let mut m = p.members().to_vec(); m.sort(); m })
            .collect();
        fast.sort();
        prop_assert_eq!(fast, points_exhaustive(&l));
    }

    #[test]
    fn stalks_match_the_quotient(l in small_lattice().prop_filter("8", |l| l.len() <= 8), k in 1usize..=3) {
        let p = Presheaf::atom_functions(l.clone(), k);
        prop_assert!(check_presheaf_axioms(&p));
        for q in enumerate_quasipoints(&l) {
            prop_assert_eq!(stalk(&p, &q).len(), stalk_quotient(&p, q.members()).len());
        }
    }
}

#[test]
fn non_distributive_fixtures() {
    for l in [FiniteLattice::m3(), FiniteLattice::n5()] {
        assert!(!l.is_distributive());
        assert!(l.first_distributivity_failure().is_some());
        assert_eq!(enumerate_quasipoints(&l).len(), l.atoms().len());
    }
}

#[test]
fn points_of_powersets_are_indexed_by_elements() {
    for n in 1..=4 {
        let l = FiniteLattice::powerset(n);
        let gens: Vec<usize> = enumerate_points(&l, 24).unwrap().iter().map(|p| p.generator()).collect();
        let mut atoms = l.atoms();
        let mut g = gens.clone();
        atoms.sort();
        g.sort();
        assert_eq!(g, atoms);
    }
}
