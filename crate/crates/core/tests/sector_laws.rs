use proptest::prelude::*;
use qsheaf::hilbert::{c, op_norm};
use qsheaf::quantum::spectral_family_of;
use qsheaf::random;
use qsheaf::sector::{
    hermitian_from_classical, orthogonalize_representation, sector_bridge_family, state_measure, BooleanSector,
    SectorOperator,
};
use qsheaf::{BitSet, Tolerances};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orthogonal_representation_keeps_the_operator(seed in any::<u64>(), n in 1usize..=6, terms in 1usize..=4) {
        let t = Tolerances::default();
        let mut rng = random::stream(seed, 1);
        let sector = BooleanSector::from_basis(random::unitary(&mut rng, n), &t).unwrap();
        let raw: Vec<_> = (0..terms)
            .map(|_| (random::complex_gaussian(&mut rng), random::subset(&mut rng, n).into_iter().collect::<BitSet>()))
            .collect();
        let cells = orthogonalize_representation(n, &raw);
        for (i, a) in cells.iter().enumerate() {
            for b in &cells[i + 1..] {
                prop_assert!(a.1.intersection(b.1).is_empty());
            }
        }
        let x = SectorOperator::from_terms(&sector, &raw).to_matrix();
        let y = SectorOperator::from_terms(&sector, &cells).to_matrix();
        prop_assert!(op_norm(&(x - y)) < 1e-12);
    }

    #[test]
    fn state_measures_sum_to_the_trace(seed in any::<u64>(), n in 1usize..=6) {
        let t = Tolerances::default();
        let mut rng = random::stream(seed, 2);
        let sector = BooleanSector::from_basis(random::unitary(&mut rng, n), &t).unwrap();
        let rank = 1 + (seed as usize) % n;
        let rho = random::density(&mut rng, n, rank);
        let mu = state_measure(&rho, &sector, &t).unwrap();
        prop_assert!((mu.total() - rho.trace().re).abs() < 1e-12);
        prop_assert!(mu.weights.iter().all(|&w| w >= -1e-12));
    }

    #[test]
    fn sector_of_operator_contains_its_family(seed in any::<u64>(), n in 1usize..=6) {
        let t = Tolerances::default();
        let mut rng = random::stream(seed, 3);
        let a = random::degenerate_hermitian(&mut rng, n);
        let sector = BooleanSector::of_operator(&a, &t).unwrap();
        let sigma = spectral_family_of(&a, &t).unwrap();
        let hat = sector_bridge_family(&sigma, &sector, &t).unwrap();
        let back = hermitian_from_classical(&hat, &sector).unwrap().to_matrix();
        prop_assert!(op_norm(&(back - &a)) < 1e-8);
    }
}

#[test]
fn identity_and_projector_tables() {
    let s = BooleanSector::standard(3);
    let id = SectorOperator::identity(&s);
    assert!(id.coefficients().iter().all(|&z| z == c(1.0, 0.0)));
    let p = SectorOperator::projector(&s, BitSet(0b101));
    assert_eq!(p.product(&p).coefficients(), p.coefficients());
    assert_eq!(p.norm(), 1.0);
}
