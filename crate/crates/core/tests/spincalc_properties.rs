use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spinlift::rootdata::{
    adjoint_weights, catalog, catalog_names, pairing, split_catalog_names, Vector, WeightLattice,
    WeightMultiset, DEFAULT_WEYL_BOUND,
};
use spinlift::spincalc::{
    choose_gauge, gauge_flip_test, involution, involution_with, lifts_to_spin, random_gauge, rho,
    spin_character, spin_character_with, TorsionCharacter,
};

fn multiset_strategy() -> impl Strategy<Value = WeightMultiset> {
    let names = catalog_names();
    (
        0..names.len(),
        any::<bool>(),
        any::<bool>(),
        prop::collection::vec((prop::collection::vec(-3i64..=3, 4), 1u64..=3), 1..4),
    )
        .prop_map(move |(i, cochar, weyl, gens)| {
            let d = catalog(&names[i]).unwrap();
            let gens: Vec<(Vector, u64)> = gens
                .into_iter()
                .map(|(w, k)| (w[..d.rank].to_vec(), k))
                .collect();
            let lattice = if cochar {
                WeightLattice::Cocharacters
            } else {
                WeightLattice::Characters
            };
            WeightMultiset::from_orbits(d, lattice, &gens, weyl.then_some(DEFAULT_WEYL_BOUND))
                .unwrap()
        })
}

/// Same datum and lattice as `m`, different weights.
fn second_multiset(m: &WeightMultiset, gens: &[(Vec<i64>, u64)]) -> WeightMultiset {
    let gens: Vec<(Vector, u64)> = gens
        .iter()
        .map(|(w, k)| (w[..m.rank()].to_vec(), *k))
        .collect();
    WeightMultiset::from_orbits(m.datum().clone(), m.lattice(), &gens, None).unwrap()
}

/// Sum of `m(w) w` over the lexicographically positive weights, computed
/// without the gauge machinery.
fn positive_sum(m: &WeightMultiset) -> Vector {
    let mut s = vec![0; m.rank()];
    for (w, k) in m.nonzero_weights() {
        if w.iter().find(|&&x| x != 0).copied().unwrap_or(0) > 0 {
            for (a, b) in s.iter_mut().zip(w) {
                *a += k as i64 * b;
            }
        }
    }
    s
}

fn proportional(a: &[i64], b: &[i64]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| a[i] * b[j] == a[j] * b[i]))
}

/// Multiplicity-blind criterion: half the sum over the weight set.
fn multiplicity_blind_lifts(m: &WeightMultiset) -> bool {
    let mut s = vec![0; m.rank()];
    for (w, _) in m.nonzero_weights() {
        if w.iter().find(|&&x| x != 0).copied().unwrap_or(0) > 0 {
            for (a, b) in s.iter_mut().zip(w) {
                *a += b;
            }
        }
    }
    s.iter().all(|x| x % 2 == 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lifting_criterion_matches_spin_character(m in multiset_strategy()) {
        prop_assert_eq!(lifts_to_spin(&m), spin_character(&m).character.is_trivial());
        prop_assert_eq!(
            spin_character(&m).character,
            TorsionCharacter::from_vector(&positive_sum(&m))
        );
    }

    #[test]
    fn doubling_always_lifts(m in multiset_strategy()) {
        let d = m.direct_sum(&m);
        prop_assert!(lifts_to_spin(&d));
        prop_assert!(spin_character(&d).character.is_trivial());
        prop_assert!(involution(&d).class.is_trivial());
    }

    #[test]
    fn characters_and_involutions_are_additive(
        m in multiset_strategy(),
        gens in prop::collection::vec((prop::collection::vec(-3i64..=3, 4), 1u64..=3), 1..3),
    ) {
        let n = second_multiset(&m, &gens);
        let sum = m.direct_sum(&n);
        prop_assert_eq!(
            spin_character(&sum).character,
            spin_character(&m).character.add(&spin_character(&n).character)
        );
        prop_assert_eq!(involution(&sum).class, involution(&m).class.add(&involution(&n).class));
    }

    #[test]
    fn random_gauges_change_nothing(m in multiset_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = choose_gauge(&m);
        for _ in 0..5 {
            let g = random_gauge(&m, &mut rng);
            prop_assert!(g.is_gauge_for(&m));
            prop_assert_eq!(rho(&m, &g).is_integral(), rho(&m, &base).is_integral());
            prop_assert_eq!(spin_character_with(&m, &g), spin_character_with(&m, &base));
            prop_assert_eq!(involution_with(&m, &g), involution_with(&m, &base));
        }
    }

    #[test]
    fn involution_is_galois_fixed(m in multiset_strategy()) {
        prop_assert!(involution(&m).galois_fixed);
    }

    /// For a Weyl-stable multiset, `<r, 2 rho>` can only be odd through
    /// weights proportional to the reflecting root.
    #[test]
    fn descent_obstruction_comes_from_root_lines(m in multiset_strategy()) {
        prop_assume!(m.is_weyl_stable(DEFAULT_WEYL_BOUND).unwrap());
        let e = spin_character(&m);
        let same: &[Vector] = match m.lattice() {
            WeightLattice::Characters => &m.datum().roots,
            WeightLattice::Cocharacters => &m.datum().coroots,
        };
        let mut expect_descends = true;
        for (r, a) in m.opposite_roots().iter().zip(same) {
            let mut parity = 0i64;
            for (w, k) in m.nonzero_weights() {
                if proportional(w, a) && w.iter().find(|&&x| x != 0).copied().unwrap_or(0) > 0 {
                    parity += k as i64 * pairing(r, w);
                }
            }
            prop_assert_eq!(i64::from(e.character.evaluate(r)), parity.rem_euclid(2));
            expect_descends &= parity % 2 == 0;
        }
        prop_assert_eq!(e.descends, expect_descends);
        prop_assert_eq!(involution(&m).central, expect_descends);
    }
}

#[test]
fn adjoint_involution_is_sum_of_positive_coroots() {
    for name in split_catalog_names() {
        let d = catalog(&name).unwrap();
        let z = involution(&adjoint_weights(&d));
        assert_eq!(
            z.class,
            TorsionCharacter::from_vector(&d.positive_coroot_sum()),
            "{name}"
        );
        assert!(z.central, "{name}");
    }
}

#[test]
fn doubled_adjoint_and_orthogonal_catalog_multisets_descend() {
    for name in catalog_names() {
        let d = catalog(&name).unwrap();
        let adj = adjoint_weights(&d);
        assert!(spin_character(&adj).descends, "{name}");
        assert!(spin_character(&adj.scaled(2)).descends, "{name}");
    }
}

#[test]
fn multiplicity_blind_criterion_is_wrong_on_the_doubled_tautological_multiset() {
    let m = WeightMultiset::new(
        catalog("PGL2").unwrap(),
        WeightLattice::Characters,
        [(vec![1], 1), (vec![0], 1), (vec![-1], 1)],
    )
    .unwrap();
    let doubled = m.direct_sum(&m);
    assert_eq!(m.weight_set(), doubled.weight_set());
    assert!(!lifts_to_spin(&m));
    assert!(lifts_to_spin(&doubled));
    assert_eq!(
        multiplicity_blind_lifts(&m),
        multiplicity_blind_lifts(&doubled)
    );
    assert!(!multiplicity_blind_lifts(&doubled));
}

#[test]
fn gauge_flip_report_on_small_multisets() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pair = WeightMultiset::new(
        catalog("GL2").unwrap(),
        WeightLattice::Characters,
        [(vec![1, -1], 1), (vec![-1, 1], 1)],
    )
    .unwrap();
    let r = gauge_flip_test(&pair, 2, &mut rng);
    assert!(r.all_invariant());
    assert_eq!(r.trials, 2);
}
