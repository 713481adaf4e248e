use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spinlift::cliffpin::{rep_catalog, CatalogRep, OrthRep, QuadSpace, Rat, RatMatrix};
use spinlift::gcoh::{classes_equal, cup1, FiniteGroup};
use spinlift::rootdata::{catalog, WeightLattice, WeightMultiset};
use spinlift::spincalc::lifts_to_spin;

fn same_group_pairs() -> Vec<(CatalogRep, CatalogRep)> {
    let cat = rep_catalog();
    let mut out = Vec::new();
    for a in &cat {
        for b in &cat {
            if a.group == b.group {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

fn whitney_holds(r: &OrthRep, s: &OrthRep) -> bool {
    let sum = r.direct_sum(s).unwrap().sw2().unwrap().cocycle;
    let expected = r
        .sw2()
        .unwrap()
        .cocycle
        .add(&cup1(r.group(), &r.sw1(), &s.sw1()).unwrap())
        .add(&s.sw2().unwrap().cocycle);
    classes_equal(&sum, &expected).unwrap().is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn whitney_formula(i in 0usize..1000) {
        let pairs = same_group_pairs();
        let (a, b) = &pairs[i % pairs.len()];
        prop_assert!(whitney_holds(&a.rep, &b.rep), "{} + {}", a.name, b.name);
    }

    #[test]
    fn decomposition_choice_does_not_matter(i in 0usize..1000, seed in any::<u64>()) {
        let pairs = same_group_pairs();
        let (a, b) = &pairs[i % pairs.len()];
        let rep = a.rep.direct_sum(&b.rep).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fixed = rep.sw2().unwrap().cocycle;
        let random = rep.sw2_random(&mut rng).unwrap().cocycle;
        prop_assert!(classes_equal(&fixed, &random).unwrap().is_some());
    }

    #[test]
    fn adding_a_trivial_summand_is_stable(i in 0usize..1000) {
        let cat = rep_catalog();
        let r = &cat[i % cat.len()].rep;
        let n = r.group().order();
        let trivial = OrthRep::from_character(r.group(), &vec![0; n]).unwrap();
        let plus = r.direct_sum(&trivial).unwrap();
        let a = r.sw2().unwrap().cocycle;
        let b = plus.sw2().unwrap().cocycle;
        prop_assert!(classes_equal(&a, &b).unwrap().is_some());
    }

    #[test]
    fn pin_cocycles_are_normalized_cocycles(i in 0usize..1000, seed in any::<u64>()) {
        let cat = rep_catalog();
        let r = &cat[i % cat.len()].rep;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = r.sw2_random(&mut rng).unwrap().cocycle;
        prop_assert!(z.is_cocycle());
        let g = r.group();
        for x in g.elements() {
            prop_assert_eq!(z.value(g.identity(), x), &vec![0]);
            prop_assert_eq!(z.value(x, g.identity()), &vec![0]);
        }
    }
}

/// `C_n` acting on the plane through rotation number `k`, `n` in {2, 3, 4, 6}.
fn rotation_rep(n: usize, k: usize) -> OrthRep {
    let (space, gen) = match n {
        2 => (
            QuadSpace::standard(2).unwrap(),
            RatMatrix::diagonal(&[-1, -1]),
        ),
        4 => (
            QuadSpace::standard(2).unwrap(),
            RatMatrix::from_ints(&[vec![0, -1], vec![1, 0]]),
        ),
        3 | 6 => {
            let a2 = QuadSpace::new(RatMatrix::from_ints(&[vec![2, -1], vec![-1, 2]])).unwrap();
            let rot6 = RatMatrix::from_ints(&[vec![1, -1], vec![1, 0]]);
            (
                a2,
                if n == 6 {
                    rot6.clone()
                } else {
                    rot6.mul(&rot6)
                },
            )
        }
        _ => unreachable!(),
    };
    let power = (0..k).fold(RatMatrix::identity(2), |acc, _| acc.mul(&gen));
    OrthRep::from_generators(&FiniteGroup::cyclic(n), &space, &[1], &[power]).unwrap()
}

/// The torus of `SO2` with the weights `{k, -k}` of the rotation number `k`.
fn rank_one_multiset(k: i64) -> WeightMultiset {
    let entries = if k == 0 {
        vec![(vec![0], 2)]
    } else {
        vec![(vec![k], 1), (vec![-k], 1)]
    };
    WeightMultiset::new(catalog("GL1").unwrap(), WeightLattice::Characters, entries).unwrap()
}

#[test]
fn cyclic_rotations_agree_with_spincalc_for_even_order() {
    for n in [2usize, 4, 6] {
        for k in 0..n {
            let w2 = rotation_rep(n, k).sw2().unwrap().nontrivial;
            let lifts = lifts_to_spin(&rank_one_multiset(k as i64));
            assert_eq!(w2, !lifts, "C{n}, rotation number {k}");
        }
    }
}

#[test]
fn odd_order_rotations_lift_although_the_torus_does_not() {
    // H^2(C3, Z/2) = 0, while the weights {1, -1} of SO2 do not lift
    let rep = rotation_rep(3, 1);
    assert!(!rep.sw2().unwrap().nontrivial);
    assert!(!lifts_to_spin(&rank_one_multiset(1)));
}

#[test]
fn pin_lift_examples() {
    use spinlift::cliffpin::pin_lift;
    let s = QuadSpace::standard(2).unwrap();
    let id = pin_lift(&RatMatrix::identity(2), &s).unwrap();
    assert!(id.vectors.is_empty());
    assert_eq!(id.element.as_scalar().unwrap(), Rat::from_integer(1.into()));
    let refl = pin_lift(&RatMatrix::diagonal(&[-1, 1]), &s).unwrap();
    assert_eq!(refl.spinor_norm.0, Rat::from_integer(1.into()));
    let rot = pin_lift(&RatMatrix::from_ints(&[vec![0, -1], vec![1, 0]]), &s).unwrap();
    assert_eq!(rot.spinor_norm.0, Rat::from_integer(2.into()));
}
