use proptest::prelude::*;

use spinlift::rootdata::{
    catalog, catalog_names, mat_vec, split_catalog_names, WeightLattice, WeightMultiset,
};

/// Weyl group orders of the catalog's split groups, from the type.
fn weyl_order(name: &str) -> usize {
    let fact = |n: usize| (1..=n).product::<usize>();
    let num = |p: &str| name.strip_prefix(p).and_then(|s| s.parse::<usize>().ok());
    if name == "G2" {
        12
    } else if let Some(n) = num("PGL").or(num("GL")).or(num("SL")) {
        fact(n)
    } else if let Some(m) = num("Spin").or(num("SO")) {
        let r = m / 2;
        if m == 2 {
            1
        } else if m % 2 == 1 {
            (1 << r) * fact(r)
        } else {
            (1 << (r - 1)) * fact(r)
        }
    } else if let Some(m) = num("Sp") {
        (1 << (m / 2)) * fact(m / 2)
    } else {
        unreachable!("{name}")
    }
}

#[test]
fn catalog_is_valid_and_dual_pairs_swap_pi1_and_center() {
    for name in catalog_names() {
        let d = catalog(&name).unwrap();
        assert!(
            d.validate().is_valid(),
            "{name}: {:?}",
            d.validate().failures
        );
        let dd = d.dualize();
        assert_eq!(dd.dualize(), d, "{name}");
        assert_eq!(
            dd.fundamental_group().invariant_factors(),
            d.center_characters().invariant_factors(),
            "{name}"
        );
    }
}

#[test]
fn weyl_group_orders_match_the_types() {
    for name in split_catalog_names() {
        let d = catalog(&name).unwrap();
        let w = d.weyl_group(100_000).unwrap();
        assert_eq!(w.len(), weyl_order(&name), "{name}");
        for g in &w {
            for r in &d.roots {
                assert!(d.root_index(&mat_vec(g, r)).is_some(), "{name}");
            }
        }
    }
}

#[test]
fn positive_roots_are_half_and_sign_coherent() {
    for name in catalog_names() {
        let d = catalog(&name).unwrap();
        assert_eq!(2 * d.positive_root_indices().len(), d.num_roots(), "{name}");
        for r in &d.roots {
            let c = d.simple_coefficients(r).unwrap();
            assert!(
                c.iter().all(|&x| x >= 0) || c.iter().all(|&x| x <= 0),
                "{name}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn orbit_closures_are_weyl_stable(
        i in 0usize..1000,
        w in prop::collection::vec(-3i64..=3, 8),
        cochar in any::<bool>(),
    ) {
        let names = catalog_names();
        let name = &names[i % names.len()];
        let d = catalog(name).unwrap();
        prop_assume!(d.rank <= 4);
        let lattice = if cochar { WeightLattice::Cocharacters } else { WeightLattice::Characters };
        let w: Vec<i64> = w.into_iter().take(d.rank).collect();
        let m = WeightMultiset::from_orbits(d, lattice, &[(w, 1)], Some(10_000)).unwrap();
        prop_assert!(m.is_weyl_stable(10_000).unwrap());
        for (v, k) in m.nonzero_weights() {
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            prop_assert_eq!(m.multiplicity(&neg), k);
        }
    }
}
