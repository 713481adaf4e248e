use std::sync::OnceLock;

use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spinlift::gcoh::small::groups_up_to_16;
use spinlift::gcoh::{classes_equal, h2, Cocycle2, FiniteGroup, GModule, GroupExtension, H2};

fn module(i: usize, m: u64) -> GModule {
    static GROUPS: OnceLock<Vec<(String, FiniteGroup)>> = OnceLock::new();
    let groups = GROUPS.get_or_init(groups_up_to_16);
    let (_, g) = &groups[i % groups.len()];
    GModule::trivial(g.clone(), &[m])
}

fn random_class(h: &H2, rng: &mut ChaCha8Rng) -> Cocycle2 {
    use rand::Rng;
    let coords: Vec<u64> = h
        .invariant_factors()
        .into_iter()
        .map(|d| rng.gen_range(0..d))
        .collect();
    h.representative(&coords)
}

#[test]
fn cyclic_h2_order_is_a_gcd() {
    // H^2(C_n, Z/m) with trivial action is Z/gcd(n, m)
    for n in 1..=8usize {
        for m in 1..=8u64 {
            let h = h2(&GModule::trivial(FiniteGroup::cyclic(n), &[m]), 64).unwrap();
            assert_eq!(h.order(), (n as u64).gcd(&m), "C{n}, Z/{m}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn class_map_is_additive_and_kills_coboundaries(i in 0usize..1000, m in 2u64..=4, seed in any::<u64>()) {
        let a = module(i, m);
        prop_assume!(a.group().order() * a.rank() <= 16);
        let h = h2(&a, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = |rng: &mut ChaCha8Rng| random_class(&h, rng);
        let (z1, z2) = (pick(&mut rng), pick(&mut rng));
        let f: Vec<_> = a.group().elements().map(|g| {
            use rand::Rng;
            if g == a.group().identity() { a.zero() } else { a.element(rng.gen_range(0..a.size())) }
        }).collect();
        let b = Cocycle2::coboundary(&a, &f);
        prop_assert!(b.is_cocycle());
        prop_assert!(h.class_of(&b).unwrap().iter().all(|&x| x == 0));
        let c1 = h.class_of(&z1).unwrap();
        let c2 = h.class_of(&z2).unwrap();
        let sum: Vec<u64> = c1.iter().zip(&c2).zip(h.invariant_factors())
            .map(|((x, y), d)| (x + y) % d).collect();
        prop_assert_eq!(h.class_of(&z1.add(&z2).add(&b)).unwrap(), sum);
        prop_assert!(classes_equal(&z1.add(&b), &z1).unwrap().is_some());
    }

    #[test]
    fn extensions_give_back_their_class(i in 0usize..1000, m in 2u64..=4, seed in any::<u64>()) {
        let a = module(i, m);
        prop_assume!(a.group().order() * a.rank() <= 16);
        let h = h2(&a, 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = &random_class(&h, &mut rng);
        let e = GroupExtension::from_cocycle(z, 64).unwrap();
        prop_assert_eq!(e.total().order(), a.group().order() * a.size());
        let back = e.cocycle(&e.random_section(&mut rng)).unwrap();
        prop_assert!(classes_equal(&back, z).unwrap().is_some());
        prop_assert_eq!(e.splitting().is_some(), h.class_of(z).unwrap().iter().all(|&x| x == 0));
    }
}
