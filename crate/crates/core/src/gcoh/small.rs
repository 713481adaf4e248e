//! Named small groups, including one representative of each isomorphism
//! class of order at most 16.

use super::{cyclic_action, semidirect, FiniteGroup};

/// `Z/m x| Z/n` with the generator of `Z/n` acting by `x -> x^r`.
pub fn metacyclic(m: usize, n: usize, r: usize) -> FiniteGroup {
    let cm = FiniteGroup::cyclic(m);
    let phi: Vec<usize> = (0..m).map(|x| x * r % m).collect();
    let action = cyclic_action(&cm, &phi, n);
    semidirect(&cm, &FiniteGroup::cyclic(n), &action)
        .expect("x -> x^r has order dividing n")
        .group
}

/// Dihedral group of order `2n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    metacyclic(n, 2, n - 1)
}

/// Dicyclic group of order `4m`: `<x, y | x^{2m}, y^2 = x^m, y x y^{-1} = x^{-1}>`,
/// with `x^k y^s` at index `2m s + k`.
pub fn dicyclic(m: usize) -> FiniteGroup {
    let n = 2 * m;
    let (g, _) = FiniteGroup::generated_by(
        (0usize, 0usize),
        &[(1, 0), (0, 1)],
        |&(k1, s1), &(k2, s2)| match (s1, s2) {
            (0, _) => ((k1 + k2) % n, s2),
            (_, 0) => ((k1 + n - k2) % n, 1),
            _ => ((k1 + n - k2 + m) % n, 0),
        },
        4 * m,
    )
    .expect("dicyclic group has order 4m");
    g
}

pub fn quaternion() -> FiniteGroup {
    dicyclic(2)
}

pub fn alternating4() -> FiniteGroup {
    FiniteGroup::from_permutations(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]], 12).expect("A4")
}

/// `C4 o D4`, generated by the Pauli matrices `X`, `Z` and `iI` over the
/// Gaussian integers.
pub fn pauli() -> FiniteGroup {
    type M = [(i64, i64); 4];
    fn mul(a: &M, b: &M) -> M {
        let c = |x: (i64, i64), y: (i64, i64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
        let add = |x: (i64, i64), y: (i64, i64)| (x.0 + y.0, x.1 + y.1);
        [
            add(c(a[0], b[0]), c(a[1], b[2])),
            add(c(a[0], b[1]), c(a[1], b[3])),
            add(c(a[2], b[0]), c(a[3], b[2])),
            add(c(a[2], b[1]), c(a[3], b[3])),
        ]
    }
    let id: M = [(1, 0), (0, 0), (0, 0), (1, 0)];
    let x: M = [(0, 0), (1, 0), (1, 0), (0, 0)];
    let z: M = [(1, 0), (0, 0), (0, 0), (-1, 0)];
    let i: M = [(0, 1), (0, 0), (0, 0), (0, 1)];
    FiniteGroup::generated_by(id, &[x, z, i], mul, 16)
        .expect("Pauli group")
        .0
}

/// `(C2 x C2) x| C4` with the generator swapping the factors.
fn klein_by_c4() -> FiniteGroup {
    let c2 = FiniteGroup::cyclic(2);
    let v = c2.direct_product(&c2);
    let swap = [0, 2, 1, 3];
    let action = cyclic_action(&v, &swap, 4);
    semidirect(&v, &FiniteGroup::cyclic(4), &action)
        .expect("swap")
        .group
}

fn product(factors: &[usize]) -> FiniteGroup {
    factors.iter().fold(FiniteGroup::trivial(), |acc, &n| {
        acc.direct_product(&FiniteGroup::cyclic(n))
    })
}

/// Every group of order at most 16 up to isomorphism, 42 in all, with
/// conventional names.
pub fn groups_up_to_16() -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(&str, FiniteGroup)> = vec![("1", FiniteGroup::trivial())];
    for n in [2, 3, 5, 7, 11, 13] {
        out.push(("", FiniteGroup::cyclic(n)));
    }
    let c2 = FiniteGroup::cyclic(2);
    out.extend([
        ("C4", FiniteGroup::cyclic(4)),
        ("C2xC2", product(&[2, 2])),
        ("C6", FiniteGroup::cyclic(6)),
        ("S3", dihedral(3)),
        ("C8", FiniteGroup::cyclic(8)),
        ("C4xC2", product(&[4, 2])),
        ("C2^3", product(&[2, 2, 2])),
        ("D4", dihedral(4)),
        ("Q8", quaternion()),
        ("C9", FiniteGroup::cyclic(9)),
        ("C3xC3", product(&[3, 3])),
        ("C10", FiniteGroup::cyclic(10)),
        ("D5", dihedral(5)),
        ("C12", FiniteGroup::cyclic(12)),
        ("C6xC2", product(&[6, 2])),
        ("D6", dihedral(6)),
        ("Dic3", dicyclic(3)),
        ("A4", alternating4()),
        ("C14", FiniteGroup::cyclic(14)),
        ("D7", dihedral(7)),
        ("C15", FiniteGroup::cyclic(15)),
        ("C16", FiniteGroup::cyclic(16)),
        ("C4xC4", product(&[4, 4])),
        ("C8xC2", product(&[8, 2])),
        ("C4xC2xC2", product(&[4, 2, 2])),
        ("C2^4", product(&[2, 2, 2, 2])),
        ("D8", dihedral(8)),
        ("SD16", metacyclic(8, 2, 3)),
        ("M16", metacyclic(8, 2, 5)),
        ("Q16", dicyclic(4)),
        ("C4:C4", metacyclic(4, 4, 3)),
        ("C2^2:C4", klein_by_c4()),
        ("C2xD4", c2.direct_product(&dihedral(4))),
        ("C2xQ8", c2.direct_product(&quaternion())),
        ("C4oD4", pauli()),
    ]);
    let mut named: Vec<(String, FiniteGroup)> = out
        .into_iter()
        .map(|(name, g)| {
            let name = if name.is_empty() {
                format!("C{}", g.order())
            } else {
                name.to_string()
            };
            (name, g)
        })
        .collect();
    named.sort_by_key(|(_, g)| g.order());
    named
}

/// A group from [`groups_up_to_16`] or one of `Dn`, `Dicn`, `Cn` by name.
pub fn by_name(name: &str) -> Option<FiniteGroup> {
    if let Some((_, g)) = groups_up_to_16().into_iter().find(|(n, _)| n == name) {
        return Some(g);
    }
    let num = |prefix: &str| {
        name.strip_prefix(prefix)
            .and_then(|s| s.parse::<usize>().ok())
    };
    if let Some(n) = num("Dic").filter(|&n| (1..=32).contains(&n)) {
        return Some(dicyclic(n));
    }
    if let Some(n) = num("D").filter(|&n| (2..=64).contains(&n)) {
        return Some(dihedral(n));
    }
    num("C")
        .filter(|&n| (1..=4096).contains(&n))
        .map(FiniteGroup::cyclic)
}

/// Every abelian normal subgroup of order at most `max_order`, as sorted
/// element lists.
pub fn abelian_normal_subgroups(g: &FiniteGroup, max_order: usize) -> Vec<Vec<usize>> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut frontier = vec![vec![g.identity()]];
    while let Some(h) = frontier.pop() {
        if found.contains(&h) {
            continue;
        }
        for x in g.elements() {
            if h.binary_search(&x).is_ok() || h.iter().any(|&a| g.mul(a, x) != g.mul(x, a)) {
                continue;
            }
            let mut gens = h.clone();
            gens.push(x);
            let bigger = g.subgroup_generated(&gens);
            if bigger.len() <= max_order {
                frontier.push(bigger);
            }
        }
        found.push(h);
    }
    found.retain(|h| g.is_normal(h));
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_counts() {
        let all = groups_up_to_16();
        assert_eq!(all.len(), 42);
        let count = |n: usize| all.iter().filter(|(_, g)| g.order() == n).count();
        let expected = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14];
        for (n, &c) in (1..=16).zip(&expected) {
            assert_eq!(count(n), c, "order {n}");
        }
    }

    #[test]
    fn same_order_groups_are_pairwise_non_isomorphic() {
        let all = groups_up_to_16();
        for (i, (n1, g1)) in all.iter().enumerate() {
            for (n2, g2) in &all[i + 1..] {
                if g1.order() == g2.order() {
                    assert!(!g1.is_isomorphic(g2), "{n1} ~ {n2}");
                }
            }
        }
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = quaternion();
        assert_eq!(q.elements().filter(|&x| q.element_order(x) == 2).count(), 1);
        assert!(!q.is_abelian());
        let p = pauli();
        assert_eq!(p.order(), 16);
        assert!(!p.is_abelian());
    }

    #[test]
    fn lookup() {
        assert_eq!(by_name("Q8").unwrap().order(), 8);
        assert_eq!(by_name("D12").unwrap().order(), 24);
        assert_eq!(by_name("C100").unwrap().order(), 100);
        assert!(by_name("nope").is_none());
    }

    #[test]
    fn normal_subgroups_of_d4() {
        let d4 = dihedral(4);
        let subs = abelian_normal_subgroups(&d4, 4);
        // 1, the center, C4 and two Klein subgroups
        assert_eq!(
            subs.iter().map(Vec::len).collect::<Vec<_>>(),
            vec![1, 2, 4, 4, 4]
        );
    }
}
