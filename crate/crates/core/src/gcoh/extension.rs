use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::{AElem, Cocycle2, FiniteGroup, GModule, GcohError, ModuleMap};
use crate::exactlat::{quotient, IntMatrix};

/// `1 -> A -> E -> G -> 1` with `A` abelian, acting on by conjugation.
#[derive(Clone, Debug)]
pub struct GroupExtension {
    total: FiniteGroup,
    quotient: FiniteGroup,
    module: GModule,
    // module element index -> element of E
    inject: Vec<usize>,
    // element of E -> element of G
    project: Vec<usize>,
    // element of E -> module element index (usize::MAX off A)
    a_index: Vec<usize>,
}

impl GroupExtension {
    /// Validates exactness and that `A` is acted on by conjugation as the
    /// module says.
    pub fn new(
        total: FiniteGroup,
        quotient: FiniteGroup,
        module: GModule,
        inject: Vec<usize>,
        project: Vec<usize>,
    ) -> Result<Self, GcohError> {
        let bad = |m: &str| Err(GcohError::InvalidExtension(m.to_string()));
        if module.group() != &quotient {
            return bad("module is not over the quotient group");
        }
        if !total.is_homomorphism(&quotient, &project) {
            return bad("projection is not a homomorphism");
        }
        let mut hit = vec![false; quotient.order()];
        project.iter().for_each(|&q| hit[q] = true);
        if hit.contains(&false) {
            return bad("projection is not surjective");
        }
        if inject.len() != module.size() || inject.iter().any(|&x| x >= total.order()) {
            return bad("injection has the wrong shape");
        }
        let mut a_index = vec![usize::MAX; total.order()];
        for (i, &x) in inject.iter().enumerate() {
            if a_index[x] != usize::MAX {
                return bad("injection is not injective");
            }
            a_index[x] = i;
        }
        for i in 0..module.size() {
            for j in 0..module.size() {
                let sum = module.index_of(&module.add(&module.element(i), &module.element(j)));
                if inject[sum] != total.mul(inject[i], inject[j]) {
                    return bad("injection is not a homomorphism");
                }
            }
        }
        let kernel = (0..total.order())
            .filter(|&x| project[x] == quotient.identity())
            .count();
        if kernel != module.size() || inject.iter().any(|&x| project[x] != quotient.identity()) {
            return bad("image of A is not the kernel of the projection");
        }
        for t in total.elements() {
            for i in 0..module.size() {
                let lhs = total.conjugate(t, inject[i]);
                let rhs = inject[module.index_of(&module.act(project[t], &module.element(i)))];
                if lhs != rhs {
                    return bad("conjugation on A does not match the module action");
                }
            }
        }
        Ok(GroupExtension {
            total,
            quotient,
            module,
            inject,
            project,
            a_index,
        })
    }

    /// The extension `1 -> ker -> total -> quotient -> 1` of a surjection
    /// with abelian kernel.
    pub fn from_surjection(
        total: &FiniteGroup,
        quotient_group: &FiniteGroup,
        project: &[usize],
    ) -> Result<Self, GcohError> {
        if !total.is_homomorphism(quotient_group, project) {
            return Err(GcohError::InvalidExtension(
                "projection is not a homomorphism".into(),
            ));
        }
        let kernel: Vec<usize> = total
            .elements()
            .filter(|&x| project[x] == quotient_group.identity())
            .collect();
        let (presentation, gens, coords) = abelian_presentation(total, &kernel)?;
        let r = gens.len();
        let mut fiber_rep = vec![usize::MAX; quotient_group.order()];
        for t in total.elements().rev() {
            fiber_rep[project[t]] = t;
        }
        if fiber_rep.contains(&usize::MAX) {
            return Err(GcohError::InvalidExtension(
                "projection is not surjective".into(),
            ));
        }
        let action: Vec<IntMatrix> = fiber_rep
            .iter()
            .map(|&t| {
                let cols: Vec<Vec<i64>> = gens
                    .iter()
                    .map(|&a| coords[&total.conjugate(t, a)].clone())
                    .collect();
                IntMatrix::from_cols(r, &cols)
            })
            .collect();
        let module = GModule::new(quotient_group.clone(), presentation, action)?;
        let orders: Vec<usize> = gens.iter().map(|&a| total.element_order(a)).collect();
        let inject = module
            .elements()
            .map(|a| {
                let v = module.to_ambient(&a);
                v.iter()
                    .zip(&gens)
                    .zip(&orders)
                    .fold(total.identity(), |acc, ((c, &g), &o)| {
                        let k = c
                            .mod_floor(&BigInt::from(o))
                            .to_usize()
                            .expect("small exponent");
                        total.mul(acc, total.pow(g, k))
                    })
            })
            .collect();
        GroupExtension::new(
            total.clone(),
            quotient_group.clone(),
            module,
            inject,
            project.to_vec(),
        )
    }

    /// `1 -> A -> total -> total/A -> 1` for an abelian normal subgroup.
    pub fn from_normal_subgroup(
        total: &FiniteGroup,
        subgroup: &[usize],
    ) -> Result<Self, GcohError> {
        if !total.is_normal(subgroup) {
            return Err(GcohError::InvalidExtension("subgroup is not normal".into()));
        }
        let (q, p) = total.quotient(subgroup);
        Self::from_surjection(total, &q, &p)
    }

    /// `A x_z G` with `(a, g)(a', g') = (a + g a' + z(g, g'), g g')`, the pair
    /// `(a, g)` stored at index `g * |A| + a`.
    pub fn from_cocycle(z: &Cocycle2, module_bound: usize) -> Result<Self, GcohError> {
        let m = z.module();
        let g = m.group();
        let na = m.size();
        if na > module_bound {
            return Err(GcohError::SizeBoundExceeded {
                what: "|A|".into(),
                size: na,
                bound: module_bound,
            });
        }
        if let Some((a, b, c)) = z.identity_failure() {
            return Err(GcohError::NotACocycle(format!(
                "cocycle identity fails at ({a}, {b}, {c})"
            )));
        }
        let ng = g.order();
        let elems: Vec<AElem> = m.elements().collect();
        let add: Vec<Vec<usize>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| m.index_of(&m.add(a, b))).collect())
            .collect();
        let act: Vec<Vec<usize>> = g
            .elements()
            .map(|x| elems.iter().map(|a| m.index_of(&m.act(x, a))).collect())
            .collect();
        let n = na * ng;
        let mut table = vec![0; n * n];
        for x in 0..n {
            let (g1, a1) = (x / na, x % na);
            for y in 0..n {
                let (g2, a2) = (y / na, y % na);
                let zi = m.index_of(z.value(g1, g2));
                let a = add[add[a1][act[g1][a2]]][zi];
                table[x * n + y] = g.mul(g1, g2) * na + a;
            }
        }
        let total = FiniteGroup::from_flat(n, table, g.identity() * na);
        let inject = (0..na).map(|a| g.identity() * na + a).collect();
        let project = (0..n).map(|x| x / na).collect();
        GroupExtension::new(total, g.clone(), m.clone(), inject, project)
    }

    pub fn total(&self) -> &FiniteGroup {
        &self.total
    }

    pub fn quotient(&self) -> &FiniteGroup {
        &self.quotient
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    /// Module element index to element of `E`.
    pub fn inject(&self) -> &[usize] {
        &self.inject
    }

    pub fn project(&self) -> &[usize] {
        &self.project
    }

    /// The module element at `x`, if `x` lies in `A`.
    pub fn a_element(&self, x: usize) -> Option<AElem> {
        let i = self.a_index[x];
        (i != usize::MAX).then(|| self.module.element(i))
    }

    pub fn inject_elem(&self, a: &[u64]) -> usize {
        self.inject[self.module.index_of(a)]
    }

    /// Smallest element of each fiber, the identity over the identity.
    pub fn canonical_section(&self) -> Vec<usize> {
        let mut s = vec![usize::MAX; self.quotient.order()];
        for x in self.total.elements().rev() {
            s[self.project[x]] = x;
        }
        s[self.quotient.identity()] = self.total.identity();
        s
    }

    /// Uniformly random element of each fiber, the identity over the identity.
    pub fn random_section<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let canon = self.canonical_section();
        let mut s: Vec<usize> = canon
            .iter()
            .map(|&t| {
                let a = rng.gen_range(0..self.inject.len());
                self.total.mul(self.inject[a], t)
            })
            .collect();
        s[self.quotient.identity()] = self.total.identity();
        s
    }

    /// `z_s(g, h) = s(g) s(h) s(gh)^{-1}`.
    pub fn cocycle(&self, section: &[usize]) -> Result<Cocycle2, GcohError> {
        let q = &self.quotient;
        if section.len() != q.order()
            || section
                .iter()
                .enumerate()
                .any(|(g, &x)| x >= self.total.order() || self.project[x] != g)
        {
            return Err(GcohError::NotASection(
                "projection of the section is not the identity".into(),
            ));
        }
        if section[q.identity()] != self.total.identity() {
            return Err(GcohError::NotASection("section must send 1 to 1".into()));
        }
        let t = &self.total;
        let z = Cocycle2::from_fn(&self.module, |g, h| {
            let x = t.mul(t.mul(section[g], section[h]), t.inv(section[q.mul(g, h)]));
            self.a_element(x).expect("defect of a section lies in A")
        });
        debug_assert!(z.is_cocycle());
        Ok(z)
    }

    /// An isomorphism `E -> other.E` restricting to the identity on `A` and
    /// inducing the identity on `G`.
    pub fn find_equivalence(&self, other: &GroupExtension) -> Option<Vec<usize>> {
        if self.module != other.module || self.quotient != other.quotient {
            return None;
        }
        let qgens = self.quotient.generators();
        let s1 = self.canonical_section();
        let s2 = other.canonical_section();
        let basis: Vec<AElem> = (0..self.module.rank())
            .map(|j| (0..self.module.rank()).map(|i| u64::from(i == j)).collect())
            .collect();
        let mut gens: Vec<usize> = basis.iter().map(|b| self.inject_elem(b)).collect();
        let fixed: Vec<usize> = basis.iter().map(|b| other.inject_elem(b)).collect();
        gens.extend(qgens.iter().map(|&g| s1[g]));
        let na = self.inject.len();
        let choices = qgens.len();
        let mut counter = vec![0usize; choices];
        loop {
            let mut images = fixed.clone();
            images.extend(
                qgens
                    .iter()
                    .zip(&counter)
                    .map(|(&g, &c)| other.total.mul(other.inject[c], s2[g])),
            );
            if let Some(map) = self.total.extend_homomorphism(&other.total, &gens, &images) {
                let compatible = super::group::is_injective(&map, other.total.order())
                    && (0..na).all(|i| map[self.inject[i]] == other.inject[i])
                    && self
                        .total
                        .elements()
                        .all(|x| other.project[map[x]] == self.project[x]);
                if compatible {
                    return Some(map);
                }
            }
            // next assignment in mixed radix
            let mut k = 0;
            while k < choices {
                counter[k] += 1;
                if counter[k] < na {
                    break;
                }
                counter[k] = 0;
                k += 1;
            }
            if k == choices {
                return None;
            }
        }
    }

    /// A homomorphic section `G -> E`, if the extension splits.
    pub fn splitting(&self) -> Option<Vec<usize>> {
        let qgens = self.quotient.generators();
        let s = self.canonical_section();
        let na = self.inject.len();
        let mut counter = vec![0usize; qgens.len()];
        loop {
            let images: Vec<usize> = qgens
                .iter()
                .zip(&counter)
                .map(|(&g, &c)| self.total.mul(self.inject[c], s[g]))
                .collect();
            if let Some(map) = self
                .quotient
                .extend_homomorphism(&self.total, &qgens, &images)
            {
                if self.quotient.elements().all(|g| self.project[map[g]] == g) {
                    return Some(map);
                }
            }
            let mut k = 0;
            while k < qgens.len() {
                counter[k] += 1;
                if counter[k] < na {
                    break;
                }
                counter[k] = 0;
                k += 1;
            }
            if k == qgens.len() {
                return None;
            }
        }
    }

    /// Fiber product `E x_G G'` over `gamma: G' -> G`, an extension of `G'`.
    pub fn pullback(&self, source: &FiniteGroup, gamma: &[usize]) -> Result<Self, GcohError> {
        if !source.is_homomorphism(&self.quotient, gamma) {
            return Err(GcohError::NotAHomomorphism("pullback map".into()));
        }
        let pairs: Vec<(usize, usize)> = self
            .total
            .elements()
            .flat_map(|e| source.elements().map(move |g| (e, g)))
            .filter(|&(e, g)| self.project[e] == gamma[g])
            .collect();
        let index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let n = pairs.len();
        let mut table = vec![0; n * n];
        for (i, &(e1, g1)) in pairs.iter().enumerate() {
            for (j, &(e2, g2)) in pairs.iter().enumerate() {
                table[i * n + j] = index[&(self.total.mul(e1, e2), source.mul(g1, g2))];
            }
        }
        let total =
            FiniteGroup::from_flat(n, table, index[&(self.total.identity(), source.identity())]);
        let module = self.module.restrict(source, gamma);
        let inject = self
            .inject
            .iter()
            .map(|&x| index[&(x, source.identity())])
            .collect();
        let project = pairs.iter().map(|&(_, g)| g).collect();
        GroupExtension::new(total, source.clone(), module, inject, project)
    }

    /// `alpha_*(E)` for `alpha: A -> A'` over the same group, with the
    /// morphism `E -> alpha_*(E)`.
    pub fn pushout(
        &self,
        alpha: &ModuleMap,
        module_bound: usize,
    ) -> Result<(Self, Vec<usize>), GcohError> {
        if alpha.source != self.module || alpha.gamma.iter().enumerate().any(|(g, &h)| g != h) {
            return Err(GcohError::NotEquivariant(
                "map must start at A over the same group".into(),
            ));
        }
        let s = self.canonical_section();
        let pushed = self.cocycle(&s)?.pushout(alpha)?;
        let ext = GroupExtension::from_cocycle(&pushed, module_bound)?;
        let na2 = alpha.target.size();
        let t = &self.total;
        let map = t
            .elements()
            .map(|x| {
                let g = self.project[x];
                let a = self
                    .a_element(t.mul(x, t.inv(s[g])))
                    .expect("x s(g)^{-1} lies in A");
                g * na2 + alpha.target.index_of(&alpha.apply(&a))
            })
            .collect();
        Ok((ext, map))
    }

    /// `E_1 x E_2` as an extension of `G_1 x G_2` by `A_1 + A_2`.
    pub fn product(&self, other: &GroupExtension) -> Self {
        let total = self.total.direct_product(&other.total);
        let quotient = self.quotient.direct_product(&other.quotient);
        let n2 = other.quotient.order();
        let via1: Vec<usize> = quotient.elements().map(|g| g / n2).collect();
        let via2: Vec<usize> = quotient.elements().map(|g| g % n2).collect();
        let module = self
            .module
            .direct_sum(&other.module, &quotient, &via1, &via2);
        let r1 = self.module.presentation().ambient_rank();
        let m2 = other.total.order();
        let inject = module
            .elements()
            .map(|a| {
                let v = module.to_ambient(&a);
                let a1 = self.module.from_ambient(&v[..r1]);
                let a2 = other.module.from_ambient(&v[r1..]);
                self.inject_elem(&a1) * m2 + other.inject_elem(&a2)
            })
            .collect();
        let nq2 = other.quotient.order();
        let project = total
            .elements()
            .map(|x| self.project[x / m2] * nq2 + other.project[x % m2])
            .collect();
        GroupExtension::new(total, quotient, module, inject, project)
            .expect("product of extensions")
    }
}

/// Presentation of an abelian subgroup by greedily chosen generators:
/// returns the presentation, the generators, and the exponent vector of
/// every element.
fn abelian_presentation(
    total: &FiniteGroup,
    subgroup: &[usize],
) -> Result<
    (
        crate::exactlat::FinAbPresentation,
        Vec<usize>,
        HashMap<usize, Vec<i64>>,
    ),
    GcohError,
> {
    for &a in subgroup {
        for &b in subgroup {
            if total.mul(a, b) != total.mul(b, a) {
                return Err(GcohError::InvalidExtension("kernel is not abelian".into()));
            }
        }
    }
    let mut gens: Vec<usize> = Vec::new();
    let mut coords: HashMap<usize, Vec<i64>> = HashMap::from([(total.identity(), Vec::new())]);
    let mut relations: Vec<Vec<i64>> = Vec::new();
    for &a in subgroup {
        if coords.contains_key(&a) {
            continue;
        }
        let r = gens.len();
        // smallest power of a already in the span
        let mut k = 1;
        let mut p = a;
        while !coords.contains_key(&p) {
            p = total.mul(p, a);
            k += 1;
        }
        let mut rel: Vec<i64> = coords[&p].iter().map(|x| -x).collect();
        rel.push(k as i64);
        for old in &mut relations {
            old.push(0);
        }
        relations.push(rel);
        let old: Vec<(usize, Vec<i64>)> = coords.drain().collect();
        for (x, c) in old {
            let mut y = x;
            for j in 0..k {
                let mut cj = c.clone();
                cj.resize(r, 0);
                cj.push(j as i64);
                coords.insert(y, cj);
                y = total.mul(y, a);
            }
        }
        gens.push(a);
    }
    let r = gens.len();
    for c in coords.values_mut() {
        c.resize(r, 0);
    }
    let presentation = quotient(r, &IntMatrix::from_cols(r, &relations));
    Ok((presentation, gens, coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcoh::classes_equal;

    fn z4_over_c2() -> GroupExtension {
        let c4 = FiniteGroup::cyclic(4);
        GroupExtension::from_normal_subgroup(&c4, &[0, 2]).unwrap()
    }

    #[test]
    fn z4_cocycle() {
        let e = z4_over_c2();
        let z = e.cocycle(&[0, 1]).unwrap();
        assert_eq!(z.value(1, 1), &vec![1]);
        assert!(e.splitting().is_none());
        assert!(matches!(e.cocycle(&[0, 2]), Err(GcohError::NotASection(_))));
        assert!(matches!(e.cocycle(&[2, 1]), Err(GcohError::NotASection(_))));
    }

    #[test]
    fn direct_product_has_zero_cocycle() {
        let c2 = FiniteGroup::cyclic(2);
        let v = c2.direct_product(&c2);
        // A = first factor (elements (a, 0) = 0, 2)
        let e = GroupExtension::from_normal_subgroup(&v, &[0, 2]).unwrap();
        let z = e.cocycle(&e.canonical_section()).unwrap();
        assert!(z.values().iter().flatten().all(|a| a == &vec![0]));
        assert!(e.splitting().is_some());
    }

    #[test]
    fn round_trip_through_cocycle() {
        let e = z4_over_c2();
        let z = e.cocycle(&e.canonical_section()).unwrap();
        let e2 = GroupExtension::from_cocycle(&z, 16).unwrap();
        assert!(e2.total().is_isomorphic(&FiniteGroup::cyclic(4)));
        assert!(e.find_equivalence(&e2).is_some());
        let z2 = e2.cocycle(&e2.canonical_section()).unwrap();
        assert!(classes_equal(&z, &z2).unwrap().is_some());
        let split = GroupExtension::from_cocycle(&Cocycle2::zero(z.module()), 16).unwrap();
        assert!(e.find_equivalence(&split).is_none());
        assert!(split.splitting().is_some());
    }

    #[test]
    fn sections_give_cohomologous_cocycles() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let e = z4_over_c2().product(&z4_over_c2());
        let z = e.cocycle(&e.canonical_section()).unwrap();
        for _ in 0..5 {
            let w = e.cocycle(&e.random_section(&mut rng)).unwrap();
            assert!(classes_equal(&z, &w).unwrap().is_some());
        }
    }

    #[test]
    fn pullback_and_pushout_extensions() {
        let e = z4_over_c2();
        let c4 = FiniteGroup::cyclic(4);
        let red: Vec<usize> = (0..4).map(|x| x % 2).collect();
        let fp = e.pullback(&c4, &red).unwrap();
        assert_eq!(fp.total().order(), 8);
        let z = e.cocycle(&e.canonical_section()).unwrap();
        let via_cocycle =
            GroupExtension::from_cocycle(&z.pullback(&c4, &red).unwrap(), 16).unwrap();
        assert!(fp.find_equivalence(&via_cocycle).is_some());
        let zero =
            ModuleMap::from_basis_images(e.module(), e.module(), &[0, 1], vec![vec![0]]).unwrap();
        let (pushed, map) = e.pushout(&zero, 16).unwrap();
        assert!(pushed.splitting().is_some());
        assert!(e.total().is_homomorphism(pushed.total(), &map));
    }
}
