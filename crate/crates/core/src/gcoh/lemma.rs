//! The key lemma `(gamma f)^*(c') = alpha_*(c) . p^* f^*(c')` and the
//! crossed-homomorphism coboundary lemma, checked on finite instances.
//!
//! Setting: `W` acts on `E` preserving `A`, hence on `G = E/A`; the top
//! class `c` is that of `A -> E x| W -> G x| W`; `epsilon: E -> E'` is a
//! morphism of extensions inducing `alpha: A -> A'` and `gamma: G -> G'`;
//! `f: W -> G'` makes `gamma f: G x| W -> G'` a homomorphism.
//!
//! The identity can fail in general: `H^2(G x| W, A')` also contains
//! `H^1(W, H^1(G, A'))`, which neither side of the split sequence sees.
//! [`lemma_b_counterexample`] is the smallest instance we know. The random
//! instances come from a family on which it does hold (see
//! [`KeyLemmaSampler`]).

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::small::{abelian_normal_subgroups, dihedral, groups_up_to_16, quaternion};
use super::{
    classes_equal, cyclic_action, semidirect, AElem, Cocycle2, FiniteGroup, GcohError,
    GroupExtension, ModuleMap, SemidirectProduct,
};

#[derive(Clone, Debug)]
pub struct KeyLemmaInstance {
    /// `A -> E -> G`
    pub top: GroupExtension,
    pub w: FiniteGroup,
    /// `w_on_e[w]` is the automorphism of `E` by which `w` acts.
    pub w_on_e: Vec<Vec<usize>>,
    /// `A' -> E' -> G'`
    pub bottom: GroupExtension,
    pub epsilon: Vec<usize>,
    pub f: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CrossedHomInstance {
    pub top: GroupExtension,
    pub w: FiniteGroup,
    pub w_on_e: Vec<Vec<usize>>,
    /// `phi: W -> G` with `phi(w w') = phi(w) . w(phi(w'))`.
    pub phi: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KeyLemmaReport {
    pub holds: bool,
    pub order_g_w: usize,
    pub order_e_prime: usize,
    pub lhs_trivial: bool,
    pub pushout_trivial: bool,
    pub correction_trivial: bool,
    /// `s^* p^* z = z` on cochains.
    pub section_identity: bool,
    /// `u` with `lhs - rhs = du`, indexed by elements of `G x| W`.
    pub witness: Option<Vec<AElem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossedHomReport {
    pub holds: bool,
    pub coboundary_trivial: bool,
    /// `u` with `delta phi - (phi . id)^* c = du`, indexed by elements of `W`.
    pub witness: Option<Vec<AElem>>,
}

/// `E x| W -> G x| W` with the action of `W` on `G` it induces.
struct Lifted {
    se: SemidirectProduct,
    sg: SemidirectProduct,
    w_on_g: Vec<Vec<usize>>,
    ext: GroupExtension,
}

fn lift(top: &GroupExtension, w: &FiniteGroup, w_on_e: &[Vec<usize>]) -> Result<Lifted, GcohError> {
    let pre = |m: String| GcohError::PreconditionFailed(m);
    let e = top.total();
    let g = top.quotient();
    let se = semidirect(e, w, w_on_e).map_err(|err| pre(format!("W action on E: {err}")))?;
    let in_a = |x: usize| top.a_element(x).is_some();
    for (k, phi) in w_on_e.iter().enumerate() {
        if top.inject().iter().any(|&a| !in_a(phi[a])) {
            return Err(pre(format!("element {k} of W does not preserve A")));
        }
    }
    let s = top.canonical_section();
    let w_on_g: Vec<Vec<usize>> = w_on_e
        .iter()
        .map(|phi| g.elements().map(|x| top.project()[phi[s[x]]]).collect())
        .collect();
    let sg =
        semidirect(g, w, &w_on_g).map_err(|err| pre(format!("induced W action on G: {err}")))?;
    let (ne, ng) = (e.order(), g.order());
    let proj: Vec<usize> = se
        .group
        .elements()
        .map(|x| (x / ne) * ng + top.project()[x % ne])
        .collect();
    let ext = GroupExtension::from_surjection(&se.group, &sg.group, &proj)?;
    Ok(Lifted {
        se,
        sg,
        w_on_g,
        ext,
    })
}

fn nontrivial(z: &Cocycle2) -> bool {
    classes_equal(z, &Cocycle2::zero(z.module()))
        .expect("same module")
        .is_none()
}

/// Computes both sides of the key lemma and compares their classes, using
/// random sections for `c` and `c'`.
pub fn key_lemma_check<R: Rng + ?Sized>(
    inst: &KeyLemmaInstance,
    rng: &mut R,
) -> Result<KeyLemmaReport, GcohError> {
    let pre = |m: &str| Err(GcohError::PreconditionFailed(m.to_string()));
    let (top, bottom) = (&inst.top, &inst.bottom);
    let (e, e2) = (top.total(), bottom.total());
    let g2 = bottom.quotient();
    if inst.epsilon.len() != e.order() || !e.is_homomorphism(e2, &inst.epsilon) {
        return pre("epsilon is not a homomorphism E -> E'");
    }
    if top
        .inject()
        .iter()
        .any(|&a| bottom.a_element(inst.epsilon[a]).is_none())
    {
        return pre("epsilon does not map A into A'");
    }
    if inst.f.len() != inst.w.order() || !inst.w.is_homomorphism(g2, &inst.f) {
        return pre("f is not a homomorphism W -> G'");
    }
    let lifted = lift(top, &inst.w, &inst.w_on_e)?;
    let s = top.canonical_section();
    let gamma: Vec<usize> = s
        .iter()
        .map(|&x| bottom.project()[inst.epsilon[x]])
        .collect();
    let sg = &lifted.sg;
    let ng = top.quotient().order();
    let gf: Vec<usize> = sg
        .group
        .elements()
        .map(|x| g2.mul(gamma[x % ng], inst.f[x / ng]))
        .collect();
    if !sg.group.is_homomorphism(g2, &gf) {
        return pre("gamma f is not a homomorphism on G x| W");
    }
    let a2 = bottom.module();
    if gamma
        .iter()
        .any(|&y| a2.elements().any(|a| a2.act(y, &a) != a))
    {
        return pre("gamma(G) acts nontrivially on A'");
    }
    let ext = &lifted.ext;
    let ne = e.order();
    let alpha_map: Vec<usize> = ext
        .inject()
        .iter()
        .map(|&x| {
            let a = bottom
                .a_element(inst.epsilon[x % ne])
                .expect("epsilon maps A into A'");
            a2.index_of(&a)
        })
        .collect();
    let target = a2.restrict(&sg.group, &gf);
    let identity: Vec<usize> = sg.group.elements().collect();
    let alpha = ModuleMap::from_element_map(ext.module(), &target, &identity, &alpha_map).map_err(
        |err| GcohError::PreconditionFailed(format!("alpha is not equivariant for G x| W: {err}")),
    )?;

    let c = ext.cocycle(&ext.random_section(rng))?;
    let c2 = bottom.cocycle(&bottom.random_section(rng))?;
    let lhs = c2.pullback(&sg.group, &gf)?;
    let pushed = c.pushout(&alpha)?;
    let fz = c2.pullback(&inst.w, &inst.f)?;
    let correction = fz.pullback(&sg.group, &sg.p)?;
    let section_identity = correction.pullback(&inst.w, &sg.s)? == fz;
    let rhs = pushed.add(&correction);
    let witness = classes_equal(&lhs, &rhs)?;
    Ok(KeyLemmaReport {
        holds: witness.is_some(),
        order_g_w: sg.group.order(),
        order_e_prime: e2.order(),
        lhs_trivial: !nontrivial(&lhs),
        pushout_trivial: !nontrivial(&pushed),
        correction_trivial: !nontrivial(&correction),
        section_identity,
        witness,
    })
}

/// Compares `delta phi`, computed from the lift `s . phi` for a random
/// section `s`, with the pullback of `c` along `w -> (phi(w), w)`.
pub fn crossed_hom_coboundary<R: Rng + ?Sized>(
    inst: &CrossedHomInstance,
    rng: &mut R,
) -> Result<CrossedHomReport, GcohError> {
    let lifted = lift(&inst.top, &inst.w, &inst.w_on_e)?;
    let (w, g) = (&inst.w, inst.top.quotient());
    let phi = &inst.phi;
    if phi.len() != w.order() || phi.iter().any(|&x| x >= g.order()) {
        return Err(GcohError::NotCrossedHom("phi has the wrong shape".into()));
    }
    for a in w.elements() {
        for b in w.elements() {
            if phi[w.mul(a, b)] != g.mul(phi[a], lifted.w_on_g[a][phi[b]]) {
                return Err(GcohError::NotCrossedHom(format!(
                    "identity fails at ({a}, {b})"
                )));
            }
        }
    }
    let ng = g.order();
    let phi_id: Vec<usize> = w.elements().map(|x| x * ng + phi[x]).collect();
    let ext = &lifted.ext;
    let module = ext.module().restrict(w, &phi_id);
    let s = inst.top.random_section(rng);
    let lift_phi: Vec<usize> = phi.iter().map(|&x| s[x]).collect();
    let (te, i) = (&lifted.se.group, &lifted.se.i);
    let values: Vec<Vec<AElem>> = w
        .elements()
        .map(|a| {
            w.elements()
                .map(|b| {
                    let x = te.mul(
                        te.mul(i[lift_phi[a]], i[inst.w_on_e[a][lift_phi[b]]]),
                        te.inv(i[lift_phi[w.mul(a, b)]]),
                    );
                    ext.a_element(x)
                        .expect("coboundary of a crossed homomorphism lies in A")
                })
                .collect()
        })
        .collect();
    let delta = Cocycle2::new(module, values)?;
    let c = ext.cocycle(&ext.random_section(rng))?;
    let pulled = c.pullback(w, &phi_id)?;
    let witness = classes_equal(&delta, &pulled)?;
    Ok(CrossedHomReport {
        holds: witness.is_some(),
        coboundary_trivial: !nontrivial(&delta),
        witness,
    })
}

/// Every crossed homomorphism `W -> G` for the action induced on `G`.
pub fn crossed_homs(
    top: &GroupExtension,
    w: &FiniteGroup,
    w_on_e: &[Vec<usize>],
) -> Result<Vec<Vec<usize>>, GcohError> {
    let lifted = lift(top, w, w_on_e)?;
    let sg = &lifted.sg;
    let ng = top.quotient().order();
    let gens = w.generators();
    let mut out = Vec::new();
    let total = ng.pow(gens.len() as u32);
    for mut code in 0..total {
        let images: Vec<usize> = gens
            .iter()
            .map(|&x| {
                let gx = code % ng;
                code /= ng;
                x * ng + gx
            })
            .collect();
        if let Some(map) = w.extend_homomorphism(&sg.group, &gens, &images) {
            if w.elements().all(|x| sg.p[map[x]] == x) {
                out.push(map.iter().map(|&y| sg.first[y]).collect());
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `A = 1`, `E = G = C2 = <x>`, `W = C2 = <y>` acting trivially, `E' = D4`
/// over `G' = C2 x C2 = <u, v>`, `gamma(x) = u`, `f(y) = v`, with `u` and
/// `v` lifting to involutions whose product has order 4. Then
/// `(gamma f)^*(c')` is the nonzero class of `D4`, while `alpha_*(c) = 0`
/// and `f^*(c') = 0`.
pub fn lemma_b_counterexample() -> KeyLemmaInstance {
    let c2 = FiniteGroup::cyclic(2);
    let top = GroupExtension::from_normal_subgroup(&c2, &[0]).expect("trivial kernel");
    let d4 = dihedral(4);
    let center: Vec<usize> = d4
        .elements()
        .filter(|&z| d4.elements().all(|x| d4.mul(x, z) == d4.mul(z, x)))
        .collect();
    let bottom = GroupExtension::from_normal_subgroup(&d4, &center).expect("center of D4");
    let involutions: Vec<usize> = d4
        .elements()
        .filter(|&x| d4.element_order(x) == 2 && !center.contains(&x))
        .collect();
    let s = involutions[0];
    let t = *involutions
        .iter()
        .find(|&&t| bottom.project()[t] != bottom.project()[s])
        .expect("two classes of reflections");
    KeyLemmaInstance {
        top,
        w: c2.clone(),
        w_on_e: vec![vec![0, 1]; 2],
        epsilon: vec![d4.identity(), s],
        f: vec![bottom.quotient().identity(), bottom.project()[t]],
        bottom,
    }
}

/// Draws instances of bounded size from a family on which the key lemma
/// holds.
///
/// `E` is a group of order at most 16 with an abelian normal `A`, `|A| <= 4`,
/// and `W = Z/m` (`m <= 4`) acts through a random automorphism preserving
/// `A`. The bottom extension is a product of two pieces:
/// - `E x| W` modulo the normal closure `N` of `[E, A]` and up to two random
///   elements, as an extension by the image of `A`; `epsilon` and `f` are
///   induced by the quotient map;
/// - an extension `A_2 -> E_2 -> G_2` with `epsilon` trivial into it and
///   `f` a random homomorphism `W -> G_2`, which makes `p^* f^*(c')`
///   nontrivial in general.
pub struct KeyLemmaSampler {
    pool: Vec<(String, GroupExtension)>,
    factors: Vec<(String, GroupExtension)>,
    bound: usize,
}

const MAX_W: usize = 4;

impl KeyLemmaSampler {
    /// `bound` limits `|G x| W|`.
    pub fn new(bound: usize) -> Result<Self, GcohError> {
        let mut pool = Vec::new();
        for (name, e) in groups_up_to_16() {
            for a in abelian_normal_subgroups(&e, 4) {
                if e.order() / a.len() <= bound {
                    pool.push((
                        format!("{name}/{}", a.len()),
                        GroupExtension::from_normal_subgroup(&e, &a)?,
                    ));
                }
            }
        }
        if pool.is_empty() {
            return Err(GcohError::SizeBoundExceeded {
                what: "|G x| W|".into(),
                size: 1,
                bound,
            });
        }
        let c2 = FiniteGroup::cyclic(2);
        let center = |g: &FiniteGroup| -> Vec<usize> {
            g.elements()
                .filter(|&z| g.elements().all(|x| g.mul(x, z) == g.mul(z, x)))
                .collect()
        };
        let factor = |g: FiniteGroup, a: Vec<usize>| GroupExtension::from_normal_subgroup(&g, &a);
        let q8 = quaternion();
        let d4 = dihedral(4);
        let factors = vec![
            ("none".to_string(), factor(FiniteGroup::trivial(), vec![0])?),
            (
                "C4".to_string(),
                factor(FiniteGroup::cyclic(4), vec![0, 2])?,
            ),
            (
                "C2xC2".to_string(),
                factor(c2.direct_product(&c2), vec![0, 2])?,
            ),
            ("Q8".to_string(), factor(q8.clone(), center(&q8))?),
            ("D4".to_string(), factor(d4.clone(), center(&d4))?),
        ];
        Ok(KeyLemmaSampler {
            pool,
            factors,
            bound,
        })
    }

    /// A random `(E, A)` with `W = Z/m` acting on `E`.
    fn top<R: Rng + ?Sized>(&self, rng: &mut R) -> (GroupExtension, FiniteGroup, Vec<Vec<usize>>) {
        let choices: Vec<(usize, usize)> = (0..self.pool.len())
            .flat_map(|i| (1..=MAX_W).map(move |m| (i, m)))
            .filter(|&(i, m)| self.pool[i].1.quotient().order() * m <= self.bound)
            .collect();
        let &(i, m) = choices.choose(rng).expect("pool is nonempty");
        let top = self.pool[i].1.clone();
        let e = top.total();
        let phi = random_automorphism(&top, m, rng);
        let w = FiniteGroup::cyclic(m);
        let action = cyclic_action(e, &phi, m);
        (top, w, action)
    }

    pub fn key_lemma<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<KeyLemmaInstance, GcohError> {
        let (top, w, w_on_e) = self.top(rng);
        let lifted = lift(&top, &w, &w_on_e)?;
        let (et, se) = (&lifted.se.group, &lifted.se);
        let e = top.total();
        let mut gens: Vec<usize> = Vec::new();
        for x in e.elements() {
            for &a in top.inject() {
                gens.push(et.commutator(se.i[x], se.i[a]));
            }
        }
        for _ in 0..rng.gen_range(0..=2) {
            gens.push(rng.gen_range(0..et.order()));
        }
        let n = et.normal_closure(&gens);
        let (e1, q) = et.quotient(&n);
        let mut a1: Vec<usize> = top.inject().iter().map(|&a| q[se.i[a]]).collect();
        a1.sort_unstable();
        a1.dedup();
        let b1 = GroupExtension::from_normal_subgroup(&e1, &a1)?;
        let (_, b2) = self.factors.choose(rng).expect("factors");
        let g2 = b2.quotient();
        let m = w.order();
        let targets: Vec<usize> = g2
            .elements()
            .filter(|&y| m % g2.element_order(y) == 0)
            .collect();
        // prefer a nontrivial f into the extra factor
        let nonidentity: Vec<usize> = targets
            .iter()
            .copied()
            .filter(|&y| y != g2.identity())
            .collect();
        let targets = if nonidentity.is_empty() {
            targets
        } else {
            nonidentity
        };
        let y = *targets.choose(rng).expect("identity qualifies");
        let bottom = b1.product(b2);
        let (n2, ng2) = (b2.total().order(), g2.order());
        let epsilon = e
            .elements()
            .map(|x| q[se.i[x]] * n2 + b2.total().identity())
            .collect();
        let f = w
            .elements()
            .map(|k| b1.project()[q[se.s[k]]] * ng2 + g2.pow(y, k))
            .collect();
        Ok(KeyLemmaInstance {
            top,
            w,
            w_on_e,
            bottom,
            epsilon,
            f,
        })
    }

    pub fn crossed_hom<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<CrossedHomInstance, GcohError> {
        let (top, w, w_on_e) = self.top(rng);
        let all = crossed_homs(&top, &w, &w_on_e)?;
        let phi = all
            .choose(rng)
            .expect("the trivial crossed homomorphism")
            .clone();
        Ok(CrossedHomInstance {
            top,
            w,
            w_on_e,
            phi,
        })
    }
}

/// An automorphism of `E` preserving `A` whose `m`-th power is trivial,
/// from a few random generator images; the identity if none is found.
fn random_automorphism<R: Rng + ?Sized>(top: &GroupExtension, m: usize, rng: &mut R) -> Vec<usize> {
    let e = top.total();
    let id: Vec<usize> = e.elements().collect();
    let gens = e.generators();
    for _ in 0..20 {
        let images: Vec<usize> = gens
            .iter()
            .map(|&g| {
                let o = e.element_order(g);
                let cands: Vec<usize> = e.elements().filter(|&y| e.element_order(y) == o).collect();
                *cands.choose(rng).expect("g itself")
            })
            .collect();
        let Some(phi) = e.extend_homomorphism(e, &gens, &images) else {
            continue;
        };
        if !e.is_automorphism(&phi)
            || top
                .inject()
                .iter()
                .any(|&a| top.a_element(phi[a]).is_none())
        {
            continue;
        }
        let mut power = id.clone();
        for _ in 0..m {
            power = power.iter().map(|&x| phi[x]).collect();
        }
        if power == id {
            return phi;
        }
    }
    id
}
