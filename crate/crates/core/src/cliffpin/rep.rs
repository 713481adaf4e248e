use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{CliffError, CliffordElement, QuadSpace, Rat, RatMatrix};
use crate::gcoh::{classes_equal, h2, Bounds, Cocycle2, FiniteGroup, GModule};

/// Scales `v` to a primitive integer vector on the same line, first nonzero
/// entry positive.
fn primitive(v: &[Rat]) -> Vec<Rat> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rat::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    if ints
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        g = -g;
    }
    ints.into_iter()
        .map(|x| Rat::from_integer(x / &g))
        .collect()
}

fn unit(n: usize, i: usize) -> Vec<Rat> {
    (0..n)
        .map(|k| if k == i { Rat::one() } else { Rat::zero() })
        .collect()
}

fn check_orthogonal(m: &RatMatrix, space: &QuadSpace) -> Result<(), CliffError> {
    if !space.is_orthogonal(m) {
        return Err(CliffError::NotOrthogonal(format!(
            "{}x{} matrix does not preserve the form",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Factors `m = r_{v_1} ... r_{v_k}` using candidates `u` in turn: when
/// the current `m` moves `u`, the reflection in `m u - u` is split off and
/// `u` joins the fixed space.
fn decompose_with(
    m: &RatMatrix,
    space: &QuadSpace,
    mut candidate: impl FnMut(usize) -> Vec<Rat>,
) -> Result<Vec<Vec<Rat>>, CliffError> {
    check_orthogonal(m, space)?;
    let n = space.dim();
    let mut rest = m.clone();
    let mut out = Vec::new();
    let mut tries = 0;
    while rest != RatMatrix::identity(n) {
        let u = candidate(tries);
        tries += 1;
        let mu = rest.mul_vec(&u);
        if mu == u {
            continue;
        }
        let v = primitive(&mu.iter().zip(&u).map(|(a, b)| a - b).collect::<Vec<_>>());
        // r_v m u = u, and r_v fixes whatever m fixed
        rest = space.reflection(&v)?.mul(&rest);
        out.push(v);
        assert!(out.len() <= n, "Cartan-Dieudonne bound exceeded");
    }
    let back = out.iter().try_fold(RatMatrix::identity(n), |acc, v| {
        Ok::<_, CliffError>(acc.mul(&space.reflection(v)?))
    })?;
    debug_assert_eq!(&back, m);
    Ok(out)
}

/// Deterministic factorization into at most `dim` reflections, pivoting on
/// the first basis vector the remaining matrix moves.
pub fn reflection_decompose(m: &RatMatrix, space: &QuadSpace) -> Result<Vec<Vec<Rat>>, CliffError> {
    let n = space.dim();
    decompose_with(m, space, |t| unit(n, t % n.max(1)))
}

/// Factorization pivoting on random small integer vectors.
pub fn reflection_decompose_random<R: Rng + ?Sized>(
    m: &RatMatrix,
    space: &QuadSpace,
    rng: &mut R,
) -> Result<Vec<Vec<Rat>>, CliffError> {
    let n = space.dim();
    decompose_with(m, space, |_| {
        (0..n)
            .map(|_| Rat::from_integer(rng.gen_range(-2i64..=2).into()))
            .collect()
    })
}

/// A lift of an orthogonal matrix to the Clifford group.
#[derive(Clone, Debug, Serialize)]
pub struct PinLift {
    pub vectors: Vec<Vec<super::RatValue>>,
    pub element: CliffordElement,
    pub spinor_norm: super::RatValue,
}

/// The product of the reflection vectors: it acts on `V` by `m` under
/// twisted conjugation and has positive spinor norm `prod Q(v_i)`.
pub fn pin_lift(m: &RatMatrix, space: &Arc<QuadSpace>) -> Result<PinLift, CliffError> {
    let vs = reflection_decompose(m, space)?;
    lift_from(&vs, space)
}

fn lift_from(vs: &[Vec<Rat>], space: &Arc<QuadSpace>) -> Result<PinLift, CliffError> {
    let element = vs.iter().try_fold(CliffordElement::one(space), |acc, v| {
        acc.mul(&CliffordElement::vector(space, v))
    })?;
    let norm = element.spinor_norm()?;
    Ok(PinLift {
        vectors: vs
            .iter()
            .map(|v| v.iter().cloned().map(super::RatValue).collect())
            .collect(),
        element,
        spinor_norm: super::RatValue(norm),
    })
}

/// A homomorphism from a finite group to the orthogonal group of a rational
/// positive-definite form.
#[derive(Clone, Debug)]
pub struct OrthRep {
    group: FiniteGroup,
    space: Arc<QuadSpace>,
    images: Vec<RatMatrix>,
}

#[derive(Serialize, Deserialize)]
struct OrthRepData {
    group: FiniteGroup,
    gram: RatMatrix,
    images: Vec<RatMatrix>,
}

impl Serialize for OrthRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OrthRepData {
            group: self.group.clone(),
            gram: self.space.gram().clone(),
            images: self.images.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrthRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let data = OrthRepData::deserialize(d)?;
        let space = QuadSpace::new(data.gram).map_err(D::Error::custom)?;
        OrthRep::new(data.group, space, data.images).map_err(D::Error::custom)
    }
}

/// `w2` of a representation: the pin cocycle and its class.
#[derive(Clone, Debug, Serialize)]
pub struct Sw2 {
    pub cocycle: Cocycle2,
    pub nontrivial: bool,
    /// Coordinates in `H^2(G, Z/2)` along its invariant factors, when within
    /// the size bound.
    pub class: Option<Vec<u64>>,
}

impl OrthRep {
    pub fn new(
        group: FiniteGroup,
        space: Arc<QuadSpace>,
        images: Vec<RatMatrix>,
    ) -> Result<Self, CliffError> {
        if images.len() != group.order() {
            return Err(CliffError::InvalidRep(
                "one matrix per group element".into(),
            ));
        }
        for (g, m) in images.iter().enumerate() {
            check_orthogonal(m, &space)
                .map_err(|_| CliffError::NotOrthogonal(format!("image of element {g}")))?;
        }
        if images[group.identity()] != RatMatrix::identity(space.dim()) {
            return Err(CliffError::InvalidRep(
                "identity must map to the identity".into(),
            ));
        }
        for a in group.elements() {
            for b in group.elements() {
                if images[a].mul(&images[b]) != images[group.mul(a, b)] {
                    return Err(CliffError::InvalidRep(format!(
                        "not multiplicative at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(OrthRep {
            group,
            space,
            images,
        })
    }

    /// Extends images of `gens` along words in them.
    pub fn from_generators(
        group: &FiniteGroup,
        space: &Arc<QuadSpace>,
        gens: &[usize],
        gen_images: &[RatMatrix],
    ) -> Result<Self, CliffError> {
        let (order, tree) = group.word_tree(gens);
        if order.len() != group.order() {
            return Err(CliffError::InvalidRep(
                "elements do not generate the group".into(),
            ));
        }
        let mut images = vec![RatMatrix::identity(space.dim()); group.order()];
        for &x in &order {
            if let Some((p, k)) = tree[x] {
                images[x] = images[p].mul(&gen_images[k]);
            }
        }
        Self::new(group.clone(), space.clone(), images)
    }

    /// The one-dimensional representation `g -> (-1)^{chi(g)}`.
    pub fn from_character(group: &FiniteGroup, chi: &[u8]) -> Result<Self, CliffError> {
        let images = chi
            .iter()
            .map(|&c| RatMatrix::diagonal(&[if c % 2 == 1 { -1 } else { 1 }]))
            .collect();
        Self::new(group.clone(), QuadSpace::standard(1)?, images)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn space(&self) -> &Arc<QuadSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn image(&self, g: usize) -> &RatMatrix {
        &self.images[g]
    }

    pub fn direct_sum(&self, other: &OrthRep) -> Result<OrthRep, CliffError> {
        if self.group != other.group {
            return Err(CliffError::InvalidRep(
                "direct sum over different groups".into(),
            ));
        }
        let space = self.space.direct_sum(&other.space)?;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.block_sum(b))
            .collect();
        Ok(OrthRep {
            group: self.group.clone(),
            space,
            images,
        })
    }

    /// `w1`: `g -> 1` exactly when `det r(g) = -1`.
    pub fn sw1(&self) -> Vec<u8> {
        self.images
            .iter()
            .map(|m| u8::from(m.determinant().is_negative()))
            .collect()
    }

    /// Pin lifts from the deterministic decomposition.
    pub fn lifts(&self) -> Result<Vec<CliffordElement>, CliffError> {
        self.images
            .iter()
            .map(|m| Ok(pin_lift(m, &self.space)?.element))
            .collect()
    }

    /// Pin lifts from random decompositions (the identity still lifts to 1).
    pub fn random_lifts<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<Vec<CliffordElement>, CliffError> {
        self.images
            .iter()
            .map(|m| {
                let vs = reflection_decompose_random(m, &self.space, rng)?;
                Ok(lift_from(&vs, &self.space)?.element)
            })
            .collect()
    }

    /// `z(g, h) = 1` exactly when the scalar `x_g x_h x_{gh}^{-1}` is negative.
    pub fn pin_cocycle(&self, lifts: &[CliffordElement]) -> Result<Cocycle2, CliffError> {
        let g = &self.group;
        let n = g.order();
        let mut values = vec![vec![vec![0u64]; n]; n];
        for a in g.elements() {
            for b in g.elements() {
                let prod = lifts[a].mul(&lifts[b])?;
                let c = prod
                    .ratio(&lifts[g.mul(a, b)])
                    .ok_or(CliffError::NonScalarDefect(a, b))?;
                values[a][b] = vec![u64::from(c.is_negative())];
            }
        }
        Ok(Cocycle2::new(GModule::trivial(g.clone(), &[2]), values)?)
    }

    pub fn sw2(&self) -> Result<Sw2, CliffError> {
        self.sw2_from(&self.lifts()?)
    }

    pub fn sw2_random<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Sw2, CliffError> {
        self.sw2_from(&self.random_lifts(rng)?)
    }

    fn sw2_from(&self, lifts: &[CliffordElement]) -> Result<Sw2, CliffError> {
        let cocycle = self.pin_cocycle(lifts)?;
        let nontrivial = classes_equal(&cocycle, &Cocycle2::zero(cocycle.module()))?.is_none();
        let class = h2(cocycle.module(), Bounds::default().h2_size)
            .ok()
            .map(|h| h.class_of(&cocycle))
            .transpose()?;
        Ok(Sw2 {
            cocycle,
            nontrivial,
            class,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcoh::small::quaternion;
    use crate::gcoh::GroupExtension;
    use rand::SeedableRng;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn rv(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| r(x)).collect()
    }

    #[test]
    fn decompositions() {
        let s = QuadSpace::standard(2).unwrap();
        assert_eq!(
            reflection_decompose(&RatMatrix::diagonal(&[-1, 1]), &s).unwrap(),
            vec![rv(&[1, 0])]
        );
        assert!(reflection_decompose(&RatMatrix::identity(2), &s)
            .unwrap()
            .is_empty());
        let rot = RatMatrix::from_ints(&[vec![0, -1], vec![1, 0]]);
        let vs = reflection_decompose(&rot, &s).unwrap();
        assert_eq!(vs.len(), 2);
        let back = s
            .reflection(&vs[0])
            .unwrap()
            .mul(&s.reflection(&vs[1]).unwrap());
        assert_eq!(back, rot);
        let lift = pin_lift(&rot, &s).unwrap();
        assert_eq!(lift.spinor_norm.0, r(2));
        assert!(
            reflection_decompose(&RatMatrix::from_ints(&[vec![1, 1], vec![0, 1]]), &s).is_err()
        );
    }

    #[test]
    fn lifts_act_by_their_matrix() {
        let gram = RatMatrix::from_ints(&[vec![2, -1, 0], vec![-1, 2, 0], vec![0, 0, 3]]);
        let s = QuadSpace::new(gram).unwrap();
        let m = RatMatrix::from_ints(&[vec![1, -1, 0], vec![1, 0, 0], vec![0, 0, -1]]);
        assert!(s.is_orthogonal(&m));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let vs = reflection_decompose_random(&m, &s, &mut rng).unwrap();
            let x = lift_from(&vs, &s).unwrap().element;
            assert!(x.spinor_norm().unwrap().is_positive());
            for i in 0..3 {
                let e = unit(3, i);
                assert_eq!(x.twisted_action(&e).unwrap().unwrap(), m.mul_vec(&e));
            }
        }
    }

    #[test]
    fn sign_rep_has_trivial_w2() {
        let c2 = FiniteGroup::cyclic(2);
        let rep = OrthRep::from_character(&c2, &[0, 1]).unwrap();
        assert_eq!(rep.sw1(), vec![0, 1]);
        assert!(!rep.sw2().unwrap().nontrivial);
        // -I in the plane: w2 = w1^2
        let minus = rep.direct_sum(&rep).unwrap();
        assert!(minus.sw2().unwrap().nontrivial);
    }

    #[test]
    fn rotation_of_order_four_gives_z8() {
        let s = QuadSpace::standard(2).unwrap();
        let c4 = FiniteGroup::cyclic(4);
        let rot = RatMatrix::from_ints(&[vec![0, -1], vec![1, 0]]);
        let rep = OrthRep::from_generators(&c4, &s, &[1], &[rot]).unwrap();
        let w = rep.sw2().unwrap();
        assert!(w.nontrivial);
        let e = GroupExtension::from_cocycle(&w.cocycle, 16).unwrap();
        assert!(e.total().is_isomorphic(&FiniteGroup::cyclic(8)));
    }

    #[test]
    fn diagonal_klein_in_so3_gives_q8() {
        let s = QuadSpace::standard(3).unwrap();
        let c2 = FiniteGroup::cyclic(2);
        let v4 = c2.direct_product(&c2);
        let rep = OrthRep::from_generators(
            &v4,
            &s,
            &[2, 1],
            &[
                RatMatrix::diagonal(&[1, -1, -1]),
                RatMatrix::diagonal(&[-1, 1, -1]),
            ],
        )
        .unwrap();
        assert_eq!(rep.sw1(), vec![0; 4]);
        let w = rep.sw2().unwrap();
        assert!(w.nontrivial);
        let e = GroupExtension::from_cocycle(&w.cocycle, 16).unwrap();
        assert!(e.total().is_isomorphic(&quaternion()));
    }

    #[test]
    fn invalid_reps() {
        let s = QuadSpace::standard(1).unwrap();
        let c2 = FiniteGroup::cyclic(2);
        let bad = OrthRep::new(
            c2.clone(),
            s.clone(),
            vec![RatMatrix::identity(1), RatMatrix::diagonal(&[2])],
        );
        assert!(matches!(bad, Err(CliffError::NotOrthogonal(_))));
        let c3 = FiniteGroup::cyclic(3);
        let bad = OrthRep::from_generators(&c3, &s, &[1], &[RatMatrix::diagonal(&[-1])]);
        assert!(matches!(bad, Err(CliffError::InvalidRep(_))));
    }
}
