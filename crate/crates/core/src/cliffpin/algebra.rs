use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{CliffError, QuadSpace, Rat, RatValue};

/// An element of `Cl(V)`, as coefficients on the monomials `f_S` of the
/// orthogonal frame (bit `i` of the mask set when `f_i` occurs, factors in
/// increasing order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordElement {
    space: Arc<QuadSpace>,
    coeffs: BTreeMap<u32, Rat>,
}

impl CliffordElement {
    pub fn zero(space: &Arc<QuadSpace>) -> Self {
        CliffordElement {
            space: space.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(space: &Arc<QuadSpace>, c: Rat) -> Self {
        let mut x = Self::zero(space);
        x.push(0, c);
        x
    }

    pub fn one(space: &Arc<QuadSpace>) -> Self {
        Self::scalar(space, Rat::one())
    }

    /// The vector `v`, given in the coordinates of `space`.
    pub fn vector(space: &Arc<QuadSpace>, v: &[Rat]) -> Self {
        let mut x = Self::zero(space);
        for (i, c) in space.to_frame(v).into_iter().enumerate() {
            x.push(1 << i, c);
        }
        x
    }

    /// The frame monomial `f_{i_1} ... f_{i_k}` for increasing indices.
    pub fn monomial(space: &Arc<QuadSpace>, indices: &[usize]) -> Self {
        let mut x = Self::one(space);
        for &i in indices {
            let mut c = vec![Rat::zero(); space.dim()];
            c[i] = Rat::one();
            x = x
                .mul(&Self::vector(space, &space.from_frame(&c)))
                .expect("same space");
        }
        x
    }

    fn push(&mut self, mask: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(mask).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&mask);
        }
    }

    pub fn space(&self) -> &Arc<QuadSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Rat> {
        &self.coeffs
    }

    pub fn coeff(&self, mask: u32) -> Rat {
        self.coeffs.get(&mask).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_space(&self, other: &Self) -> Result<(), CliffError> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space == other.space {
            Ok(())
        } else {
            Err(CliffError::SpaceMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, CliffError> {
        self.same_space(other)?;
        let mut x = self.clone();
        for (&m, c) in &other.coeffs {
            x.push(m, c.clone());
        }
        Ok(x)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut x = Self::zero(&self.space);
        for (&m, a) in &self.coeffs {
            x.push(m, a * c);
        }
        x
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CliffError> {
        self.same_space(other)?;
        let q = self.space.frame_norms();
        let mut out = Self::zero(&self.space);
        for (&a, x) in &self.coeffs {
            for (&b, y) in &other.coeffs {
                let mut c = x * y;
                // moving each f_j of b left past the larger f_i of a
                let mut swaps = 0;
                for j in 0..32 {
                    if b >> j & 1 == 1 {
                        swaps += (a >> (j + 1)).count_ones();
                    }
                }
                if swaps % 2 == 1 {
                    c = -c;
                }
                let common = a & b;
                for (i, qi) in q.iter().enumerate() {
                    if common >> i & 1 == 1 {
                        c *= qi;
                    }
                }
                out.push(a ^ b, c);
            }
        }
        Ok(out)
    }

    /// The main anti-involution, reversing the order of factors.
    pub fn main_antiinvolution(&self) -> Self {
        let mut x = Self::zero(&self.space);
        for (&m, c) in &self.coeffs {
            let k = m.count_ones();
            let sign = if (k * k.saturating_sub(1) / 2) % 2 == 1 {
                -c.clone()
            } else {
                c.clone()
            };
            x.push(m, sign);
        }
        x
    }

    /// The grade involution, `-1` on vectors.
    pub fn grade_involution(&self) -> Self {
        let mut x = Self::zero(&self.space);
        for (&m, c) in &self.coeffs {
            x.push(
                m,
                if m.count_ones() % 2 == 1 {
                    -c.clone()
                } else {
                    c.clone()
                },
            );
        }
        x
    }

    pub fn as_scalar(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    /// `x . alpha(x)`, which must be a scalar.
    pub fn spinor_norm(&self) -> Result<Rat, CliffError> {
        self.mul(&self.main_antiinvolution())?
            .as_scalar()
            .ok_or(CliffError::NotScalarNorm)
    }

    /// `alpha(x) / N(x)` when the norm is a nonzero scalar.
    pub fn inverse(&self) -> Result<Self, CliffError> {
        let n = self.spinor_norm()?;
        if n.is_zero() {
            return Err(CliffError::NotScalarNorm);
        }
        Ok(self.main_antiinvolution().scale(&n.recip()))
    }

    /// `Some(0)` if even, `Some(1)` if odd, `None` if mixed or zero.
    pub fn parity(&self) -> Option<u8> {
        let mut ps = self.coeffs.keys().map(|m| (m.count_ones() % 2) as u8);
        let first = ps.next()?;
        ps.all(|p| p == first).then_some(first)
    }

    /// `x^ v x^{-1}` for a vector `v`, or `None` if the result leaves `V`.
    pub fn twisted_action(&self, v: &[Rat]) -> Result<Option<Vec<Rat>>, CliffError> {
        let y = self
            .grade_involution()
            .mul(&Self::vector(&self.space, v))?
            .mul(&self.inverse()?)?;
        if y.coeffs.keys().any(|m| m.count_ones() != 1) {
            return Ok(None);
        }
        let frame: Vec<Rat> = (0..self.space.dim()).map(|i| y.coeff(1 << i)).collect();
        Ok(Some(self.space.from_frame(&frame)))
    }

    /// Scalar multiple relating two elements, if `self = c * other`.
    pub fn ratio(&self, other: &Self) -> Option<Rat> {
        let (&m, y) = other.coeffs.iter().next()?;
        let c = self.coeff(m) / y;
        (*self == other.scale(&c)).then_some(c)
    }

    pub fn sign_of_scalar(&self) -> Option<bool> {
        self.as_scalar()
            .filter(|c| !c.is_zero())
            .map(|c| c.is_positive())
    }
}

/// `{blade: [frame indices], coeff: [p, q]}` terms.
impl Serialize for CliffordElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            blade: Vec<usize>,
            coeff: RatValue,
        }
        let terms: Vec<Term> = self
            .coeffs
            .iter()
            .map(|(&m, c)| Term {
                blade: (0..32).filter(|i| m >> i & 1 == 1).collect(),
                coeff: RatValue(c.clone()),
            })
            .collect();
        terms.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliffpin::RatMatrix;

    fn r(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    #[test]
    fn relations_in_the_plane() {
        let v = QuadSpace::standard(2).unwrap();
        let e1 = CliffordElement::monomial(&v, &[0]);
        let e2 = CliffordElement::monomial(&v, &[1]);
        assert_eq!(e1.mul(&e1).unwrap().as_scalar(), Some(r(1)));
        assert!(e1
            .mul(&e2)
            .unwrap()
            .add(&e2.mul(&e1).unwrap())
            .unwrap()
            .is_zero());
        let e12 = e1.mul(&e2).unwrap();
        assert_eq!(e12.mul(&e12).unwrap().as_scalar(), Some(r(-1)));
        assert_eq!(e12.main_antiinvolution(), e12.neg());
        assert_eq!(e12.spinor_norm().unwrap(), r(1));
    }

    #[test]
    fn vectors_square_to_their_norm() {
        let gram = RatMatrix::from_ints(&[vec![2, -1], vec![-1, 2]]);
        let s = QuadSpace::new(gram).unwrap();
        for v in [[1, 0], [1, 1], [3, -2]] {
            let v: Vec<Rat> = v.iter().map(|&x| r(x)).collect();
            let x = CliffordElement::vector(&s, &v);
            assert_eq!(x.mul(&x).unwrap().as_scalar(), Some(s.quad(&v)));
            assert_eq!(x.spinor_norm().unwrap(), s.quad(&v));
            // a vector acts as the reflection in it
            let w = vec![r(1), r(2)];
            let image = x.twisted_action(&w).unwrap().unwrap();
            assert_eq!(image, s.reflection(&v).unwrap().mul_vec(&w));
        }
    }

    #[test]
    fn mixed_elements_have_no_scalar_norm() {
        let v = QuadSpace::standard(3).unwrap();
        let x = CliffordElement::one(&v)
            .add(&CliffordElement::monomial(&v, &[0]))
            .unwrap();
        assert_eq!(x.spinor_norm(), Err(CliffError::NotScalarNorm));
        let y = x.add(&CliffordElement::monomial(&v, &[1, 2])).unwrap();
        assert!(y.spinor_norm().is_err());
    }

    #[test]
    fn space_mismatch() {
        let a = CliffordElement::one(&QuadSpace::standard(2).unwrap());
        let b = CliffordElement::one(&QuadSpace::standard(3).unwrap());
        assert_eq!(a.mul(&b), Err(CliffError::SpaceMismatch));
    }
}
