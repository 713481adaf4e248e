//! Exact Clifford algebras of rational positive-definite quadratic spaces,
//! pin lifts of orthogonal matrices and the Stiefel-Whitney classes
//! `w1`, `w2` of finite orthogonal representations.
//!
//! Conventions: `v^2 = Q(v)` in the Clifford algebra; the pin group acts on
//! vectors by twisted conjugation `x . v = x^ v x^{-1}`, with `x^` the grade
//! involution, so a vector `u` acts as the reflection `r_u`.

mod algebra;
mod catalog;
mod rat;
mod rep;

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::gcoh::GcohError;

pub use algebra::CliffordElement;
pub use catalog::{rep_catalog, rep_groups, CatalogRep};
pub use rat::{RatMatrix, RatValue};
pub use rep::{pin_lift, reflection_decompose, reflection_decompose_random, OrthRep, PinLift, Sw2};

pub type Rat = BigRational;

/// Largest supported dimension (`2^12` Clifford coefficients).
pub const MAX_DIM: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffError {
    #[error("elements live in different quadratic spaces")]
    SpaceMismatch,
    #[error("x . alpha(x) is not a scalar")]
    NotScalarNorm,
    #[error("matrix is not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("lift defect at ({0}, {1}) is not a scalar")]
    NonScalarDefect(usize, usize),
    #[error("Gram matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("dimension {dim} is above the bound {bound}")]
    DimensionBound { dim: usize, bound: usize },
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error(transparent)]
    Cohomology(#[from] GcohError),
}

/// A rational quadratic space `(Q^n, B)` with `Q(v) = B(v, v)` and a fixed
/// orthogonal frame from Gram-Schmidt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSpace {
    gram: RatMatrix,
    // columns are the frame vectors f_i
    frame: RatMatrix,
    frame_inv: RatMatrix,
    q: Vec<Rat>,
}

impl QuadSpace {
    pub fn new(gram: RatMatrix) -> Result<Arc<Self>, CliffError> {
        let n = gram.rows();
        if gram.cols() != n || (0..n).any(|i| (0..i).any(|j| gram[(i, j)] != gram[(j, i)])) {
            return Err(CliffError::NotPositiveDefinite);
        }
        if n > MAX_DIM {
            return Err(CliffError::DimensionBound {
                dim: n,
                bound: MAX_DIM,
            });
        }
        let b = |u: &[Rat], v: &[Rat]| gram.bilinear(u, v);
        let mut fs: Vec<Vec<Rat>> = Vec::with_capacity(n);
        let mut q: Vec<Rat> = Vec::with_capacity(n);
        for i in 0..n {
            let mut f: Vec<Rat> = (0..n)
                .map(|k| if k == i { Rat::one() } else { Rat::zero() })
                .collect();
            let ei = f.clone();
            for (fj, qj) in fs.iter().zip(&q) {
                let c = b(&ei, fj) / qj;
                for (x, y) in f.iter_mut().zip(fj) {
                    *x -= &c * y;
                }
            }
            let qi = b(&f, &f);
            // all pivots positive iff positive definite
            if !qi.is_positive() {
                return Err(CliffError::NotPositiveDefinite);
            }
            q.push(qi);
            fs.push(f);
        }
        let frame = RatMatrix::from_cols(n, &fs);
        let frame_inv = frame.inverse().expect("unitriangular");
        Ok(Arc::new(QuadSpace {
            gram,
            frame,
            frame_inv,
            q,
        }))
    }

    /// `Q^n` with the standard dot product.
    pub fn standard(n: usize) -> Result<Arc<Self>, CliffError> {
        Self::new(RatMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// `Q(f_i)` for the orthogonal frame.
    pub fn frame_norms(&self) -> &[Rat] {
        &self.q
    }

    pub fn bilinear(&self, u: &[Rat], v: &[Rat]) -> Rat {
        self.gram.bilinear(u, v)
    }

    pub fn quad(&self, v: &[Rat]) -> Rat {
        self.bilinear(v, v)
    }

    /// Coordinates in the orthogonal frame.
    pub fn to_frame(&self, v: &[Rat]) -> Vec<Rat> {
        self.frame_inv.mul_vec(v)
    }

    pub fn from_frame(&self, c: &[Rat]) -> Vec<Rat> {
        self.frame.mul_vec(c)
    }

    /// `r_v(x) = x - 2 B(v, x) / Q(v) v`.
    pub fn reflection(&self, v: &[Rat]) -> Result<RatMatrix, CliffError> {
        let qv = self.quad(v);
        if qv.is_zero() {
            return Err(CliffError::NotOrthogonal(
                "reflection in an isotropic vector".into(),
            ));
        }
        let n = self.dim();
        let gv = self.gram.mul_vec(v);
        let two = Rat::from_integer(2.into());
        let mut m = RatMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= &two * &v[i] * &gv[j] / &qv;
            }
        }
        Ok(m)
    }

    /// Whether `m^T G m = G`.
    pub fn is_orthogonal(&self, m: &RatMatrix) -> bool {
        m.rows() == self.dim()
            && m.cols() == self.dim()
            && m.transpose().mul(&self.gram).mul(m) == self.gram
    }

    /// `self + other` with block Gram matrix.
    pub fn direct_sum(&self, other: &QuadSpace) -> Result<Arc<Self>, CliffError> {
        Self::new(self.gram.block_sum(&other.gram))
    }
}
