//! Root data of complex reductive groups with a finite, pinning-preserving
//! automorphism action standing in for the Galois group.
//!
//! Characters `X*` and cocharacters `X_*` are both modeled as `Z^rank` with
//! the standard dot product as the perfect pairing. Galois generators are
//! integer matrices acting on `X*`; they act on `X_*` by inverse transpose.

mod catalog;
mod weights;

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlat::{self, FinAbPresentation, IntMatrix};

pub use catalog::{catalog, catalog_names, split_catalog_names};
pub use weights::{adjoint_weights, relative_adjoint_weights, WeightLattice, WeightMultiset};

pub type Vector = Vec<i64>;
pub type Matrix = Vec<Vec<i64>>;

/// Default cap on enumerated Weyl group orders.
pub const DEFAULT_WEYL_BOUND: usize = 10080;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("Weyl group exceeds the order bound {0}")]
    OrderBoundExceeded(usize),
    #[error("Levi subset is not stable under the Galois action")]
    LeviNotGaloisStable,
    #[error("index {0} is not a simple root index")]
    NotSimple(usize),
    #[error("invalid root datum: {0}")]
    Invalid(String),
    #[error("invalid weight multiset: {0}")]
    InvalidWeights(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    pub rank: usize,
    pub roots: Vec<Vector>,
    pub coroots: Vec<Vector>,
    pub simple_indices: Vec<usize>,
    #[serde(default)]
    pub galois_gens: Vec<Matrix>,
}

/// Outcome of [`RootDatum::validate`]; empty `failures` means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }
}

pub fn pairing(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub fn mat_vec(m: &Matrix, v: &[i64]) -> Vector {
    m.iter().map(|row| pairing(row, v)).collect()
}

pub(crate) fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum())
                .collect()
        })
        .collect()
}

pub(crate) fn transpose(m: &Matrix) -> Matrix {
    let n = m.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

pub(crate) fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn neg(v: &[i64]) -> Vector {
    v.iter().map(|x| -x).collect()
}

/// Inverse transpose of a unimodular integer matrix.
pub fn inverse_transpose(m: &Matrix) -> Option<Matrix> {
    let inv = IntMatrix::from_rows(m).unimodular_inverse()?;
    inv.transpose().to_i64_rows()
}

impl RootDatum {
    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn is_split(&self) -> bool {
        self.galois_gens.iter().all(|g| *g == identity(self.rank))
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r == v)
    }

    /// Galois generators acting on `X_*`.
    pub fn galois_on_cocharacters(&self) -> Vec<Matrix> {
        self.galois_gens
            .iter()
            .map(|g| inverse_transpose(g).expect("galois generator must be unimodular"))
            .collect()
    }

    /// Coefficients of a character in the basis of simple roots, if it lies
    /// in their integral span.
    pub fn simple_coefficients(&self, v: &[i64]) -> Option<Vector> {
        let simple: Vec<Vector> = self
            .simple_indices
            .iter()
            .map(|&i| self.roots[i].clone())
            .collect();
        let a = IntMatrix::from_cols(self.rank, &simple);
        let b: Vec<BigInt> = v.iter().map(|&x| x.into()).collect();
        let x = exactlat::solve_mod(&a, &b, &IntMatrix::zeros(self.rank, 0))?;
        x.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Positive roots with respect to the base.
    pub fn positive_root_indices(&self) -> Vec<usize> {
        (0..self.roots.len())
            .filter(|&i| {
                self.simple_coefficients(&self.roots[i])
                    .is_some_and(|c| c.iter().all(|&x| x >= 0))
            })
            .collect()
    }

    /// Sum of the coroots of positive roots.
    pub fn positive_coroot_sum(&self) -> Vector {
        let mut s = vec![0; self.rank];
        for i in self.positive_root_indices() {
            for (a, b) in s.iter_mut().zip(&self.coroots[i]) {
                *a += b;
            }
        }
        s
    }

    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let n = self.rank;
        if self.roots.len() != self.coroots.len() {
            rep.fail(format!(
                "{} roots but {} coroots",
                self.roots.len(),
                self.coroots.len()
            ));
            return rep;
        }
        for (i, (r, c)) in self.roots.iter().zip(&self.coroots).enumerate() {
            if r.len() != n || c.len() != n {
                rep.fail(format!("root/coroot {i} does not have length {n}"));
            }
        }
        if !rep.is_valid() {
            return rep;
        }
        let index: HashMap<&Vector, usize> =
            self.roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
        if index.len() != self.roots.len() {
            rep.fail("roots are not distinct");
        }
        if self.roots.iter().any(|r| r.iter().all(|&x| x == 0)) {
            rep.fail("zero is not a root");
        }
        for (i, (r, c)) in self.roots.iter().zip(&self.coroots).enumerate() {
            let p = pairing(r, c);
            if p != 2 {
                rep.fail(format!("pairing of root {i} with its coroot is {p}, not 2"));
            }
            match index.get(&neg(r)) {
                Some(&j) if self.coroots[j] == neg(c) => {}
                Some(_) => rep.fail(format!("coroot of -root {i} is not -coroot {i}")),
                None => rep.fail(format!("-root {i} is not a root")),
            }
        }
        // reflection closure, on roots and coroots simultaneously
        for (a, av) in self.roots.iter().zip(&self.coroots) {
            for (b, bv) in self.roots.iter().zip(&self.coroots) {
                let k = pairing(av, b);
                let img: Vector = b.iter().zip(a).map(|(x, y)| x - k * y).collect();
                let kv = pairing(bv, a);
                let imgv: Vector = bv.iter().zip(av).map(|(x, y)| x - kv * y).collect();
                match index.get(&img) {
                    Some(&j) if self.coroots[j] == imgv => {}
                    _ => {
                        rep.fail(format!(
                            "reflections do not preserve the roots ({a:?} on {b:?})"
                        ));
                        return rep;
                    }
                }
            }
        }
        self.validate_base(&mut rep);
        if rep.is_valid() {
            self.validate_galois(&mut rep, &index);
        }
        rep
    }

    fn validate_base(&self, rep: &mut ValidationReport) {
        let s = &self.simple_indices;
        if s.iter().any(|&i| i >= self.roots.len()) {
            rep.fail("simple index out of range");
            return;
        }
        if s.iter().collect::<HashSet<_>>().len() != s.len() {
            rep.fail("simple indices repeat");
            return;
        }
        if self.roots.is_empty() {
            return;
        }
        let simple: Vec<Vector> = s.iter().map(|&i| self.roots[i].clone()).collect();
        if s.is_empty() || IntMatrix::from_rows(&simple).rank() != s.len() {
            rep.fail("simple roots are not linearly independent");
            return;
        }
        for (i, r) in self.roots.iter().enumerate() {
            match self.simple_coefficients(r) {
                Some(c) if c.iter().all(|&x| x >= 0) || c.iter().all(|&x| x <= 0) => {}
                _ => rep.fail(format!(
                    "root {i} is not a nonnegative or nonpositive integer combination of the simple roots"
                )),
            }
        }
    }

    fn validate_galois(&self, rep: &mut ValidationReport, index: &HashMap<&Vector, usize>) {
        let simple: HashSet<usize> = self.simple_indices.iter().copied().collect();
        for (k, g) in self.galois_gens.iter().enumerate() {
            if g.len() != self.rank || g.iter().any(|row| row.len() != self.rank) {
                rep.fail(format!("galois generator {k} is not {0}x{0}", self.rank));
                continue;
            }
            let det = IntMatrix::from_rows(g).determinant();
            if det.abs() != BigInt::from(1) {
                rep.fail(format!("galois generator {k} is not invertible over Z"));
                continue;
            }
            let gv = inverse_transpose(g).expect("unimodular");
            for (i, (r, c)) in self.roots.iter().zip(&self.coroots).enumerate() {
                match index.get(&mat_vec(g, r)) {
                    Some(&j) => {
                        if self.coroots[j] != mat_vec(&gv, c) {
                            rep.fail(format!(
                                "galois generator {k} does not carry coroot {i} to the coroot of its image"
                            ));
                        }
                        if simple.contains(&i) && !simple.contains(&j) {
                            rep.fail(format!("galois generator {k} does not preserve the base"));
                        }
                    }
                    None => rep.fail(format!("galois generator {k} does not permute the roots")),
                }
            }
        }
    }

    /// Swaps characters and cocharacters.
    pub fn dualize(&self) -> RootDatum {
        RootDatum {
            rank: self.rank,
            roots: self.coroots.clone(),
            coroots: self.roots.clone(),
            simple_indices: self.simple_indices.clone(),
            galois_gens: self.galois_on_cocharacters(),
        }
    }

    /// `X_* / <coroots>`; its `project` maps cocharacters to `pi_1`.
    pub fn fundamental_group(&self) -> FinAbPresentation {
        exactlat::quotient(self.rank, &IntMatrix::from_cols(self.rank, &self.coroots))
    }

    /// `X* / <roots>`, the character group of the center.
    pub fn center_characters(&self) -> FinAbPresentation {
        exactlat::quotient(self.rank, &IntMatrix::from_cols(self.rank, &self.roots))
    }

    /// Matrix of the reflection in root `i`, acting on `X*`.
    pub fn reflection(&self, i: usize) -> Matrix {
        let (a, av) = (&self.roots[i], &self.coroots[i]);
        (0..self.rank)
            .map(|r| {
                (0..self.rank)
                    .map(|c| i64::from(r == c) - a[r] * av[c])
                    .collect()
            })
            .collect()
    }

    /// Weyl group acting on `X*`, enumerated breadth-first from the identity
    /// using simple reflections in base order.
    pub fn weyl_group(&self, bound: usize) -> Result<Vec<Matrix>, RootDataError> {
        let gens: Vec<Matrix> = self
            .simple_indices
            .iter()
            .map(|&i| self.reflection(i))
            .collect();
        let id = identity(self.rank);
        let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            for s in &gens {
                let next = mat_mul(&w, s);
                if seen.insert(next.clone()) {
                    if out.len() >= bound {
                        return Err(RootDataError::OrderBoundExceeded(bound));
                    }
                    out.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(p: &FinAbPresentation) -> Vec<i64> {
        p.invariant_factors()
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn sl2_pgl2_gl1_fundamental_groups() {
        assert!(factors(&catalog("SL2").unwrap().fundamental_group()).is_empty());
        assert_eq!(
            factors(&catalog("PGL2").unwrap().fundamental_group()),
            vec![2]
        );
        assert_eq!(
            factors(&catalog("GL1").unwrap().fundamental_group()),
            vec![0]
        );
    }

    #[test]
    fn validation_examples() {
        assert!(catalog("SL2").unwrap().validate().is_valid());
        let mut bad = catalog("SL2").unwrap();
        bad.coroots = bad
            .coroots
            .iter()
            .map(|c| c.iter().map(|x| 2 * x).collect())
            .collect();
        let rep = bad.validate();
        assert!(!rep.is_valid());
        assert!(
            rep.failures.iter().any(|f| f.contains("is 4, not 2")),
            "{rep:?}"
        );
    }

    #[test]
    fn outer_swap_on_a2_is_valid() {
        let mut d = catalog("SL3").unwrap();
        // fundamental-weight coordinates: swapping them swaps the simple roots
        d.galois_gens = vec![vec![vec![0, 1], vec![1, 0]]];
        // explicit check that all six roots are permuted
        let g = &d.galois_gens[0];
        let mut images: Vec<Vector> = d.roots.iter().map(|r| mat_vec(g, r)).collect();
        let mut roots = d.roots.clone();
        images.sort();
        roots.sort();
        assert_eq!(images, roots);
        assert!(d.validate().is_valid(), "{:?}", d.validate());
    }

    #[test]
    fn galois_generator_breaking_base_is_rejected() {
        let mut d = catalog("SL2").unwrap();
        d.galois_gens = vec![vec![vec![-1]]];
        assert!(!d.validate().is_valid());
    }

    #[test]
    fn dualize_examples() {
        assert_eq!(catalog("SL2").unwrap().dualize(), catalog("PGL2").unwrap());
        assert_eq!(catalog("GL1").unwrap().dualize(), catalog("GL1").unwrap());
        for name in catalog_names() {
            let d = catalog(&name).unwrap();
            assert_eq!(d.dualize().dualize(), d, "{name}");
        }
    }

    #[test]
    fn weyl_orders() {
        let order = |n: &str| {
            catalog(n)
                .unwrap()
                .weyl_group(DEFAULT_WEYL_BOUND)
                .unwrap()
                .len()
        };
        assert_eq!(order("SL2"), 2);
        assert_eq!(order("SL3"), 6);
        assert_eq!(order("Sp4"), 8);
        assert_eq!(order("SO5"), 8);
        assert_eq!(order("G2"), 12);
        assert_eq!(order("GL1"), 1);
        assert_eq!(order("SO8"), 192);
        assert_eq!(
            catalog("SL3").unwrap().weyl_group(4),
            Err(RootDataError::OrderBoundExceeded(4))
        );
    }

    #[test]
    fn every_catalog_entry_validates() {
        for name in catalog_names() {
            let d = catalog(&name).unwrap();
            let rep = d.validate();
            assert!(rep.is_valid(), "{name}: {rep:?}");
        }
    }

    #[test]
    fn pi1_of_dual_matches_center_characters() {
        for name in catalog_names() {
            let d = catalog(&name).unwrap();
            let a = d.dualize().fundamental_group();
            let b = d.center_characters();
            assert_eq!(a.invariant_factors(), b.invariant_factors(), "{name}");
        }
    }

    #[test]
    fn positive_coroot_sum_sl2() {
        let d = catalog("SL2").unwrap();
        assert_eq!(d.positive_coroot_sum(), vec![1]);
    }
}
