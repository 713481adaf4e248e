use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Cocycle2, GModule, GcohError};
use crate::exactlat::{quotient, FinAbPresentation, IntMatrix, ModSmith};

/// `H^2(G, A)` with normalized representatives.
#[derive(Clone, Debug)]
pub struct H2 {
    module: GModule,
    group: FinAbPresentation,
    representatives: Vec<Cocycle2>,
    basis: CocycleBasis,
}

/// Cocycles in the coordinates `y = V^{-1} x` of the diagonalized `d^2`:
/// `x` is a cocycle iff `y_t` is a multiple of `e / g_t` for every `t`.
#[derive(Clone, Debug)]
struct CocycleBasis {
    e: u64,
    ncols: usize,
    // (column t, g_t) for the coordinates with g_t > 1
    kept: Vec<(usize, u64)>,
    ms: ModSmith,
    nonid: Vec<usize>,
    slot: Vec<usize>,
}

impl CocycleBasis {
    /// `x` as a vector over `Z/e` (variables `(g, h, j)` with `g, h != 1`).
    fn flatten(&self, z: &Cocycle2) -> Vec<u64> {
        let k = z.module().rank();
        let mut x = vec![0u64; self.ncols];
        for (p, &g) in self.nonid.iter().enumerate() {
            for (q, &h) in self.nonid.iter().enumerate() {
                for j in 0..k {
                    x[(p * self.nonid.len() + q) * k + j] = z.value(g, h)[j];
                }
            }
        }
        x
    }

    /// Coordinates in `(+) Z/g_t`, or `None` if `x` is not a cocycle.
    fn coords(&self, x: &[u64]) -> Option<Vec<BigInt>> {
        let vi = self.ms.v_inverse().expect("V^{-1} tracked");
        let e = self.e as u128;
        let y: Vec<u64> = vi
            .iter()
            .map(|row| {
                (row.iter()
                    .zip(x)
                    .map(|(&a, &b)| a as u128 * b as u128 % e)
                    .sum::<u128>()
                    % e) as u64
            })
            .collect();
        let mut out = Vec::with_capacity(self.kept.len());
        let mut is_kept = vec![false; self.ncols];
        for &(t, g) in &self.kept {
            is_kept[t] = true;
            let step = self.e / g;
            if !y[t].is_multiple_of(step) {
                return None;
            }
            out.push(BigInt::from(y[t] / step));
        }
        if y.iter().enumerate().any(|(t, &yt)| !is_kept[t] && yt != 0) {
            return None;
        }
        Some(out)
    }

    /// The cochain with the given coordinates.
    fn cochain(&self, module: &GModule, t: &[BigInt]) -> Cocycle2 {
        let mut y = vec![0u64; self.ncols];
        for (&(col, g), c) in self.kept.iter().zip(t) {
            let c = c.mod_floor(&BigInt::from(g)).to_u64().expect("reduced");
            y[col] = c * (self.e / g);
        }
        let x = self.ms.apply_v(&y);
        let k = module.rank();
        let m = self.nonid.len();
        let moduli = module.moduli().to_vec();
        Cocycle2::from_fn(module, |g, h| {
            if self.slot[g] == usize::MAX || self.slot[h] == usize::MAX {
                return module.zero();
            }
            let base = (self.slot[g] * m + self.slot[h]) * k;
            (0..k).map(|j| x[base + j] % moduli[j]).collect()
        })
    }
}

/// Computes `Z^2 / B^2` for normalized cochains by diagonalizing `d^2` over
/// `Z/e`. `bound` limits `|G| * (ambient rank of A)`.
pub fn h2(module: &GModule, bound: usize) -> Result<H2, GcohError> {
    let g = module.group();
    let n = g.order();
    let size = n * module.presentation().ambient_rank();
    if size > bound {
        return Err(GcohError::SizeBoundExceeded {
            what: "|G| * rank(A) for H^2".into(),
            size,
            bound,
        });
    }
    let k = module.rank();
    let e = module.exponent();
    let id = g.identity();
    let nonid: Vec<usize> = g.elements().filter(|&x| x != id).collect();
    let m = nonid.len();
    let mut slot = vec![usize::MAX; n];
    for (p, &x) in nonid.iter().enumerate() {
        slot[x] = p;
    }
    let ncols = m * m * k;
    let var = |a: usize, b: usize, j: usize| (slot[a] * m + slot[b]) * k + j;
    let moduli = module.moduli();
    let mut rows = Vec::new();
    if k > 0 {
        for &a in &nonid {
            let c = module.coord_matrix(a);
            for &b in &nonid {
                let ab = g.mul(a, b);
                for &cc in &nonid {
                    let bc = g.mul(b, cc);
                    for i in 0..k {
                        let scale = e / moduli[i];
                        let neg = (e - scale % e) % e;
                        let mut row = vec![0u64; ncols];
                        let mut addc = |col: usize, v: u64| row[col] = (row[col] + v % e) % e;
                        for j in 0..k {
                            addc(var(b, cc, j), c[i][j] * scale);
                        }
                        if ab != id {
                            addc(var(ab, cc, i), neg);
                        }
                        if bc != id {
                            addc(var(a, bc, i), scale);
                        }
                        addc(var(a, b, i), neg);
                        if row.iter().any(|&x| x != 0) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
    }
    let mut ms = ModSmith::new(rows, ncols, e);
    ms.track_v_inverse();
    ms.run();
    let gcd_of = |t: usize| match ms.pivots.get(t) {
        Some(&p) => p.gcd(&e),
        None => e,
    };
    let kept: Vec<(usize, u64)> = (0..ncols)
        .map(|t| (t, gcd_of(t)))
        .filter(|&(_, g)| g > 1)
        .collect();
    let basis = CocycleBasis {
        e,
        ncols,
        kept,
        ms,
        nonid,
        slot,
    };
    // relations: the orders g_t, coboundaries of unit 1-cochains, and the
    // cochains that vanish in A but not over Z/e
    let r = basis.kept.len();
    let mut rels: Vec<Vec<BigInt>> = basis
        .kept
        .iter()
        .enumerate()
        .map(|(i, &(_, g))| {
            (0..r)
                .map(|j| BigInt::from(if i == j { g } else { 0 }))
                .collect()
        })
        .collect();
    let mut push = |x: Vec<u64>| {
        let c = basis
            .coords(&x)
            .expect("generator lies in the cocycle module");
        if c.iter().any(|v| *v != BigInt::from(0)) {
            rels.push(c);
        }
    };
    for &h in &basis.nonid {
        for j in 0..k {
            let mut f = vec![module.zero(); n];
            f[h][j] = 1;
            push(basis.flatten(&Cocycle2::coboundary(module, &f)));
        }
    }
    for t in 0..ncols {
        let j = t % k.max(1);
        if k > 0 && moduli[j] < e {
            let mut x = vec![0u64; ncols];
            x[t] = moduli[j];
            push(x);
        }
    }
    let group = quotient(r, &IntMatrix::from_cols(r, &rels));
    let representatives = (0..group.invariant_factors().len())
        .map(|i| {
            let unit: Vec<BigInt> = (0..group.invariant_factors().len())
                .map(|j| BigInt::from(u8::from(i == j)))
                .collect();
            basis.cochain(module, &group.lift(&unit))
        })
        .collect();
    Ok(H2 {
        module: module.clone(),
        group,
        representatives,
        basis,
    })
}

impl H2 {
    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn presentation(&self) -> &FinAbPresentation {
        &self.group
    }

    pub fn order(&self) -> u64 {
        self.group
            .order()
            .and_then(|o| o.to_u64())
            .expect("H^2 of a finite group with finite coefficients is finite")
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        self.group
            .invariant_factors()
            .iter()
            .map(|d| d.to_u64().expect("small invariant factor"))
            .collect()
    }

    /// One normalized cocycle per invariant factor, generating `H^2`.
    pub fn representatives(&self) -> &[Cocycle2] {
        &self.representatives
    }

    /// Coordinates of the class of `z` along the invariant factors.
    pub fn class_of(&self, z: &Cocycle2) -> Result<Vec<u64>, GcohError> {
        if z.module() != &self.module {
            return Err(GcohError::ModuleMismatch);
        }
        let t = self
            .basis
            .coords(&self.basis.flatten(z))
            .ok_or_else(|| GcohError::NotACocycle("not a cocycle".into()))?;
        Ok(self
            .group
            .project(&t)
            .iter()
            .map(|x| x.to_u64().expect("reduced coordinate"))
            .collect())
    }

    /// A normalized cocycle in the class with the given coordinates.
    pub fn representative(&self, coords: &[u64]) -> Cocycle2 {
        let c: Vec<BigInt> = coords.iter().map(|&x| BigInt::from(x)).collect();
        self.basis.cochain(&self.module, &self.group.lift(&c))
    }

    /// Every class, one representative each, in mixed-radix order.
    pub fn all_classes(&self) -> Vec<Cocycle2> {
        let f = self.invariant_factors();
        let total: u64 = f.iter().product();
        (0..total)
            .map(|mut i| {
                let c: Vec<u64> = f
                    .iter()
                    .map(|&d| {
                        let x = i % d;
                        i /= d;
                        x
                    })
                    .collect();
                self.representative(&c)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcoh::{classes_equal, FiniteGroup};

    #[test]
    fn small_cases() {
        let c2 = FiniteGroup::cyclic(2);
        let h = h2(&GModule::trivial(c2.clone(), &[2]), 16).unwrap();
        assert_eq!(h.order(), 2);
        let v4 = c2.direct_product(&c2);
        let h = h2(&GModule::trivial(v4, &[2]), 16).unwrap();
        assert_eq!(h.order(), 8);
        assert_eq!(h.invariant_factors(), vec![2, 2, 2]);
        let h = h2(&GModule::trivial(FiniteGroup::cyclic(3), &[2]), 16).unwrap();
        assert_eq!(h.order(), 1);
        let h = h2(&GModule::trivial(FiniteGroup::cyclic(4), &[4]), 16).unwrap();
        assert_eq!(h.invariant_factors(), vec![4]);
    }

    #[test]
    fn representatives_round_trip() {
        let c2 = FiniteGroup::cyclic(2);
        let v4 = c2.direct_product(&c2);
        let h = h2(&GModule::trivial(v4, &[2]), 16).unwrap();
        let all = h.all_classes();
        assert_eq!(all.len(), 8);
        for (i, z) in all.iter().enumerate() {
            assert!(z.is_cocycle());
            let c = h.class_of(z).unwrap();
            let idx = c.iter().rev().fold(0u64, |acc, &x| acc * 2 + x);
            assert_eq!(idx as usize, i);
            for (j, w) in all.iter().enumerate() {
                assert_eq!(classes_equal(z, w).unwrap().is_some(), i == j);
            }
        }
    }

    #[test]
    fn bound_is_enforced() {
        let m = GModule::trivial(FiniteGroup::cyclic(8), &[2, 2, 2]);
        assert!(matches!(
            h2(&m, 16),
            Err(GcohError::SizeBoundExceeded { .. })
        ));
        assert!(h2(&GModule::trivial(FiniteGroup::cyclic(2), &[2]), 0).is_err());
    }
}
