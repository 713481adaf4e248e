use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{AElem, FiniteGroup, GModule, GcohError, ModuleMap};
use crate::exactlat::{json_ints, solve_congruence, JsonInt};

/// Normalized 2-cochain `G x G -> A`, stored in canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CocycleData", into = "CocycleData")]
pub struct Cocycle2 {
    module: GModule,
    values: Vec<AElem>,
}

#[derive(Serialize, Deserialize)]
struct CocycleData {
    module: GModule,
    /// `values[g][h]` as a vector of the ambient lattice.
    values: Vec<Vec<Vec<JsonInt>>>,
}

impl TryFrom<CocycleData> for Cocycle2 {
    type Error = GcohError;
    fn try_from(d: CocycleData) -> Result<Self, GcohError> {
        let values: Vec<Vec<Vec<BigInt>>> = d
            .values
            .into_iter()
            .map(|row| row.into_iter().map(json_ints::unwrap).collect())
            .collect();
        Cocycle2::from_ambient(d.module, &values)
    }
}

impl From<Cocycle2> for CocycleData {
    fn from(z: Cocycle2) -> Self {
        let n = z.module.group().order();
        CocycleData {
            values: (0..n)
                .map(|g| {
                    (0..n)
                        .map(|h| json_ints::wrap(&z.module.to_ambient(z.value(g, h))))
                        .collect()
                })
                .collect(),
            module: z.module,
        }
    }
}

impl Cocycle2 {
    /// Validates shape, normalization and the cocycle identity.
    pub fn new(module: GModule, values: Vec<Vec<AElem>>) -> Result<Self, GcohError> {
        let n = module.group().order();
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(GcohError::NotACocycle(format!(
                "value table must be {n}x{n}"
            )));
        }
        let flat: Vec<AElem> = values.into_iter().flatten().collect();
        for a in &flat {
            if a.len() != module.rank() || a.iter().zip(module.moduli()).any(|(x, d)| x >= d) {
                return Err(GcohError::NotACocycle(
                    "value outside the coefficient group".into(),
                ));
            }
        }
        let z = Cocycle2 {
            module,
            values: flat,
        };
        z.check()?;
        Ok(z)
    }

    pub fn from_ambient(module: GModule, values: &[Vec<Vec<BigInt>>]) -> Result<Self, GcohError> {
        let r = module.presentation().ambient_rank();
        if values.iter().flatten().any(|v| v.len() != r) {
            return Err(GcohError::NotACocycle(format!(
                "values must have {r} entries"
            )));
        }
        let coords = values
            .iter()
            .map(|row| row.iter().map(|v| module.from_ambient(v)).collect())
            .collect();
        Cocycle2::new(module, coords)
    }

    pub(crate) fn from_fn(module: &GModule, f: impl Fn(usize, usize) -> AElem) -> Self {
        let n = module.group().order();
        let values = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Cocycle2 {
            module: module.clone(),
            values,
        }
    }

    pub fn zero(module: &GModule) -> Self {
        Self::from_fn(module, |_, _| module.zero())
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn group(&self) -> &FiniteGroup {
        self.module.group()
    }

    pub fn value(&self, g: usize, h: usize) -> &AElem {
        &self.values[g * self.group().order() + h]
    }

    pub fn values(&self) -> Vec<Vec<AElem>> {
        let n = self.group().order();
        self.values.chunks(n).map(<[AElem]>::to_vec).collect()
    }

    fn check(&self) -> Result<(), GcohError> {
        let g = self.group();
        let e = g.identity();
        let m = &self.module;
        for x in g.elements() {
            if !m.is_zero(self.value(e, x)) || !m.is_zero(self.value(x, e)) {
                return Err(GcohError::NotACocycle(format!(
                    "not normalized at element {x}"
                )));
            }
        }
        if let Some((a, b, c)) = self.identity_failure() {
            return Err(GcohError::NotACocycle(format!(
                "cocycle identity fails at ({a}, {b}, {c})"
            )));
        }
        Ok(())
    }

    /// First triple violating `g z(h,k) - z(gh,k) + z(g,hk) - z(g,h) = 0`.
    pub fn identity_failure(&self) -> Option<(usize, usize, usize)> {
        let g = self.group();
        let m = &self.module;
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                for c in g.elements() {
                    let lhs = m.add(&m.act(a, self.value(b, c)), self.value(a, g.mul(b, c)));
                    let rhs = m.add(self.value(ab, c), self.value(a, b));
                    if lhs != rhs {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_cocycle(&self) -> bool {
        self.identity_failure().is_none()
    }

    pub fn add(&self, other: &Cocycle2) -> Cocycle2 {
        assert_eq!(self.module, other.module, "module mismatch");
        Cocycle2 {
            module: self.module.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| self.module.add(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Cocycle2 {
        Cocycle2 {
            module: self.module.clone(),
            values: self.values.iter().map(|a| self.module.neg(a)).collect(),
        }
    }

    pub fn sub(&self, other: &Cocycle2) -> Cocycle2 {
        self.add(&other.neg())
    }

    /// `(df)(g, h) = g f(h) - f(gh) + f(g)` for a 1-cochain with `f(1) = 0`.
    pub fn coboundary(module: &GModule, f: &[AElem]) -> Cocycle2 {
        let g = module.group();
        assert_eq!(f.len(), g.order(), "one value per group element");
        assert!(
            module.is_zero(&f[g.identity()]),
            "1-cochain must vanish at the identity"
        );
        Self::from_fn(module, |a, b| {
            module.add(&module.sub(&module.act(a, &f[b]), &f[g.mul(a, b)]), &f[a])
        })
    }

    /// `alpha . z`, a cocycle with coefficients in the target of `alpha`
    /// pulled back along `alpha.gamma`.
    pub fn pushout(&self, alpha: &ModuleMap) -> Result<Cocycle2, GcohError> {
        if alpha.source != self.module {
            return Err(GcohError::NotEquivariant(
                "map does not start at the coefficients".into(),
            ));
        }
        let target = alpha.target.restrict(self.group(), &alpha.gamma);
        Ok(Self::from_fn(&target, |g, h| alpha.apply(self.value(g, h))))
    }

    /// `z . (gamma x gamma)` for a homomorphism `gamma: source -> G`.
    pub fn pullback(&self, source: &FiniteGroup, gamma: &[usize]) -> Result<Cocycle2, GcohError> {
        if !source.is_homomorphism(self.group(), gamma) {
            return Err(GcohError::NotAHomomorphism("pullback map".into()));
        }
        let module = self.module.restrict(source, gamma);
        Ok(Self::from_fn(&module, |g, h| {
            self.value(gamma[g], gamma[h]).clone()
        }))
    }
}

/// A 1-cochain `f` with `z1 - z2 = df`, or `None` if the classes differ.
pub fn classes_equal(z1: &Cocycle2, z2: &Cocycle2) -> Result<Option<Vec<AElem>>, GcohError> {
    if z1.module != z2.module {
        return Err(GcohError::ModuleMismatch);
    }
    Ok(solve_coboundary(&z1.sub(z2)))
}

/// Solves `df = z` over `Z/e` for the exponent `e`, each equation modulo
/// `d_i` scaled by `e / d_i`.
pub(crate) fn solve_coboundary(z: &Cocycle2) -> Option<Vec<AElem>> {
    let m = z.module();
    let g = m.group();
    let n = g.order();
    let k = m.rank();
    let e = m.exponent();
    if k == 0 || n == 1 {
        return Some(vec![m.zero(); n]);
    }
    let id = g.identity();
    let nonid: Vec<usize> = g.elements().filter(|&x| x != id).collect();
    let mut slot = vec![usize::MAX; n];
    for (p, &x) in nonid.iter().enumerate() {
        slot[x] = p;
    }
    let ncols = nonid.len() * k;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let moduli = m.moduli();
    for &a in &nonid {
        let c = m.coord_matrix(a);
        for &b in &nonid {
            let ab = g.mul(a, b);
            for i in 0..k {
                let scale = e / moduli[i];
                let mut row = vec![0u64; ncols];
                let mut addc = |col: usize, v: u64| {
                    row[col] = (row[col] + v % e) % e;
                };
                for j in 0..k {
                    addc(slot[b] * k + j, c[i][j] * scale);
                }
                if ab != id {
                    addc(slot[ab] * k + i, (e - scale % e) % e);
                }
                addc(slot[a] * k + i, scale);
                rows.push(row);
                rhs.push(z.value(a, b)[i] * scale % e);
            }
        }
    }
    let x = solve_congruence(&rows, ncols, &rhs, e)?;
    let mut f = vec![m.zero(); n];
    for (p, &x0) in nonid.iter().enumerate() {
        f[x0] = (0..k).map(|j| x[p * k + j] % moduli[j]).collect();
    }
    debug_assert_eq!(&Cocycle2::coboundary(m, &f), z);
    Some(f)
}

/// `(f1 u f2)(g, h) = f1(g) f2(h)` for homomorphisms `G -> Z/2`, as a
/// cocycle with trivial `Z/2` coefficients.
pub fn cup1(group: &FiniteGroup, f1: &[u8], f2: &[u8]) -> Result<Cocycle2, GcohError> {
    let z2 = FiniteGroup::cyclic(2);
    for f in [f1, f2] {
        let as_map: Vec<usize> = f.iter().map(|&x| usize::from(x)).collect();
        if !group.is_homomorphism(&z2, &as_map) {
            return Err(GcohError::NotAHomomorphism("character to Z/2".into()));
        }
    }
    let module = GModule::trivial(group.clone(), &[2]);
    Ok(Cocycle2::from_fn(&module, |g, h| {
        vec![u64::from(f1[g] & f2[h])]
    }))
}

/// Whether `alpha_*(c) = gamma^*(c')`, i.e. a morphism of extensions with
/// these ends exists. `alpha` must be compatible with `gamma`.
pub fn morphism_extends(
    c: &Cocycle2,
    c_prime: &Cocycle2,
    alpha: &ModuleMap,
) -> Result<Option<Vec<AElem>>, GcohError> {
    if alpha.target != *c_prime.module() {
        return Err(GcohError::ModuleMismatch);
    }
    let pushed = c.pushout(alpha)?;
    let pulled = c_prime.pullback(c.group(), &alpha.gamma)?;
    classes_equal(&pushed, &pulled)
}
