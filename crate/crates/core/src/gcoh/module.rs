use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{FiniteGroup, GcohError};
use crate::exactlat::{quotient, FinAbPresentation, IntMatrix};

/// Element of a finite module in canonical coordinates: entry `i` lies in
/// `[0, moduli[i])`.
pub type AElem = Vec<u64>;

/// A finite abelian group `Z^r / L` with a group acting through integer
/// matrices on `Z^r` that preserve `L`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ModuleData", into = "ModuleData")]
pub struct GModule {
    group: FiniteGroup,
    presentation: FinAbPresentation,
    action: Vec<IntMatrix>,
    moduli: Vec<u64>,
    // coord_action[g][i][j]: coordinate i of g acting on basis element j
    coord_action: Vec<Vec<Vec<u64>>>,
}

#[derive(Serialize, Deserialize)]
struct ModuleData {
    group: FiniteGroup,
    presentation: FinAbPresentation,
    /// One matrix per group element; omitted for the trivial action.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    action: Option<Vec<IntMatrix>>,
}

impl TryFrom<ModuleData> for GModule {
    type Error = GcohError;
    fn try_from(d: ModuleData) -> Result<Self, GcohError> {
        let r = d.presentation.ambient_rank();
        let action = d
            .action
            .unwrap_or_else(|| vec![IntMatrix::identity(r); d.group.order()]);
        GModule::new(d.group, d.presentation, action)
    }
}

impl From<GModule> for ModuleData {
    fn from(m: GModule) -> Self {
        let trivial = m.is_trivial_action();
        ModuleData {
            group: m.group,
            presentation: m.presentation,
            action: (!trivial).then_some(m.action),
        }
    }
}

impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group
            && self.moduli == other.moduli
            && self.coord_action == other.coord_action
    }
}

impl Eq for GModule {}

impl GModule {
    /// Validates that the action preserves the relations, is trivial at the
    /// identity and multiplicative. The presented group must be finite.
    pub fn new(
        group: FiniteGroup,
        presentation: FinAbPresentation,
        action: Vec<IntMatrix>,
    ) -> Result<Self, GcohError> {
        let bad = |m: String| Err(GcohError::InvalidModule(m));
        if !presentation.is_finite() {
            return bad("coefficient group must be finite".into());
        }
        let r = presentation.ambient_rank();
        if action.len() != group.order() {
            return bad(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                group.order()
            ));
        }
        if action.iter().any(|m| m.rows() != r || m.cols() != r) {
            return bad(format!("action matrices must be {r}x{r}"));
        }
        let moduli: Vec<u64> = presentation
            .invariant_factors()
            .iter()
            .map(|d| {
                d.to_u64()
                    .filter(|&d| d < (1 << 31))
                    .ok_or_else(|| GcohError::InvalidModule("invariant factor too large".into()))
            })
            .collect::<Result<_, _>>()?;
        let rel = presentation.relation_matrix();
        for (g, m) in action.iter().enumerate() {
            for j in 0..rel.cols() {
                if !presentation.is_zero(&m.mul_vec(&rel.col(j))) {
                    return bad(format!("element {g} does not preserve the relations"));
                }
            }
        }
        let k = moduli.len();
        let coord_action: Vec<Vec<Vec<u64>>> = action
            .iter()
            .map(|m| {
                let mut c = vec![vec![0u64; k]; k];
                for j in 0..k {
                    let unit: Vec<BigInt> =
                        (0..k).map(|i| BigInt::from(u8::from(i == j))).collect();
                    let img = presentation.project(&m.mul_vec(&presentation.lift(&unit)));
                    for i in 0..k {
                        c[i][j] = img[i].to_u64().expect("reduced coordinate");
                    }
                }
                c
            })
            .collect();
        let module = GModule {
            group,
            presentation,
            action,
            moduli,
            coord_action,
        };
        let id = module.group.identity();
        let basis: Vec<AElem> = (0..k)
            .map(|j| (0..k).map(|i| u64::from(i == j)).collect())
            .collect();
        for b in &basis {
            if module.act(id, b) != *b {
                return bad("the identity does not act trivially".into());
            }
        }
        for g in 0..module.group.order() {
            for h in 0..module.group.order() {
                let gh = module.group.mul(g, h);
                for b in &basis {
                    if module.act(gh, b) != module.act(g, &module.act(h, b)) {
                        return bad(format!("action is not multiplicative at ({g}, {h})"));
                    }
                }
            }
        }
        Ok(module)
    }

    /// `Z/d_1 + ... + Z/d_r` with trivial action.
    pub fn trivial(group: FiniteGroup, moduli: &[u64]) -> Self {
        let r = moduli.len();
        let rel = IntMatrix::diagonal(&moduli.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>());
        let action = vec![IntMatrix::identity(r); group.order()];
        GModule::new(group, quotient(r, &rel), action).expect("trivial action is valid")
    }

    /// Same coefficients, acting through `gamma: new_group -> group`.
    pub fn restrict(&self, new_group: &FiniteGroup, gamma: &[usize]) -> GModule {
        assert_eq!(gamma.len(), new_group.order(), "map length mismatch");
        GModule {
            group: new_group.clone(),
            presentation: self.presentation.clone(),
            action: gamma.iter().map(|&g| self.action[g].clone()).collect(),
            moduli: self.moduli.clone(),
            coord_action: gamma
                .iter()
                .map(|&g| self.coord_action[g].clone())
                .collect(),
        }
    }

    /// `self + other` over `group` where `g` acts on `self` through
    /// `via_self[g]` and on `other` through `via_other[g]`.
    pub fn direct_sum(
        &self,
        other: &GModule,
        group: &FiniteGroup,
        via_self: &[usize],
        via_other: &[usize],
    ) -> GModule {
        let (r1, r2) = (
            self.presentation.ambient_rank(),
            other.presentation.ambient_rank(),
        );
        let r = r1 + r2;
        let block = |a: &IntMatrix, b: &IntMatrix| {
            let mut m = IntMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    m[(i, j)] = a[(i, j)].clone();
                }
            }
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m[(a.rows() + i, a.cols() + j)] = b[(i, j)].clone();
                }
            }
            m
        };
        let rel = block(
            self.presentation.relation_matrix(),
            other.presentation.relation_matrix(),
        );
        let action = (0..group.order())
            .map(|g| block(&self.action[via_self[g]], &other.action[via_other[g]]))
            .collect();
        GModule::new(group.clone(), quotient(r, &rel), action).expect("block action is valid")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn presentation(&self) -> &FinAbPresentation {
        &self.presentation
    }

    pub fn action_matrix(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    /// Orders of the cyclic factors, in divisibility order.
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Number of canonical coordinates.
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn size(&self) -> usize {
        self.moduli.iter().product::<u64>() as usize
    }

    /// Exponent of the coefficient group (1 when trivial).
    pub fn exponent(&self) -> u64 {
        self.moduli.last().copied().unwrap_or(1)
    }

    pub fn is_trivial_action(&self) -> bool {
        let k = self.rank();
        self.coord_action
            .iter()
            .all(|c| (0..k).all(|i| (0..k).all(|j| c[i][j] == u64::from(i == j) % self.moduli[i])))
    }

    /// Coordinate matrix of `g`: entry `[i][j]` is coordinate `i` of `g`
    /// applied to basis element `j`.
    pub fn coord_matrix(&self, g: usize) -> &[Vec<u64>] {
        &self.coord_action[g]
    }

    pub fn zero(&self) -> AElem {
        vec![0; self.rank()]
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> AElem {
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((x, y), d)| (x + y) % d)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> AElem {
        a.iter()
            .zip(&self.moduli)
            .map(|(x, d)| (d - x) % d)
            .collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> AElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &[u64], k: u64) -> AElem {
        a.iter()
            .zip(&self.moduli)
            .map(|(x, d)| ((*x as u128 * k as u128) % *d as u128) as u64)
            .collect()
    }

    /// `g . a`.
    pub fn act(&self, g: usize, a: &[u64]) -> AElem {
        let c = &self.coord_action[g];
        (0..self.rank())
            .map(|i| {
                let d = self.moduli[i] as u128;
                (a.iter()
                    .enumerate()
                    .map(|(j, &x)| c[i][j] as u128 * x as u128)
                    .sum::<u128>()
                    % d) as u64
            })
            .collect()
    }

    /// Mixed-radix index, coordinate 0 least significant.
    pub fn index_of(&self, a: &[u64]) -> usize {
        a.iter()
            .zip(&self.moduli)
            .rev()
            .fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    pub fn element(&self, mut idx: usize) -> AElem {
        self.moduli
            .iter()
            .map(|&d| {
                let x = (idx % d as usize) as u64;
                idx /= d as usize;
                x
            })
            .collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = AElem> + '_ {
        (0..self.size()).map(|i| self.element(i))
    }

    /// Canonical coordinates of an ambient vector.
    pub fn from_ambient(&self, v: &[BigInt]) -> AElem {
        self.presentation
            .project(v)
            .iter()
            .map(|x| x.to_u64().expect("reduced coordinate"))
            .collect()
    }

    pub fn to_ambient(&self, a: &[u64]) -> Vec<BigInt> {
        let coords: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
        self.presentation.lift(&coords)
    }
}

/// Additive map `A -> A'` between modules over `G` and `G'`, compatible with
/// `gamma: G -> G'`: `alpha(g a) = gamma(g) alpha(a)`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: GModule,
    pub target: GModule,
    pub gamma: Vec<usize>,
    // coordinate j of the source basis maps to images[j]
    images: Vec<AElem>,
}

impl ModuleMap {
    /// From an integer matrix on the ambient lattices.
    pub fn from_matrix(
        source: &GModule,
        target: &GModule,
        gamma: &[usize],
        matrix: &IntMatrix,
    ) -> Result<Self, GcohError> {
        let (r, r2) = (
            source.presentation.ambient_rank(),
            target.presentation.ambient_rank(),
        );
        if matrix.rows() != r2 || matrix.cols() != r {
            return Err(GcohError::NotEquivariant(format!("map must be {r2}x{r}")));
        }
        let rel = source.presentation.relation_matrix();
        for j in 0..rel.cols() {
            if !target.presentation.is_zero(&matrix.mul_vec(&rel.col(j))) {
                return Err(GcohError::NotEquivariant(
                    "map does not respect the relations".into(),
                ));
            }
        }
        let images = (0..source.rank())
            .map(|j| {
                let unit: AElem = (0..source.rank()).map(|i| u64::from(i == j)).collect();
                target.from_ambient(&matrix.mul_vec(&source.to_ambient(&unit)))
            })
            .collect();
        Self::checked(source, target, gamma, images)
    }

    /// From images of the canonical basis of the source.
    pub fn from_basis_images(
        source: &GModule,
        target: &GModule,
        gamma: &[usize],
        images: Vec<AElem>,
    ) -> Result<Self, GcohError> {
        if images.len() != source.rank() || images.iter().any(|a| a.len() != target.rank()) {
            return Err(GcohError::NotEquivariant(
                "wrong number of basis images".into(),
            ));
        }
        for (j, img) in images.iter().enumerate() {
            if target.scale(img, source.moduli[j]) != target.zero() {
                return Err(GcohError::NotEquivariant(format!(
                    "basis element {j} has order dividing {} but its image does not",
                    source.moduli[j]
                )));
            }
        }
        Self::checked(source, target, gamma, images)
    }

    /// From the image of every element (indexed as in [`GModule::element`]).
    pub fn from_element_map(
        source: &GModule,
        target: &GModule,
        gamma: &[usize],
        map: &[usize],
    ) -> Result<Self, GcohError> {
        if map.len() != source.size() || map.iter().any(|&y| y >= target.size()) {
            return Err(GcohError::NotEquivariant(
                "element map has the wrong shape".into(),
            ));
        }
        let images: Vec<AElem> = (0..source.rank())
            .map(|j| {
                let unit: AElem = (0..source.rank()).map(|i| u64::from(i == j)).collect();
                target.element(map[source.index_of(&unit)])
            })
            .collect();
        let m = Self::from_basis_images(source, target, gamma, images)?;
        for (x, &y) in map.iter().enumerate() {
            if m.apply(&source.element(x)) != target.element(y) {
                return Err(GcohError::NotEquivariant(
                    "element map is not additive".into(),
                ));
            }
        }
        Ok(m)
    }

    fn checked(
        source: &GModule,
        target: &GModule,
        gamma: &[usize],
        images: Vec<AElem>,
    ) -> Result<Self, GcohError> {
        if gamma.len() != source.group.order() {
            return Err(GcohError::NotEquivariant(
                "group map has the wrong length".into(),
            ));
        }
        let m = ModuleMap {
            source: source.clone(),
            target: target.clone(),
            gamma: gamma.to_vec(),
            images,
        };
        for g in source.group.elements() {
            for j in 0..source.rank() {
                let unit: AElem = (0..source.rank()).map(|i| u64::from(i == j)).collect();
                if m.apply(&source.act(g, &unit)) != target.act(gamma[g], &m.apply(&unit)) {
                    return Err(GcohError::NotEquivariant(format!(
                        "fails at group element {g}, basis element {j}"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn apply(&self, a: &[u64]) -> AElem {
        let mut out = self.target.zero();
        for (j, &x) in a.iter().enumerate() {
            out = self
                .target
                .add(&out, &self.target.scale(&self.images[j], x));
        }
        out
    }

    pub fn identity(module: &GModule) -> Self {
        let images = (0..module.rank())
            .map(|j| (0..module.rank()).map(|i| u64::from(i == j)).collect())
            .collect();
        ModuleMap {
            source: module.clone(),
            target: module.clone(),
            gamma: module.group.elements().collect(),
            images,
        }
    }

    /// `other . self`.
    pub fn then(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap {
            source: self.source.clone(),
            target: other.target.clone(),
            gamma: self.gamma.iter().map(|&g| other.gamma[g]).collect(),
            images: self.images.iter().map(|a| other.apply(a)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_module_arithmetic() {
        let m = GModule::trivial(FiniteGroup::cyclic(2), &[2, 4]);
        assert_eq!(m.moduli(), &[2, 4]);
        assert_eq!(m.size(), 8);
        assert_eq!(m.add(&[1, 3], &[1, 2]), vec![0, 1]);
        assert_eq!(m.neg(&[1, 1]), vec![1, 3]);
        for i in 0..8 {
            assert_eq!(m.index_of(&m.element(i)), i);
        }
        assert!(m.is_trivial_action());
    }

    #[test]
    fn inversion_action_on_z4() {
        let g = FiniteGroup::cyclic(2);
        let p = quotient(1, &IntMatrix::from_rows(&[vec![4]]));
        let action = vec![IntMatrix::identity(1), IntMatrix::from_rows(&[vec![-1]])];
        let m = GModule::new(g, p, action).unwrap();
        assert_eq!(m.act(1, &[1]), vec![3]);
        assert!(!m.is_trivial_action());
    }

    #[test]
    fn bad_actions_are_rejected() {
        let g = FiniteGroup::cyclic(3);
        let p = quotient(1, &IntMatrix::from_rows(&[vec![4]]));
        // -1 has order 2, so it cannot be the image of a generator of C3
        let action = vec![
            IntMatrix::identity(1),
            IntMatrix::from_rows(&[vec![-1]]),
            IntMatrix::from_rows(&[vec![-1]]),
        ];
        assert!(GModule::new(g.clone(), p.clone(), action).is_err());
        let infinite = quotient(1, &IntMatrix::zeros(1, 0));
        assert!(GModule::new(g, infinite, vec![IntMatrix::identity(1); 3]).is_err());
    }

    #[test]
    fn module_maps() {
        let g = FiniteGroup::cyclic(1);
        let c2 = GModule::trivial(g.clone(), &[2]);
        let c4 = GModule::trivial(g.clone(), &[4]);
        let incl = ModuleMap::from_basis_images(&c2, &c4, &[0], vec![vec![2]]).unwrap();
        assert_eq!(incl.apply(&[1]), vec![2]);
        assert!(ModuleMap::from_basis_images(&c2, &c4, &[0], vec![vec![1]]).is_err());
        let red = ModuleMap::from_matrix(&c4, &c2, &[0], &IntMatrix::identity(1)).unwrap();
        assert_eq!(incl.then(&red).apply(&[1]), vec![0]);
    }
}
