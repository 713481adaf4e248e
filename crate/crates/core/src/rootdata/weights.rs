use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{mat_vec, transpose, Matrix, RootDataError, RootDatum, Vector};
use crate::exactlat::IntMatrix;

/// Which lattice of the datum the weights live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightLattice {
    /// `X*(T)`: weights of a representation of the group itself.
    Characters,
    /// `X_*(T) = X*(T^)`: weights of a representation of the dual group.
    Cocharacters,
}

/// Negation- and Galois-stable multiset of weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WeightMultisetData", into = "WeightMultisetData")]
pub struct WeightMultiset {
    datum: RootDatum,
    lattice: WeightLattice,
    entries: BTreeMap<Vector, u64>,
}

#[derive(Serialize, Deserialize)]
struct WeightEntry {
    weight: Vector,
    mult: u64,
}

#[derive(Serialize, Deserialize)]
struct WeightMultisetData {
    datum: RootDatum,
    lattice: WeightLattice,
    weights: Vec<WeightEntry>,
}

impl TryFrom<WeightMultisetData> for WeightMultiset {
    type Error = RootDataError;
    fn try_from(d: WeightMultisetData) -> Result<Self, RootDataError> {
        WeightMultiset::new(
            d.datum,
            d.lattice,
            d.weights.into_iter().map(|e| (e.weight, e.mult)),
        )
    }
}

impl From<WeightMultiset> for WeightMultisetData {
    fn from(m: WeightMultiset) -> Self {
        WeightMultisetData {
            weights: m
                .entries
                .iter()
                .map(|(w, &k)| WeightEntry {
                    weight: w.clone(),
                    mult: k,
                })
                .collect(),
            datum: m.datum,
            lattice: m.lattice,
        }
    }
}

impl WeightMultiset {
    /// Repeated weights accumulate; zero multiplicities are dropped.
    pub fn new(
        datum: RootDatum,
        lattice: WeightLattice,
        weights: impl IntoIterator<Item = (Vector, u64)>,
    ) -> Result<Self, RootDataError> {
        let mut entries = BTreeMap::new();
        for (w, k) in weights {
            if w.len() != datum.rank {
                return Err(RootDataError::InvalidWeights(format!(
                    "weight {w:?} does not have length {}",
                    datum.rank
                )));
            }
            if k > 0 {
                *entries.entry(w).or_insert(0) += k;
            }
        }
        let m = WeightMultiset {
            datum,
            lattice,
            entries,
        };
        m.check_stability()?;
        Ok(m)
    }

    /// Sum over the given weights of their full orbits (under negation, the
    /// Galois generators and, if `weyl_bound` is set, the Weyl group), each
    /// orbit carrying the given multiplicity.
    pub fn from_orbits(
        datum: RootDatum,
        lattice: WeightLattice,
        generators: &[(Vector, u64)],
        weyl_bound: Option<usize>,
    ) -> Result<Self, RootDataError> {
        let probe = WeightMultiset {
            datum: datum.clone(),
            lattice,
            entries: BTreeMap::new(),
        };
        let mut acting = probe.galois_action();
        if let Some(bound) = weyl_bound {
            acting.extend(probe.weyl_action(bound)?);
        }
        acting.push(
            (0..datum.rank)
                .map(|i| (0..datum.rank).map(|j| -i64::from(i == j)).collect())
                .collect(),
        );
        let mut weights = Vec::new();
        for (w, k) in generators {
            if w.len() != datum.rank {
                return Err(RootDataError::InvalidWeights(format!(
                    "weight {w:?} does not have length {}",
                    datum.rank
                )));
            }
            let mut orbit = HashSet::from([w.clone()]);
            let mut stack = vec![w.clone()];
            while let Some(v) = stack.pop() {
                for g in &acting {
                    let img = mat_vec(g, &v);
                    if orbit.insert(img.clone()) {
                        stack.push(img);
                    }
                }
            }
            weights.extend(orbit.into_iter().map(|v| (v, *k)));
        }
        WeightMultiset::new(datum, lattice, weights)
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn lattice(&self) -> WeightLattice {
        self.lattice
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn entries(&self) -> &BTreeMap<Vector, u64> {
        &self.entries
    }

    pub fn multiplicity(&self, w: &[i64]) -> u64 {
        self.entries.get(w).copied().unwrap_or(0)
    }

    /// Dimension of the underlying representation.
    pub fn dimension(&self) -> u64 {
        self.entries.values().sum()
    }

    /// The distinct weights, forgetting multiplicity.
    pub fn weight_set(&self) -> Vec<Vector> {
        self.entries.keys().cloned().collect()
    }

    pub fn nonzero_weights(&self) -> impl Iterator<Item = (&Vector, u64)> {
        self.entries
            .iter()
            .filter(|(w, _)| w.iter().any(|&x| x != 0))
            .map(|(w, &k)| (w, k))
    }

    /// Galois generators acting on this multiset's lattice.
    pub fn galois_action(&self) -> Vec<Matrix> {
        match self.lattice {
            WeightLattice::Characters => self.datum.galois_gens.clone(),
            WeightLattice::Cocharacters => self.datum.galois_on_cocharacters(),
        }
    }

    /// Roots of the opposite lattice: coroots for character weights, roots
    /// for cocharacter weights. These are what a weight sum must pair evenly
    /// with to descend to the fundamental group or commute with root groups.
    pub fn opposite_roots(&self) -> &[Vector] {
        match self.lattice {
            WeightLattice::Characters => &self.datum.coroots,
            WeightLattice::Cocharacters => &self.datum.roots,
        }
    }

    /// Weyl group acting on this multiset's lattice.
    pub fn weyl_action(&self, bound: usize) -> Result<Vec<Matrix>, RootDataError> {
        let w = self.datum.weyl_group(bound)?;
        Ok(match self.lattice {
            WeightLattice::Characters => w,
            // W is closed under inverses, so transposes give the action on X_*
            WeightLattice::Cocharacters => w.iter().map(transpose).collect(),
        })
    }

    fn check_stability(&self) -> Result<(), RootDataError> {
        for (w, &k) in &self.entries {
            let n: Vector = w.iter().map(|x| -x).collect();
            if self.multiplicity(&n) != k {
                return Err(RootDataError::InvalidWeights(format!(
                    "weight {w:?} has multiplicity {k} but its negative has {}",
                    self.multiplicity(&n)
                )));
            }
        }
        for (i, g) in self.galois_action().iter().enumerate() {
            for (w, &k) in &self.entries {
                let img = mat_vec(g, w);
                if self.multiplicity(&img) != k {
                    return Err(RootDataError::InvalidWeights(format!(
                        "galois generator {i} moves weight {w:?} off the multiset"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Opt-in check that the multiset is stable under the Weyl group.
    pub fn is_weyl_stable(&self, bound: usize) -> Result<bool, RootDataError> {
        let group = self.weyl_action(bound)?;
        Ok(group.iter().all(|g| {
            self.entries
                .iter()
                .all(|(w, &k)| self.multiplicity(&mat_vec(g, w)) == k)
        }))
    }

    /// `self (+) other` on the same datum and lattice.
    pub fn direct_sum(&self, other: &WeightMultiset) -> WeightMultiset {
        assert_eq!(
            self.lattice, other.lattice,
            "lattice mismatch in direct sum"
        );
        assert_eq!(self.datum, other.datum, "datum mismatch in direct sum");
        let mut entries = self.entries.clone();
        for (w, &k) in &other.entries {
            *entries.entry(w.clone()).or_insert(0) += k;
        }
        WeightMultiset {
            datum: self.datum.clone(),
            lattice: self.lattice,
            entries,
        }
    }

    /// Every multiplicity multiplied by `k` (`k = 2` is `m (+) m`).
    pub fn scaled(&self, k: u64) -> WeightMultiset {
        WeightMultiset {
            datum: self.datum.clone(),
            lattice: self.lattice,
            entries: self
                .entries
                .iter()
                .filter(|_| k > 0)
                .map(|(w, &m)| (w.clone(), m * k))
                .collect(),
        }
    }
}

/// Weights of the adjoint representation of the dual group: every coroot
/// once, and zero with multiplicity `rank`.
pub fn adjoint_weights(d: &RootDatum) -> WeightMultiset {
    let mut weights: Vec<(Vector, u64)> = d.coroots.iter().map(|c| (c.clone(), 1)).collect();
    weights.push((vec![0; d.rank], d.rank as u64));
    WeightMultiset::new(d.clone(), WeightLattice::Cocharacters, weights)
        .expect("coroots of a valid datum form a stable multiset")
}

/// Weights of `Lie(G^)/Lie(Z(M^)^Gamma)` on `M^` for the Levi `M` cut out by
/// `levi` (a Galois-stable subset of the simple root indices).
pub fn relative_adjoint_weights(
    d: &RootDatum,
    levi: &[usize],
) -> Result<WeightMultiset, RootDataError> {
    let simple: HashSet<usize> = d.simple_indices.iter().copied().collect();
    if let Some(&bad) = levi.iter().find(|i| !simple.contains(i)) {
        return Err(RootDataError::NotSimple(bad));
    }
    let levi_set: HashSet<usize> = levi.iter().copied().collect();
    for g in &d.galois_gens {
        for &i in &levi_set {
            let img = mat_vec(g, &d.roots[i]);
            match d.root_index(&img) {
                Some(j) if levi_set.contains(&j) => {}
                _ => return Err(RootDataError::LeviNotGaloisStable),
            }
        }
    }
    let mut levi_sorted: Vec<usize> = levi_set.into_iter().collect();
    levi_sorted.sort_unstable();
    let fixed = fixed_rank_of_quotient(d, &levi_sorted);
    let zero_mult = d.rank as u64 - fixed as u64;
    let mut weights: Vec<(Vector, u64)> = d.coroots.iter().map(|c| (c.clone(), 1)).collect();
    weights.push((vec![0; d.rank], zero_mult));
    WeightMultiset::new(d.clone(), WeightLattice::Cocharacters, weights)
}

/// Rank of the Galois-fixed part of `(X_* / <levi coroots>) (x) Q`, i.e. the
/// dimension of `Z(M^)^Gamma`.
fn fixed_rank_of_quotient(d: &RootDatum, levi: &[usize]) -> usize {
    let n = d.rank;
    let k = levi.len();
    let gens = d.galois_on_cocharacters();
    if gens.is_empty() {
        return n - k;
    }
    // v with (g - 1) v in span(levi coroots) for every generator g:
    // kernel of [g_1 - 1 | -C | 0 ...; g_2 - 1 | 0 | -C ...]
    let ng = gens.len();
    let mut m = IntMatrix::zeros(n * ng, n + k * ng);
    for (b, g) in gens.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                m[(b * n + r, c)] = BigInt::from(g[r][c] - i64::from(r == c));
            }
            for (t, &ci) in levi.iter().enumerate() {
                m[(b * n + r, n + b * k + t)] = BigInt::from(-d.coroots[ci][r]);
            }
        }
    }
    let nullity = m.cols() - m.rank();
    nullity - k
}
