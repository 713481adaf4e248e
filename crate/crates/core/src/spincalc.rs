//! Gauges, `rho`, the spin-lifting verdict, spin characters and the
//! canonical involution `z_m` of a weight multiset.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exactlat::FinAbPresentation;
use crate::rootdata::{mat_vec, pairing, Vector, WeightLattice, WeightMultiset};

/// One of `{w, -w}` for every nonzero weight of a multiset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gauge {
    pub positive_set: BTreeSet<Vector>,
}

impl Gauge {
    pub fn is_positive(&self, w: &[i64]) -> bool {
        self.positive_set.contains(w)
    }

    /// Whether this is a gauge for `m`.
    pub fn is_gauge_for(&self, m: &WeightMultiset) -> bool {
        let nonzero: Vec<&Vector> = m.nonzero_weights().map(|(w, _)| w).collect();
        nonzero.iter().all(|w| {
            let n = negate(w);
            self.is_positive(w) != self.is_positive(&n)
        }) && self.positive_set.len() * 2 == nonzero.len()
            && self
                .positive_set
                .iter()
                .all(|w| m.multiplicity(w) > 0 && w.iter().any(|&x| x != 0))
    }
}

fn negate(w: &[i64]) -> Vector {
    w.iter().map(|x| -x).collect()
}

fn lex_positive(w: &[i64]) -> bool {
    w.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// The lexicographic gauge: `w` is positive iff its first nonzero entry is.
pub fn choose_gauge(m: &WeightMultiset) -> Gauge {
    Gauge {
        positive_set: m
            .nonzero_weights()
            .filter(|(w, _)| lex_positive(w))
            .map(|(w, _)| w.clone())
            .collect(),
    }
}

/// A uniformly random gauge.
pub fn random_gauge<R: Rng + ?Sized>(m: &WeightMultiset, rng: &mut R) -> Gauge {
    let mut positive_set = BTreeSet::new();
    for (w, _) in m.nonzero_weights() {
        if lex_positive(w) {
            positive_set.insert(if rng.gen::<bool>() {
                w.clone()
            } else {
                negate(w)
            });
        }
    }
    Gauge { positive_set }
}

/// `numerator / denominator` with `denominator` 1 or 2, reduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfWeight {
    pub numerator: Vector,
    pub denominator: u8,
}

impl HalfWeight {
    /// `v / 2`, reduced.
    pub fn half(v: Vector) -> Self {
        if v.iter().all(|x| x % 2 == 0) {
            HalfWeight {
                numerator: v.iter().map(|x| x / 2).collect(),
                denominator: 1,
            }
        } else {
            HalfWeight {
                numerator: v,
                denominator: 2,
            }
        }
    }

    pub fn is_integral(&self) -> bool {
        self.denominator == 1
    }

    /// `2 * self`, always integral.
    pub fn doubled(&self) -> Vector {
        let k = 2 / i64::from(self.denominator);
        self.numerator.iter().map(|x| k * x).collect()
    }
}

/// `(1/2) sum_{w in gauge} m(w) w`.
pub fn rho(m: &WeightMultiset, g: &Gauge) -> HalfWeight {
    let mut sum = vec![0i64; m.rank()];
    for w in &g.positive_set {
        let k = m.multiplicity(w) as i64;
        for (s, x) in sum.iter_mut().zip(w) {
            *s += k * x;
        }
    }
    HalfWeight::half(sum)
}

/// Whether the orthogonal representation with weights `m` lifts to the spin
/// group: `rho` is integral.
pub fn lifts_to_spin(m: &WeightMultiset) -> bool {
    rho(m, &choose_gauge(m)).is_integral()
}

/// A character of order dividing 2 on a lattice, or equivalently a point of
/// `lattice / 2 lattice`; entries are 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsionCharacter {
    pub vector_mod2: Vec<u8>,
}

impl TorsionCharacter {
    pub fn zero(rank: usize) -> Self {
        TorsionCharacter {
            vector_mod2: vec![0; rank],
        }
    }

    pub fn from_vector(v: &[i64]) -> Self {
        TorsionCharacter {
            vector_mod2: v.iter().map(|x| x.rem_euclid(2) as u8).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.vector_mod2.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &TorsionCharacter) -> TorsionCharacter {
        assert_eq!(
            self.vector_mod2.len(),
            other.vector_mod2.len(),
            "rank mismatch"
        );
        TorsionCharacter {
            vector_mod2: self
                .vector_mod2
                .iter()
                .zip(&other.vector_mod2)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// Value at `v` of the pairing, as 0 (for `+1`) or 1 (for `-1`).
    pub fn evaluate(&self, v: &[i64]) -> u8 {
        assert_eq!(self.vector_mod2.len(), v.len(), "rank mismatch");
        let s: i64 = self
            .vector_mod2
            .iter()
            .zip(v)
            .map(|(&a, b)| i64::from(a) * b.rem_euclid(2))
            .sum();
        (s % 2) as u8
    }
}

/// The spin character and whether it factors through the fundamental group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinCharacter {
    pub character: TorsionCharacter,
    /// Trivial on every root of the opposite lattice.
    pub descends: bool,
    /// Invariant factors of the fundamental group the character descends to.
    #[serde(with = "crate::exactlat::json_ints")]
    pub pi1_invariant_factors: Vec<BigInt>,
    /// Values (0 or 1) on the standard generators of that group; present
    /// only when the character descends.
    pub pi1_values: Option<Vec<u8>>,
}

fn descent_group(m: &WeightMultiset) -> FinAbPresentation {
    match m.lattice() {
        // character of X_*(T), descends to X_*(T) / <coroots>
        WeightLattice::Characters => m.datum().fundamental_group(),
        // character of X*(T) = X_*(T^), descends to X*(T) / <roots>
        WeightLattice::Cocharacters => m.datum().center_characters(),
    }
}

/// `e_m(l) = prod_{w > 0} (-1)^{m(w) <l, w>}`, evaluated on each standard
/// basis vector `l` of the opposite lattice.
pub fn spin_character_with(m: &WeightMultiset, g: &Gauge) -> SpinCharacter {
    let n = m.rank();
    let value_at = |l: &[i64]| -> u8 {
        let mut sign = 0u8;
        for w in &g.positive_set {
            let k = m.multiplicity(w) as i64;
            sign ^= ((k * pairing(l, w)).rem_euclid(2)) as u8;
        }
        sign
    };
    let character = TorsionCharacter {
        vector_mod2: (0..n)
            .map(|j| value_at(&(0..n).map(|i| i64::from(i == j)).collect::<Vector>()))
            .collect(),
    };
    let descends = m
        .opposite_roots()
        .iter()
        .all(|r| character.evaluate(r) == 0);
    let pi1 = descent_group(m);
    let pi1_values = descends.then(|| {
        let k = pi1.invariant_factors().len();
        (0..k)
            .map(|j| {
                let coords: Vec<BigInt> = (0..k).map(|i| BigInt::from(u8::from(i == j))).collect();
                let lift: Vector = pi1
                    .lift(&coords)
                    .iter()
                    .map(|x| x.to_i64().expect("generator lift fits in i64"))
                    .collect();
                character.evaluate(&lift)
            })
            .collect()
    });
    SpinCharacter {
        character,
        descends,
        pi1_invariant_factors: pi1.invariant_factors().to_vec(),
        pi1_values,
    }
}

pub fn spin_character(m: &WeightMultiset) -> SpinCharacter {
    spin_character_with(m, &choose_gauge(m))
}

/// `z_m` as a point of `T[2]`, with its centrality and Galois verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Involution {
    pub class: TorsionCharacter,
    /// Pairs evenly with every root of the opposite lattice.
    pub central: bool,
    /// Fixed by every Galois generator modulo 2.
    pub galois_fixed: bool,
}

/// Product of the 2-torsion points `w(-1)^{m(w)}` over positive weights.
pub fn involution_with(m: &WeightMultiset, g: &Gauge) -> Involution {
    let mut class = TorsionCharacter::zero(m.rank());
    for w in &g.positive_set {
        if m.multiplicity(w) % 2 == 1 {
            class = class.add(&TorsionCharacter::from_vector(w));
        }
    }
    let as_vec: Vector = class.vector_mod2.iter().map(|&x| i64::from(x)).collect();
    let central = m
        .opposite_roots()
        .iter()
        .all(|r| pairing(r, &as_vec).rem_euclid(2) == 0);
    let galois_fixed = m
        .galois_action()
        .iter()
        .all(|a| TorsionCharacter::from_vector(&mat_vec(a, &as_vec)) == class);
    Involution {
        class,
        central,
        galois_fixed,
    }
}

pub fn involution(m: &WeightMultiset) -> Involution {
    involution_with(m, &choose_gauge(m))
}

/// Outcome of recomputing every gauge-dependent quantity under random gauges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeFlipReport {
    pub trials: usize,
    pub lifts_invariant: bool,
    pub spin_character_invariant: bool,
    pub involution_invariant: bool,
    /// `2 rho` changed only by vectors in twice the lattice.
    pub rho_parity_preserved: bool,
}

impl GaugeFlipReport {
    pub fn all_invariant(&self) -> bool {
        self.lifts_invariant
            && self.spin_character_invariant
            && self.involution_invariant
            && self.rho_parity_preserved
    }
}

pub fn gauge_flip_test<R: Rng + ?Sized>(
    m: &WeightMultiset,
    trials: usize,
    rng: &mut R,
) -> GaugeFlipReport {
    let base = choose_gauge(m);
    let base_rho = rho(m, &base);
    let base_char = spin_character_with(m, &base);
    let base_inv = involution_with(m, &base);
    let mut report = GaugeFlipReport {
        trials,
        lifts_invariant: true,
        spin_character_invariant: true,
        involution_invariant: true,
        rho_parity_preserved: true,
    };
    for _ in 0..trials {
        let g = random_gauge(m, rng);
        let r = rho(m, &g);
        report.lifts_invariant &= r.is_integral() == base_rho.is_integral();
        report.rho_parity_preserved &= r
            .doubled()
            .iter()
            .zip(base_rho.doubled())
            .all(|(a, b)| (a - b) % 2 == 0);
        report.spin_character_invariant &= spin_character_with(m, &g) == base_char;
        report.involution_invariant &= involution_with(m, &g) == base_inv;
    }
    report
}

/// Everything reported for a multiset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinReport {
    pub lattice: WeightLattice,
    pub gauge: Gauge,
    pub rho: HalfWeight,
    pub lifts: bool,
    pub spin_character: SpinCharacter,
    pub involution: Involution,
}

pub fn spin_report(m: &WeightMultiset) -> SpinReport {
    let gauge = choose_gauge(m);
    let rho = rho(m, &gauge);
    SpinReport {
        lattice: m.lattice(),
        lifts: rho.is_integral(),
        spin_character: spin_character_with(m, &gauge),
        involution: involution_with(m, &gauge),
        rho,
        gauge,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{adjoint_weights, catalog};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tautological_so3() -> WeightMultiset {
        WeightMultiset::new(
            catalog("PGL2").unwrap(),
            WeightLattice::Characters,
            [(vec![1], 1), (vec![0], 1), (vec![-1], 1)],
        )
        .unwrap()
    }

    #[test]
    fn gauge_examples() {
        let m = adjoint_weights(&catalog("SL2").unwrap());
        assert_eq!(choose_gauge(&m).positive_set, BTreeSet::from([vec![1]]));
        let m = WeightMultiset::new(
            catalog("GL2").unwrap(),
            WeightLattice::Characters,
            [(vec![1, -1], 1), (vec![-1, 1], 1)],
        )
        .unwrap();
        assert_eq!(choose_gauge(&m).positive_set, BTreeSet::from([vec![1, -1]]));
        let m = WeightMultiset::new(
            catalog("SL2").unwrap(),
            WeightLattice::Characters,
            [(vec![0], 3)],
        )
        .unwrap();
        assert!(choose_gauge(&m).positive_set.is_empty());
        assert!(choose_gauge(&m).is_gauge_for(&m));
    }

    #[test]
    fn rho_examples() {
        let m = tautological_so3();
        let g = choose_gauge(&m);
        assert_eq!(
            rho(&m, &g),
            HalfWeight {
                numerator: vec![1],
                denominator: 2
            }
        );
        let m2 = m.scaled(2);
        assert_eq!(rho(&m2, &choose_gauge(&m2)).numerator, vec![1]);
        assert!(rho(&m2, &choose_gauge(&m2)).is_integral());
        let sl2_adj = WeightMultiset::new(
            catalog("SL2").unwrap(),
            WeightLattice::Characters,
            [(vec![2], 1), (vec![0], 1), (vec![-2], 1)],
        )
        .unwrap();
        assert_eq!(rho(&sl2_adj, &choose_gauge(&sl2_adj)).numerator, vec![1]);
        assert!(lifts_to_spin(&sl2_adj));
    }

    #[test]
    fn tautological_so3_does_not_lift() {
        let m = tautological_so3();
        assert!(!lifts_to_spin(&m));
        assert!(lifts_to_spin(&m.direct_sum(&m)));
        let e = spin_character(&m);
        assert_eq!(e.character.vector_mod2, vec![1]);
        assert!(e.descends);
        assert_eq!(e.pi1_invariant_factors, vec![BigInt::from(2)]);
        assert_eq!(e.pi1_values, Some(vec![1]));
        assert!(spin_character(&m.scaled(2)).character.is_trivial());
    }

    #[test]
    fn adjoint_involutions() {
        let z = involution(&adjoint_weights(&catalog("SL2").unwrap()));
        assert_eq!(z.class.vector_mod2, vec![1]);
        assert!(z.central);
        assert!(z.galois_fixed);
        let z = involution(&adjoint_weights(&catalog("PGL2").unwrap()));
        assert!(z.class.is_trivial());
        let z = involution(&adjoint_weights(&catalog("SL3").unwrap()).scaled(2));
        assert!(z.class.is_trivial());
    }

    #[test]
    fn gauge_flips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(gauge_flip_test(&tautological_so3(), 100, &mut rng).all_invariant());
        let a2 = adjoint_weights(&catalog("SL3").unwrap());
        assert!(gauge_flip_test(&a2, 100, &mut rng).all_invariant());
    }

    #[test]
    fn torsion_character_arithmetic() {
        let a = TorsionCharacter::from_vector(&[3, -2, -1]);
        assert_eq!(a.vector_mod2, vec![1, 0, 1]);
        assert_eq!(a.evaluate(&[1, 5, 0]), 1);
        assert_eq!(a.evaluate(&[1, 5, -1]), 0);
        assert!(a.add(&a).is_trivial());
    }
}
