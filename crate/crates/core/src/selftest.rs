//! The acceptance suite behind `spinlift selftest`.
//!
//! Each criterion recomputes its quantities with the library and checks them
//! against expected values or an oracle written separately here: gcds of
//! minors for fundamental groups, exhaustive cochain enumeration for `H^2`,
//! positive roots grown from the base for canonical involutions, and a
//! multiplicity-blind lifting rule as a negative oracle.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::cliffpin::{rep_catalog, CatalogRep, OrthRep, QuadSpace, RatMatrix};
use crate::gcoh::lemma::{
    crossed_hom_coboundary, key_lemma_check, lemma_b_counterexample, KeyLemmaSampler,
};
use crate::gcoh::small::{abelian_normal_subgroups, groups_up_to_16, quaternion};
use crate::gcoh::{classes_equal, cup1, h2, FiniteGroup, GModule, GroupExtension};
use crate::rootdata::{
    adjoint_weights, catalog, catalog_names, split_catalog_names, RootDatum, Vector, WeightLattice,
    WeightMultiset, DEFAULT_WEYL_BOUND,
};
use crate::spincalc::{
    gauge_flip_test, involution, lifts_to_spin, spin_character, TorsionCharacter,
};

/// Largest group order the suite builds (`|G x| W|` in the key lemma runs).
pub const SUITE_GROUP_ORDER: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SelftestError {
    #[error("SizeBoundExceeded: {what} is {size}, above the bound {bound}")]
    SizeBoundExceeded {
        what: String,
        size: usize,
        bound: usize,
    },
    #[error("catalog entry `{name}`: {reason}")]
    InvalidCatalogEntry { name: String, reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    /// Wall-clock time; kept out of JSON so reports are reproducible.
    #[serde(skip)]
    pub seconds: f64,
    #[serde(skip)]
    pub budget_seconds: f64,
}

impl CriterionResult {
    /// `[PASS] 3 canonical involution (tolerance: exact): ... (0.01 s, budget 1 s)`.
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {} (tolerance: exact): {} ({:.2} s, budget {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds,
            self.budget_seconds
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub passed: bool,
    pub passed_count: usize,
    pub criteria: Vec<CriterionResult>,
}

/// Root data and representations supplied on top of the built-in catalogs,
/// validated before the suite runs.
#[derive(Clone, Debug, Default)]
pub struct ExtraCatalog {
    pub root_data: BTreeMap<String, serde_json::Value>,
    pub reps: BTreeMap<String, serde_json::Value>,
}

/// Validates every built-in catalog entry and every extra one; the first
/// failure is reported with the entry's name.
pub fn validate_catalogs(extra: &ExtraCatalog) -> Result<(), SelftestError> {
    let bad = |name: &str, reason: String| SelftestError::InvalidCatalogEntry {
        name: name.to_string(),
        reason,
    };
    for name in catalog_names() {
        let d = catalog(&name).map_err(|e| bad(&name, e.to_string()))?;
        check_datum(&name, &d)?;
    }
    for (name, v) in &extra.root_data {
        let d: RootDatum =
            serde_json::from_value(v.clone()).map_err(|e| bad(name, e.to_string()))?;
        check_datum(name, &d)?;
    }
    let builtin = rep_catalog()
        .into_iter()
        .map(|r| (r.name, serde_json::to_value(&r.rep).expect("serializable")));
    for (name, v) in builtin.chain(extra.reps.clone()) {
        serde_json::from_value::<OrthRep>(v).map_err(|e| bad(&name, e.to_string()))?;
    }
    Ok(())
}

fn check_datum(name: &str, d: &RootDatum) -> Result<(), SelftestError> {
    let report = d.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(SelftestError::InvalidCatalogEntry {
            name: name.to_string(),
            reason: report.failures.join("; "),
        })
    }
}

/// Runs all criteria. `bound` caps group orders and must cover
/// [`SUITE_GROUP_ORDER`].
pub fn run_suite(
    seed: u64,
    bound: usize,
    extra: &ExtraCatalog,
) -> Result<SuiteReport, SelftestError> {
    if bound < SUITE_GROUP_ORDER {
        return Err(SelftestError::SizeBoundExceeded {
            what: "largest group order in the suite".into(),
            size: SUITE_GROUP_ORDER,
            bound,
        });
    }
    validate_catalogs(extra)?;
    type Check = fn(&mut ChaCha8Rng) -> Result<String, String>;
    let criteria: [(u8, &'static str, f64, Check); 8] = [
        (1, "fundamental groups", 1.0, pi1_table),
        (2, "spin-lift suite", 2.0, spin_lift_suite),
        (3, "canonical involution", 1.0, canonical_involution),
        (4, "gauge independence", 2.0, gauge_independence),
        (5, "cohomology engine", 10.0, cohomology_engine),
        (6, "key lemma", 30.0, key_lemma),
        (7, "Stiefel-Whitney classes", 20.0, stiefel_whitney),
        (
            8,
            "multiplicity-blind discrepancy",
            1.0,
            multiplicity_discrepancy,
        ),
    ];
    let mut results = Vec::new();
    for (id, name, budget, check) in criteria {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(u64::from(id)));
        let start = Instant::now();
        let outcome = check(&mut rng);
        let seconds = start.elapsed().as_secs_f64();
        let (passed, detail) = match outcome {
            Ok(d) if seconds <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the time budget")),
            Err(d) => (false, d),
        };
        results.push(CriterionResult {
            id,
            name,
            passed,
            detail,
            seconds,
            budget_seconds: budget,
        });
    }
    let passed_count = results.iter().filter(|r| r.passed).count();
    Ok(SuiteReport {
        passed: passed_count == results.len(),
        passed_count,
        criteria: results,
    })
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bigints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

// ---- 1 ----

fn det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    // fraction-free elimination
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `(invariant factors > 1, free rank)` of `Z^n / <cols>`, with the k-th
/// determinantal divisor taken as the gcd of all k x k minors.
pub fn minor_oracle(n: usize, cols: &[Vector]) -> (Vec<BigInt>, usize) {
    let mut divisors = vec![BigInt::one()];
    for k in 1..=n.min(cols.len()) {
        let mut g = BigInt::zero();
        for rows in subsets(n, k) {
            for cs in subsets(cols.len(), k) {
                let m: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&r| cs.iter().map(|&c| BigInt::from(cols[c][r])).collect())
                    .collect();
                g = g.gcd(&det(m));
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(g);
    }
    let r = divisors.len() - 1;
    let factors = divisors
        .windows(2)
        .map(|w| &w[1] / &w[0])
        .filter(|d| !d.is_one())
        .collect();
    (factors, n - r)
}

fn pi1_table(_: &mut ChaCha8Rng) -> Result<String, String> {
    let table: [(&str, &[i64], usize); 10] = [
        ("SL2", &[], 0),
        ("SL3", &[], 0),
        ("SL4", &[], 0),
        ("PGL2", &[2], 0),
        ("PGL3", &[3], 0),
        ("PGL4", &[4], 0),
        ("GL1", &[], 1),
        ("Sp4", &[], 0),
        ("SO5", &[2], 0),
        ("SO3", &[2], 0),
    ];
    for (name, factors, free) in table {
        let d = catalog(name).map_err(|e| e.to_string())?;
        let p = d.fundamental_group();
        let (of, ofree) = minor_oracle(d.rank, &d.coroots);
        let want = bigints(factors);
        // free factors appear as 0
        let torsion: Vec<BigInt> = p
            .invariant_factors()
            .iter()
            .filter(|d| !d.is_zero())
            .cloned()
            .collect();
        ensure(torsion == want && p.free_rank() == free, || {
            format!(
                "{name}: got {:?} + Z^{}",
                p.invariant_factors(),
                p.free_rank()
            )
        })?;
        ensure(of == want && ofree == free, || {
            format!("{name}: minor oracle gives {of:?} + Z^{ofree}")
        })?;
    }
    Ok(format!("{} data agree with the minor oracle", table.len()))
}

// ---- 2 ----

/// A random valid multiset: orbits of up to three random weights on a
/// random catalog datum, sometimes closed under the Weyl group.
pub fn random_multiset<R: Rng + ?Sized>(rng: &mut R) -> WeightMultiset {
    let names = catalog_names();
    let d = catalog(names.choose(rng).expect("nonempty catalog")).expect("catalog name");
    let lattice = if rng.gen() {
        WeightLattice::Characters
    } else {
        WeightLattice::Cocharacters
    };
    let gens: Vec<(Vector, u64)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let w = (0..d.rank).map(|_| rng.gen_range(-3..=3)).collect();
            (w, rng.gen_range(1..=3))
        })
        .collect();
    let weyl = rng.gen_bool(0.5).then_some(DEFAULT_WEYL_BOUND);
    WeightMultiset::from_orbits(d, lattice, &gens, weyl).expect("orbit sums are stable")
}

/// `sum of m(w) w` over lexicographically positive weights, reduced mod 2:
/// the spin character computed without gauges or half-sums.
fn positive_sum_mod2(m: &WeightMultiset) -> Vec<u8> {
    let mut s = vec![0i64; m.rank()];
    for (w, k) in m.nonzero_weights() {
        if w.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
            for (a, b) in s.iter_mut().zip(w) {
                *a += k as i64 * b;
            }
        }
    }
    s.iter().map(|x| x.rem_euclid(2) as u8).collect()
}

fn tautological_odd_orthogonal(n: usize) -> WeightMultiset {
    let d = catalog(&format!("SO{}", 2 * n + 1)).expect("SO(2n+1)");
    let mut weights = vec![(vec![0; n], 1)];
    for i in 0..n {
        for s in [1, -1] {
            let mut w = vec![0; n];
            w[i] = s;
            weights.push((w, 1));
        }
    }
    WeightMultiset::new(d, WeightLattice::Characters, weights).expect("tautological weights")
}

fn spin_lift_suite(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for n in 1..=4 {
        ensure(!lifts_to_spin(&tautological_odd_orthogonal(n)), || {
            format!("tautological SO{} multiset lifts", 2 * n + 1)
        })?;
    }
    let trials = 200;
    for t in 0..trials {
        let m = random_multiset(rng);
        ensure(lifts_to_spin(&m.direct_sum(&m)), || {
            format!("instance {t}: doubled multiset does not lift")
        })?;
        let e = spin_character(&m);
        ensure(lifts_to_spin(&m) == e.character.is_trivial(), || {
            format!("instance {t}: lifting verdict and spin character disagree")
        })?;
        ensure(e.character.vector_mod2 == positive_sum_mod2(&m), || {
            format!("instance {t}: spin character differs from the positive-sum oracle")
        })?;
    }
    Ok(format!(
        "tautological SO3..SO9 fail to lift; {trials} random multisets: doubles lift, verdict = character = oracle"
    ))
}

// ---- 3 ----

/// Positive roots grown from the base by adding simple roots.
fn positive_roots_by_closure(d: &RootDatum) -> Vec<usize> {
    let index: BTreeMap<&Vector, usize> = d.roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let mut found: Vec<usize> = d.simple_indices.clone();
    let mut seen: HashSet<usize> = found.iter().copied().collect();
    let mut k = 0;
    while k < found.len() {
        let r = d.roots[found[k]].clone();
        for &s in &d.simple_indices {
            let sum: Vector = r.iter().zip(&d.roots[s]).map(|(a, b)| a + b).collect();
            if let Some(&j) = index.get(&sum) {
                if seen.insert(j) {
                    found.push(j);
                }
            }
        }
        k += 1;
    }
    found
}

fn canonical_involution(_: &mut ChaCha8Rng) -> Result<String, String> {
    let names = split_catalog_names();
    for name in &names {
        let d = catalog(name).map_err(|e| e.to_string())?;
        let mut sum = vec![0i64; d.rank];
        for i in positive_roots_by_closure(&d) {
            for (a, b) in sum.iter_mut().zip(&d.coroots[i]) {
                *a += b;
            }
        }
        let z = involution(&adjoint_weights(&d));
        ensure(z.class == TorsionCharacter::from_vector(&sum), || {
            format!(
                "{name}: involution {:?}, coroot sum {sum:?}",
                z.class.vector_mod2
            )
        })?;
    }
    let class = |n: &str| involution(&adjoint_weights(&catalog(n).expect("catalog"))).class;
    ensure(!class("SL2").is_trivial(), || "SL2 class is trivial".into())?;
    ensure(class("PGL2").is_trivial(), || {
        "PGL2 class is nontrivial".into()
    })?;
    Ok(format!(
        "{} split data match the positive coroot sum; SL2 nontrivial, PGL2 trivial",
        names.len()
    ))
}

// ---- 4 ----

fn gauge_independence(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let (multisets, flips) = (50, 100);
    for t in 0..multisets {
        let m = random_multiset(rng);
        let r = gauge_flip_test(&m, flips, rng);
        ensure(r.all_invariant(), || format!("multiset {t}: {r:?}"))?;
    }
    Ok(format!(
        "{flips} random gauges on each of {multisets} multisets change nothing"
    ))
}

// ---- 5 ----

/// `|H^2(G, Z/m)|` for the trivial action by listing every normalized
/// cochain.
pub fn exhaustive_h2_order(g: &FiniteGroup, m: u64) -> u64 {
    let e = g.identity();
    let nonid: Vec<usize> = g.elements().filter(|&x| x != e).collect();
    let pairs = nonid.len() * nonid.len();
    let total = m.pow(pairs as u32);
    let n = g.order();
    let mut cocycles = 0u64;
    let mut z = vec![0u64; n * n];
    for code in 0..total {
        let mut c = code;
        for &a in &nonid {
            for &b in &nonid {
                z[a * n + b] = c % m;
                c /= m;
            }
        }
        let ok = g.elements().all(|a| {
            g.elements().all(|b| {
                g.elements().all(|c| {
                    let lhs = z[b * n + c] + z[a * n + g.mul(b, c)];
                    let rhs = z[g.mul(a, b) * n + c] + z[a * n + b];
                    (lhs + m - rhs % m).is_multiple_of(m)
                })
            })
        });
        cocycles += u64::from(ok);
    }
    let mut coboundaries = HashSet::new();
    for code in 0..m.pow(nonid.len() as u32) {
        let mut f = vec![0u64; n];
        let mut c = code;
        for &a in &nonid {
            f[a] = c % m;
            c /= m;
        }
        let df: Vec<u64> = (0..n * n)
            .map(|i| {
                let (a, b) = (i / n, i % n);
                (f[b] + f[a] + m - f[g.mul(a, b)]) % m
            })
            .collect();
        coboundaries.insert(df);
    }
    cocycles / coboundaries.len() as u64
}

fn cohomology_engine(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let c2 = FiniteGroup::cyclic(2);
    let cases = [
        ("C2", c2.clone(), 2u64),
        ("C2xC2", c2.direct_product(&c2), 8),
        ("C3", FiniteGroup::cyclic(3), 1),
        ("C4", FiniteGroup::cyclic(4), 2),
    ];
    for (name, g, want) in &cases {
        let got = h2(&GModule::trivial(g.clone(), &[2]), 64)
            .map_err(|e| e.to_string())?
            .order();
        let oracle = exhaustive_h2_order(g, 2);
        ensure(got == *want && oracle == *want, || {
            format!("H^2({name}, Z/2): engine {got}, enumeration {oracle}, expected {want}")
        })?;
    }
    let mut pairs = 0;
    for (name, e) in groups_up_to_16() {
        for a in abelian_normal_subgroups(&e, 4) {
            let fail = |m: &str| format!("{name} over a subgroup of order {}: {m}", a.len());
            let err = |x: crate::gcoh::GcohError| fail(&x.to_string());
            let ext = GroupExtension::from_normal_subgroup(&e, &a).map_err(err)?;
            let z = ext.cocycle(&ext.canonical_section()).map_err(err)?;
            let z_rand = ext.cocycle(&ext.random_section(rng)).map_err(err)?;
            ensure(classes_equal(&z, &z_rand).map_err(err)?.is_some(), || {
                fail("sections give different classes")
            })?;
            let back = GroupExtension::from_cocycle(&z, 16).map_err(err)?;
            ensure(ext.find_equivalence(&back).is_some(), || {
                fail("extension rebuilt from its cocycle is not equivalent")
            })?;
            let z_back = back.cocycle(&back.canonical_section()).map_err(err)?;
            ensure(classes_equal(&z, &z_back).map_err(err)?.is_some(), || {
                fail("cocycle of the rebuilt extension has a different class")
            })?;
            pairs += 1;
        }
    }
    Ok(format!(
        "H^2 orders 2, 8, 1, 2 match enumeration; {pairs} extension/cocycle round trips"
    ))
}

// ---- 6 ----

fn key_lemma(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let sampler = KeyLemmaSampler::new(SUITE_GROUP_ORDER).map_err(|e| e.to_string())?;
    let (n_key, n_crossed) = (50, 20);
    let mut corrections = 0;
    for t in 0..n_key {
        let inst = sampler
            .key_lemma(rng)
            .map_err(|e| format!("instance {t}: {e}"))?;
        let r = key_lemma_check(&inst, rng).map_err(|e| format!("instance {t}: {e}"))?;
        ensure(r.order_g_w <= SUITE_GROUP_ORDER, || {
            format!("instance {t}: |G x| W| = {}", r.order_g_w)
        })?;
        ensure(r.holds && r.section_identity, || {
            format!("instance {t}: {r:?}")
        })?;
        corrections += usize::from(!r.correction_trivial);
    }
    for t in 0..n_crossed {
        let inst = sampler
            .crossed_hom(rng)
            .map_err(|e| format!("crossed hom {t}: {e}"))?;
        let r = crossed_hom_coboundary(&inst, rng).map_err(|e| format!("crossed hom {t}: {e}"))?;
        ensure(r.holds, || format!("crossed hom {t}: {r:?}"))?;
    }
    let counter = key_lemma_check(&lemma_b_counterexample(), rng).map_err(|e| e.to_string())?;
    ensure(!counter.holds, || "the known counterexample passes".into())?;
    Ok(format!(
        "{n_key} instances hold ({corrections} with nontrivial correction), \
         {n_crossed} crossed homomorphisms hold; the out-of-family counterexample fails as expected"
    ))
}

// ---- 7 ----

fn same_group_pairs(cat: &[CatalogRep]) -> Vec<(&CatalogRep, &CatalogRep)> {
    let mut out = Vec::new();
    for a in cat {
        for b in cat {
            if a.group == b.group {
                out.push((a, b));
            }
        }
    }
    out
}

fn stiefel_whitney(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let err = |e: crate::cliffpin::CliffError| e.to_string();
    let gerr = |e: crate::gcoh::GcohError| e.to_string();
    let c2 = FiniteGroup::cyclic(2);
    let sign = OrthRep::from_character(&c2, &[0, 1]).map_err(err)?;
    ensure(!sign.sw2().map_err(err)?.nontrivial, || {
        "w2 of the sign of C2 is nontrivial".into()
    })?;

    let plane = QuadSpace::standard(2).map_err(err)?;
    let rot = RatMatrix::from_ints(&[vec![0, -1], vec![1, 0]]);
    let c4 =
        OrthRep::from_generators(&FiniteGroup::cyclic(4), &plane, &[1], &[rot]).map_err(err)?;
    let w = c4.sw2().map_err(err)?;
    let ext = GroupExtension::from_cocycle(&w.cocycle, 16).map_err(gerr)?;
    ensure(
        w.nontrivial && ext.total().is_isomorphic(&FiniteGroup::cyclic(8)),
        || "C4 rotation: pullback is not Z/8".into(),
    )?;

    let v4 = c2.direct_product(&c2);
    let diag = OrthRep::from_generators(
        &v4,
        &QuadSpace::standard(3).map_err(err)?,
        &[2, 1],
        &[
            RatMatrix::diagonal(&[1, -1, -1]),
            RatMatrix::diagonal(&[-1, 1, -1]),
        ],
    )
    .map_err(err)?;
    let w = diag.sw2().map_err(err)?;
    let ext = GroupExtension::from_cocycle(&w.cocycle, 16).map_err(gerr)?;
    ensure(
        w.nontrivial && ext.total().is_isomorphic(&quaternion()),
        || "diagonal Klein group in SO3: pullback is not Q8".into(),
    )?;

    let cat = rep_catalog();
    let pairs = same_group_pairs(&cat);
    let n = 25;
    for _ in 0..n {
        let (a, b) = pairs.choose(rng).expect("catalog pairs");
        let label = format!("{} + {}", a.name, b.name);
        let sum = a.rep.direct_sum(&b.rep).map_err(err)?;
        let w_sum = sum.sw2().map_err(err)?.cocycle;
        let expected = a
            .rep
            .sw2()
            .map_err(err)?
            .cocycle
            .add(&cup1(a.rep.group(), &a.rep.sw1(), &b.rep.sw1()).map_err(gerr)?)
            .add(&b.rep.sw2().map_err(err)?.cocycle);
        ensure(
            classes_equal(&w_sum, &expected).map_err(gerr)?.is_some(),
            || format!("Whitney formula fails for {label}"),
        )?;
        let w_rand = sum.sw2_random(rng).map_err(err)?.cocycle;
        ensure(
            classes_equal(&w_sum, &w_rand).map_err(gerr)?.is_some(),
            || format!("decomposition choice changes w2 for {label}"),
        )?;
    }
    Ok(format!(
        "sign of C2 trivial, C4 rotation gives Z/8, diagonal Klein group gives Q8; \
         Whitney and decomposition independence on {n} random pairs"
    ))
}

// ---- 8 ----

/// Lifting rule that sums the positive weight SET, ignoring multiplicities.
/// Deliberately wrong; used only as a negative oracle.
pub fn multiplicity_blind_lifts(m: &WeightMultiset) -> bool {
    let mut s = vec![0i64; m.rank()];
    for (w, _) in m.nonzero_weights() {
        if w.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
            for (a, b) in s.iter_mut().zip(w) {
                *a += b;
            }
        }
    }
    s.iter().all(|x| x.rem_euclid(2) == 0)
}

fn multiplicity_discrepancy(_: &mut ChaCha8Rng) -> Result<String, String> {
    let m = tautological_odd_orthogonal(1);
    let doubled = m.direct_sum(&m);
    ensure(m.weight_set() == doubled.weight_set(), || {
        "weight sets differ".into()
    })?;
    ensure(!lifts_to_spin(&m) && lifts_to_spin(&doubled), || {
        "verdicts are not false / true".into()
    })?;
    let blind = (
        multiplicity_blind_lifts(&m),
        multiplicity_blind_lifts(&doubled),
    );
    ensure(
        blind.0 == blind.1 && blind.1 != lifts_to_spin(&doubled),
        || format!("multiplicity-blind rule gives {blind:?}"),
    )?;
    Ok("same weight set, verdicts false / true; the multiplicity-blind rule disagrees on the double".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minor_oracle_examples() {
        assert_eq!(minor_oracle(1, &[vec![2], vec![-2]]), (bigints(&[2]), 0));
        assert_eq!(
            minor_oracle(2, &[vec![2, 0], vec![0, 6]]),
            (bigints(&[2, 6]), 0)
        );
        assert_eq!(minor_oracle(2, &[vec![1, 1]]), (vec![], 1));
        assert_eq!(minor_oracle(1, &[]), (vec![], 1));
        assert_eq!(
            det(vec![
                bigints(&[0, 1, 2]),
                bigints(&[3, 4, 5]),
                bigints(&[6, 7, 9])
            ]),
            BigInt::from(-3)
        );
    }

    #[test]
    fn exhaustive_h2_small_cases() {
        assert_eq!(exhaustive_h2_order(&FiniteGroup::cyclic(2), 2), 2);
        assert_eq!(exhaustive_h2_order(&FiniteGroup::cyclic(3), 2), 1);
        assert_eq!(exhaustive_h2_order(&FiniteGroup::cyclic(3), 3), 3);
    }

    #[test]
    fn closure_finds_every_positive_root() {
        for name in split_catalog_names() {
            let d = catalog(&name).unwrap();
            assert_eq!(
                positive_roots_by_closure(&d).len(),
                d.roots.len() / 2,
                "{name}"
            );
        }
    }

    #[test]
    fn bound_below_the_suite_size_is_rejected() {
        let e = run_suite(0, 0, &ExtraCatalog::default()).unwrap_err();
        assert!(matches!(
            e,
            SelftestError::SizeBoundExceeded { bound: 0, .. }
        ));
    }

    #[test]
    fn corrupted_entry_is_named() {
        let mut extra = ExtraCatalog::default();
        let mut d = serde_json::to_value(catalog("SL3").unwrap()).unwrap();
        d["coroots"][0] = serde_json::json!([5, 0]);
        extra.root_data.insert("SL3-bad".into(), d);
        match validate_catalogs(&extra) {
            Err(SelftestError::InvalidCatalogEntry { name, .. }) => assert_eq!(name, "SL3-bad"),
            other => panic!("{other:?}"),
        }
    }
}
