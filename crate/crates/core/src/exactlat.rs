//! Exact integer-lattice arithmetic.
//!
//! Everything here works over arbitrary-precision integers: Smith normal form
//! with unimodular transforms, presentations of finitely generated abelian
//! groups as `Z^r / L`, and solving `A x = b (mod L)`.
//!
//! [`ModSmith`] is the one small-integer routine: a diagonalization over
//! `Z/e` used when the modulus lattice is `e * Z^m`. The transforms it
//! produces are still unimodular over `Z`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type IntVector = Vec<BigInt>;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<JsonInt>>", into = "Vec<Vec<JsonInt>>")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row vectors. An empty list gives a `0 x 0` matrix.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            entries: rows.iter().flatten().cloned().map(Into::into).collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_cols<T: Into<BigInt> + Clone>(rows: usize, cols: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in entries.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> IntVector {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> IntVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Entries converted to `i64`; `None` if any entry does not fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(
            self.cols,
            v.len(),
            "dimension mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|i| {
                self.entries[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch in hstack");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    /// Rank over `Q`.
    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    /// Integer inverse of a unimodular matrix.
    pub fn unimodular_inverse(&self) -> Option<IntMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let snf = smith_normal_form(self);
        if (0..self.rows).any(|i| !snf.d[(i, i)].is_one()) {
            return None;
        }
        // U M V = I  =>  M^{-1} = V U
        Some(snf.v.mul(&snf.u))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.entries[src * self.cols + j];
            if !s.is_zero() {
                let delta = s * k;
                self.entries[dst * self.cols + j] += delta;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.entries[i * self.cols + src];
            if !s.is_zero() {
                let delta = s * k;
                self.entries[i * self.cols + dst] += delta;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let e = &mut self.entries[i * self.cols + j];
            *e = -std::mem::take(e);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let e = &mut self.entries[i * self.cols + j];
            *e = -std::mem::take(e);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// A `BigInt` in JSON: a plain number when it fits in 64 bits, otherwise a
/// decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonIntRepr {
    Small(i64),
    Text(String),
}

impl Serialize for JsonInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match JsonIntRepr::deserialize(d)? {
            JsonIntRepr::Small(n) => Ok(JsonInt(n.into())),
            JsonIntRepr::Text(t) => t
                .parse()
                .map(JsonInt)
                .map_err(|_| serde::de::Error::custom(format!("`{t}` is not an integer"))),
        }
    }
}

/// `#[serde(with = ...)]` helpers for nested vectors of `BigInt`.
pub mod json_ints {
    use super::JsonInt;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn wrap(v: &[BigInt]) -> Vec<JsonInt> {
        v.iter().cloned().map(JsonInt).collect()
    }

    pub fn unwrap(v: Vec<JsonInt>) -> Vec<BigInt> {
        v.into_iter().map(|x| x.0).collect()
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        wrap(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<JsonInt>::deserialize(d).map(unwrap)
    }
}

impl TryFrom<Vec<Vec<JsonInt>>> for IntMatrix {
    type Error = String;
    fn try_from(rows: Vec<Vec<JsonInt>>) -> Result<Self, String> {
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err("matrix rows have different lengths".into());
        }
        let rows: Vec<IntVector> = rows.into_iter().map(json_ints::unwrap).collect();
        Ok(IntMatrix::from_rows(&rows))
    }
}

impl From<IntMatrix> for Vec<Vec<JsonInt>> {
    fn from(m: IntMatrix) -> Self {
        m.to_rows().iter().map(|r| json_ints::wrap(r)).collect()
    }
}

/// Result of [`smith_normal_form`]: `u * m * v == d`, with the inverses of
/// `u` and `v` carried along.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }
}

/// Smith normal form with smallest-absolute-value pivoting; ties go to the
/// lowest (row, column) index so the transforms are reproducible.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    // Row op `row_dst += k row_src` on a: u gets the same op, u_inv the inverse
    // op on columns.
    macro_rules! row_add {
        ($dst:expr, $src:expr, $k:expr) => {{
            let k: &BigInt = $k;
            a.add_row_multiple($dst, $src, k);
            u.add_row_multiple($dst, $src, k);
            u_inv.add_col_multiple($src, $dst, &-k);
        }};
    }
    macro_rules! col_add {
        ($dst:expr, $src:expr, $k:expr) => {{
            let k: &BigInt = $k;
            a.add_col_multiple($dst, $src, k);
            v.add_col_multiple($dst, $src, k);
            v_inv.add_row_multiple($src, $dst, &-k);
        }};
    }

    for t in 0..r.min(c) {
        loop {
            // smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v, u_inv, v_inv);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let p = a[(t, t)].clone();
            for i in t + 1..r {
                if !a[(i, t)].is_zero() {
                    let q = &a[(i, t)] / &p;
                    row_add!(i, t, &-q);
                }
            }
            for j in t + 1..c {
                if !a[(t, j)].is_zero() {
                    let q = &a[(t, j)] / &p;
                    col_add!(j, t, &-q);
                }
            }
            let dirty = (t + 1..r).any(|i| !a[(i, t)].is_zero())
                || (t + 1..c).any(|j| !a[(t, j)].is_zero());
            if dirty {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let p = a[(t, t)].clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => row_add!(t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    finish(a, u, v, u_inv, v_inv)
}

fn finish(
    d: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    u_inv: IntMatrix,
    v_inv: IntMatrix,
) -> SmithForm {
    SmithForm {
        u,
        d,
        v,
        u_inv,
        v_inv,
    }
}

/// `Z^ambient_rank / L` where the columns of `relation_matrix` generate `L`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "PresentationData", into = "PresentationData")]
pub struct FinAbPresentation {
    ambient_rank: usize,
    relation_matrix: IntMatrix,
    invariant_factors: Vec<BigInt>,
    // rows of `u` selected for the nontrivial factors: coordinate map
    coord_map: IntMatrix,
    // matching columns of u^{-1}: lifts coordinates back to the ambient lattice
    lift_map: IntMatrix,
}

#[derive(Serialize, Deserialize)]
struct PresentationData {
    ambient_rank: usize,
    relations: Vec<Vec<JsonInt>>,
}

impl TryFrom<PresentationData> for FinAbPresentation {
    type Error = String;
    fn try_from(p: PresentationData) -> Result<Self, String> {
        if p.relations.iter().any(|g| g.len() != p.ambient_rank) {
            return Err(format!(
                "every relation must have {} entries",
                p.ambient_rank
            ));
        }
        let relations: Vec<IntVector> = p.relations.into_iter().map(json_ints::unwrap).collect();
        Ok(quotient(
            p.ambient_rank,
            &IntMatrix::from_cols(p.ambient_rank, &relations),
        ))
    }
}

impl From<FinAbPresentation> for PresentationData {
    fn from(p: FinAbPresentation) -> Self {
        PresentationData {
            ambient_rank: p.ambient_rank,
            relations: (0..p.relation_matrix.cols())
                .map(|j| json_ints::wrap(&p.relation_matrix.col(j)))
                .collect(),
        }
    }
}

impl FinAbPresentation {
    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn relation_matrix(&self) -> &IntMatrix {
        &self.relation_matrix
    }

    /// Nontrivial invariant factors; finite ones first in divisibility order,
    /// then one `0` per free factor.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_finite(&self) -> bool {
        self.invariant_factors.iter().all(|d| !d.is_zero())
    }

    pub fn free_rank(&self) -> usize {
        self.invariant_factors
            .iter()
            .filter(|d| d.is_zero())
            .count()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().product())
    }

    /// Canonical coordinates of an ambient vector: one entry per invariant
    /// factor, reduced into `[0, d)` for finite factors.
    pub fn project(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(v.len(), self.ambient_rank, "vector length mismatch");
        self.coord_map
            .mul_vec(v)
            .into_iter()
            .zip(&self.invariant_factors)
            .map(|(x, d)| if d.is_zero() { x } else { x.mod_floor(d) })
            .collect()
    }

    /// An ambient representative of the element with the given coordinates.
    pub fn lift(&self, coords: &[BigInt]) -> IntVector {
        assert_eq!(
            coords.len(),
            self.invariant_factors.len(),
            "coordinate length mismatch"
        );
        self.lift_map.mul_vec(coords)
    }

    /// Whether `v` lies in the relation lattice.
    pub fn is_zero(&self, v: &[BigInt]) -> bool {
        self.project(v).iter().all(Zero::is_zero)
    }
}

/// Presents `Z^ambient_rank / <columns of sublattice_gens>`.
pub fn quotient(ambient_rank: usize, sublattice_gens: &IntMatrix) -> FinAbPresentation {
    assert_eq!(
        sublattice_gens.rows(),
        ambient_rank,
        "generators must live in the ambient lattice"
    );
    let snf = smith_normal_form(sublattice_gens);
    let diag = snf.diagonal();
    let mut factors = Vec::new();
    let mut keep = Vec::new();
    for i in 0..ambient_rank {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if !d.is_one() {
            factors.push(d);
            keep.push(i);
        }
    }
    let coord_map = IntMatrix::from_rows(&keep.iter().map(|&i| snf.u.row(i)).collect::<Vec<_>>());
    let coord_map = if keep.is_empty() {
        IntMatrix::zeros(0, ambient_rank)
    } else {
        coord_map
    };
    let lift_map = IntMatrix::from_cols(
        ambient_rank,
        &keep.iter().map(|&i| snf.u_inv.col(i)).collect::<Vec<_>>(),
    );
    FinAbPresentation {
        ambient_rank,
        relation_matrix: sublattice_gens.clone(),
        invariant_factors: factors,
        coord_map,
        lift_map,
    }
}

/// Solves `A x = b (mod column span of L)`. Returns `None` when no solution
/// exists.
pub fn solve_mod(a: &IntMatrix, b: &[BigInt], l: &IntMatrix) -> Option<IntVector> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    assert_eq!(
        a.rows(),
        l.rows(),
        "modulus lattice lives in the wrong space"
    );
    if let Some(e) = scalar_modulus(l) {
        return solve_mod_scalar(a, b, e);
    }
    let m = a.hstack(l);
    let snf = smith_normal_form(&m);
    let c = snf.u.mul_vec(b);
    let diag = snf.diagonal();
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, ci) in c.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !ci.is_zero() {
                return None;
            }
        } else {
            let (q, r) = ci.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    let w = snf.v.mul_vec(&y);
    Some(w[..a.cols()].to_vec())
}

/// `Some(e)` when `l` is `e` times the identity with `0 < e < 2^31`.
fn scalar_modulus(l: &IntMatrix) -> Option<u64> {
    if l.rows() != l.cols() || l.rows() == 0 {
        return None;
    }
    let e = l[(0, 0)].to_u64().filter(|&e| e > 0 && e < (1 << 31))?;
    for i in 0..l.rows() {
        for j in 0..l.cols() {
            let want = if i == j { e } else { 0 };
            if l[(i, j)] != BigInt::from(want) {
                return None;
            }
        }
    }
    Some(e)
}

/// Solves `A x = b (mod e)` for a scalar modulus; equivalent to
/// [`solve_mod`] with `L = e I`.
pub fn solve_mod_scalar(a: &IntMatrix, b: &[BigInt], e: u64) -> Option<IntVector> {
    let ei = BigInt::from(e);
    let red = |x: &BigInt| x.mod_floor(&ei).to_u64().expect("reduced below modulus");
    let rows: Vec<Vec<u64>> = (0..a.rows())
        .map(|i| a.row(i).iter().map(red).collect())
        .collect();
    let rhs: Vec<u64> = b.iter().map(red).collect();
    let x = solve_congruence(&rows, a.cols(), &rhs, e)?;
    Some(x.into_iter().map(BigInt::from).collect())
}

/// Small-modulus core of [`solve_mod_scalar`]; entries must already lie in `[0, e)`.
pub fn solve_congruence(rows: &[Vec<u64>], ncols: usize, b: &[u64], e: u64) -> Option<Vec<u64>> {
    let mut ms = ModSmith::new(rows.to_vec(), ncols, e);
    ms.track_rhs(vec![b.to_vec()]);
    ms.run();
    let c = &ms.rhs[0];
    let mut y = vec![0u64; ncols];
    for (i, &ci) in c.iter().enumerate() {
        match ms.pivots.get(i) {
            Some(&d) => {
                let g = d.gcd(&e);
                if ci % g != 0 {
                    return None;
                }
                let m = e / g;
                y[i] = mulmod(ci / g, inverse_mod(d / g % m, m), m);
            }
            None => {
                if ci != 0 {
                    return None;
                }
            }
        }
    }
    let x = ms.apply_v(&y);
    debug_assert!(rows.iter().zip(b).all(|(r, &bi)| {
        let s = r
            .iter()
            .zip(&x)
            .fold(0u64, |acc, (&p, &q)| (acc + mulmod(p, q, e)) % e);
        s == bi % e
    }));
    Some(x)
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of a unit modulo `m` (returns 0 for `m == 1`).
pub fn inverse_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let g = (a as i128).extended_gcd(&(m as i128));
    assert!(g.gcd == 1, "{a} is not a unit modulo {m}");
    g.x.rem_euclid(m as i128) as u64
}

/// Diagonalization of an integer matrix over `Z/e` by unimodular row and
/// column operations. After [`ModSmith::run`], `U A V = diag(pivots) (mod e)`
/// where `V` (and its inverse) are kept when requested and `U` is applied to
/// the tracked right-hand sides.
#[derive(Clone, Debug)]
pub struct ModSmith {
    a: Vec<Vec<u64>>,
    ncols: usize,
    e: u64,
    pub pivots: Vec<u64>,
    pub rhs: Vec<Vec<u64>>,
    v: Vec<Vec<u64>>,
    v_inv: Option<Vec<Vec<u64>>>,
}

impl ModSmith {
    pub fn new(a: Vec<Vec<u64>>, ncols: usize, e: u64) -> Self {
        assert!(e > 0 && e < (1 << 31), "modulus out of range");
        assert!(a.iter().all(|r| r.len() == ncols));
        let v = identity_u64(ncols);
        ModSmith {
            a,
            ncols,
            e,
            pivots: Vec::new(),
            rhs: Vec::new(),
            v,
            v_inv: None,
        }
    }

    pub fn track_rhs(&mut self, rhs: Vec<Vec<u64>>) {
        assert!(rhs.iter().all(|b| b.len() == self.a.len()));
        self.rhs = rhs;
    }

    pub fn track_v_inverse(&mut self) {
        self.v_inv = Some(identity_u64(self.ncols));
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Column `j` of `V`.
    pub fn v_col(&self, j: usize) -> Vec<u64> {
        self.v.iter().map(|row| row[j]).collect()
    }

    pub fn v_inverse(&self) -> Option<&Vec<Vec<u64>>> {
        self.v_inv.as_ref()
    }

    /// `V y (mod e)`.
    pub fn apply_v(&self, y: &[u64]) -> Vec<u64> {
        self.v
            .iter()
            .map(|row| {
                row.iter()
                    .zip(y)
                    .fold(0u64, |acc, (&p, &q)| (acc + mulmod(p, q, self.e)) % self.e)
            })
            .collect()
    }

    pub fn run(&mut self) {
        let e = self.e;
        let nrows = self.a.len();
        let key = |x: u64| (x.gcd(&e), x);
        for t in 0..nrows.min(self.ncols) {
            let mut best: Option<(usize, usize)> = None;
            'search: for i in t..nrows {
                for j in t..self.ncols {
                    let x = self.a[i][j];
                    if x != 0 && best.is_none_or(|(bi, bj)| key(x) < key(self.a[bi][bj])) {
                        best = Some((i, j));
                        if x == 1 {
                            break 'search;
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                for i in t + 1..nrows {
                    let x = self.a[i][t];
                    if x != 0 {
                        self.clear_row_entry(t, i, x);
                    }
                }
                let mut disturbed = false;
                for j in t + 1..self.ncols {
                    let x = self.a[t][j];
                    if x != 0 {
                        disturbed |= self.clear_col_entry(t, j, x);
                    }
                }
                if !disturbed || (t + 1..nrows).all(|i| self.a[i][t] == 0) {
                    break;
                }
            }
            self.pivots.push(self.a[t][t]);
        }
    }

    /// Zeroes `a[i][t]` using pivot row `t`.
    fn clear_row_entry(&mut self, t: usize, i: usize, x: u64) {
        let e = self.e;
        let p = self.a[t][t];
        let g0 = p.gcd(&e);
        if x.is_multiple_of(g0) {
            let m = e / g0;
            let q = mulmod(x / g0, inverse_mod(p / g0 % m, m), m);
            let k = (e - q % e) % e;
            self.row_axpy(i, t, k);
        } else {
            let (g, s, tt) = ext_gcd(p, x);
            let (pa, xa) = ((p / g) as i128, (x / g) as i128);
            self.row_mix(t, i, s, tt, -xa, pa);
        }
    }

    /// Zeroes `a[t][j]` using pivot column `t`; returns whether column `t`
    /// was modified.
    fn clear_col_entry(&mut self, t: usize, j: usize, x: u64) -> bool {
        let e = self.e;
        let p = self.a[t][t];
        let g0 = p.gcd(&e);
        if x.is_multiple_of(g0) {
            let m = e / g0;
            let q = mulmod(x / g0, inverse_mod(p / g0 % m, m), m);
            let k = (e - q % e) % e;
            self.col_axpy(j, t, k);
            false
        } else {
            let (g, s, tt) = ext_gcd(p, x);
            let (pa, xa) = ((p / g) as i128, (x / g) as i128);
            self.col_mix(t, j, s, tt, -xa, pa);
            true
        }
    }

    fn red(&self, x: i128) -> u64 {
        x.rem_euclid(self.e as i128) as u64
    }

    /// row[dst] += k row[src], also on tracked right-hand sides.
    fn row_axpy(&mut self, dst: usize, src: usize, k: u64) {
        let e = self.e;
        for j in 0..self.ncols {
            let s = self.a[src][j];
            if s != 0 {
                self.a[dst][j] = (self.a[dst][j] + mulmod(s, k, e)) % e;
            }
        }
        for b in &mut self.rhs {
            b[dst] = (b[dst] + mulmod(b[src], k, e)) % e;
        }
    }

    /// (row[r1], row[r2]) <- (a row[r1] + b row[r2], c row[r1] + d row[r2]), det 1.
    fn row_mix(&mut self, r1: usize, r2: usize, a: i128, b: i128, c: i128, d: i128) {
        for j in 0..self.ncols {
            let (x, y) = (self.a[r1][j] as i128, self.a[r2][j] as i128);
            self.a[r1][j] = self.red(a * x + b * y);
            self.a[r2][j] = self.red(c * x + d * y);
        }
        let e = self.e as i128;
        for rhs in &mut self.rhs {
            let (x, y) = (rhs[r1] as i128, rhs[r2] as i128);
            rhs[r1] = (a * x + b * y).rem_euclid(e) as u64;
            rhs[r2] = (c * x + d * y).rem_euclid(e) as u64;
        }
    }

    /// col[dst] += k col[src]; V likewise, V^{-1} gets row[src] -= k row[dst].
    fn col_axpy(&mut self, dst: usize, src: usize, k: u64) {
        let e = self.e;
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            let s = row[src];
            if s != 0 {
                row[dst] = (row[dst] + mulmod(s, k, e)) % e;
            }
        }
        if let Some(vi) = &mut self.v_inv {
            let neg = (e - k % e) % e;
            for c in 0..self.ncols {
                let s = vi[dst][c];
                if s != 0 {
                    vi[src][c] = (vi[src][c] + mulmod(s, neg, e)) % e;
                }
            }
        }
    }

    /// (col[c1], col[c2]) <- (a col[c1] + b col[c2], c col[c1] + d col[c2]), det 1.
    fn col_mix(&mut self, c1: usize, c2: usize, a: i128, b: i128, c: i128, d: i128) {
        let e = self.e as i128;
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            let (x, y) = (row[c1] as i128, row[c2] as i128);
            row[c1] = (a * x + b * y).rem_euclid(e) as u64;
            row[c2] = (c * x + d * y).rem_euclid(e) as u64;
        }
        // V' = V T with T = [[a, c], [b, d]] on (c1, c2); T^{-1} = [[d, -c], [-b, a]]
        if let Some(vi) = &mut self.v_inv {
            for col in 0..self.ncols {
                let (x, y) = (vi[c1][col] as i128, vi[c2][col] as i128);
                vi[c1][col] = (d * x - c * y).rem_euclid(e) as u64;
                vi[c2][col] = (-b * x + a * y).rem_euclid(e) as u64;
            }
        }
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        self.a.swap(r1, r2);
        for b in &mut self.rhs {
            b.swap(r1, r2);
        }
    }

    fn swap_cols(&mut self, c1: usize, c2: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(c1, c2);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap(c1, c2);
        }
    }
}

fn identity_u64(n: usize) -> Vec<Vec<u64>> {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

/// `(g, s, t)` with `g = gcd(p, x) = s p + t x`.
fn ext_gcd(p: u64, x: u64) -> (u64, i128, i128) {
    let r = (p as i128).extended_gcd(&(x as i128));
    (r.gcd as u64, r.x, r.y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> IntVector {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        s
    }

    #[test]
    fn snf_of_diag_2_3() {
        let s = check_snf(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), big(&[1, 6]));
    }

    #[test]
    fn snf_of_zero_and_identity() {
        let s = check_snf(&IntMatrix::zeros(2, 2));
        assert_eq!(s.diagonal(), big(&[0, 0]));
        let s = check_snf(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = check_snf(&m);
        assert_eq!(s.diagonal(), big(&[2, 6, 12]));
        let m = IntMatrix::from_rows(&[vec![3, 6], vec![9, 12], vec![0, 5]]);
        check_snf(&m);
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(1, &IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(q.invariant_factors(), &big(&[2])[..]);
        let q = quotient(2, &IntMatrix::identity(2));
        assert!(q.is_trivial());
        assert_eq!(q.order(), Some(BigInt::one()));
        let q = quotient(1, &IntMatrix::zeros(1, 0));
        assert_eq!(q.invariant_factors(), &big(&[0])[..]);
        assert_eq!(q.order(), None);
    }

    #[test]
    fn quotient_projection_and_lift() {
        // Z^2 / <(2,0),(0,4)> = Z/2 + Z/4
        let q = quotient(2, &IntMatrix::from_cols(2, &[vec![2, 0], vec![0, 4]]));
        assert_eq!(q.invariant_factors(), &big(&[2, 4])[..]);
        for x in -3..5 {
            for y in -3..5 {
                let v = big(&[x, y]);
                let back = q.lift(&q.project(&v));
                assert_eq!(q.project(&back), q.project(&v));
            }
        }
        assert!(q.is_zero(&big(&[2, 8])));
        assert!(!q.is_zero(&big(&[1, 0])));
    }

    #[test]
    fn solve_mod_examples() {
        let a = IntMatrix::from_rows(&[vec![2]]);
        let l = IntMatrix::from_rows(&[vec![4]]);
        assert_eq!(solve_mod(&a, &big(&[1]), &l), None);
        let x = solve_mod(&a, &big(&[2]), &l).unwrap();
        let r: BigInt = &x[0] * 2 - 2;
        assert!(r.is_multiple_of(&BigInt::from(4)));
        let a = IntMatrix::identity(3);
        let l = IntMatrix::zeros(3, 0);
        assert_eq!(solve_mod(&a, &big(&[5, -7, 2]), &l), Some(big(&[5, -7, 2])));
    }

    #[test]
    fn general_path_matches_scalar_path() {
        // non-scalar L forces the SNF route
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 1]]);
        let l = IntMatrix::from_rows(&[vec![6, 0], vec![0, 6]]);
        let l_general = IntMatrix::from_rows(&[vec![6, 0, 0], vec![0, 6, 0]]);
        for b0 in 0..6 {
            for b1 in 0..6 {
                let b = big(&[b0, b1]);
                let fast = solve_mod(&a, &b, &l);
                let slow = solve_mod(&a, &b, &l_general);
                assert_eq!(fast.is_some(), slow.is_some(), "b = {b:?}");
            }
        }
    }

    #[test]
    fn determinant_and_inverse() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.determinant(), BigInt::one());
        let inv = m.unimodular_inverse().unwrap();
        assert_eq!(m.mul(&inv), IntMatrix::identity(2));
        assert!(IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]])
            .unimodular_inverse()
            .is_none());
    }

    #[test]
    fn mod_smith_v_inverse() {
        let rows = vec![vec![2, 3, 1], vec![4, 0, 6], vec![1, 1, 1], vec![0, 2, 4]];
        let mut ms = ModSmith::new(rows, 3, 12);
        ms.track_v_inverse();
        ms.run();
        let vi = ms.v_inverse().unwrap().clone();
        for i in 0..3 {
            let mut unit = vec![0; 3];
            unit[i] = 1;
            let col = ms.apply_v(&unit);
            let back: Vec<u64> = (0..3)
                .map(|r| (0..3).map(|k| vi[r][k] * col[k]).sum::<u64>() % 12)
                .collect();
            assert_eq!(back, unit);
        }
    }
}
