use std::ops::{Index, IndexMut};

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rat;

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// From small integer rows.
    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
                .collect(),
        )
        .expect("rectangular")
    }

    pub fn from_cols(rows: usize, cols: &[Vec<Rat>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = Rat::from_integer(x.into());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        self.data
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(<[Rat]>::to_vec)
            .collect()
    }

    pub fn col(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
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

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
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

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// `u^T self v`.
    pub fn bilinear(&self, u: &[Rat], v: &[Rat]) -> Rat {
        u.iter().zip(self.mul_vec(v)).map(|(a, b)| a * b).sum()
    }

    pub fn determinant(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a[(c, c)].clone();
            det *= &pivot;
            for r in c + 1..n {
                let f = &a[(r, c)] / &pivot;
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let sub = &f * &a[(c, k)];
                    a[(r, k)] -= sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols, "square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a[(r, c)].is_zero())?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let pivot = a[(c, c)].clone();
            for k in 0..n {
                a[(c, k)] /= &pivot;
                inv[(c, k)] /= &pivot;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for k in 0..n {
                    let (x, y) = (&f * &a[(c, k)], &f * &inv[(c, k)]);
                    a[(r, k)] -= x;
                    inv[(r, k)] -= y;
                }
            }
        }
        Some(inv)
    }

    pub fn block_sum(&self, other: &RatMatrix) -> RatMatrix {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for k in 0..self.cols {
                self.data.swap(a * self.cols + k, b * self.cols + k);
            }
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// A rational in JSON: an integer, a `[numerator, denominator]` pair, or a
/// string `"p/q"`. Serialized as a pair, or as a string when an entry does
/// not fit in 64 bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatValue(pub Rat);

#[derive(Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Int(i64),
    Pair([i64; 2]),
    Text(String),
}

impl<'de> Deserialize<'de> for RatValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match RatRepr::deserialize(d)? {
            RatRepr::Int(n) => Ok(RatValue(Rat::from_integer(n.into()))),
            RatRepr::Pair([n, q]) if q != 0 => Ok(RatValue(Rat::new(n.into(), q.into()))),
            RatRepr::Pair(_) => Err(D::Error::custom("zero denominator")),
            RatRepr::Text(s) => s
                .parse::<Rat>()
                .map(RatValue)
                .map_err(|_| D::Error::custom(format!("`{s}` is not a rational"))),
        }
    }
}

impl Serialize for RatValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match (self.0.numer().to_i64(), self.0.denom().to_i64()) {
            (Some(n), Some(d)) => [n, d].serialize(s),
            _ => self.0.to_string().serialize(s),
        }
    }
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<RatValue>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(RatValue).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rows: Vec<Vec<RatValue>> = Vec::deserialize(d)?;
        RatMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| x.0).collect())
                .collect(),
        )
        .ok_or_else(|| D::Error::custom("rows have different lengths"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_determinant() {
        let m = RatMatrix::from_ints(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.determinant(), Rat::one());
        assert_eq!(m.mul(&m.inverse().unwrap()), RatMatrix::identity(2));
        assert!(RatMatrix::from_ints(&[vec![1, 2], vec![2, 4]])
            .inverse()
            .is_none());
    }

    #[test]
    fn json_forms() {
        let m: RatMatrix = serde_json::from_str(r#"[[1, [1, 2]], ["-3/4", 0]]"#).unwrap();
        assert_eq!(m[(0, 1)], Rat::new(1.into(), 2.into()));
        assert_eq!(m[(1, 0)], Rat::new((-3).into(), 4.into()));
        let back: RatMatrix = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<RatMatrix>("[[[1, 0]]]").is_err());
    }
}
