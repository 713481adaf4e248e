use std::collections::{HashMap, VecDeque};

use super::{pairing, Matrix, RootDataError, RootDatum, Vector};

/// Every name [`catalog`] is exercised with in the test suites.
pub fn catalog_names() -> Vec<String> {
    let mut names = split_catalog_names();
    names.push("U3".into());
    names
}

/// Catalog entries whose Galois action is trivial.
pub fn split_catalog_names() -> Vec<String> {
    [
        "GL1", "GL2", "GL3", "SL2", "SL3", "SL4", "PGL2", "PGL3", "PGL4", "Sp4", "Sp6", "SO2",
        "SO3", "SO4", "SO5", "SO6", "SO7", "SO8", "SO9", "Spin4", "Spin5", "Spin6", "Spin7",
        "Spin8", "G2",
    ]
    .into_iter()
    .map(String::from)
    .collect()
}

/// Standard root data by name: `GLn`, `SLn`, `PGLn`, `Sp2n`, `SOm`, `Spinm`,
/// `G2`, and the quasi-split unitary group `Un` (a `GLn` datum with the
/// diagram flip `-w_0` as Galois generator).
pub fn catalog(name: &str) -> Result<RootDatum, RootDataError> {
    let unknown = || RootDataError::UnknownName(name.to_string());
    let split = |prefix: &str| -> Option<usize> {
        name.strip_prefix(prefix).and_then(|rest| rest.parse().ok())
    };
    // longest prefixes first: "PGL" before "GL", "Spin"/"Sp" before "SO"/"SL"
    if name == "G2" {
        return Ok(from_cartan(&cartan('G', 2), true));
    }
    if let Some(n) = split("PGL") {
        return (n >= 2)
            .then(|| from_cartan(&cartan('A', n - 1), false))
            .ok_or_else(unknown);
    }
    if let Some(n) = split("GL") {
        return (n >= 1).then(|| gl(n)).ok_or_else(unknown);
    }
    if let Some(n) = split("SL") {
        return (n >= 2)
            .then(|| from_cartan(&cartan('A', n - 1), true))
            .ok_or_else(unknown);
    }
    if let Some(m) = split("Spin") {
        return match m {
            4 => Ok(from_cartan(&cartan('D', 2), true)),
            m if m >= 5 && m % 2 == 1 => Ok(from_cartan(&cartan('B', m / 2), true)),
            m if m >= 6 => Ok(from_cartan(&cartan('D', m / 2), true)),
            _ => Err(unknown()),
        };
    }
    if let Some(m) = split("Sp") {
        return (m >= 2 && m % 2 == 0)
            .then(|| sp(m / 2))
            .ok_or_else(unknown);
    }
    if let Some(m) = split("SO") {
        return match m {
            m if m >= 3 && m % 2 == 1 => Ok(so_odd(m / 2)),
            m if m >= 2 && m % 2 == 0 => Ok(so_even(m / 2)),
            _ => Err(unknown()),
        };
    }
    if let Some(n) = split("U") {
        if n >= 2 {
            let mut d = gl(n);
            let mut flip = vec![vec![0; n]; n];
            for (i, row) in flip.iter_mut().enumerate() {
                row[n - 1 - i] = -1;
            }
            d.galois_gens = vec![flip];
            return Ok(d);
        }
    }
    Err(unknown())
}

/// Cartan matrix with `A[i][j] = <alpha_i^vee, alpha_j>`, Bourbaki numbering.
fn cartan(kind: char, n: usize) -> Matrix {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match kind {
        'A' => (0..n.saturating_sub(1)).for_each(|i| link(i, i + 1, -1, -1)),
        'B' | 'C' => {
            (0..n.saturating_sub(2)).for_each(|i| link(i, i + 1, -1, -1));
            if n >= 2 {
                // B: last root short, C: last root long
                let (x, y) = if kind == 'B' { (-1, -2) } else { (-2, -1) };
                link(n - 2, n - 1, x, y);
            }
        }
        'D' => {
            if n >= 3 {
                (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
                link(n - 3, n - 1, -1, -1);
            }
        }
        'G' => link(0, 1, -3, -1),
        _ => unreachable!("unsupported Cartan type"),
    }
    a
}

/// Simply connected (`X*` = weight lattice) or adjoint (`X*` = root lattice)
/// datum of a Cartan matrix.
fn from_cartan(a: &Matrix, simply_connected: bool) -> RootDatum {
    let n = a.len();
    let (simple, simple_co): (Vec<Vector>, Vec<Vector>) = (0..n)
        .map(|i| {
            let e: Vector = (0..n).map(|j| i64::from(i == j)).collect();
            if simply_connected {
                ((0..n).map(|j| a[j][i]).collect(), e)
            } else {
                (e, a[i].clone())
            }
        })
        .unzip();
    assemble(n, &simple, &simple_co)
}

fn unit(n: usize, i: usize) -> Vector {
    (0..n).map(|j| i64::from(i == j)).collect()
}

fn gl(n: usize) -> RootDatum {
    let simple: Vec<Vector> = (0..n.saturating_sub(1))
        .map(|i| {
            let mut v = unit(n, i);
            v[i + 1] = -1;
            v
        })
        .collect();
    assemble(n, &simple, &simple)
}

fn chain(n: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut v = unit(n, i);
        v[i + 1] = -1;
        out.push(v);
    }
    out
}

fn so_odd(n: usize) -> RootDatum {
    let mut simple = chain(n);
    let mut co = chain(n);
    simple.push(unit(n, n - 1));
    co.push(unit(n, n - 1).iter().map(|x| 2 * x).collect());
    assemble(n, &simple, &co)
}

fn so_even(n: usize) -> RootDatum {
    if n == 1 {
        return assemble(1, &[], &[]);
    }
    let mut simple = chain(n);
    let mut last = unit(n, n - 2);
    last[n - 1] = 1;
    simple.push(last);
    assemble(n, &simple, &simple)
}

fn sp(n: usize) -> RootDatum {
    let mut simple = chain(n);
    let mut co = chain(n);
    simple.push(unit(n, n - 1).iter().map(|x| 2 * x).collect());
    co.push(unit(n, n - 1));
    assemble(n, &simple, &co)
}

/// Closes a base under simple reflections and orders the roots: positive
/// roots by height then simple-root coordinates, then their negatives in the
/// same order. Simple roots come first.
fn assemble(rank: usize, simple: &[Vector], simple_co: &[Vector]) -> RootDatum {
    let s = simple.len();
    let mut found: HashMap<Vector, (Vector, Vector)> = HashMap::new();
    let mut queue = VecDeque::new();
    for i in 0..s {
        let coords = unit(s, i);
        found.insert(coords.clone(), (simple[i].clone(), simple_co[i].clone()));
        queue.push_back(coords);
    }
    while let Some(c) = queue.pop_front() {
        let (r, cr) = found[&c].clone();
        for j in 0..s {
            let k = pairing(&simple_co[j], &r);
            let kv = pairing(&cr, &simple[j]);
            let r2: Vector = r.iter().zip(&simple[j]).map(|(x, y)| x - k * y).collect();
            let cr2: Vector = cr
                .iter()
                .zip(&simple_co[j])
                .map(|(x, y)| x - kv * y)
                .collect();
            let mut c2 = c.clone();
            c2[j] -= k;
            if !found.contains_key(&c2) {
                found.insert(c2.clone(), (r2, cr2));
                queue.push_back(c2);
            }
        }
    }
    let mut positive: Vec<Vector> = found
        .keys()
        .filter(|c| c.iter().all(|&x| x >= 0))
        .cloned()
        .collect();
    positive.sort_by(|a, b| {
        let (ha, hb): (i64, i64) = (a.iter().sum(), b.iter().sum());
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    for c in &positive {
        roots.push(found[c].0.clone());
        coroots.push(found[c].1.clone());
    }
    for c in &positive {
        let neg: Vector = c.iter().map(|x| -x).collect();
        roots.push(found[&neg].0.clone());
        coroots.push(found[&neg].1.clone());
    }
    RootDatum {
        rank,
        roots,
        coroots,
        simple_indices: (0..s).collect(),
        galois_gens: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_and_pgl2_normalization() {
        let sl2 = catalog("SL2").unwrap();
        assert_eq!(sl2.rank, 1);
        assert_eq!(sl2.roots[0], vec![2]);
        assert_eq!(sl2.coroots[0], vec![1]);
        let pgl2 = catalog("PGL2").unwrap();
        assert_eq!(pgl2.roots[0], vec![1]);
        assert_eq!(pgl2.coroots[0], vec![2]);
    }

    #[test]
    fn root_counts() {
        let count = |n: &str| catalog(n).unwrap().num_roots();
        assert_eq!(count("GL1"), 0);
        assert_eq!(count("SL3"), 6);
        assert_eq!(count("SO5"), 8);
        assert_eq!(count("Sp6"), 18);
        assert_eq!(count("SO8"), 24);
        assert_eq!(count("Spin7"), 18);
        assert_eq!(count("G2"), 12);
        assert_eq!(count("U3"), 6);
    }

    #[test]
    fn unitary_group_has_outer_action() {
        let u3 = catalog("U3").unwrap();
        assert!(!u3.is_split());
        assert!(u3.validate().is_valid(), "{:?}", u3.validate());
    }

    #[test]
    fn unknown_names() {
        for bad in ["E8", "SL1", "PGL1", "Sp3", "SO1", "Spin3", "GL0", "U1", ""] {
            assert_eq!(catalog(bad), Err(RootDataError::UnknownName(bad.into())));
        }
    }

    #[test]
    fn simple_roots_first() {
        let d = catalog("SO7").unwrap();
        assert_eq!(d.simple_indices, vec![0, 1, 2]);
        assert_eq!(d.positive_root_indices().len(), 9);
    }
}
