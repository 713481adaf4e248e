use std::sync::Arc;

use super::{OrthRep, QuadSpace, RatMatrix};
use crate::gcoh::FiniteGroup;

#[derive(Clone, Debug)]
pub struct CatalogRep {
    /// `group:rep`, e.g. `C4:rot`.
    pub name: String,
    pub group: String,
    pub rep: OrthRep,
}

/// The group generated by faithful matrices, with the indices of the
/// generators.
fn matrix_group(gens: &[RatMatrix]) -> (FiniteGroup, Vec<usize>) {
    let n = gens[0].rows();
    let (g, elems) = FiniteGroup::generated_by(RatMatrix::identity(n), gens, |a, b| a.mul(b), 64)
        .expect("catalog groups are small");
    let idx = gens
        .iter()
        .map(|m| {
            elems
                .iter()
                .position(|x| x == m)
                .expect("generator is an element")
        })
        .collect();
    (g, idx)
}

fn a2_space() -> Arc<QuadSpace> {
    QuadSpace::new(RatMatrix::from_ints(&[vec![2, -1], vec![-1, 2]])).expect("A2 form")
}

fn m(rows: &[Vec<i64>]) -> RatMatrix {
    RatMatrix::from_ints(rows)
}

/// Orthogonal representations over `Q` of small groups, grouped by group:
/// `C2`, `C4`, `C2xC2`, `S3`, `D4`, `Q8`, `C6`.
pub fn rep_catalog() -> Vec<CatalogRep> {
    let std = |n| QuadSpace::standard(n).expect("standard form");
    let mut out = Vec::new();
    let mut add = |group: &str, name: &str, rep: Result<OrthRep, super::CliffError>| {
        out.push(CatalogRep {
            name: format!("{group}:{name}"),
            group: group.to_string(),
            rep: rep.expect("catalog representation is valid"),
        });
    };
    let one = |x: i64| RatMatrix::diagonal(&[x]);

    let (c2, g) = matrix_group(&[one(-1)]);
    add(
        "C2",
        "sign",
        OrthRep::from_generators(&c2, &std(1), &g, &[one(-1)]),
    );
    add(
        "C2",
        "trivial",
        OrthRep::from_generators(&c2, &std(1), &g, &[one(1)]),
    );
    add(
        "C2",
        "minus2",
        OrthRep::from_generators(&c2, &std(2), &g, &[RatMatrix::diagonal(&[-1, -1])]),
    );

    let rot4 = m(&[vec![0, -1], vec![1, 0]]);
    let (c4, g) = matrix_group(std::slice::from_ref(&rot4));
    add(
        "C4",
        "rot",
        OrthRep::from_generators(&c4, &std(2), &g, std::slice::from_ref(&rot4)),
    );
    add(
        "C4",
        "rot3",
        OrthRep::from_generators(&c4, &std(2), &g, &[rot4.mul(&rot4).mul(&rot4)]),
    );
    add(
        "C4",
        "sign",
        OrthRep::from_generators(&c4, &std(1), &g, &[one(-1)]),
    );
    add(
        "C4",
        "minus2",
        OrthRep::from_generators(&c4, &std(2), &g, &[RatMatrix::diagonal(&[-1, -1])]),
    );

    let (a, b) = (
        RatMatrix::diagonal(&[1, -1, -1]),
        RatMatrix::diagonal(&[-1, 1, -1]),
    );
    let (v4, g) = matrix_group(&[a.clone(), b.clone()]);
    add(
        "C2xC2",
        "so3",
        OrthRep::from_generators(&v4, &std(3), &g, &[a, b]),
    );
    add(
        "C2xC2",
        "chi1",
        OrthRep::from_generators(&v4, &std(1), &g, &[one(-1), one(1)]),
    );
    add(
        "C2xC2",
        "chi2",
        OrthRep::from_generators(&v4, &std(1), &g, &[one(1), one(-1)]),
    );
    add(
        "C2xC2",
        "chi3",
        OrthRep::from_generators(&v4, &std(1), &g, &[one(-1), one(-1)]),
    );
    add(
        "C2xC2",
        "refl2",
        OrthRep::from_generators(
            &v4,
            &std(2),
            &g,
            &[RatMatrix::diagonal(&[-1, 1]), RatMatrix::diagonal(&[1, -1])],
        ),
    );

    let cyc = m(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
    let tr = m(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
    let (s3, g) = matrix_group(&[cyc.clone(), tr.clone()]);
    add(
        "S3",
        "perm",
        OrthRep::from_generators(&s3, &std(3), &g, &[cyc, tr]),
    );
    add(
        "S3",
        "sign",
        OrthRep::from_generators(&s3, &std(1), &g, &[one(1), one(-1)]),
    );
    // simple reflections of A2 in the root basis
    let s1 = m(&[vec![-1, 1], vec![0, 1]]);
    let s2 = m(&[vec![1, 0], vec![1, -1]]);
    add(
        "S3",
        "std",
        OrthRep::from_generators(&s3, &a2_space(), &g, &[s1.mul(&s2), s1.clone()]),
    );

    let refl = RatMatrix::diagonal(&[1, -1]);
    let (d4, g) = matrix_group(&[rot4.clone(), refl.clone()]);
    add(
        "D4",
        "square",
        OrthRep::from_generators(&d4, &std(2), &g, &[rot4.clone(), refl]),
    );
    add(
        "D4",
        "det",
        OrthRep::from_generators(&d4, &std(1), &g, &[one(1), one(-1)]),
    );
    add(
        "D4",
        "chi",
        OrthRep::from_generators(&d4, &std(1), &g, &[one(-1), one(1)]),
    );
    add(
        "D4",
        "chi2",
        OrthRep::from_generators(&d4, &std(1), &g, &[one(-1), one(-1)]),
    );

    // left multiplication by i and j on H = Q<1, i, j, k>
    let li = m(&[
        vec![0, -1, 0, 0],
        vec![1, 0, 0, 0],
        vec![0, 0, 0, -1],
        vec![0, 0, 1, 0],
    ]);
    let lj = m(&[
        vec![0, 0, -1, 0],
        vec![0, 0, 0, 1],
        vec![1, 0, 0, 0],
        vec![0, -1, 0, 0],
    ]);
    let (q8, g) = matrix_group(&[li.clone(), lj.clone()]);
    add(
        "Q8",
        "H",
        OrthRep::from_generators(&q8, &std(4), &g, &[li, lj]),
    );
    add(
        "Q8",
        "chi1",
        OrthRep::from_generators(&q8, &std(1), &g, &[one(-1), one(1)]),
    );
    add(
        "Q8",
        "chi2",
        OrthRep::from_generators(&q8, &std(1), &g, &[one(1), one(-1)]),
    );

    // rotation by 60 degrees in the A2 plane
    let rot6 = m(&[vec![1, -1], vec![1, 0]]);
    let (c6, g) = matrix_group(std::slice::from_ref(&rot6));
    add(
        "C6",
        "rot",
        OrthRep::from_generators(&c6, &a2_space(), &g, std::slice::from_ref(&rot6)),
    );
    add(
        "C6",
        "rot2",
        OrthRep::from_generators(&c6, &a2_space(), &g, &[rot6.mul(&rot6)]),
    );
    add(
        "C6",
        "minus2",
        OrthRep::from_generators(&c6, &std(2), &g, &[RatMatrix::diagonal(&[-1, -1])]),
    );
    add(
        "C6",
        "sign",
        OrthRep::from_generators(&c6, &std(1), &g, &[one(-1)]),
    );
    out
}

/// Group names in catalog order.
pub fn rep_groups() -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for r in rep_catalog() {
        if !names.contains(&r.group) {
            names.push(r.group);
        }
    }
    names
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcoh::small::{dihedral, quaternion};

    #[test]
    fn groups_are_what_they_say() {
        let cat = rep_catalog();
        let group = |name: &str| {
            cat.iter()
                .find(|r| r.group == name)
                .unwrap()
                .rep
                .group()
                .clone()
        };
        assert!(group("D4").is_isomorphic(&dihedral(4)));
        assert!(group("Q8").is_isomorphic(&quaternion()));
        assert!(group("S3").is_isomorphic(&dihedral(3)));
        assert!(group("C6").is_isomorphic(&FiniteGroup::cyclic(6)));
        assert_eq!(rep_groups().len(), 7);
    }

    #[test]
    fn permutation_rep_has_sign_w1() {
        let cat = rep_catalog();
        let find = |n: &str| cat.iter().find(|r| r.name == n).unwrap().rep.clone();
        let perm = find("S3:perm");
        let sign = find("S3:sign");
        assert_eq!(perm.sw1(), sign.sw1());
        assert_eq!(find("C4:rot").sw1(), vec![0; 4]);
    }
}
