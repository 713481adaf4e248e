use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use spinlift::exactlat::{quotient, smith_normal_form, solve_congruence, IntMatrix};

fn matrix(max_dim: usize, entry: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-entry..=entry, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(m in matrix(5, 9)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            // d_i | d_{i+1}, with 0 only at the end
            let divides = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            prop_assert!(divides, "{:?}", diag);
        }
        prop_assert_eq!(s.rank(), m.rank());
    }

    #[test]
    fn square_smith_product_is_the_determinant(m in (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, n), n)
    })) {
        let m = IntMatrix::from_rows(&m);
        let product: BigInt = smith_normal_form(&m).diagonal().iter().product();
        prop_assert_eq!(product, m.determinant().abs());
    }

    #[test]
    fn quotient_coordinates_round_trip(m in matrix(4, 7), v in prop::collection::vec(-20i64..=20, 4)) {
        let n = m.rows();
        let q = quotient(n, &m);
        let v: Vec<BigInt> = v.into_iter().take(n).map(BigInt::from).collect();
        prop_assume!(v.len() == n);
        let coords = q.project(&v);
        prop_assert_eq!(q.project(&q.lift(&coords)), coords);
        for j in 0..m.cols() {
            prop_assert!(q.is_zero(&m.col(j)));
        }
        if m.rows() == m.cols() && !m.determinant().is_zero() {
            prop_assert_eq!(q.order(), Some(m.determinant().abs()));
        }
    }

    #[test]
    fn congruence_solver_agrees_with_enumeration(
        e in 2u64..=6,
        rows in prop::collection::vec(prop::collection::vec(0u64..6, 2), 1..=3),
        b in prop::collection::vec(0u64..6, 3),
    ) {
        let rows: Vec<Vec<u64>> = rows.into_iter().map(|r| r.into_iter().map(|x| x % e).collect()).collect();
        let b: Vec<u64> = b.into_iter().take(rows.len()).map(|x| x % e).collect();
        let holds = |x: &[u64]| {
            rows.iter().zip(&b).all(|(r, &bi)| r.iter().zip(x).map(|(a, c)| a * c).sum::<u64>() % e == bi)
        };
        let exists = (0..e).any(|x0| (0..e).any(|x1| holds(&[x0, x1])));
        match solve_congruence(&rows, 2, &b, e) {
            Some(x) => prop_assert!(holds(&x)),
            None => prop_assert!(!exists),
        }
    }
}
