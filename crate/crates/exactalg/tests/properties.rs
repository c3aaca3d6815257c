use exactalg::json::{poly_from_str, poly_to_string};
use exactalg::matrix::QMatrix;
use exactalg::parse::parse_poly;
use exactalg::poly::{context, Poly};
use exactalg::scalar::{int, ratio, Scalar};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn arb_poly() -> impl Strategy<Value = Poly> {
    let ctx = context(["x", "y", "z"]);
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -9i64..10, 1i64..5), 0..6).prop_map(move |terms| {
        Poly::from_terms(&ctx, terms.into_iter().map(|((a, b, c), n, d)| (vec![a, b, c], ratio(n, d))))
    })
}

fn arb_matrix(n: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(-5i64..6, n * n).prop_map(move |v| {
        QMatrix::from_rows(v.chunks(n).map(|r| r.iter().map(|&k| int(k)).collect()).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn ring_axioms(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn subs_is_a_homomorphism(p in arb_poly(), q in arb_poly(), s in arb_poly()) {
        let mut a = BTreeMap::new();
        a.insert("x".to_string(), s);
        a.insert("y".to_string(), parse_poly("z - 2/3").unwrap());
        let lhs = (&p * &q).subs(&a).unwrap();
        let rhs = &p.subs(&a).unwrap() * &q.subs(&a).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_obeys_leibniz(p in arb_poly(), q in arb_poly()) {
        let lhs = (&p * &q).diff("x", 1);
        let rhs = &(&p.diff("x", 1) * &q) + &(&p * &q.diff("x", 1));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip(p in arb_poly()) {
        prop_assert_eq!(poly_from_str(&poly_to_string(&p)).unwrap(), p);
    }

    #[test]
    fn display_reparses(p in arb_poly()) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn det_is_multiplicative(a in arb_matrix(4), b in arb_matrix(4)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
    }

    #[test]
    fn rank_nullity(a in arb_matrix(5)) {
        let (rank, kernel) = a.rank_kernel();
        prop_assert_eq!(rank + kernel.len(), 5);
        prop_assert_eq!(a.det().unwrap() != Scalar::from_integer(0.into()), rank == 5);
        for v in kernel {
            prop_assert!(a.mul_vec(&v).unwrap().iter().all(|x| *x == int(0)));
        }
    }

    #[test]
    fn poly_det_specializes(a in arb_matrix(3), b in arb_matrix(3)) {
        // det(A + t B) evaluated at t = 2 equals det(A + 2B).
        let ctx = context(["t"]);
        let t = Poly::var_in(&ctx, "t").unwrap();
        let entries = (0..9).map(|k| {
            let (i, j) = (k / 3, k % 3);
            &Poly::constant(&ctx, a.get(i, j).clone()) + &t.scale(b.get(i, j))
        }).collect();
        let m = exactalg::PolyMatrix::from_entries(3, 3, entries);
        let d = m.det().unwrap();
        let mut at = BTreeMap::new();
        at.insert("t".to_string(), int(2));
        let direct = QMatrix::from_rows((0..3).map(|i| (0..3).map(|j| a.get(i, j) + int(2) * b.get(i, j)).collect()).collect()).unwrap();
        prop_assert_eq!(d.eval(&at).unwrap(), direct.det().unwrap());
    }
}

#[test]
fn spec_examples() {
    let p = parse_poly("(x+y)*(x-y)").unwrap();
    assert_eq!(p, parse_poly("x^2 - y^2").unwrap());
    assert_eq!(&parse_poly("1/2*x").unwrap() * &parse_poly("2/3*x").unwrap(), parse_poly("1/3*x^2").unwrap());
    assert_eq!(parse_poly("x^3").unwrap().diff("x", 2), parse_poly("6*x").unwrap());
    assert!(parse_poly("x^2*y").unwrap().diff("y", 2).is_zero());
    let mut a = BTreeMap::new();
    a.insert("x".to_string(), int(1));
    a.insert("y".to_string(), int(2));
    assert_eq!(parse_poly("x^2+y^2").unwrap().eval(&a).unwrap(), int(5));

    assert_eq!(QMatrix::identity(3).rank_kernel().0, 3);
    assert_eq!(QMatrix::zeros(2, 2).rank_kernel().1.len(), 2);
    let dup = QMatrix::from_i64(&[&[1, 2, 3], &[1, 2, 3], &[0, 1, 7]]);
    assert_eq!(dup.det().unwrap(), int(0));
    match QMatrix::zeros(2, 2).solve(&[int(1), int(0)]).unwrap() {
        exactalg::LinSolution::Inconsistent => {}
        other => panic!("{other:?}"),
    }
}
