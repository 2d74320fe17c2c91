use hyperzeta::algebra::*;
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

type P = BiPoly<Rational>;

fn arb_poly() -> impl Strategy<Value = P> {
    proptest::collection::vec((-4i64..=4, 0u32..3, 0u32..3), 0..5).prop_map(|ts| {
        ts.into_iter()
            .fold(P::zero(), |acc, (c, a, b)| acc + P::monomial(Rational::from_int(c), a, b))
    })
}

fn arb_small_poly() -> impl Strategy<Value = P> {
    proptest::collection::vec((-2i64..=2, 0u32..2, 0u32..2), 0..3).prop_map(|ts| {
        ts.into_iter()
            .fold(P::zero(), |acc, (c, a, b)| acc + P::monomial(Rational::from_int(c), a, b))
    })
}

fn arb_matrix(n: usize) -> impl Strategy<Value = PolyMatrix<Rational>> {
    proptest::collection::vec(arb_small_poly(), n * n).prop_map(move |v| Matrix::from_vec(n, n, v))
}

fn arb_square() -> impl Strategy<Value = PolyMatrix<Rational>> {
    (1usize..=4).prop_flat_map(arb_matrix)
}

fn arb_pair() -> impl Strategy<Value = (PolyMatrix<Rational>, PolyMatrix<Rational>)> {
    (1usize..=4).prop_flat_map(|n| (arb_matrix(n), arb_matrix(n)))
}

/// Laplace expansion along the first row.
fn cofactor(m: &PolyMatrix<Rational>) -> P {
    let n = m.rows();
    if n == 1 {
        return m[(0, 0)].clone();
    }
    let mut acc = P::zero();
    for j in 0..n {
        if m[(0, j)].is_zero() {
            continue;
        }
        let minor = Matrix::from_fn(n - 1, n - 1, |r, c| m[(r + 1, if c < j { c } else { c + 1 })].clone());
        let term = &m[(0, j)] * &cofactor(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &P::one(), a.clone());
    }

    #[test]
    fn degree_is_additive(a in arb_poly(), b in arb_poly()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let p = &a * &b;
        prop_assert_eq!(p.degree_u().unwrap(), a.degree_u().unwrap() + b.degree_u().unwrap());
        prop_assert_eq!(p.degree_s().unwrap(), a.degree_s().unwrap() + b.degree_s().unwrap());
    }

    #[test]
    fn text_roundtrip(a in arb_poly()) {
        prop_assert_eq!(P::parse(&a.to_text('s'), 's').unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn det_matches_cofactor(m in arb_square()) {
        let expected = cofactor(&m);
        prop_assert_eq!(det_exact(&m).unwrap(), expected.clone());
        prop_assert_eq!(det_exact_with(&m, &DetOptions::with_strategy(DetStrategy::Interpolation)).unwrap(), expected);
    }

    #[test]
    fn det_is_multiplicative((m, n) in arb_pair()) {
        let lhs = det_exact(&(&m * &n)).unwrap();
        let rhs = &det_exact(&m).unwrap() * &det_exact(&n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pencil_route_matches_cofactor(x in arb_square(), y in arb_square()) {
        // I + s X(u) + s^2 Y(u) with X, Y free of s
        let n = x.rows().min(y.rows());
        let strip = |p: &P| BiPoly::from_upoly(&p.s_coeff(0));
        let m = Matrix::from_fn(n, n, |i, j| {
            let id = if i == j { P::one() } else { P::zero() };
            id + &strip(&x[(i, j)]) * &P::s() + &strip(&y[(i, j)]) * &P::s().pow(2)
        });
        let got = det_exact_with(&m, &DetOptions::with_strategy(DetStrategy::Pencil)).unwrap();
        prop_assert_eq!(got, cofactor(&m));
    }

    #[test]
    fn eval_is_multiplicative(a in arb_poly(), b in arb_poly(), ur in -1.0f64..1.0, ui in -1.0f64..1.0, sr in -1.0f64..1.0, si in -1.0f64..1.0) {
        let u = Complex64::new(ur, ui);
        let s = Complex64::new(sr, si);
        let lhs = eval_complex(&(&a * &b), u, s);
        let rhs = eval_complex(&a, u, s) * eval_complex(&b, u, s);
        prop_assert!(close(lhs, rhs, 1e-12), "{lhs} vs {rhs}");
    }
}
