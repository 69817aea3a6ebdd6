use k3atlas::exactpoly::{parse_poly, Context, MPoly, QPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn ctx() -> Context {
    Context::parse("a b c").unwrap()
}

fn arb_poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((0u32..4, 0u32..4, 0u32..4, -20i64..20), 0..8).prop_map(|terms| {
        MPoly::from_terms(
            &ctx(),
            terms
                .into_iter()
                .map(|(i, j, k, c)| (vec![i, j, k], BigInt::from(c))),
        )
        .unwrap()
    })
}

fn arb_point() -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec(-7i64..7, 3).prop_map(|v| v.into_iter().map(BigInt::from).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn display_round_trips(p in arb_poly()) {
        let back: MPoly = parse_poly(&p.to_string(), &ctx()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn evaluation_is_a_ring_map(p in arb_poly(), q in arb_poly(), x in arb_point()) {
        let e = |f: &MPoly| f.eval_exact(&x).unwrap();
        prop_assert_eq!(e(&(&p * &q)), e(&p) * e(&q));
        prop_assert_eq!(e(&(&p + &q)), e(&p) + e(&q));
    }

    #[test]
    fn leibniz_rule(p in arb_poly(), q in arb_poly(), i in 0usize..3) {
        let lhs = (&p * &q).derivative(i);
        let rhs = &(&p.derivative(i) * &q) + &(&p * &q.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_division_recovers_factor(p in arb_poly(), q in arb_poly()) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).div_exact(&q), Some(p));
    }

    #[test]
    fn composition_matches_substituted_evaluation(p in arb_poly(), q in arb_poly(), x in arb_point()) {
        let c = ctx();
        let images = [q.clone(), MPoly::var(&c, "b").unwrap(), MPoly::var(&c, "c").unwrap()];
        let comp = p.compose(&images).unwrap();
        let mut y = x.clone();
        y[0] = q.eval_exact(&x).unwrap();
        prop_assert_eq!(comp.eval_exact(&x).unwrap(), p.eval_exact(&y).unwrap());
    }

    #[test]
    fn numeric_evaluation_agrees_with_exact(p in arb_poly(), x in arb_point()) {
        let exact = p.eval_exact(&x).unwrap();
        let z: Vec<_> = x.iter().map(|v| num_complex::Complex64::new(v.to_string().parse().unwrap(), 0.0)).collect();
        let num = p.eval_complex(&z).unwrap();
        let want: f64 = exact.to_string().parse().unwrap();
        prop_assert!((num.re - want).abs() <= 1e-9 * want.abs().max(1.0));
    }
}

#[test]
fn rationals_and_powers_parse() {
    let c = ctx();
    let p: QPoly = parse_poly("(a + 1/2*b)^2 - a^2 - a*b", &c).unwrap();
    let want: QPoly = parse_poly("1/4*b^2", &c).unwrap();
    assert_eq!(p, want);
    assert_eq!(p.coeff(&[0, 2, 0]), BigRational::new(1.into(), 4.into()));
}

#[test]
fn malformed_input_reports_position() {
    let err = parse_poly::<BigInt>("a + * b", &ctx()).unwrap_err();
    assert!(matches!(err, k3atlas::Error::Parse { line: 1, .. }), "{err:?}");
    assert!(parse_poly::<BigInt>("a + x", &ctx()).is_err());
}
