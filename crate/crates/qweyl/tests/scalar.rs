use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qweyl::Scalar;

fn s(text: &str) -> Scalar {
    Scalar::parse(text).unwrap()
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn canonical_reduction_collapses_common_factors() {
    assert_eq!(s("(q^2-1)/(q-1)"), s("q+1"));
    assert_eq!(s("(q^2-1)/(q-1)") + Scalar::zero(), s("q+1"));
    assert_eq!(s("(2*q^2+2)/(2)"), s("q^2+1"));
    assert_eq!(s("(q^3-q)/(q^2)"), s("q - q^-1"));
}

#[test]
fn display_pulls_negative_powers_into_denominator() {
    assert_eq!((Scalar::q() + Scalar::q_pow(-1)).to_string(), "(q^2+1)/(q)");
    assert_eq!(Scalar::q_pow(-1).to_string(), "(1)/(q)");
    assert_eq!(Scalar::q_minus_qinv().to_string(), "(q^2-1)/(q)");
    assert_eq!(s("q^2 - 1").to_string(), "q^2-1");
    assert_eq!(Scalar::zero().to_string(), "0");
}

#[test]
fn inverse_of_q_is_q_to_minus_one() {
    assert_eq!(Scalar::q().inv(), Scalar::q_pow(-1));
    assert_eq!(Scalar::q() * Scalar::q().inv(), Scalar::one());
    assert_eq!(s("(q^2-1)/(q)").inv(), s("(q)/(q^2-1)"));
}

#[test]
fn bar_swaps_q_and_q_inverse() {
    assert_eq!(Scalar::q_minus_qinv().bar(), -Scalar::q_minus_qinv());
    assert_eq!(Scalar::q().bar(), Scalar::q_pow(-1));
    assert_eq!(s("(q^2+1)/(q)").bar(), s("(q^2+1)/(q)"));
    let a = s("(q^3 - 2*q + 5)/(3*q^2 + q + 1)");
    assert_eq!(a.bar().bar(), a);
}

#[test]
fn evaluation_is_exact_and_reports_poles() {
    assert_eq!(Scalar::q_minus_qinv().eval_at(&rat(2, 1)).unwrap(), rat(3, 2));
    assert_eq!(s("(q^2+1)/(q)").eval_at(&rat(1, 2)).unwrap(), rat(5, 2));
    let pole = s("1/(q-1)").eval_at(&rat(1, 1));
    assert!(pole.is_err());
    assert!(Scalar::q_pow(-2).eval_at(&rat(0, 1)).is_err());
}

#[test]
fn parse_accepts_laurent_and_fraction_syntax() {
    for text in [
        "q - q^-1",
        "(q^2-1)/(q)",
        "-3*q^4 + q^-2",
        "(q^4-2*q^2+1)/(q^2+q+1)",
        "0",
        "7",
        "q^2*q^-2",
    ] {
        let v = s(text);
        assert_eq!(Scalar::parse(&v.to_string()).unwrap(), v, "round trip of {text}");
    }
    assert_eq!(s("q - q^-1"), s("(q^2-1)/(q)"));
    assert_eq!(s("q^2*q^-2"), Scalar::one());
}

#[test]
fn powers_match_repeated_products() {
    let a = s("q - q^-1");
    assert_eq!(a.pow(3), &(&a * &a) * &a);
    assert_eq!(a.pow(-2), (&a * &a).inv());
    assert_eq!(a.pow(0), Scalar::one());
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    let coeffs = prop::collection::vec(-4i64..=4, 1..4);
    let dens = prop_oneof![
        Just(Scalar::one()),
        Just(Scalar::parse("q+1").unwrap()),
        Just(Scalar::parse("q-1").unwrap()),
        Just(Scalar::parse("q^2+q+1").unwrap()),
        Just(Scalar::from_int(3)),
    ];
    (coeffs, -2i64..=2, dens).prop_map(|(cs, shift, den)| {
        let mut acc = Scalar::zero();
        for (k, c) in cs.into_iter().enumerate() {
            acc = acc + Scalar::from_int(c) * Scalar::q_pow(shift + k as i64);
        }
        acc * den.inv()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &Scalar::zero(), a.clone());
        prop_assert_eq!(&a * &Scalar::one(), a.clone());
        prop_assert_eq!(&a - &a, Scalar::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv(), Scalar::one());
        }
    }

    #[test]
    fn bar_is_a_ring_automorphism(a in arb_scalar(), b in arb_scalar()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a + &b).bar(), a.bar() + b.bar());
        prop_assert_eq!((&a * &b).bar(), a.bar() * b.bar());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in arb_scalar(), b in arb_scalar()) {
        let v = rat(3, 2);
        if let (Ok(ea), Ok(eb)) = (a.eval_at(&v), b.eval_at(&v)) {
            if let Ok(es) = (&a + &b).eval_at(&v) {
                prop_assert_eq!(es, &ea + &eb);
            }
            if let Ok(ep) = (&a * &b).eval_at(&v) {
                prop_assert_eq!(ep, &ea * &eb);
            }
        }
        // bar then evaluate = evaluate at the reciprocal point
        if let Ok(e) = a.bar().eval_at(&v) {
            prop_assert_eq!(e, a.eval_at(&v.recip()).unwrap());
        }
    }

    #[test]
    fn display_parse_round_trip(a in arb_scalar()) {
        prop_assert_eq!(Scalar::parse(&a.to_string()).unwrap(), a.clone());
        prop_assert_eq!(Scalar::parse(&a.laurent_string()).unwrap(), a);
    }
}
