use qweyl::poly::{gen, parse_poly, GenKind, NCPoly, OrderSpec};
use qweyl::Scalar;

fn p(text: &str) -> NCPoly {
    parse_poly(text).unwrap()
}

#[test]
fn products_are_noncommutative() {
    let a = p("t[1,1]*t[1,2]");
    let b = p("t[1,2]*t[1,1]");
    assert_ne!(a, b);
    assert!((&a - &a).is_zero());
}

#[test]
fn display_orders_terms_by_degree_then_word() {
    let poly = p("1 + q^2*t[1,1]*p[1,1]");
    assert_eq!(poly.to_string(), "q^2*t[1,1]*p[1,1] + 1");
    let rel = p("t[1,1]*t[2,2] - (q-q^-1)*t[2,1]*t[1,2]");
    assert_eq!(rel.to_string(), "t[1,1]*t[2,2] - (q-q^-1)*t[2,1]*t[1,2]");
    assert_eq!(p("t[1,1] - t[1,1]").to_string(), "0");
}

#[test]
fn parse_display_round_trip() {
    for text in [
        "t[1,1]*t[2,2] - (q-q^-1)*t[2,1]*t[1,2]",
        "q^2*t[1,1]*p[1,1] + 1",
        "x[1,2]*d[1,2] - q*d[1,2]*x[1,2]",
        "t'[1,2]*p'[2,1] + (q^2+1)*t[1,1]",
        "0",
    ] {
        let v = p(text);
        assert_eq!(parse_poly(&v.to_string()).unwrap(), v, "round trip of {text}");
    }
}

#[test]
fn graded_lex_order_compares_length_first() {
    let n = 2;
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            gens.push(gen(GenKind::T, i, j));
        }
    }
    let order = OrderSpec::new(gens);
    let t11 = gen(GenKind::T, 1, 1);
    let t12 = gen(GenKind::T, 1, 2);
    let t21 = gen(GenKind::T, 2, 1);
    use std::cmp::Ordering::*;
    assert_eq!(order.word_cmp(&vec![t21], &vec![t11, t12]), Less);
    assert_eq!(order.word_cmp(&vec![t11, t21], &vec![t12, t11]), Less);
    assert_eq!(order.word_cmp(&vec![t12, t11], &vec![t12, t11]), Equal);
    let rev = order.reversed();
    assert_eq!(rev.word_cmp(&vec![t11, t21], &vec![t12, t11]), Greater);
    assert!(order.is_sorted_word(&vec![t11, t12, t21]));
    assert!(!order.is_sorted_word(&vec![t12, t11]));
}

#[test]
fn leading_term_is_maximal_under_the_order() {
    let mut gens = Vec::new();
    for i in 1..=2 {
        for j in 1..=2 {
            gens.push(gen(GenKind::T, i, j));
        }
    }
    let order = OrderSpec::new(gens);
    let rel = p("t[1,1]*t[2,2] - t[2,2]*t[1,1] - (q-q^-1)*t[2,1]*t[1,2]");
    let (w, c) = rel.leading_term(&order).unwrap();
    assert_eq!(w, vec![gen(GenKind::T, 2, 2), gen(GenKind::T, 1, 1)]);
    assert_eq!(c, -Scalar::one());
}

#[test]
fn substitution_is_an_algebra_map() {
    let poly = p("t[1,1]*t[1,2] + q*t[2,1]");
    let image = poly.substitute(
        &|g| {
            if (g.i, g.j) == (1, 1) {
                p("t[1,1] + t[2,2]")
            } else {
                NCPoly::gen(g)
            }
        },
        false,
    );
    assert_eq!(image, p("t[1,1]*t[1,2] + t[2,2]*t[1,2] + q*t[2,1]"));

    let barred = p("q*t[1,1]").substitute(&NCPoly::gen, true);
    assert_eq!(barred, p("q^-1*t[1,1]"));
}

#[test]
fn homogeneous_parts_split_by_degree() {
    let poly = p("q^2*t[1,1]*p[1,1] + t[1,2] + 5");
    assert_eq!(poly.homogeneous_part(2), p("q^2*t[1,1]*p[1,1]"));
    assert_eq!(poly.homogeneous_part(1), p("t[1,2]"));
    assert_eq!(poly.homogeneous_part(0), p("5"));
    assert_eq!(poly.degree(), Some(2));
}
