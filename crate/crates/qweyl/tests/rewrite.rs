use qweyl::poly::{gen, parse_poly, GenKind, OrderSpec};
use qweyl::rewrite::{rank_checked, span_equal, words_of_degree, Presentation, Span};
use qweyl::{NCPoly, Scalar};

fn t(i: usize, j: usize) -> qweyl::GenId {
    gen(GenKind::T, i, j)
}

fn p(i: usize, j: usize) -> qweyl::GenId {
    gen(GenKind::P, i, j)
}

fn pp(s: &str) -> NCPoly {
    parse_poly(s).unwrap()
}

fn quantum_plane() -> Presentation {
    let order = OrderSpec::new(vec![t(1, 1), t(1, 2)]);
    Presentation::new(order, vec![pp("t[1,1]*t[1,2] - q*t[1,2]*t[1,1]")]).unwrap()
}

/// The six relations of the 2x2 quantum matrix algebra, written by hand.
fn quantum_mat2() -> Presentation {
    let order = OrderSpec::new(vec![t(1, 1), t(1, 2), t(2, 1), t(2, 2)]);
    let rels = vec![
        pp("t[1,1]*t[1,2] - q*t[1,2]*t[1,1]"),
        pp("t[1,1]*t[2,1] - q*t[2,1]*t[1,1]"),
        pp("t[1,2]*t[2,2] - q*t[2,2]*t[1,2]"),
        pp("t[2,1]*t[2,2] - q*t[2,2]*t[2,1]"),
        pp("t[1,2]*t[2,1] - t[2,1]*t[1,2]"),
        pp("t[1,1]*t[2,2] - t[2,2]*t[1,1] - (q - q^-1)*t[2,1]*t[1,2]"),
    ];
    Presentation::new(order, rels).unwrap()
}

#[test]
fn quantum_plane_dimensions_and_pbw() {
    let pres = quantum_plane();
    assert_eq!(pres.num_rules(), 1);
    for d in 0..=4 {
        assert_eq!(pres.graded_dim(d), d + 1, "dim at degree {d}");
    }
    pres.check_pbw(3).unwrap();
    pres.check_confluence(3).unwrap();
}

#[test]
fn quantum_plane_normal_forms() {
    let pres = quantum_plane();
    let nf = pres.normal_form(&pp("t[1,2]*t[1,1]"));
    assert_eq!(nf, pp("q^-1*t[1,1]*t[1,2]"));
    let nf = pres.normal_form(&pp("t[1,2]*t[1,2]*t[1,1]"));
    assert_eq!(nf, pp("q^-2*t[1,1]*t[1,2]*t[1,2]"));
    assert!(pres.reduces_to_zero(&pp("t[1,2]*t[1,1] - q^-1*t[1,1]*t[1,2]")));
}

#[test]
fn quantum_mat2_dimensions() {
    let pres = quantum_mat2();
    assert_eq!(pres.num_rules(), 6);
    assert_eq!(pres.graded_dim(0), 1);
    assert_eq!(pres.graded_dim(1), 4);
    assert_eq!(pres.graded_dim(2), 10);
    assert_eq!(pres.graded_dim(3), 20);
    pres.check_pbw(3).unwrap();
    pres.check_confluence(3).unwrap();
}

#[test]
fn quantum_mat2_reversed_order_also_pbw() {
    let pres = quantum_mat2();
    let rev = Presentation::new(pres.order().reversed(), pres.relations()).unwrap();
    rev.check_pbw(3).unwrap();
    rev.check_confluence(3).unwrap();
    assert_eq!(rev.graded_dim(2), 10);
}

#[test]
fn quantum_mat2_normal_form_fixture() {
    let pres = quantum_mat2();
    let nf = pres.normal_form(&pp("t[2,2]*t[1,1]"));
    assert_eq!(
        nf,
        pp("t[1,1]*t[2,2] - (q - q^-1)*t[1,2]*t[2,1]")
    );
}

#[test]
fn weyl_style_filtered_dimensions() {
    // One pair of dual generators with p t = q^2 t p + 1.
    let order = OrderSpec::new(vec![t(1, 1), p(1, 1)]);
    let pres = Presentation::new(
        order,
        vec![pp("p[1,1]*t[1,1] - q^2*t[1,1]*p[1,1] - 1")],
    )
    .unwrap();
    assert!(!pres.is_homogeneous());
    let graded = pres.homogeneous_top();
    assert!(graded.is_homogeneous());
    for d in 0..=3 {
        assert_eq!(graded.graded_dim(d), d + 1);
    }
    let mut cumulative = 0;
    for d in 0..=3 {
        cumulative += graded.graded_dim(d);
        assert_eq!(pres.filtered_dim(d), cumulative, "filtered at degree {d}");
    }
    pres.check_confluence(3).unwrap();
    // Normal ordering: p t^2 reduces to q^4 t^2 p + (q^2 + 1) t.
    let nf = pres.normal_form(&pp("p[1,1]*t[1,1]*t[1,1]"));
    assert_eq!(nf, pp("q^4*t[1,1]*t[1,1]*p[1,1] + (q^2+1)*t[1,1]"));
}

#[test]
fn non_confluent_system_detected() {
    // p t -> t p + 1 together with p^2 -> 0 is inconsistent at degree 3:
    // the word p p t reduces to 0 one way and to 2p the other.
    let order = OrderSpec::new(vec![t(1, 1), p(1, 1)]);
    let pres = Presentation::new(
        order,
        vec![
            pp("p[1,1]*t[1,1] - t[1,1]*p[1,1] - 1"),
            pp("p[1,1]*p[1,1]"),
        ],
    )
    .unwrap();
    let err = pres.check_confluence(3).unwrap_err();
    assert!(err.contains("diverging"), "unexpected message: {err}");
}

#[test]
fn span_basics() {
    let order = OrderSpec::new(vec![t(1, 1), t(1, 2)]);
    let a = vec![pp("t[1,1] + t[1,2]"), pp("t[1,2]")];
    let b = vec![pp("t[1,1]"), pp("q*t[1,2]")];
    assert!(span_equal(&order, &a, &b));
    assert!(!span_equal(&order, &a[..1].to_vec(), &b));

    let span = Span::new(order.clone(), a);
    assert_eq!(span.rank(), 2);
    assert!(span.contains(&pp("q^2*t[1,1] - t[1,2]")));
    let bigger = Span::new(
        order.clone(),
        vec![pp("t[1,1]*t[1,2] - t[1,2]*t[1,1]")],
    );
    assert_eq!(bigger.rank(), 1);
    assert!(!bigger.contains(&pp("t[1,1]*t[1,2]")));
    assert_eq!(
        bigger.reduce(&pp("t[1,2]*t[1,1]")),
        pp("t[1,1]*t[1,2]"),
    );
}

#[test]
fn rank_checked_agrees_with_span_rank() {
    let order = OrderSpec::new(vec![t(1, 1), t(1, 2), t(2, 1)]);
    let rows = vec![
        pp("t[1,1] + q*t[1,2]"),
        pp("t[1,2] + t[2,1]"),
        pp("t[1,1] + q*t[1,2] + (q-q^-1)*(t[1,2] + t[2,1])"),
    ];
    assert_eq!(rank_checked(&order, &rows), 2);
}

#[test]
fn word_enumeration() {
    let gens = vec![t(1, 1), t(1, 2), t(2, 1)];
    assert_eq!(words_of_degree(&gens, 0).len(), 1);
    assert_eq!(words_of_degree(&gens, 2).len(), 9);
    assert_eq!(words_of_degree(&gens, 3).len(), 27);
}

#[test]
fn presentation_rejects_inconsistency() {
    let order = OrderSpec::new(vec![t(1, 1)]);
    let err = Presentation::new(order, vec![pp("t[1,1] - 1"), pp("t[1,1]")]);
    assert!(err.is_err());
}

#[test]
fn interreduction_is_canonical() {
    let pres = quantum_mat2();
    // Feeding the canonical relations back in reproduces them.
    let again = Presentation::new(pres.order().clone(), pres.relations()).unwrap();
    assert_eq!(pres.relations(), again.relations());
    // Mixing in redundant combinations changes nothing.
    let rels = pres.relations();
    let mut noisy = rels.clone();
    let combo = &rels[0].scale(&Scalar::q_pow(3)) + &rels[1];
    noisy.push(combo);
    let rebuilt = Presentation::new(pres.order().clone(), noisy).unwrap();
    assert_eq!(pres.relations(), rebuilt.relations());
}
