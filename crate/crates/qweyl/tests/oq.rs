use qweyl::oq::{
    act_left, act_right, antipode_inv_letter, antipode_letter, natural_antipode_inv_letter,
    natural_antipode_letter, natural_elt, natural_letter, check_relation_stability,
    opposite, oq_explicit_relations, oq_matrix_relations, oq_presentation,
    oqop_explicit_relations, oqop_matrix_relations, oqop_presentation, rename_gens, star,
    standard_letters, transpose_indices, LetterAction, StandardTable, UElt, ULetter,
};
use qweyl::poly::{gen, parse_poly, GenKind};
use qweyl::rewrite::span_equal;
use qweyl::{NCPoly, Scalar};

fn t(i: usize, j: usize) -> NCPoly {
    NCPoly::gen(gen(GenKind::T, i, j))
}

fn p(i: usize, j: usize) -> NCPoly {
    NCPoly::gen(gen(GenKind::P, i, j))
}

fn pp(s: &str) -> NCPoly {
    parse_poly(s).unwrap()
}

#[test]
fn matrix_relations_match_explicit_lists() {
    for n in 2..=3 {
        let pres = oq_presentation(n);
        assert!(
            span_equal(pres.order(), &oq_matrix_relations(n), &oq_explicit_relations(n)),
            "coordinate ring relations disagree at n={n}"
        );
        let op = oqop_presentation(n);
        assert!(
            span_equal(op.order(), &oqop_matrix_relations(n), &oqop_explicit_relations(n)),
            "opposite relations disagree at n={n}"
        );
    }
}

#[test]
fn coordinate_ring_dimensions() {
    let pres = oq_presentation(2);
    assert_eq!(pres.num_rules(), 6);
    assert_eq!(pres.graded_dim(2), 10);
    assert_eq!(pres.graded_dim(3), 20);
    pres.check_pbw(3).unwrap();
    pres.check_confluence(3).unwrap();

    let op = oqop_presentation(2);
    assert_eq!(op.graded_dim(2), 10);
    op.check_pbw(3).unwrap();
}

#[test]
fn left_action_fixtures() {
    let tab = StandardTable { n: 2 };
    assert_eq!(act_left(&tab, ULetter::E(1), &t(2, 2)), t(1, 2));
    assert!(act_left(&tab, ULetter::E(1), &t(1, 1)).is_zero());
    assert_eq!(act_left(&tab, ULetter::F(1), &t(1, 1)), t(2, 1));
    assert_eq!(
        act_left(&tab, ULetter::K(1), &t(1, 2)),
        t(1, 2).scale(&Scalar::q())
    );
    assert_eq!(
        act_left(&tab, ULetter::E(1), &p(1, 1)),
        p(2, 1).scale(&-&Scalar::q_pow(-1))
    );
    assert_eq!(
        act_left(&tab, ULetter::F(1), &p(2, 2)),
        p(1, 2).scale(&-&Scalar::q())
    );
    assert_eq!(
        act_left(&tab, ULetter::Kinv(1), &p(1, 1)),
        p(1, 1).scale(&Scalar::q())
    );

    // Coproduct rule: E.(t21 t22) = (E.t21) t22 + (K.t21)(E.t22).
    let prod = &t(2, 1) * &t(2, 2);
    let expected = &(&t(1, 1) * &t(2, 2)) + &(&t(2, 1) * &t(1, 2)).scale(&Scalar::q_pow(-1));
    assert_eq!(act_left(&tab, ULetter::E(1), &prod), expected);
}

#[test]
fn right_action_fixtures() {
    let tab = StandardTable { n: 2 };
    assert_eq!(act_right(&tab, &t(1, 1), ULetter::E(1)), t(1, 2));
    assert_eq!(act_right(&tab, &t(1, 2), ULetter::F(1)), t(1, 1));
    assert_eq!(
        act_right(&tab, &t(1, 2), ULetter::K(2)),
        t(1, 2).scale(&Scalar::q())
    );
    assert_eq!(
        act_right(&tab, &p(1, 2), ULetter::E(1)),
        p(1, 1).scale(&-&Scalar::q())
    );
    assert_eq!(
        act_right(&tab, &p(1, 1), ULetter::F(1)),
        p(1, 2).scale(&-&Scalar::q_pow(-1))
    );

    // Mirror coproduct rule: (t11 t21).E = (t11.E) t21 + (t11.K)(t21.E).
    let prod = &t(1, 1) * &t(2, 1);
    let expected = &(&t(1, 2) * &t(2, 1)) + &(&t(1, 1) * &t(2, 2)).scale(&Scalar::q_pow(1));
    assert_eq!(act_right(&tab, &prod, ULetter::E(1)), expected);
}

#[test]
fn relation_spans_are_stable_both_sides() {
    for n in 2..=3 {
        let tab = StandardTable { n };
        let letters = standard_letters(n);
        let pres = oq_presentation(n);
        check_relation_stability(&pres, &tab, &letters, true).unwrap();
        check_relation_stability(&pres, &tab, &letters, false).unwrap();
        let op = oqop_presentation(n);
        check_relation_stability(&op, &tab, &letters, true).unwrap();
        check_relation_stability(&op, &tab, &letters, false).unwrap();
    }
}

#[test]
fn transpose_is_an_automorphism() {
    for n in 2..=3 {
        let pres = oq_presentation(n);
        let transposed: Vec<NCPoly> =
            pres.relations().iter().map(transpose_indices).collect();
        assert!(span_equal(pres.order(), &pres.relations(), &transposed));
        let op = oqop_presentation(n);
        let transposed: Vec<NCPoly> = op.relations().iter().map(transpose_indices).collect();
        assert!(span_equal(op.order(), &op.relations(), &transposed));
    }
}

#[test]
fn right_action_via_transpose_and_natural() {
    // g[i,j] . a  =  iota(a^natural . g[j,i]) on both kinds of generators.
    let n = 3;
    let tab = StandardTable { n };
    for l in standard_letters(n) {
        let nat = natural_letter(l);
        for i in 1..=n {
            for j in 1..=n {
                for f in [t(i, j), p(i, j)] {
                    let lhs = act_right(&tab, &f, l);
                    let swapped = transpose_indices(&f);
                    let rhs = transpose_indices(&nat.act_left(&tab, &swapped));
                    assert_eq!(lhs, rhs, "letter {} on {f}", l.name());
                }
            }
        }
    }
}

#[test]
fn natural_composed_with_antipode_closed_forms() {
    let n = 3;
    let tab = StandardTable { n };
    let mut probes = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            probes.push(t(i, j));
            probes.push(p(i, j));
        }
    }
    probes.push(&t(1, 2) * &t(3, 1));
    probes.push(&p(2, 2) * &p(1, 3));
    for l in standard_letters(n) {
        let composed = natural_elt(&antipode_letter(l));
        let closed = natural_antipode_letter(l);
        let composed_inv = natural_elt(&antipode_inv_letter(l));
        let closed_inv = natural_antipode_inv_letter(l);
        for f in &probes {
            assert_eq!(
                composed.act_left(&tab, f),
                closed.act_left(&tab, f),
                "S then natural, letter {}",
                l.name()
            );
            assert_eq!(
                composed_inv.act_left(&tab, f),
                closed_inv.act_left(&tab, f),
                "S^-1 then natural, letter {}",
                l.name()
            );
        }
    }
}

#[test]
fn star_intertwines_left_and_right_actions() {
    let n = 3;
    let tab = StandardTable { n };
    let mut probes = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            probes.push(t(i, j));
        }
    }
    probes.push(&t(1, 1) * &t(2, 2));
    probes.push(&(&t(1, 2) * &t(2, 3)) * &t(3, 1));
    probes.push(pp("t[1,1]*t[2,2] - q*t[2,1]*t[1,2]"));
    for l in standard_letters(n) {
        for f in &probes {
            // (a.f)* = (S(a))^natural . f*
            let lhs = star(&act_left(&tab, l, f));
            let rhs = natural_antipode_letter(l).act_left(&tab, &star(f));
            assert_eq!(lhs, rhs, "left star intertwiner, letter {}", l.name());
            // (f.a)* = f* . (S^{-1}(a))^natural
            let lhs = star(&act_right(&tab, f, l));
            let rhs = natural_antipode_inv_letter(l).act_right(&tab, &star(f));
            assert_eq!(lhs, rhs, "right star intertwiner, letter {}", l.name());
        }
    }
}

#[test]
fn star_is_involutive_and_antimultiplicative() {
    let f = pp("t[1,1]*t[2,2] - (q - q^-1)*t[1,2]*t[2,1] + q^3");
    assert_eq!(star(&star(&f)), f);
    let a = pp("t[1,2] + q*t[2,1]");
    let b = pp("t[1,1]*t[2,2]");
    assert_eq!(star(&(&a * &b)), &star(&b) * &star(&a));
}

#[test]
fn opposite_and_renaming_helpers() {
    let f = pp("t[1,1]*t[1,2] - q*t[1,2]*t[1,1]");
    let rev = opposite(&f);
    assert_eq!(rev, pp("t[1,2]*t[1,1] - q*t[1,1]*t[1,2]"));
    let renamed = rename_gens(&f, |g| gen(GenKind::P, g.i as usize, g.j as usize));
    assert_eq!(renamed, pp("p[1,1]*p[1,2] - q*p[1,2]*p[1,1]"));
}

#[test]
fn uelt_algebra() {
    let n = 2;
    let tab = StandardTable { n };
    let e = UElt::letter(ULetter::E(1));
    let f = UElt::letter(ULetter::F(1));
    // [E, F] acts on t11 like (K1 - K1^{-1})/(q - q^{-1}), which reads the
    // weight and gives q^{...} - q^{-...} over q - q^{-1}; on t11 this is 1.
    let commutator = e.mul(&f).sub(&f.mul(&e));
    assert_eq!(commutator.act_left(&tab, &t(1, 1)), t(1, 1));
    assert_eq!(commutator.act_left(&tab, &t(1, 2)), t(1, 2));
    assert_eq!(
        commutator.act_left(&tab, &t(2, 1)),
        t(2, 1).scale(&Scalar::from_int(-1))
    );
}
