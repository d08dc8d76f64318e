use qweyl::oq::star;
use qweyl::poly::{gen, GenKind, NCPoly};
use qweyl::qsp::{
    aii_ad_cubic, ambient_d_presentation, ambient_p_presentation, b_node_op, b_node_op_nested,
    b_theta_ops, build_theta, check_diag_dictionary, check_exchange_tables, check_q_commuting,
    check_x_d_antimap, d_poly, d_poly_with, d_theta_presentation, exchange_rows_ai,
    exchange_rows_aii, killed, p_theta_matrix_relations, p_theta_presentation, x_basis_indices,
    x_poly, x_poly_with,
};
use qweyl::rewrite::Presentation;
use qweyl::rmatrix::{Family, FamilyConfig};
use qweyl::scalar::Scalar;
use qweyl::oq::{StandardTable, UElt, ULetter};

fn small_configs() -> Vec<FamilyConfig> {
    vec![
        FamilyConfig::new(Family::AI, 2),
        FamilyConfig::new(Family::AI, 3),
        FamilyConfig::new(Family::AII, 1),
        FamilyConfig::new(Family::AII, 2),
        FamilyConfig::new(Family::Diag, 1),
        FamilyConfig::new(Family::Diag, 2),
    ]
}

fn weighted_configs() -> Vec<FamilyConfig> {
    vec![
        FamilyConfig::with_a(Family::AI, 2, vec![Scalar::one(), Scalar::q_pow(3)]),
        FamilyConfig::with_a(Family::AII, 2, vec![Scalar::q_pow(-1), Scalar::q_pow(2)]),
        FamilyConfig::with_a(Family::Diag, 2, vec![Scalar::q(), Scalar::q_pow(-3)]),
    ]
}

fn binom(n: usize, k: usize) -> usize {
    let mut v = 1usize;
    for i in 0..k {
        v = v * (n - i) / (i + 1);
    }
    v
}

#[test]
fn linear_relations_hold_among_stored_generators() {
    for cfg in small_configs().into_iter().chain(weighted_configs()) {
        let th = build_theta(&cfg);
        th.check_linear_relations().unwrap();
    }
}

#[test]
fn dual_generator_matches_exponent_weighted_form() {
    for cfg in [
        FamilyConfig::new(Family::AI, 2),
        FamilyConfig::new(Family::AII, 1),
        FamilyConfig::new(Family::AII, 2),
        FamilyConfig::new(Family::Diag, 2),
    ] {
        let n = cfg.n;
        let jm = cfg.j_matrix();
        for i in 1..=cfg.rank() {
            for j in 1..=cfg.rank() {
                let mut oracle = NCPoly::zero();
                for (row, col, v) in jm.iter() {
                    let (r, s) = (row[0], col[0]);
                    if killed(&cfg, i, r) || killed(&cfg, j, s) {
                        continue;
                    }
                    let rhat = if cfg.family == Family::Diag && r > n {
                        r - n
                    } else {
                        r
                    };
                    oracle.add_term(
                        vec![gen(GenKind::P, i, r), gen(GenKind::P, j, s)],
                        v * &Scalar::q_pow(-2 * rhat as i64),
                    );
                }
                assert_eq!(d_poly(&cfg, i, j), oracle, "{:?} d[{i},{j}]", cfg.family);
            }
        }
    }
}

#[test]
fn star_exchanges_the_two_invariant_kinds() {
    let tuples = [
        vec![Scalar::one(), Scalar::one()],
        vec![Scalar::q_pow(2), Scalar::q_pow(-1)],
        vec![Scalar::q_pow(-3), -&Scalar::q()],
    ];
    for family in [Family::AI, Family::AII, Family::Diag] {
        let cfg = FamilyConfig::new(family, 2);
        for c in &tuples {
            for i in 1..=cfg.rank() {
                for j in 1..=cfg.rank() {
                    assert_eq!(
                        star(&x_poly_with(&cfg, j, i, c)),
                        d_poly_with(&cfg, i, j, c),
                        "{family:?} ({i},{j})"
                    );
                }
            }
        }
    }
}

#[test]
fn reversal_maps_invariant_relations_onto_dual_relations() {
    for cfg in [
        FamilyConfig::new(Family::AI, 2),
        FamilyConfig::new(Family::AI, 3),
        FamilyConfig::new(Family::AII, 2),
        FamilyConfig::new(Family::Diag, 2),
    ] {
        check_x_d_antimap(&cfg).unwrap();
    }
}

#[test]
fn quadratic_relations_vanish_on_the_quadratic_expansions() {
    for cfg in small_configs().into_iter().chain(weighted_configs()) {
        let th = build_theta(&cfg);
        th.check_relations_hold().unwrap();
    }
}

#[test]
fn invariant_algebras_have_polynomial_growth() {
    for cfg in small_configs() {
        let m = x_basis_indices(&cfg).len();
        for pres in [p_theta_presentation(&cfg), d_theta_presentation(&cfg)] {
            pres.check_pbw(3)
                .unwrap_or_else(|e| panic!("{:?} n={}: {e}", cfg.family, cfg.n));
            pres.check_confluence(3)
                .unwrap_or_else(|e| panic!("{:?} n={}: {e}", cfg.family, cfg.n));
            assert_eq!(pres.graded_dim(2), binom(m + 1, 2));
            assert_eq!(pres.graded_dim(3), binom(m + 2, 3));
        }
    }
}

#[test]
fn pbw_property_survives_reversing_the_generator_order() {
    for cfg in small_configs() {
        let stated = p_theta_presentation(&cfg);
        let pres =
            Presentation::new(stated.order().reversed(), p_theta_matrix_relations(&cfg)).unwrap();
        pres.check_pbw(3)
            .unwrap_or_else(|e| panic!("{:?} n={}: {e}", cfg.family, cfg.n));
        pres.check_confluence(3)
            .unwrap_or_else(|e| panic!("{:?} n={}: {e}", cfg.family, cfg.n));
    }
}

#[test]
fn exchange_tables_match_the_matrix_relations() {
    for cfg in [
        FamilyConfig::new(Family::AI, 2),
        FamilyConfig::new(Family::AI, 3),
        FamilyConfig::new(Family::AII, 2),
    ] {
        check_exchange_tables(&cfg).unwrap();
    }
}

#[test]
fn exchange_tables_cover_every_case_at_full_rank() {
    let cfg = FamilyConfig::new(Family::AI, 4);
    check_exchange_tables(&cfg).unwrap();
    let rows = exchange_rows_ai();
    let basis = x_basis_indices(&cfg);
    let mut used = vec![false; rows.len()];
    for &(d, k) in &basis {
        for &(l, h) in &basis {
            if (d, k) >= (l, h) {
                continue;
            }
            for (ri, row) in rows.iter().enumerate() {
                if (row.guard)(d, k, l, h) {
                    used[ri] = true;
                }
            }
        }
    }
    assert!(used.iter().all(|&u| u), "unused rows: {used:?}");

    let cfg = FamilyConfig::new(Family::AII, 2);
    let rows = exchange_rows_aii();
    let basis = x_basis_indices(&cfg);
    let mut used = vec![false; rows.len()];
    for &(d, k) in &basis {
        for &(l, h) in &basis {
            if (d, k) >= (l, h) {
                continue;
            }
            for (ri, row) in rows.iter().enumerate() {
                if (row.guard)(d, k, l, h) {
                    used[ri] = true;
                }
            }
        }
    }
    assert!(used.iter().all(|&u| u), "unused rows: {used:?}");
}

#[test]
fn descending_products_q_commute_modulo_lower_terms() {
    for cfg in [
        FamilyConfig::new(Family::AI, 2),
        FamilyConfig::new(Family::AI, 3),
        FamilyConfig::new(Family::AII, 2),
        FamilyConfig::new(Family::Diag, 2),
    ] {
        check_q_commuting(&cfg).unwrap();
    }
}

#[test]
fn coideal_invariance_symmetric_family() {
    for cfg in [
        FamilyConfig::new(Family::AI, 2),
        FamilyConfig::new(Family::AI, 3),
        FamilyConfig::with_a(Family::AI, 2, vec![Scalar::one(), Scalar::q_pow(3)]),
    ] {
        build_theta(&cfg).check_right_invariance().unwrap();
    }
}

#[test]
fn coideal_invariance_skew_family() {
    for cfg in [
        FamilyConfig::new(Family::AII, 1),
        FamilyConfig::new(Family::AII, 2),
        FamilyConfig::with_a(Family::AII, 2, vec![Scalar::q_pow(-1), Scalar::q_pow(2)]),
    ] {
        build_theta(&cfg).check_right_invariance().unwrap();
    }
}

#[test]
fn coideal_invariance_block_family() {
    for cfg in [
        FamilyConfig::new(Family::Diag, 1),
        FamilyConfig::new(Family::Diag, 2),
        FamilyConfig::with_a(Family::Diag, 2, vec![Scalar::q(), Scalar::q_pow(-3)]),
    ] {
        build_theta(&cfg).check_right_invariance().unwrap();
    }
}

#[test]
fn wrong_deformation_parameter_breaks_invariance() {
    for (family, node) in [(Family::AI, 1), (Family::AII, 2), (Family::Diag, 1)] {
        let cfg = FamilyConfig::new(family, 2);
        let th = build_theta(&cfg);
        let wrong = &Scalar::q_pow(2) * &cfg.b_param(node);
        let op = b_node_op(&cfg, node, &wrong);
        let rk = cfg.rank();
        for dual in [false, true] {
            let hit = (1..=rk).any(|i| {
                (1..=rk).any(|j| !th.invariance_defect(&op, i, j, dual).is_zero())
            });
            assert!(hit, "{family:?} perturbed node {node} dual={dual}");
        }
    }
}

#[test]
fn deformed_generator_defect_has_the_predicted_closed_form() {
    let a = vec![Scalar::one(), Scalar::q_pow(5), Scalar::q_pow(-2)];
    let cfg = FamilyConfig::with_a(Family::AI, 3, a.clone());
    let tab = StandardTable { n: cfg.rank() };
    let b = Scalar::q_pow(7);
    let op = b_node_op(&cfg, 1, &b);
    let tg = |i, j| gen(GenKind::T, i, j);
    for (i, j) in [(1, 3), (2, 3), (3, 3)] {
        let acted = op.elt.act_right(&tab, &x_poly(&cfg, i, j));
        let mut fixture = NCPoly::zero();
        fixture.add_term(vec![tg(i, 1), tg(j, 2)], &Scalar::q() * &a[1]);
        fixture.add_term(vec![tg(i, 2), tg(j, 1)], a[1].clone());
        fixture.add_term(vec![tg(i, 2), tg(j, 1)], -&(&b * &a[0]));
        fixture.add_term(vec![tg(i, 1), tg(j, 2)], -&(&(&Scalar::q() * &b) * &a[0]));
        assert_eq!(acted, fixture, "({i},{j})");
    }
    let good = b_node_op(&cfg, 1, &cfg.b_param(1));
    let acted = good.elt.act_right(&tab, &x_poly(&cfg, 1, 3));
    assert!(acted.is_zero());
}

#[test]
fn only_one_cubic_bracket_expansion_stabilizes_the_invariants() {
    let cfg = FamilyConfig::new(Family::AII, 2);
    let th = build_theta(&cfg);
    let b = cfg.b_param(2);
    let good = b_node_op(&cfg, 2, &b);
    let bad = b_node_op_nested(2, &b);
    let rk = cfg.rank();
    let mut bad_hit = false;
    for i in 1..=rk {
        for j in 1..=rk {
            assert!(th.invariance_defect(&good, i, j, false).is_zero());
            if !th.invariance_defect(&bad, i, j, false).is_zero() {
                bad_hit = true;
            }
        }
    }
    assert!(bad_hit);
}

#[test]
fn products_of_invariants_stay_invariant() {
    for cfg in [
        FamilyConfig::new(Family::AI, 2),
        FamilyConfig::new(Family::AII, 1),
        FamilyConfig::new(Family::Diag, 2),
        FamilyConfig::new(Family::AII, 2),
    ] {
        build_theta(&cfg).check_product_invariance().unwrap();
    }
}

#[test]
fn index_shift_tables_match_the_direct_action() {
    for cfg in small_configs() {
        build_theta(&cfg)
            .check_left_action_tables()
            .unwrap_or_else(|e| panic!("{:?} n={}: {e}", cfg.family, cfg.n));
    }
}

#[test]
fn generator_span_is_reached_from_the_highest_weight() {
    for cfg in small_configs() {
        build_theta(&cfg)
            .check_module_generation()
            .unwrap_or_else(|e| panic!("{:?} n={}: {e}", cfg.family, cfg.n));
    }
}

#[test]
fn block_dictionary_identifies_the_two_sided_invariants() {
    check_diag_dictionary(&FamilyConfig::new(Family::Diag, 1)).unwrap();
    check_diag_dictionary(&FamilyConfig::new(Family::Diag, 2)).unwrap();
}

#[test]
fn quantum_determinant_is_the_rank_two_skew_invariant() {
    let cfg = FamilyConfig::new(Family::AII, 1);
    let tg = |i, j| gen(GenKind::T, i, j);
    let mut det = NCPoly::zero();
    det.add_term(vec![tg(1, 1), tg(2, 2)], Scalar::one());
    det.add_term(vec![tg(1, 2), tg(2, 1)], -&Scalar::q());
    assert_eq!(x_poly(&cfg, 1, 2), det);
    let pres = p_theta_presentation(&cfg);
    assert_eq!(pres.num_rules(), 0);
    for d in 0..=4 {
        assert_eq!(pres.graded_dim(d), 1);
    }
    build_theta(&cfg).check_right_invariance().unwrap();
}

#[test]
fn coideal_generator_counts_per_family() {
    assert_eq!(b_theta_ops(&FamilyConfig::new(Family::AI, 3)).len(), 2);
    assert_eq!(b_theta_ops(&FamilyConfig::new(Family::AII, 2)).len(), 9);
    assert_eq!(b_theta_ops(&FamilyConfig::new(Family::Diag, 2)).len(), 6);
    assert_eq!(b_theta_ops(&FamilyConfig::new(Family::AII, 1)).len(), 4);
}

#[test]
fn counit_values_are_respected_on_the_unit() {
    let cfg = FamilyConfig::new(Family::Diag, 2);
    let tab = StandardTable { n: cfg.rank() };
    for op in b_theta_ops(&cfg) {
        let acted = op.elt.act_right(&tab, &NCPoly::one());
        assert_eq!(acted, NCPoly::one().scale(&op.eps), "{}", op.name);
    }
}

fn uelt_canon(e: &UElt) -> std::collections::BTreeMap<String, Scalar> {
    let mut m = std::collections::BTreeMap::new();
    for (c, w) in &e.terms {
        let key = w.iter().map(|l| l.name()).collect::<Vec<_>>().join(" ");
        let entry = m.entry(key).or_insert_with(Scalar::zero);
        *entry = &*entry + c;
    }
    m.retain(|_, v| !v.is_zero());
    m
}

#[test]
fn cubic_expansion_matches_its_bracket_definition() {
    let u = 1usize;
    let (lo, mid, hi) = (ULetter::E(2 * u - 1), ULetter::E(2 * u), ULetter::E(2 * u + 1));
    let qinv = Scalar::q_pow(-1);
    let bracket = UElt::word(vec![hi, mid]).sub(&UElt::word(vec![mid, hi]).scale(&qinv));
    let expect = UElt::letter(lo)
        .mul(&bracket)
        .sub(&bracket.mul(&UElt::letter(lo)).scale(&qinv));
    assert_eq!(uelt_canon(&expect), uelt_canon(&aii_ad_cubic(u)));
}

#[test]
fn ambient_presentations_are_consistent_under_the_block_quotient() {
    let cfg = FamilyConfig::new(Family::Diag, 2);
    let p = ambient_p_presentation(&cfg);
    let d = ambient_d_presentation(&cfg);
    for i in 1..=4 {
        for j in 1..=4 {
            let tp = NCPoly::gen(gen(GenKind::T, i, j));
            let pp = NCPoly::gen(gen(GenKind::P, i, j));
            assert_eq!(p.reduces_to_zero(&tp), killed(&cfg, i, j));
            assert_eq!(d.reduces_to_zero(&pp), killed(&cfg, i, j));
        }
    }
    assert_eq!(p.graded_dim(2), 2 * 10 + 4 * 4);
}
