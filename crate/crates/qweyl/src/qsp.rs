//! Quantum symmetric spaces of the three families: coideal generators,
//! the quadratic invariants `x[i,j]` and `d[i,j]` they stabilize, abstract
//! presentations of the invariant algebras, and the left module structure
//! on the span of the generators.
//!
//! The ambient algebra is the coordinate ring of rank x rank matrices
//! (block-diagonal quotient for the Diag family) together with its
//! opposite copy in the `p` letters. Everything here reduces statements
//! about the invariants to normal-form computations in that ambient ring.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::opmat::OpMat;
use crate::oq::{
    act_left, oq_matrix_relations, oqop_matrix_relations, p_order, t_order, StandardTable, UElt,
    ULetter,
};
use crate::poly::{gen, GenId, GenKind, NCPoly, OrderSpec};
use crate::rewrite::{span_equal, Presentation};
use crate::rmatrix::{build_r, Family, FamilyConfig};
use crate::scalar::Scalar;

fn t(i: usize, j: usize) -> GenId {
    gen(GenKind::T, i, j)
}

fn p(i: usize, j: usize) -> GenId {
    gen(GenKind::P, i, j)
}

fn x(i: usize, j: usize) -> GenId {
    gen(GenKind::X, i, j)
}

fn d(i: usize, j: usize) -> GenId {
    gen(GenKind::D, i, j)
}

/// True when the ambient letter with row i, column j is collapsed to zero.
/// Only the Diag family has a quotient: its ambient ring keeps the two
/// diagonal n x n blocks and kills the off-diagonal blocks.
pub fn killed(cfg: &FamilyConfig, i: usize, j: usize) -> bool {
    match cfg.family {
        Family::Diag => (i <= cfg.n) != (j <= cfg.n),
        _ => false,
    }
}

fn quotient_poly(cfg: &FamilyConfig, poly: &NCPoly) -> NCPoly {
    if cfg.family != Family::Diag {
        return poly.clone();
    }
    NCPoly::from_terms(
        poly.terms()
            .filter(|(w, _)| w.iter().all(|g| !killed(cfg, g.i as usize, g.j as usize)))
            .map(|(w, c)| (w.clone(), c.clone())),
    )
}

/// The coordinate ring the invariants live in, as a rewriting system on
/// the `t` letters.
pub fn ambient_p_presentation(cfg: &FamilyConfig) -> Presentation {
    let rk = cfg.rank();
    let mut rels: Vec<NCPoly> = oq_matrix_relations(rk)
        .iter()
        .map(|r| quotient_poly(cfg, r))
        .filter(|r| !r.is_zero())
        .collect();
    for i in 1..=rk {
        for j in 1..=rk {
            if killed(cfg, i, j) {
                rels.push(NCPoly::gen(t(i, j)));
            }
        }
    }
    Presentation::new(t_order(rk), rels).expect("ambient relations are consistent")
}

/// The opposite copy on the `p` letters, same quotient.
pub fn ambient_d_presentation(cfg: &FamilyConfig) -> Presentation {
    let rk = cfg.rank();
    let mut rels: Vec<NCPoly> = oqop_matrix_relations(rk)
        .iter()
        .map(|r| quotient_poly(cfg, r))
        .filter(|r| !r.is_zero())
        .collect();
    for i in 1..=rk {
        for j in 1..=rk {
            if killed(cfg, i, j) {
                rels.push(NCPoly::gen(p(i, j)));
            }
        }
    }
    Presentation::new(p_order(rk), rels).expect("ambient relations are consistent")
}

/// The invariant x[i,j](a) = sum_{r,s} t[i,r] J(a)_{rs} t[j,s] for an
/// arbitrary weight tuple, expanded in the ambient letters.
pub fn x_poly_with(cfg: &FamilyConfig, i: usize, j: usize, a: &[Scalar]) -> NCPoly {
    let jm = FamilyConfig::with_a(cfg.family, cfg.n, a.to_vec()).j_matrix();
    let mut out = NCPoly::zero();
    for (row, col, v) in jm.iter() {
        let (r, s) = (row[0], col[0]);
        if killed(cfg, i, r) || killed(cfg, j, s) {
            continue;
        }
        out.add_term(vec![t(i, r), t(j, s)], v.clone());
    }
    out
}

/// x[i,j] at the configured weights.
pub fn x_poly(cfg: &FamilyConfig, i: usize, j: usize) -> NCPoly {
    x_poly_with(cfg, i, j, &cfg.a)
}

/// The dual invariant d[i,j](c) = sum_{r,s} p[i,r] J(c)_{sr} p[j,s];
/// note the transposed coupling compared to `x_poly_with`.
pub fn d_poly_with(cfg: &FamilyConfig, i: usize, j: usize, c: &[Scalar]) -> NCPoly {
    let jm = FamilyConfig::with_a(cfg.family, cfg.n, c.to_vec()).j_matrix();
    let mut out = NCPoly::zero();
    for (row, col, v) in jm.iter() {
        let (s, r) = (row[0], col[0]);
        if killed(cfg, i, r) || killed(cfg, j, s) {
            continue;
        }
        out.add_term(vec![p(i, r), p(j, s)], v.clone());
    }
    out
}

/// The tuple c that makes the d[i,j](c) invariant under the same coideal
/// as the x side.
pub fn standard_c(cfg: &FamilyConfig) -> Vec<Scalar> {
    (1..=cfg.n).map(|u| cfg.c_param(u)).collect()
}

/// Global scalar relating the canonical d[i,j] to d_poly_with at the
/// standard tuple. The AII coupling picks up -q^{-1} when rewritten
/// through J instead of its transpose; the other two families see no
/// difference since there J is symmetric.
pub fn d_tuple_factor(cfg: &FamilyConfig) -> Scalar {
    match cfg.family {
        Family::AII => -&Scalar::q_pow(-1),
        _ => Scalar::one(),
    }
}

/// The canonical dual invariant: for unit weights this equals
/// sum_{r,s} q^{-2 rhat} p[i,r] J_{rs} p[j,s] where rhat is r reduced
/// into 1..=n in the Diag family and r itself otherwise.
pub fn d_poly(cfg: &FamilyConfig, i: usize, j: usize) -> NCPoly {
    d_poly_with(cfg, i, j, &standard_c(cfg)).scale(&d_tuple_factor(cfg))
}

/// Index pairs whose invariants survive the linear relations as basis
/// generators: the upper triangle for AI, the strict upper triangle for
/// AII, the upper-right block for Diag.
pub fn x_basis_indices(cfg: &FamilyConfig) -> Vec<(usize, usize)> {
    let rk = cfg.rank();
    let mut out = Vec::new();
    match cfg.family {
        Family::AI => {
            for i in 1..=rk {
                for j in i..=rk {
                    out.push((i, j));
                }
            }
        }
        Family::AII => {
            for i in 1..=rk {
                for j in i + 1..=rk {
                    out.push((i, j));
                }
            }
        }
        Family::Diag => {
            for i in 1..=cfg.n {
                for j in cfg.n + 1..=rk {
                    out.push((i, j));
                }
            }
        }
    }
    out
}

/// x[i,j] rewritten through the linear relations as a multiple of the
/// basis generator: AI x[j,i] = q^{-1} x[i,j] below the diagonal, AII
/// x[j,i] = -q x[i,j] with zero diagonal, Diag x[j,i] = x[i,j] with the
/// same-block entries zero.
pub fn reduce_x(cfg: &FamilyConfig, i: usize, j: usize) -> NCPoly {
    match cfg.family {
        Family::AI => {
            if i <= j {
                NCPoly::gen(x(i, j))
            } else {
                NCPoly::gen(x(j, i)).scale(&Scalar::q_pow(-1))
            }
        }
        Family::AII => {
            if i == j {
                NCPoly::zero()
            } else if i < j {
                NCPoly::gen(x(i, j))
            } else {
                NCPoly::gen(x(j, i)).scale(&-&Scalar::q())
            }
        }
        Family::Diag => {
            let n = cfg.n;
            if i <= n && j > n {
                NCPoly::gen(x(i, j))
            } else if j <= n && i > n {
                NCPoly::gen(x(j, i))
            } else {
                NCPoly::zero()
            }
        }
    }
}

/// Same for the dual generators: AI d[j,i] = q d[i,j], AII
/// d[j,i] = -q^{-1} d[i,j] with zero diagonal, Diag symmetric.
pub fn reduce_d(cfg: &FamilyConfig, i: usize, j: usize) -> NCPoly {
    match cfg.family {
        Family::AI => {
            if i <= j {
                NCPoly::gen(d(i, j))
            } else {
                NCPoly::gen(d(j, i)).scale(&Scalar::q())
            }
        }
        Family::AII => {
            if i == j {
                NCPoly::zero()
            } else if i < j {
                NCPoly::gen(d(i, j))
            } else {
                NCPoly::gen(d(j, i)).scale(&-&Scalar::q_pow(-1))
            }
        }
        Family::Diag => {
            let n = cfg.n;
            if i <= n && j > n {
                NCPoly::gen(d(i, j))
            } else if j <= n && i > n {
                NCPoly::gen(d(j, i))
            } else {
                NCPoly::zero()
            }
        }
    }
}

/// Row-major order on the x basis generators.
pub fn x_order(cfg: &FamilyConfig) -> OrderSpec {
    OrderSpec::new(
        x_basis_indices(cfg)
            .into_iter()
            .map(|(i, j)| x(i, j))
            .collect(),
    )
}

pub fn d_order(cfg: &FamilyConfig) -> OrderSpec {
    OrderSpec::new(
        x_basis_indices(cfg)
            .into_iter()
            .map(|(i, j)| d(i, j))
            .collect(),
    )
}

/// Entries of Rg X1 Rg^{t1} X2 - X2 Rg^{t1} X1 Rg with every matrix slot
/// already rewritten to basis generators.
pub fn p_theta_matrix_relations(cfg: &FamilyConfig) -> Vec<NCPoly> {
    let rk = cfg.rank();
    let rg = OpMat::lift(&cfg.rg_matrix());
    let rgt1 = OpMat::lift(&cfg.rg_matrix().transpose_t1());
    let x1 = OpMat::symbol_on_leg(rk, 2, 1, |a, c| reduce_x(cfg, a, c));
    let x2 = OpMat::symbol_on_leg(rk, 2, 2, |a, c| reduce_x(cfg, a, c));
    let lhs = rg.matmul(&x1).matmul(&rgt1).matmul(&x2);
    let rhs = x2.matmul(&rgt1).matmul(&x1).matmul(&rg);
    lhs.sub(&rhs).entry_polys()
}

/// Entries of D2 Rg^{t2} D1 Rg^T - Rg^T D1 Rg^{t2} D2, the image of the
/// invariant-side matrix equation under the product-reversing map sending
/// x[i,j] to d[j,i]: reversing each entry of Rg X1 Rg^{t1} X2 turns X
/// slots into D slots on the same legs, leg-1 transposes into leg-2
/// transposes, and bare Rg into its full transpose.
pub fn d_theta_matrix_relations(cfg: &FamilyConfig) -> Vec<NCPoly> {
    let rk = cfg.rank();
    let rgt = OpMat::lift(&cfg.rg_matrix().transpose());
    let rgt2 = OpMat::lift(&cfg.rg_matrix().transpose_t2());
    let d1 = OpMat::symbol_on_leg(rk, 2, 1, |a, c| reduce_d(cfg, a, c));
    let d2 = OpMat::symbol_on_leg(rk, 2, 2, |a, c| reduce_d(cfg, a, c));
    let lhs = d2.matmul(&rgt2).matmul(&d1).matmul(&rgt);
    let rhs = rgt.matmul(&d1).matmul(&rgt2).matmul(&d2);
    lhs.sub(&rhs).entry_polys()
}

pub fn p_theta_presentation(cfg: &FamilyConfig) -> Presentation {
    Presentation::new(x_order(cfg), p_theta_matrix_relations(cfg))
        .expect("invariant algebra relations are consistent")
}

pub fn d_theta_presentation(cfg: &FamilyConfig) -> Presentation {
    Presentation::new(d_order(cfg), d_theta_matrix_relations(cfg))
        .expect("dual invariant algebra relations are consistent")
}

/// In the Diag family the reflection-style relations collapse to a plain
/// n x n exchange equation R Xh1 Xh2 - Xh2 Xh1 R on Xh[i,j] = x[i, j+n].
pub fn p_theta_collapsed_relations(cfg: &FamilyConfig) -> Vec<NCPoly> {
    assert_eq!(cfg.family, Family::Diag);
    let n = cfg.n;
    let r = OpMat::lift(&build_r(n));
    let x1 = OpMat::symbol_on_leg(n, 2, 1, |a, c| NCPoly::gen(x(a, c + n)));
    let x2 = OpMat::symbol_on_leg(n, 2, 2, |a, c| NCPoly::gen(x(a, c + n)));
    let lhs = r.matmul(&x1).matmul(&x2);
    let rhs = x2.matmul(&x1).matmul(&r);
    lhs.sub(&rhs).entry_polys()
}

/// Dual collapse for Diag: R Dh2 Dh1 - Dh1 Dh2 R on Dh[i,j] = d[i, j+n].
pub fn d_theta_collapsed_relations(cfg: &FamilyConfig) -> Vec<NCPoly> {
    assert_eq!(cfg.family, Family::Diag);
    let n = cfg.n;
    let r = OpMat::lift(&build_r(n));
    let d1 = OpMat::symbol_on_leg(n, 2, 1, |a, c| NCPoly::gen(d(a, c + n)));
    let d2 = OpMat::symbol_on_leg(n, 2, 2, |a, c| NCPoly::gen(d(a, c + n)));
    let lhs = r.matmul(&d2).matmul(&d1);
    let rhs = d1.matmul(&d2).matmul(&r);
    lhs.sub(&rhs).entry_polys()
}

/// A coideal generator acting from the right, with the counit value it
/// must reproduce on invariants.
#[derive(Clone, Debug)]
pub struct CoidealOp {
    pub name: String,
    pub elt: UElt,
    pub eps: Scalar,
}

fn k_word(u: usize) -> Vec<ULetter> {
    vec![ULetter::K(u), ULetter::Kinv(u + 1)]
}

fn k_inv_word(u: usize) -> Vec<ULetter> {
    vec![ULetter::Kinv(u), ULetter::K(u + 1)]
}

/// F_u - b E_partner K_u^{-1}.
fn simple_b(u: usize, partner: usize, b: &Scalar) -> UElt {
    let mut w = vec![ULetter::E(partner)];
    w.extend(k_inv_word(u));
    UElt::letter(ULetter::F(u)).sub(&UElt::word(w).scale(b))
}

/// The cubic E-combination inside the AII coideal generator at node 2u,
/// expanded from E_{2u-1}[E_{2u+1},E_{2u}]_{q^{-1}} minus q^{-1} times
/// the same bracket moved across E_{2u-1}.
pub fn aii_ad_cubic(u: usize) -> UElt {
    let (lo, mid, hi) = (
        ULetter::E(2 * u - 1),
        ULetter::E(2 * u),
        ULetter::E(2 * u + 1),
    );
    let qinv = Scalar::q_pow(-1);
    UElt::word(vec![lo, hi, mid])
        .sub(&UElt::word(vec![lo, mid, hi]).scale(&qinv))
        .sub(&UElt::word(vec![hi, mid, lo]).scale(&qinv))
        .add(&UElt::word(vec![mid, hi, lo]).scale(&Scalar::q_pow(-2)))
}

/// Alternative reading of the same node through nested brackets
/// [a,b]_q = ab - q ba: the combination [E_{2u-1},[E_{2u+1},E_{2u}]_q]_q.
/// Kept only so a test can demonstrate which expansion actually
/// stabilizes the invariants.
pub fn aii_nested_cubic(u: usize) -> UElt {
    let (lo, mid, hi) = (
        ULetter::E(2 * u - 1),
        ULetter::E(2 * u),
        ULetter::E(2 * u + 1),
    );
    let q = Scalar::q();
    UElt::word(vec![lo, hi, mid])
        .sub(&UElt::word(vec![lo, mid, hi]).scale(&q))
        .sub(&UElt::word(vec![hi, mid, lo]).scale(&q))
        .add(&UElt::word(vec![mid, hi, lo]).scale(&Scalar::q_pow(2)))
}

/// The even-node operator built from the nested-bracket cubic instead of
/// the invariant expansion, for tests that tell the two apart.
pub fn b_node_op_nested(node: usize, b: &Scalar) -> CoidealOp {
    assert!(node % 2 == 0);
    let tail = aii_nested_cubic(node / 2).mul(&UElt::word(k_inv_word(node)));
    CoidealOp {
        name: format!("B{node}nested"),
        elt: UElt::letter(ULetter::F(node)).sub(&tail.scale(b)),
        eps: Scalar::zero(),
    }
}

/// The deformed generator at one node with an explicit coefficient.
/// AI pairs F_u with E_u, Diag pairs F_u with the mirror index across the
/// blocks, AII inserts the cubic E-combination at the even node.
pub fn b_node_op(cfg: &FamilyConfig, node: usize, b: &Scalar) -> CoidealOp {
    let elt = match cfg.family {
        Family::AI => simple_b(node, node, b),
        Family::AII => {
            assert!(node % 2 == 0);
            let cubic = aii_ad_cubic(node / 2);
            let tail = cubic.mul(&UElt::word(k_inv_word(node)));
            UElt::letter(ULetter::F(node)).sub(&tail.scale(b))
        }
        Family::Diag => {
            let partner = if node <= cfg.n {
                node + cfg.n
            } else {
                node - cfg.n
            };
            simple_b(node, partner, b)
        }
    };
    CoidealOp {
        name: format!("B{node}"),
        elt,
        eps: Scalar::zero(),
    }
}

/// All generators of the right coideal subalgebra at the configured
/// weights: the deformed B operators, plus the undeformed letters the
/// family keeps (odd-node E, F and torus words for AII; the block-ratio
/// torus words for Diag; nothing else for AI).
pub fn b_theta_ops(cfg: &FamilyConfig) -> Vec<CoidealOp> {
    let mut out = Vec::new();
    match cfg.family {
        Family::AI => {
            for u in cfg.coideal_b_nodes() {
                out.push(b_node_op(cfg, u, &cfg.b_param(u)));
            }
        }
        Family::AII => {
            for node in cfg.coideal_b_nodes() {
                out.push(b_node_op(cfg, node, &cfg.b_param(node)));
            }
            for i in (1..2 * cfg.n).step_by(2) {
                out.push(CoidealOp {
                    name: format!("E{i}"),
                    elt: UElt::letter(ULetter::E(i)),
                    eps: Scalar::zero(),
                });
                out.push(CoidealOp {
                    name: format!("F{i}"),
                    elt: UElt::letter(ULetter::F(i)),
                    eps: Scalar::zero(),
                });
                out.push(CoidealOp {
                    name: format!("K{i}"),
                    elt: UElt::word(k_word(i)),
                    eps: Scalar::one(),
                });
                out.push(CoidealOp {
                    name: format!("K{i}^-1"),
                    elt: UElt::word(k_inv_word(i)),
                    eps: Scalar::one(),
                });
            }
        }
        Family::Diag => {
            for u in cfg.coideal_b_nodes() {
                out.push(b_node_op(cfg, u, &cfg.b_param(u)));
                out.push(b_node_op(cfg, u + cfg.n, &cfg.b_param(u)));
            }
            for j in 1..=cfg.n {
                let (a, b) = (j, j + cfg.n);
                out.push(CoidealOp {
                    name: format!("K{a}^-1K{b}"),
                    elt: UElt::word(vec![ULetter::Kinv(a), ULetter::K(b)]),
                    eps: Scalar::one(),
                });
                out.push(CoidealOp {
                    name: format!("K{a}K{b}^-1"),
                    elt: UElt::word(vec![ULetter::K(a), ULetter::Kinv(b)]),
                    eps: Scalar::one(),
                });
            }
        }
    }
    out
}

/// Simple-root letters acting on the family, split into raising and
/// lowering halves. Diag omits the node joining the two blocks.
pub fn family_node_range(cfg: &FamilyConfig) -> Vec<usize> {
    match cfg.family {
        Family::AI => (1..cfg.n).collect(),
        Family::AII => (1..2 * cfg.n).collect(),
        Family::Diag => (1..cfg.n).chain(cfg.n + 1..2 * cfg.n).collect(),
    }
}

fn delta(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

/// Closed-form left action on the invariant labels. Returns the image of
/// the letter on x[i,j] (or d[i,j]) as index-coefficient pairs; labels
/// pushed outside 1..=rank are dropped.
pub fn table_terms(
    cfg: &FamilyConfig,
    l: ULetter,
    i: usize,
    j: usize,
    dual: bool,
) -> Vec<(usize, usize, Scalar)> {
    let rk = cfg.rank();
    let mut out = Vec::new();
    let mut push = |i2: usize, j2: usize, c: Scalar| {
        if (1..=rk).contains(&i2) && (1..=rk).contains(&j2) && !c.is_zero() {
            out.push((i2, j2, c));
        }
    };
    match (l, dual) {
        (ULetter::E(r), false) => {
            if i >= 2 && i - 1 == r {
                push(i - 1, j, Scalar::one());
            }
            if j >= 2 && j - 1 == r {
                push(i, j - 1, Scalar::q_pow(delta(r, i) - delta(r, i - 1)));
            }
        }
        (ULetter::F(r), false) => {
            if i == r {
                push(i + 1, j, Scalar::q_pow(-delta(r, j) + delta(r, j - 1)));
            }
            if j == r {
                push(i, j + 1, Scalar::one());
            }
        }
        (ULetter::K(s), false) => {
            push(i, j, Scalar::q_pow(delta(i, s) + delta(j, s)));
        }
        (ULetter::Kinv(s), false) => {
            push(i, j, Scalar::q_pow(-delta(i, s) - delta(j, s)));
        }
        (ULetter::F(r), true) => {
            if i >= 2 && i - 1 == r {
                push(
                    i - 1,
                    j,
                    -&Scalar::q_pow(1 + delta(r, j) - delta(r, j - 1)),
                );
            }
            if j >= 2 && j - 1 == r {
                push(i, j - 1, -&Scalar::q());
            }
        }
        (ULetter::E(r), true) => {
            if i == r {
                push(i + 1, j, -&Scalar::q_pow(-1));
            }
            if j == r {
                push(
                    i,
                    j + 1,
                    -&Scalar::q_pow(-1 - delta(r, i) + delta(r, i - 1)),
                );
            }
        }
        (ULetter::K(s), true) => {
            push(i, j, Scalar::q_pow(-delta(i, s) - delta(j, s)));
        }
        (ULetter::Kinv(s), true) => {
            push(i, j, Scalar::q_pow(delta(i, s) + delta(j, s)));
        }
    }
    out
}

/// The table image expanded in the ambient letters.
pub fn table_image_ambient(
    cfg: &FamilyConfig,
    l: ULetter,
    i: usize,
    j: usize,
    dual: bool,
) -> NCPoly {
    let mut out = NCPoly::zero();
    for (i2, j2, c) in table_terms(cfg, l, i, j, dual) {
        let g = if dual {
            d_poly(cfg, i2, j2)
        } else {
            x_poly(cfg, i2, j2)
        };
        out = &out + &g.scale(&c);
    }
    out
}

/// The table image in the abstract basis letters.
pub fn table_image_abstract(
    cfg: &FamilyConfig,
    l: ULetter,
    i: usize,
    j: usize,
    dual: bool,
) -> NCPoly {
    let mut out = NCPoly::zero();
    for (i2, j2, c) in table_terms(cfg, l, i, j, dual) {
        let g = if dual {
            reduce_d(cfg, i2, j2)
        } else {
            reduce_x(cfg, i2, j2)
        };
        out = &out + &g.scale(&c);
    }
    out
}

/// Everything the family checks need, built once.
pub struct ThetaAlgebra {
    pub cfg: FamilyConfig,
    pub x_gens: BTreeMap<(usize, usize), NCPoly>,
    pub d_gens: BTreeMap<(usize, usize), NCPoly>,
    pub ambient_p: Presentation,
    pub ambient_d: Presentation,
    pub p_pres: Presentation,
    pub d_pres: Presentation,
    pub b_ops: Vec<CoidealOp>,
    pub d_tuple_factor: Scalar,
}

pub fn build_theta(cfg: &FamilyConfig) -> ThetaAlgebra {
    let rk = cfg.rank();
    let mut x_gens = BTreeMap::new();
    let mut d_gens = BTreeMap::new();
    for i in 1..=rk {
        for j in 1..=rk {
            x_gens.insert((i, j), x_poly(cfg, i, j));
            d_gens.insert((i, j), d_poly(cfg, i, j));
        }
    }
    ThetaAlgebra {
        cfg: cfg.clone(),
        x_gens,
        d_gens,
        ambient_p: ambient_p_presentation(cfg),
        ambient_d: ambient_d_presentation(cfg),
        p_pres: p_theta_presentation(cfg),
        d_pres: d_theta_presentation(cfg),
        b_ops: b_theta_ops(cfg),
        d_tuple_factor: d_tuple_factor(cfg),
    }
}

impl ThetaAlgebra {
    fn tab(&self) -> StandardTable {
        StandardTable { n: self.cfg.rank() }
    }

    /// Index pairs carrying a nonzero invariant (the full grid for AI and
    /// AII, both off-diagonal blocks for Diag).
    pub fn live_indices(&self) -> Vec<(usize, usize)> {
        let rk = self.cfg.rank();
        let mut out = Vec::new();
        for i in 1..=rk {
            for j in 1..=rk {
                if self.cfg.family == Family::Diag && (i <= self.cfg.n) == (j <= self.cfg.n) {
                    continue;
                }
                if self.cfg.family == Family::AII && i == j {
                    continue;
                }
                out.push((i, j));
            }
        }
        out
    }

    /// Normal form of g . op - eps(op) g in the ambient ring; zero means
    /// the generator is invariant under the operator.
    pub fn invariance_defect(&self, op: &CoidealOp, i: usize, j: usize, dual: bool) -> NCPoly {
        let (g, pres) = if dual {
            (&self.d_gens[&(i, j)], &self.ambient_d)
        } else {
            (&self.x_gens[&(i, j)], &self.ambient_p)
        };
        let acted = op.elt.act_right(&self.tab(), g);
        pres.normal_form(&(&acted - &g.scale(&op.eps)))
    }

    /// Every stored generator reproduces the counit under every coideal
    /// generator, on both the x side and the d side.
    pub fn check_right_invariance(&self) -> Result<(), String> {
        let rk = self.cfg.rank();
        for op in &self.b_ops {
            for i in 1..=rk {
                for j in 1..=rk {
                    for dual in [false, true] {
                        let defect = self.invariance_defect(op, i, j, dual);
                        if !defect.is_zero() {
                            let side = if dual { "d" } else { "x" };
                            return Err(format!(
                                "{side}[{i},{j}] . {} deviates from the counit by {defect}",
                                op.name
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Invariance survives multiplication: all pairwise products of basis
    /// generators, and the empty product, reproduce the counit.
    pub fn check_product_invariance(&self) -> Result<(), String> {
        let tab = self.tab();
        let basis = x_basis_indices(&self.cfg);
        for op in &self.b_ops {
            let one = NCPoly::one();
            let acted = op.elt.act_right(&tab, &one);
            if !self
                .ambient_p
                .reduces_to_zero(&(&acted - &one.scale(&op.eps)))
            {
                return Err(format!("1 . {} does not reproduce the counit", op.name));
            }
            for &(i1, j1) in &basis {
                for &(i2, j2) in &basis {
                    let prod_x = &self.x_gens[&(i1, j1)] * &self.x_gens[&(i2, j2)];
                    let acted = op.elt.act_right(&tab, &prod_x);
                    if !self
                        .ambient_p
                        .reduces_to_zero(&(&acted - &prod_x.scale(&op.eps)))
                    {
                        return Err(format!(
                            "x[{i1},{j1}]x[{i2},{j2}] . {} is not invariant",
                            op.name
                        ));
                    }
                    let prod_d = &self.d_gens[&(i1, j1)] * &self.d_gens[&(i2, j2)];
                    let acted = op.elt.act_right(&tab, &prod_d);
                    if !self
                        .ambient_d
                        .reduces_to_zero(&(&acted - &prod_d.scale(&op.eps)))
                    {
                        return Err(format!(
                            "d[{i1},{j1}]d[{i2},{j2}] . {} is not invariant",
                            op.name
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The closed-form index-shift tables agree with the action computed
    /// directly on the quadratic expansions, for every family letter and
    /// every live index pair, on both sides.
    pub fn check_left_action_tables(&self) -> Result<(), String> {
        let tab = self.tab();
        let mut letters = Vec::new();
        for r in family_node_range(&self.cfg) {
            letters.push(ULetter::E(r));
            letters.push(ULetter::F(r));
        }
        for s in 1..=self.cfg.rank() {
            letters.push(ULetter::K(s));
            letters.push(ULetter::Kinv(s));
        }
        for &(i, j) in &self.live_indices() {
            for &l in &letters {
                for dual in [false, true] {
                    let g = if dual {
                        &self.d_gens[&(i, j)]
                    } else {
                        &self.x_gens[&(i, j)]
                    };
                    let direct = act_left(&tab, l, g);
                    let predicted = table_image_ambient(&self.cfg, l, i, j, dual);
                    let pres = if dual { &self.ambient_d } else { &self.ambient_p };
                    if !pres.reduces_to_zero(&(&direct - &predicted)) {
                        let side = if dual { "d" } else { "x" };
                        return Err(format!(
                            "table mismatch: {} . {side}[{i},{j}]",
                            l.name()
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The generator span is one irreducible module: the stated highest
    /// weight vector is killed by every raising letter, and repeated
    /// lowering reaches every basis generator.
    pub fn check_module_generation(&self) -> Result<(), String> {
        let (hi, hj) = match self.cfg.family {
            Family::AI => (1, 1),
            Family::AII => (1, 2),
            Family::Diag => (1, self.cfg.n + 1),
        };
        let tab = self.tab();
        for r in family_node_range(&self.cfg) {
            let raised = act_left(&tab, ULetter::E(r), &self.x_gens[&(hi, hj)]);
            if !self.ambient_p.reduces_to_zero(&raised) {
                return Err(format!("E{r} does not kill x[{hi},{hj}]"));
            }
        }
        let mut reached: BTreeSet<(usize, usize)> = BTreeSet::new();
        reached.insert((hi, hj));
        let mut frontier = vec![(hi, hj)];
        while let Some((i, j)) = frontier.pop() {
            for r in family_node_range(&self.cfg) {
                let image = table_image_abstract(&self.cfg, ULetter::F(r), i, j, false);
                for (w, _) in image.terms() {
                    for g in w {
                        let pair = (g.i as usize, g.j as usize);
                        if reached.insert(pair) {
                            frontier.push(pair);
                        }
                    }
                }
            }
        }
        for pair in x_basis_indices(&self.cfg) {
            if !reached.contains(&pair) {
                return Err(format!(
                    "lowering from x[{hi},{hj}] never reaches x[{},{}]",
                    pair.0, pair.1
                ));
            }
        }
        Ok(())
    }

    /// Substituting the quadratic expansions into every abstract relation
    /// yields zero in the ambient ring, on both sides.
    pub fn check_relations_hold(&self) -> Result<(), String> {
        let xmap = |g: GenId| {
            assert_eq!(g.kind, GenKind::X);
            x_poly(&self.cfg, g.i as usize, g.j as usize)
        };
        for rel in p_theta_matrix_relations(&self.cfg) {
            let expanded = rel.substitute(&xmap, false);
            if !self.ambient_p.reduces_to_zero(&expanded) {
                return Err(format!("x relation does not vanish: {rel}"));
            }
        }
        let dmap = |g: GenId| {
            assert_eq!(g.kind, GenKind::D);
            d_poly(&self.cfg, g.i as usize, g.j as usize)
        };
        for rel in d_theta_matrix_relations(&self.cfg) {
            let expanded = rel.substitute(&dmap, false);
            if !self.ambient_d.reduces_to_zero(&expanded) {
                return Err(format!("d relation does not vanish: {rel}"));
            }
        }
        Ok(())
    }

    /// The linear relations among the stored generators hold in the
    /// ambient ring: every grid entry matches its basis reduction.
    pub fn check_linear_relations(&self) -> Result<(), String> {
        let rk = self.cfg.rank();
        for i in 1..=rk {
            for j in 1..=rk {
                let expect_x = reduce_x(&self.cfg, i, j).substitute(
                    &|g| x_poly(&self.cfg, g.i as usize, g.j as usize),
                    false,
                );
                if !self
                    .ambient_p
                    .reduces_to_zero(&(&self.x_gens[&(i, j)] - &expect_x))
                {
                    return Err(format!("linear relation fails at x[{i},{j}]"));
                }
                let expect_d = reduce_d(&self.cfg, i, j).substitute(
                    &|g| d_poly(&self.cfg, g.i as usize, g.j as usize),
                    false,
                );
                if !self
                    .ambient_d
                    .reduces_to_zero(&(&self.d_gens[&(i, j)] - &expect_d))
                {
                    return Err(format!("linear relation fails at d[{i},{j}]"));
                }
            }
        }
        Ok(())
    }
}

/// One row of the explicit exchange tables: the monomial x[l,h]x[d,k]
/// rewrites to the listed combination whenever the guard holds.
pub struct ExchangeRow {
    pub guard: fn(usize, usize, usize, usize) -> bool,
    pub rhs: fn(usize, usize, usize, usize) -> NCPoly,
}

fn qm() -> Scalar {
    Scalar::q_minus_qinv()
}

fn two_letters(a: (usize, usize), b: (usize, usize), c: Scalar) -> NCPoly {
    NCPoly::monomial(vec![x(a.0, a.1), x(b.0, b.1)], c)
}

/// The AI table: twelve rows keyed by the relative positions of
/// (d, k) and (l, h) in the upper triangle.
pub fn exchange_rows_ai() -> Vec<ExchangeRow> {
    vec![
        ExchangeRow {
            guard: |d, k, l, h| d == l && l == k && k < h,
            rhs: |d, k, l, h| two_letters((d, k), (l, h), Scalar::q_pow(-2)),
        },
        ExchangeRow {
            guard: |d, k, l, h| d == l && l < k && k < h,
            rhs: |d, k, l, h| two_letters((d, k), (l, h), Scalar::q_pow(-1)),
        },
        ExchangeRow {
            guard: |d, k, l, h| d < l && l == k && k == h,
            rhs: |d, k, l, h| two_letters((d, k), (l, h), Scalar::q_pow(-2)),
        },
        ExchangeRow {
            guard: |d, k, l, h| d < l && l < k && k == h,
            rhs: |d, k, l, h| two_letters((d, k), (l, h), Scalar::q_pow(-1)),
        },
        ExchangeRow {
            guard: |d, k, l, h| d < l && l == k && k < h,
            rhs: |d, k, l, h| {
                &two_letters((d, k), (l, h), Scalar::q_pow(-1))
                    - &two_letters((d, h), (l, k), qm())
            },
        },
        ExchangeRow {
            guard: |d, k, l, h| d < l && l < k && k < h,
            rhs: |d, k, l, h| {
                &two_letters((d, k), (l, h), Scalar::one()) - &two_letters((d, h), (l, k), qm())
            },
        },
        ExchangeRow {
            guard: |d, k, l, h| d == k && k < l && l == h,
            rhs: |d, k, l, h| {
                let c = &Scalar::q_pow(-1) * &(&Scalar::q_pow(2) - &Scalar::q_pow(-2));
                &two_letters((d, k), (l, h), Scalar::one()) - &two_letters((d, h), (k, l), c)
            },
        },
        ExchangeRow {
            guard: |d, k, l, h| d == k && k < l && l < h,
            rhs: |d, k, l, h| {
                let c = &Scalar::q_pow(2) - &Scalar::q_pow(-2);
                &two_letters((d, k), (l, h), Scalar::one()) - &two_letters((d, h), (k, l), c)
            },
        },
        ExchangeRow {
            guard: |d, k, l, h| d < k && k < l && l == h,
            rhs: |d, k, l, h| {
                let c = &Scalar::q_pow(-1) * &(&Scalar::q_pow(2) - &Scalar::q_pow(-2));
                &two_letters((d, k), (l, h), Scalar::one()) - &two_letters((d, h), (k, l), c)
            },
        },
        ExchangeRow {
            guard: |d, k, l, h| d < k && k < l && l < h,
            rhs: |d, k, l, h| {
                let first = two_letters((d, h), (k, l), &qm() * &Scalar::q_pow(-1));
                let second = two_letters((d, l), (k, h), qm());
                &(&two_letters((d, k), (l, h), Scalar::one()) - &first) - &second
            },
        },
        ExchangeRow {
            guard: |d, k, l, h| d < l && l < h && h < k,
            rhs: |d, k, l, h| two_letters((d, k), (l, h), Scalar::one()),
        },
        ExchangeRow {
            guard: |d, k, l, h| d < l && l == h && h < k,
            rhs: |d, k, l, h| two_letters((d, k), (l, h), Scalar::one()),
        },
    ]
}

/// The AII table: six rows on the strict upper triangle.
pub fn exchange_rows_aii() -> Vec<ExchangeRow> {
    vec![
        ExchangeRow {
            guard: |d, k, l, h| d == l && k < h,
            rhs: |d, k, l, h| two_letters((d, k), (l, h), Scalar::q_pow(-1)),
        },
        ExchangeRow {
            guard: |d, k, l, h| d < l && l < k && k == h,
            rhs: |d, k, l, h| two_letters((d, k), (l, h), Scalar::q_pow(-1)),
        },
        ExchangeRow {
            guard: |d, k, l, h| d < l && l == k && k < h,
            rhs: |d, k, l, h| two_letters((d, k), (l, h), Scalar::q_pow(-1)),
        },
        ExchangeRow {
            guard: |d, k, l, h| d < l && l < k && k < h,
            rhs: |d, k, l, h| {
                &two_letters((d, k), (l, h), Scalar::one()) - &two_letters((d, h), (l, k), qm())
            },
        },
        ExchangeRow {
            guard: |d, k, l, h| d < k && k < l && l < h,
            rhs: |d, k, l, h| {
                let first = two_letters((d, h), (k, l), &qm() * &Scalar::q());
                let second = two_letters((d, l), (k, h), qm());
                &(&two_letters((d, k), (l, h), Scalar::one()) + &first) - &second
            },
        },
        ExchangeRow {
            guard: |d, k, l, h| d < l && l < h && h < k,
            rhs: |d, k, l, h| two_letters((d, k), (l, h), Scalar::one()),
        },
    ]
}

/// Every descending product of distinct basis generators, paired with its
/// table rewrite. Errors if some configuration matches no row or several.
pub fn exchange_relations(cfg: &FamilyConfig) -> Result<Vec<NCPoly>, String> {
    let rows = match cfg.family {
        Family::AI => exchange_rows_ai(),
        Family::AII => exchange_rows_aii(),
        Family::Diag => return Err("no explicit table for the Diag family".into()),
    };
    let basis = x_basis_indices(cfg);
    let mut out = Vec::new();
    for &(dd, kk) in &basis {
        for &(ll, hh) in &basis {
            if (dd, kk) >= (ll, hh) {
                continue;
            }
            let hits: Vec<&ExchangeRow> = rows
                .iter()
                .filter(|row| (row.guard)(dd, kk, ll, hh))
                .collect();
            match hits.len() {
                0 => {
                    return Err(format!(
                        "no exchange row covers x[{ll},{hh}] x[{dd},{kk}]"
                    ))
                }
                1 => {
                    let lhs = two_letters((ll, hh), (dd, kk), Scalar::one());
                    out.push(&lhs - &(hits[0].rhs)(dd, kk, ll, hh));
                }
                _ => {
                    return Err(format!(
                        "{} exchange rows overlap on x[{ll},{hh}] x[{dd},{kk}]",
                        hits.len()
                    ))
                }
            }
        }
    }
    Ok(out)
}

/// The explicit table holds identically, generates exactly the quadratic
/// relation span, and presents the same algebra: the rewriting system
/// built from the rows alone computes the same normal forms as the one
/// built from the matrix relations through degree 3.
pub fn check_exchange_tables(cfg: &FamilyConfig) -> Result<(), String> {
    let pres = p_theta_presentation(cfg);
    let rels = exchange_relations(cfg)?;
    for rel in &rels {
        if !pres.reduces_to_zero(rel) {
            return Err(format!("table row is not a relation: {rel}"));
        }
    }
    let quad: Vec<NCPoly> = p_theta_matrix_relations(cfg);
    if !span_equal(&x_order(cfg), &rels, &quad) {
        return Err("table span differs from the quadratic relation span".into());
    }
    let table_pres = Presentation::new(x_order(cfg), rels)?;
    for deg in 2..=3 {
        for w in crate::rewrite::words_of_degree(table_pres.order().gens(), deg) {
            let m = NCPoly::monomial(w, Scalar::one());
            if table_pres.normal_form(&m) != pres.normal_form(&m) {
                return Err(format!("table and matrix presentations disagree on {m}"));
            }
        }
    }
    Ok(())
}

/// Descending products q-commute modulo lower terms: the normal form of
/// x[l,h]x[d,k] is (+/- q^s) x[d,k]x[l,h] plus corrections whose letters
/// all precede (l,h).
pub fn check_q_commuting(cfg: &FamilyConfig) -> Result<(), String> {
    let pres = p_theta_presentation(cfg);
    let basis = x_basis_indices(cfg);
    for &(dd, kk) in &basis {
        for &(ll, hh) in &basis {
            if (dd, kk) >= (ll, hh) {
                continue;
            }
            let nf = pres.normal_form(&two_letters((ll, hh), (dd, kk), Scalar::one()));
            let sorted_word = vec![x(dd, kk), x(ll, hh)];
            let c = nf.coeff(&sorted_word);
            if c.is_zero() {
                return Err(format!(
                    "leading term vanished for x[{ll},{hh}] x[{dd},{kk}]"
                ));
            }
            let v = c.q_valuation();
            let plain = Scalar::q_pow(v);
            if c != plain && c != -&plain {
                return Err(format!("leading coefficient is not a power of q: {c}"));
            }
            for (w, _) in nf.terms() {
                if *w == sorted_word {
                    continue;
                }
                for g in w {
                    if (g.i as usize, g.j as usize) >= (ll, hh) {
                        return Err(format!(
                            "correction term of x[{ll},{hh}] x[{dd},{kk}] is not lower: {nf}"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Relabels the first-block letter of the n x n coordinate ring into the
/// Diag family: E_r, F_r keep their node, torus letters keep their index.
fn diag_second_copy(l: ULetter, n: usize) -> ULetter {
    match l {
        ULetter::E(r) => ULetter::E(r + n),
        ULetter::F(r) => ULetter::F(r + n),
        ULetter::K(s) => ULetter::K(s + n),
        ULetter::Kinv(s) => ULetter::Kinv(s + n),
    }
}

/// The Diag dictionary t[i,j] -> x[i, j+n]: an algebra isomorphism from
/// the n x n coordinate ring matching both module structures, with the
/// second factor acting through the shifted letters. Checks relation
/// spans on both sides and the two intertwining laws on generators.
pub fn check_diag_dictionary(cfg: &FamilyConfig) -> Result<(), String> {
    assert_eq!(cfg.family, Family::Diag);
    let n = cfg.n;
    let send_x = |g: GenId| match g.kind {
        GenKind::T => NCPoly::gen(x(g.i as usize, g.j as usize + n)),
        _ => panic!("unexpected letter"),
    };
    let mapped: Vec<NCPoly> = oq_matrix_relations(n)
        .iter()
        .map(|r| r.substitute(&send_x, false))
        .collect();
    if !span_equal(&x_order(cfg), &mapped, &p_theta_matrix_relations(cfg)) {
        return Err("mapped relations differ from the invariant relations".into());
    }
    if !span_equal(
        &x_order(cfg),
        &mapped,
        &p_theta_collapsed_relations(cfg),
    ) {
        return Err("collapsed relation form differs".into());
    }
    let send_d = |g: GenId| match g.kind {
        GenKind::P => NCPoly::gen(d(g.i as usize, g.j as usize + n)),
        _ => panic!("unexpected letter"),
    };
    let mapped_d: Vec<NCPoly> = oqop_matrix_relations(n)
        .iter()
        .map(|r| r.substitute(&send_d, false))
        .collect();
    if !span_equal(&d_order(cfg), &mapped_d, &d_theta_matrix_relations(cfg)) {
        return Err("mapped dual relations differ".into());
    }
    if !span_equal(
        &d_order(cfg),
        &mapped_d,
        &d_theta_collapsed_relations(cfg),
    ) {
        return Err("collapsed dual relation form differs".into());
    }

    let small = StandardTable { n };
    let big = StandardTable { n: cfg.rank() };
    let ambient = ambient_p_presentation(cfg);
    let psi = |poly: &NCPoly| -> NCPoly {
        poly.substitute(
            &|g| {
                assert_eq!(g.kind, GenKind::T);
                x_poly(cfg, g.i as usize, g.j as usize + n)
            },
            false,
        )
    };
    let mut letters = vec![];
    for r in 1..n {
        letters.push(ULetter::E(r));
        letters.push(ULetter::F(r));
    }
    for s in 1..=n {
        letters.push(ULetter::K(s));
        letters.push(ULetter::Kinv(s));
    }
    for i in 1..=n {
        for j in 1..=n {
            let small_gen = NCPoly::gen(t(i, j));
            for &l in &letters {
                let lhs = psi(&act_left(&small, l, &small_gen));
                let rhs = act_left(&big, l, &x_poly(cfg, i, j + n));
                if !ambient.reduces_to_zero(&(&lhs - &rhs)) {
                    return Err(format!(
                        "first-factor action mismatch at {} on t[{i},{j}]",
                        l.name()
                    ));
                }
                let natural = crate::oq::natural_letter(l);
                let lhs = psi(&natural.act_right(&small, &small_gen));
                let rhs = act_left(&big, diag_second_copy(l, n), &x_poly(cfg, i, j + n));
                if !ambient.reduces_to_zero(&(&lhs - &rhs)) {
                    return Err(format!(
                        "second-factor action mismatch at {} on t[{i},{j}]",
                        l.name()
                    ));
                }
            }
        }
    }
    Ok(())
}

/// The reversal sending x[i,j] to d[j,i] carries the invariant relations
/// onto the dual ones and back.
pub fn check_x_d_antimap(cfg: &FamilyConfig) -> Result<(), String> {
    let to_d = |poly: &NCPoly| -> NCPoly {
        let reversed = crate::oq::opposite(poly);
        reversed.substitute(
            &|g| {
                assert_eq!(g.kind, GenKind::X);
                reduce_d(cfg, g.j as usize, g.i as usize)
            },
            false,
        )
    };
    let d_pres = d_theta_presentation(cfg);
    for rel in p_theta_matrix_relations(cfg) {
        if !d_pres.reduces_to_zero(&to_d(&rel)) {
            return Err(format!("image of x relation is not a d relation: {rel}"));
        }
    }
    let to_x = |poly: &NCPoly| -> NCPoly {
        let reversed = crate::oq::opposite(poly);
        reversed.substitute(
            &|g| {
                assert_eq!(g.kind, GenKind::D);
                reduce_x(cfg, g.j as usize, g.i as usize)
            },
            false,
        )
    };
    let p_pres = p_theta_presentation(cfg);
    for rel in d_theta_matrix_relations(cfg) {
        if !p_pres.reduces_to_zero(&to_x(&rel)) {
            return Err(format!("image of d relation is not an x relation: {rel}"));
        }
    }
    Ok(())
}
