//! Quantum Weyl algebras: inhomogeneous deformations of the twisted tensor
//! products in which a dual generator and a coordinate generator exchange up
//! to a scalar pairing term.  The module builds the deformed presentations,
//! derives the pairing for the quantized-space algebras inside the ambient
//! matrix Weyl algebra, and certifies flatness through the two tensor-level
//! criteria plus an explicit degree-three overlap intersection.

use std::collections::BTreeMap;

use crate::oq::{
    act_left, act_right, oq_matrix_relations, oqop_matrix_relations, standard_letters, t_order,
    StandardTable, ULetter,
};
use crate::poly::{gen, GenId, GenKind, NCPoly, OrderSpec, Word};
use crate::qsp::{
    b_theta_ops, d_order, d_poly, d_theta_matrix_relations, d_theta_presentation,
    family_node_range, killed, p_theta_matrix_relations, p_theta_presentation, x_basis_indices,
    x_order, x_poly,
};
use crate::rewrite::{span_equal, Presentation, Span};
use crate::rmatrix::{Family, FamilyConfig};
use crate::scalar::Scalar;
use crate::twist::{tau_matrix, tau_theta, ThetaTable, TwistTensor};

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

fn oq_order(n: usize) -> OrderSpec {
    crate::oq::p_order(n)
}

/// Generator order for the matrix Weyl algebra: coordinates below duals, so
/// normal forms sort every t to the left of every p.
pub fn pair_order(n: usize) -> OrderSpec {
    let mut gens = t_order(n).gens().to_vec();
    gens.extend_from_slice(oq_order(n).gens());
    OrderSpec::new(gens)
}

/// Generator order for the quantized-space Weyl algebras: the x square grid
/// below the d square grid.
pub fn theta_pair_order(cfg: &FamilyConfig) -> OrderSpec {
    let mut gens = x_order(cfg).gens().to_vec();
    gens.extend_from_slice(d_order(cfg).gens());
    OrderSpec::new(gens)
}

/// A scalar pairing mu between dual generators and coordinate generators,
/// stored sparsely on (dual, coordinate) pairs.  Every pair outside the
/// support pairs to zero.
#[derive(Clone, Debug)]
pub struct PairingTensor {
    map: BTreeMap<(GenId, GenId), Scalar>,
}

impl PairingTensor {
    /// The matrix pairing: <p[i,j], t[s,k]> is 1 when (i,j) = (s,k) and 0
    /// otherwise.
    pub fn matrix(n: usize) -> PairingTensor {
        let mut map = BTreeMap::new();
        for i in 1..=n {
            for j in 1..=n {
                map.insert((p(i, j), t(i, j)), Scalar::one());
            }
        }
        PairingTensor { map }
    }

    /// The quantized-space pairing with a general diagonal exponent:
    /// <d[i,j], x[u,v]> is q^(e * [i = j]) on equal basis pairs and 0
    /// otherwise.  The invariant pairing uses e = -1; other exponents exist
    /// only as negative controls.
    pub fn theta_with_exponent(cfg: &FamilyConfig, e: i64) -> PairingTensor {
        let mut map = BTreeMap::new();
        for &(i, j) in &x_basis_indices(cfg) {
            let val = if i == j { Scalar::q_pow(e) } else { Scalar::one() };
            map.insert((d(i, j), x(i, j)), val);
        }
        PairingTensor { map }
    }

    /// The pairing under which the quantized-space exchange relations close
    /// into a flat deformation.  This closed form is certified against the
    /// normal-form derivation in the ambient Weyl algebra by
    /// [`derive_theta_pairing`].
    pub fn theta(cfg: &FamilyConfig) -> PairingTensor {
        PairingTensor::theta_with_exponent(cfg, -1)
    }

    pub fn value(&self, z: GenId, y: GenId) -> Scalar {
        self.map.get(&(z, y)).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Apply the pairing to every length-two word of a polynomial and sum;
    /// words of any other length contribute nothing.
    pub fn apply(&self, poly: &NCPoly) -> Scalar {
        let mut out = Scalar::zero();
        for (word, c) in poly.terms() {
            if word.len() == 2 {
                out = &out + &(c * &self.value(word[0], word[1]));
            }
        }
        out
    }

    pub fn support(&self) -> impl Iterator<Item = (&(GenId, GenId), &Scalar)> {
        self.map.iter()
    }
}

/// The deformed exchange relations z*y - tau(z (x) y) - mu(z, y) for every
/// dual generator z and coordinate generator y of a twisting map.
pub fn weyl_relations_from(tt: &TwistTensor, mu: &PairingTensor) -> Vec<NCPoly> {
    let mut out = Vec::new();
    for &b in tt.b_gens() {
        for &a in tt.a_gens() {
            let mut rel = NCPoly::monomial(vec![b, a], Scalar::one());
            for &(a2, b2, ref c) in tt.apply(b, a) {
                rel = &rel - &NCPoly::monomial(vec![a2, b2], c.clone());
            }
            let c0 = mu.value(b, a);
            if !c0.is_zero() {
                rel = &rel - &NCPoly::constant(c0);
            }
            out.push(rel);
        }
    }
    out
}

/// All defining relations of the deformed matrix pair algebra at parameters
/// (upsilon, sigma): both factor presentations plus the deformed exchange.
pub fn deformed_matrix_relations(upsilon: u8, sigma: u8, n: usize) -> Vec<NCPoly> {
    let mut rels = oq_matrix_relations(n);
    rels.extend(oqop_matrix_relations(n));
    rels.extend(weyl_relations_from(
        &tau_matrix(upsilon, sigma, n),
        &PairingTensor::matrix(n),
    ));
    rels
}

pub fn deformed_pair(upsilon: u8, sigma: u8, n: usize) -> Presentation {
    Presentation::new(pair_order(n), deformed_matrix_relations(upsilon, sigma, n))
        .expect("deformed matrix pair presentation")
}

/// The rank-n matrix Weyl algebra at matched parameters.
pub fn build_w(upsilon: u8, n: usize) -> Presentation {
    deformed_pair(upsilon, upsilon, n)
}

pub fn deformed_theta_relations(alpha: u8, upsilon: u8, cfg: &FamilyConfig) -> Vec<NCPoly> {
    let mut rels = p_theta_matrix_relations(cfg);
    rels.extend(d_theta_matrix_relations(cfg));
    rels.extend(weyl_relations_from(
        &tau_theta(alpha, upsilon, cfg),
        &PairingTensor::theta(cfg),
    ));
    rels
}

pub fn deformed_pair_theta(alpha: u8, upsilon: u8, cfg: &FamilyConfig) -> Presentation {
    Presentation::new(
        theta_pair_order(cfg),
        deformed_theta_relations(alpha, upsilon, cfg),
    )
    .expect("deformed quantized-space pair presentation")
}

/// The quantized-space Weyl algebra of a family at matched parameters.
pub fn build_w_theta(upsilon: u8, cfg: &FamilyConfig) -> Presentation {
    deformed_pair_theta(upsilon, upsilon, cfg)
}

fn strip_killed(cfg: &FamilyConfig, poly: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero();
    for (word, c) in poly.terms() {
        if word
            .iter()
            .all(|g| !killed(cfg, g.i as usize, g.j as usize))
        {
            out.add_term(word.clone(), c.clone());
        }
    }
    out
}

/// The ambient Weyl algebra a quantized-space pair embeds into: the matrix
/// Weyl algebra at the family rank, with the letters outside the diagonal
/// blocks set to zero for the two-block family.  Exchange rows are kept only
/// for surviving letter pairs; rows between killed letters would otherwise
/// filter to the contradiction 0 = 1.
pub fn ambient_weyl(cfg: &FamilyConfig) -> Presentation {
    let rk = cfg.rank();
    let tt = tau_matrix(0, 0, rk);
    let mu = PairingTensor::matrix(rk);
    let mut rels: Vec<NCPoly> = Vec::new();
    for r in oq_matrix_relations(rk) {
        let f = strip_killed(cfg, &r);
        if !f.is_zero() {
            rels.push(f);
        }
    }
    for r in oqop_matrix_relations(rk) {
        let f = strip_killed(cfg, &r);
        if !f.is_zero() {
            rels.push(f);
        }
    }
    for i in 1..=rk {
        for j in 1..=rk {
            if killed(cfg, i, j) {
                rels.push(NCPoly::gen(t(i, j)));
                rels.push(NCPoly::gen(p(i, j)));
            }
        }
    }
    for &b in tt.b_gens() {
        for &a in tt.a_gens() {
            if killed(cfg, b.i as usize, b.j as usize) || killed(cfg, a.i as usize, a.j as usize) {
                continue;
            }
            let mut rel = NCPoly::monomial(vec![b, a], Scalar::one());
            for &(a2, b2, ref c) in tt.apply(b, a) {
                if killed(cfg, a2.i as usize, a2.j as usize)
                    || killed(cfg, b2.i as usize, b2.j as usize)
                {
                    continue;
                }
                rel = &rel - &NCPoly::monomial(vec![a2, b2], c.clone());
            }
            let c0 = mu.value(b, a);
            if !c0.is_zero() {
                rel = &rel - &NCPoly::constant(c0);
            }
            rels.push(rel);
        }
    }
    Presentation::new(pair_order(rk), rels).expect("ambient Weyl presentation")
}

/// Derive the quantized-space pairing by normal-forming every product of a
/// dual basis element with a coordinate basis element inside the ambient
/// Weyl algebra and reading off the constant term.  Returns the pairing
/// normalized to leading value 1 together with the global scale that was
/// divided out.
///
/// Panics if some product leaves a constant on a non-matching pair, if the
/// normalized constants do not follow the diagonal exponent pattern, or if a
/// non-constant term of some normal form contains no dual letter (each
/// product must be a constant plus an element of the left ideal generated by
/// the duals).
pub fn derive_theta_pairing(cfg: &FamilyConfig) -> (PairingTensor, Scalar) {
    let w = ambient_weyl(cfg);
    let basis = x_basis_indices(cfg);
    let mut raw: BTreeMap<((usize, usize), (usize, usize)), Scalar> = BTreeMap::new();
    for &(i, j) in &basis {
        let dp = d_poly(cfg, i, j);
        for &(u, v) in &basis {
            let nf = w.normal_form(&(&dp * &x_poly(cfg, u, v)));
            for (word, _) in nf.terms() {
                if !word.is_empty() {
                    assert!(
                        word.iter().any(|g| g.kind == GenKind::P),
                        "product d[{i},{j}] x[{u},{v}] left a dual-free word {word:?}"
                    );
                }
            }
            raw.insert(((i, j), (u, v)), nf.coeff(&Word::new()));
        }
    }
    let global = match basis.iter().find(|&&(i, j)| i != j) {
        Some(&(i, j)) => raw[&((i, j), (i, j))].clone(),
        None => &raw[&((1, 1), (1, 1))] * &Scalar::q(),
    };
    assert!(!global.is_zero(), "pairing derivation found a zero scale");
    for &(i, j) in &basis {
        for &(u, v) in &basis {
            let expect = if (i, j) == (u, v) {
                let e = if i == j { -1 } else { 0 };
                &global * &Scalar::q_pow(e)
            } else {
                Scalar::zero()
            };
            assert!(
                raw[&((i, j), (u, v))] == expect,
                "constant of d[{i},{j}] x[{u},{v}] is {}, expected {}",
                raw[&((i, j), (u, v))],
                expect
            );
        }
    }
    (PairingTensor::theta(cfg), global)
}

/// One failed instance of a flatness criterion: a label describing the
/// tensor slot it came from and the nonzero degree-one defect.
#[derive(Clone, Debug)]
pub struct CriteriaReport {
    pub defects: Vec<(String, NCPoly)>,
}

impl CriteriaReport {
    pub fn is_clean(&self) -> bool {
        self.defects.is_empty()
    }
}

/// The defect of the first criterion on z (x) r for a quadratic coordinate
/// relation r: apply mu to the left pair directly, and to the right pair
/// after twisting z past the first factor.
pub fn defect_left(z: GenId, rel: &NCPoly, tt: &TwistTensor, mu: &PairingTensor) -> NCPoly {
    let mut out = NCPoly::zero();
    for (word, c) in rel.terms() {
        assert!(word.len() == 2, "coordinate relation must be quadratic");
        out = &out + &NCPoly::monomial(vec![word[1]], &*c * &mu.value(z, word[0]));
        for &(a2, b2, ref c2) in tt.apply(z, word[0]) {
            out = &out + &NCPoly::monomial(vec![a2], &(&*c * c2) * &mu.value(b2, word[1]));
        }
    }
    out
}

/// The defect of the second criterion on r (x) y for a quadratic dual
/// relation r: apply mu to the right pair directly, and to the left pair
/// after twisting the second factor past y.
pub fn defect_right(rel: &NCPoly, y: GenId, tt: &TwistTensor, mu: &PairingTensor) -> NCPoly {
    let mut out = NCPoly::zero();
    for (word, c) in rel.terms() {
        assert!(word.len() == 2, "dual relation must be quadratic");
        out = &out + &NCPoly::monomial(vec![word[0]], &*c * &mu.value(word[1], y));
        for &(a2, b2, ref c2) in tt.apply(word[1], y) {
            out = &out + &NCPoly::monomial(vec![b2], &(&*c * c2) * &mu.value(word[0], a2));
        }
    }
    out
}

/// Evaluate both flatness criteria over every (dual generator, coordinate
/// relation) and (dual relation, coordinate generator) pair, collecting all
/// nonzero defects.  An empty report certifies that the deformation is flat
/// for a twisting map whose graded algebra has the diamond property.
pub fn pbw_criteria(
    coords: &Presentation,
    duals: &Presentation,
    tt: &TwistTensor,
    mu: &PairingTensor,
) -> CriteriaReport {
    let mut defects = Vec::new();
    let coord_rels = coords.relations();
    let dual_rels = duals.relations();
    for &z in tt.b_gens() {
        for rel in &coord_rels {
            let out = defect_left(z, rel, tt, mu);
            if !out.is_zero() {
                let (lw, _) = rel.leading_term(coords.order()).expect("nonzero relation");
                defects.push((
                    format!("{} (x) [{}{}]", z, lw[0], lw[1]),
                    out,
                ));
            }
        }
    }
    for rel in &dual_rels {
        for &y in tt.a_gens() {
            let out = defect_right(rel, y, tt, mu);
            if !out.is_zero() {
                let (lw, _) = rel.leading_term(duals.order()).expect("nonzero relation");
                defects.push((
                    format!("[{}{}] (x) {}", lw[0], lw[1], y),
                    out,
                ));
            }
        }
    }
    CriteriaReport { defects }
}

fn matrix_coordinate_presentation(n: usize) -> Presentation {
    Presentation::new(t_order(n), oq_matrix_relations(n)).expect("coordinate presentation")
}

fn matrix_dual_presentation(n: usize) -> Presentation {
    Presentation::new(oq_order(n), oqop_matrix_relations(n)).expect("dual presentation")
}

/// Flatness criteria for the matrix pair at parameters (upsilon, sigma).
pub fn matrix_criteria(upsilon: u8, sigma: u8, n: usize) -> CriteriaReport {
    pbw_criteria(
        &matrix_coordinate_presentation(n),
        &matrix_dual_presentation(n),
        &tau_matrix(upsilon, sigma, n),
        &PairingTensor::matrix(n),
    )
}

/// Flatness criteria for a quantized-space pair at parameters
/// (alpha, upsilon).
pub fn theta_criteria(alpha: u8, upsilon: u8, cfg: &FamilyConfig) -> CriteriaReport {
    pbw_criteria(
        &p_theta_presentation(cfg),
        &d_theta_presentation(cfg),
        &tau_theta(alpha, upsilon, cfg),
        &PairingTensor::theta(cfg),
    )
}

fn letter_eps(l: ULetter) -> Scalar {
    match l {
        ULetter::E(_) | ULetter::F(_) => Scalar::zero(),
        ULetter::K(_) | ULetter::Kinv(_) => Scalar::one(),
    }
}

/// Check that the matrix pairing is invariant under both module structures:
/// for every standard letter u and every generator pair, applying u to the
/// product p[i,j] t[s,k] and then pairing equals the counit of u times the
/// pairing of the original pair.
pub fn check_mu_invariance(n: usize) -> Result<(), String> {
    let mu = PairingTensor::matrix(n);
    let tab = StandardTable { n };
    for l in standard_letters(n) {
        let eps = letter_eps(l);
        for i in 1..=n {
            for j in 1..=n {
                for s in 1..=n {
                    for k in 1..=n {
                        let w = NCPoly::monomial(vec![p(i, j), t(s, k)], Scalar::one());
                        let base = &eps * &mu.value(p(i, j), t(s, k));
                        if mu.apply(&act_left(&tab, l, &w)) != base {
                            return Err(format!(
                                "left action of {l:?} moves the pairing at p[{i},{j}] t[{s},{k}]"
                            ));
                        }
                        if mu.apply(&act_right(&tab, &w, l)) != base {
                            return Err(format!(
                                "right action of {l:?} moves the pairing at p[{i},{j}] t[{s},{k}]"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn theta_letters(cfg: &FamilyConfig) -> Vec<ULetter> {
    let mut letters = Vec::new();
    for k in family_node_range(cfg) {
        letters.push(ULetter::E(k));
        letters.push(ULetter::F(k));
    }
    for r in 1..=cfg.rank() {
        letters.push(ULetter::K(r));
        letters.push(ULetter::Kinv(r));
    }
    letters
}

/// Check that a candidate quantized-space pairing is invariant under the
/// left action on abstract d, x letters.  Passing a pairing with the wrong
/// diagonal exponent must fail whenever the family has a diagonal basis
/// pair.
pub fn check_theta_mu_left_invariance(cfg: &FamilyConfig, mu: &PairingTensor) -> Result<(), String> {
    let tab = ThetaTable { cfg };
    let basis = x_basis_indices(cfg);
    for l in theta_letters(cfg) {
        let eps = letter_eps(l);
        for &(i, j) in &basis {
            for &(u, v) in &basis {
                let w = NCPoly::monomial(vec![d(i, j), x(u, v)], Scalar::one());
                let base = &eps * &mu.value(d(i, j), x(u, v));
                if mu.apply(&act_left(&tab, l, &w)) != base {
                    return Err(format!(
                        "left action of {l:?} moves the pairing at d[{i},{j}] x[{u},{v}]"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Check that the derived pairing is trivial for the right coideal action:
/// for every coideal operator, acting on the realized product inside the
/// ambient Weyl algebra rescales its constant term by the operator counit.
pub fn check_theta_mu_right_invariance(cfg: &FamilyConfig) -> Result<(), String> {
    let w = ambient_weyl(cfg);
    let tab = StandardTable { n: cfg.rank() };
    let basis = x_basis_indices(cfg);
    for op in b_theta_ops(cfg) {
        for &(i, j) in &basis {
            for &(u, v) in &basis {
                let prod = &d_poly(cfg, i, j) * &x_poly(cfg, u, v);
                let base = w.normal_form(&prod).coeff(&Word::new());
                let acted = op.elt.act_right(&tab, &prod);
                if w.normal_form(&acted).coeff(&Word::new()) != &op.eps * &base {
                    return Err(format!(
                        "coideal operator {} moves the constant of d[{i},{j}] x[{u},{v}]",
                        op.name
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Check that the span of the deformed matrix exchange relations is carried
/// into itself by both module structures.
pub fn check_w_span_stability(upsilon: u8, sigma: u8, n: usize) -> Result<(), String> {
    let rels = weyl_relations_from(&tau_matrix(upsilon, sigma, n), &PairingTensor::matrix(n));
    let span = Span::new(pair_order(n), rels.iter().cloned());
    let tab = StandardTable { n };
    for rel in &rels {
        for l in standard_letters(n) {
            if !span.contains(&act_left(&tab, l, rel)) {
                return Err(format!("left action of {l:?} leaves the relation span"));
            }
            if !span.contains(&act_right(&tab, rel, l)) {
                return Err(format!("right action of {l:?} leaves the relation span"));
            }
        }
    }
    Ok(())
}

/// Check that the span of the deformed quantized-space exchange relations is
/// stable under the left action on abstract letters.
pub fn check_w_theta_span_stability(
    alpha: u8,
    upsilon: u8,
    cfg: &FamilyConfig,
) -> Result<(), String> {
    let rels = weyl_relations_from(&tau_theta(alpha, upsilon, cfg), &PairingTensor::theta(cfg));
    let span = Span::new(theta_pair_order(cfg), rels.iter().cloned());
    let tab = ThetaTable { cfg };
    for rel in &rels {
        for l in theta_letters(cfg) {
            if !span.contains(&act_left(&tab, l, rel)) {
                return Err(format!("left action of {l:?} leaves the relation span"));
            }
        }
    }
    Ok(())
}

/// The rescaled matrix R entry used by the bounded-domain normalization of
/// the exchange rules: q^-1 times the second-factor transpose of R.
pub fn scaled_r_entry(e: usize, f: usize, l: usize, dd: usize) -> Scalar {
    if e == f && f == l && l == dd {
        Scalar::one()
    } else if e == l && f == dd && e != f {
        Scalar::q_pow(-1)
    } else if e == f && l == dd && e < l {
        &Scalar::one() - &Scalar::q_pow(-2)
    } else {
        Scalar::zero()
    }
}

/// Check the closed form of the rescaled R entries against the R-matrix, and
/// check that the matrix Weyl exchange rules written through two rescaled R
/// factors coincide with the twisting-map relations at matched parameters 0.
pub fn check_scaled_r_form(n: usize) -> Result<(), String> {
    let rt2 = crate::rmatrix::build_r(n).transpose_t2();
    for e in 1..=n {
        for f in 1..=n {
            for l in 1..=n {
                for dd in 1..=n {
                    let lhs = &Scalar::q_pow(-1) * &rt2.get(&[dd, l], &[f, e]);
                    if lhs != scaled_r_entry(e, f, l, dd) {
                        return Err(format!(
                            "rescaled R mismatch at ({e},{f},{l},{dd}): {} vs {}",
                            lhs,
                            scaled_r_entry(e, f, l, dd)
                        ));
                    }
                }
            }
        }
    }
    let tt = tau_matrix(0, 0, n);
    let mu = PairingTensor::matrix(n);
    let rels = weyl_relations_from(&tt, &mu);
    let mut idx = 0;
    let q2 = Scalar::q_pow(2);
    for &bg in tt.b_gens() {
        for &ag in tt.a_gens() {
            let (e, a) = (bg.i as usize, bg.j as usize);
            let (f, b) = (ag.i as usize, ag.j as usize);
            let mut rel = NCPoly::monomial(vec![bg, ag], Scalar::one());
            for dd in 1..=n {
                for j in 1..=n {
                    for l in 1..=n {
                        for k in 1..=n {
                            let c = &(&q2 * &scaled_r_entry(e, f, l, dd))
                                * &scaled_r_entry(a, b, k, j);
                            if !c.is_zero() {
                                rel = &rel - &NCPoly::monomial(vec![t(dd, j), p(l, k)], c);
                            }
                        }
                    }
                }
            }
            if e == f && a == b {
                rel = &rel - &NCPoly::one();
            }
            if !(&rel - &rels[idx]).is_zero() {
                return Err(format!(
                    "rescaled exchange rule differs from the twisting relation at p[{e},{a}] t[{f},{b}]"
                ));
            }
            idx += 1;
        }
    }
    Ok(())
}

fn weakly_above(a: u8, b: u8, sign: i64) -> bool {
    if sign >= 0 {
        a >= b
    } else {
        a <= b
    }
}

/// Check the normal-form shape of every product d[a,b] x[e,f] in a
/// quantized-space Weyl algebra: a mirror term x[e,f] d[a,b] with coefficient
/// q^(sign * shared index count), a tail of componentwise higher (upsilon 0)
/// or lower (upsilon 1) basis pairs, and the pairing constant.
pub fn check_weyl_nongraded_shape(upsilon: u8, cfg: &FamilyConfig) -> Result<(), String> {
    let w = build_w_theta(upsilon, cfg);
    let mu = PairingTensor::theta(cfg);
    let sign: i64 = if upsilon == 0 { 1 } else { -1 };
    let basis = x_basis_indices(cfg);
    for &(a, b) in &basis {
        for &(e, f) in &basis {
            let nf = w.normal_form(&NCPoly::monomial(vec![d(a, b), x(e, f)], Scalar::one()));
            if nf.coeff(&Word::new()) != mu.value(d(a, b), x(e, f)) {
                return Err(format!("constant of d[{a},{b}] x[{e},{f}] is off"));
            }
            let shared = [(a, f), (a, e), (b, f), (b, e)]
                .iter()
                .filter(|(u, v)| u == v)
                .count() as i64;
            if nf.coeff(&vec![x(e, f), d(a, b)]) != Scalar::q_pow(sign * shared) {
                return Err(format!("mirror coefficient of d[{a},{b}] x[{e},{f}] is off"));
            }
            for (word, _) in nf.terms() {
                if word.is_empty() || *word == vec![x(e, f), d(a, b)] {
                    continue;
                }
                if word.len() != 2 || word[0].kind != GenKind::X || word[1].kind != GenKind::D {
                    return Err(format!(
                        "unexpected word {word:?} in d[{a},{b}] x[{e},{f}]"
                    ));
                }
                let up = weakly_above(word[0].i, e as u8, sign)
                    && weakly_above(word[0].j, f as u8, sign)
                    && weakly_above(word[1].i, a as u8, sign)
                    && weakly_above(word[1].j, b as u8, sign);
                if !up {
                    return Err(format!(
                        "tail word {word:?} of d[{a},{b}] x[{e},{f}] is not monotone"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Compare filtered dimensions of a deformed presentation against the
/// accumulated graded dimensions of its associated graded presentation, and
/// check local confluence of the deformed rewriting system, both up to total
/// degree dmax.  Together these certify flatness operationally.
pub fn check_pbw_deformation(
    w: &Presentation,
    graded: &Presentation,
    dmax: usize,
) -> Result<(), String> {
    for dd in 0..=dmax {
        let f = w.filtered_dim(dd);
        let g: usize = (0..=dd).map(|k| graded.graded_dim(k)).sum();
        if f != g {
            return Err(format!(
                "filtered dimension {f} at degree {dd}, expected {g}"
            ));
        }
    }
    w.check_confluence(dmax)
}

/// Quadratic relation rows of the graded algebra: both factor presentations
/// plus the exchange kernel without its pairing constant.
fn graded_relation_rows(
    coords: &Presentation,
    duals: &Presentation,
    tt: &TwistTensor,
) -> Vec<NCPoly> {
    let mut rows = coords.relations();
    rows.extend(duals.relations());
    for &b in tt.b_gens() {
        for &a in tt.a_gens() {
            let mut rel = NCPoly::monomial(vec![b, a], Scalar::one());
            for &(a2, b2, ref c) in tt.apply(b, a) {
                rel = &rel - &NCPoly::monomial(vec![a2, b2], c.clone());
            }
            rows.push(rel);
        }
    }
    rows
}

fn pairing_defect_three(v: &NCPoly, mu: &PairingTensor) -> NCPoly {
    let mut out = NCPoly::zero();
    for (word, c) in v.terms() {
        assert!(word.len() == 3, "intersection element must be cubic");
        out = &out + &NCPoly::monomial(vec![word[2]], c * &mu.value(word[0], word[1]));
        out = &out - &NCPoly::monomial(vec![word[0]], c * &mu.value(word[1], word[2]));
    }
    out
}

/// Compute the degree-three intersection (R (x) V) n (V (x) R) of the
/// quadratic relation space R with the letter space V on both sides, and
/// check that applying the pairing to the left pair and to the right pair of
/// each intersection element agree.  Returns the intersection dimension.
///
/// This is the direct overlap-style flatness condition; it cross-checks the
/// tensor criteria without going through the twisting map.
pub fn check_overlap_intersection(
    coords: &Presentation,
    duals: &Presentation,
    tt: &TwistTensor,
    mu: &PairingTensor,
) -> Result<usize, String> {
    let mut gens = coords.order().gens().to_vec();
    gens.extend_from_slice(duals.order().gens());
    let order = OrderSpec::new(gens);
    let rows = graded_relation_rows(coords, duals, tt);
    let letters: Vec<GenId> = order.gens().to_vec();
    let a_rows: Vec<NCPoly> = rows
        .iter()
        .flat_map(|r| letters.iter().map(move |l| r * &NCPoly::gen(*l)))
        .collect();
    let b_span = Span::new(
        order.clone(),
        letters
            .iter()
            .flat_map(|l| rows.iter().map(move |r| &NCPoly::gen(*l) * r)),
    );
    let mut ech: Vec<(NCPoly, BTreeMap<usize, Scalar>)> = Vec::new();
    let mut null_combos: Vec<BTreeMap<usize, Scalar>> = Vec::new();
    for (k, arow) in a_rows.iter().enumerate() {
        let mut res = b_span.reduce(arow);
        let mut combo: BTreeMap<usize, Scalar> = BTreeMap::new();
        combo.insert(k, Scalar::one());
        loop {
            if res.is_zero() {
                null_combos.push(combo);
                break;
            }
            let (lw, lc) = res.leading_term(&order).expect("nonzero residue");
            let hit = ech
                .iter()
                .position(|(e, _)| e.leading_term(&order).expect("echelon row").0 == lw);
            match hit {
                Some(pos) => {
                    let (erow, ecombo) = &ech[pos];
                    let (_, elc) = erow.leading_term(&order).expect("echelon row");
                    let factor = &lc * &elc.inv();
                    res = &res - &erow.scale(&factor);
                    let neg = -&factor;
                    for (kk, cc) in ecombo {
                        let add = &neg * cc;
                        let entry = combo.entry(*kk).or_insert_with(Scalar::zero);
                        *entry = &*entry + &add;
                    }
                }
                None => {
                    ech.push((res, combo));
                    break;
                }
            }
        }
    }
    let mut count = 0;
    for combo in &null_combos {
        let mut v = NCPoly::zero();
        for (k, c) in combo {
            v = &v + &a_rows[*k].scale(c);
        }
        if v.is_zero() {
            continue;
        }
        count += 1;
        let defect = pairing_defect_three(&v, mu);
        if !defect.is_zero() {
            return Err(format!(
                "pairing disagrees on an overlap element, defect {defect}"
            ));
        }
    }
    Ok(count)
}

/// Check that reversing all indices i -> n+1-i, j -> n+1-j and conjugating
/// the coefficients carries the full relation set of the matrix Weyl algebra
/// at parameter 0 onto the one at parameter 1, and back.
pub fn check_weyl_reflection(n: usize) -> Result<(), String> {
    let refl = |g: GenId| {
        NCPoly::gen(gen(
            g.kind,
            n + 1 - g.i as usize,
            n + 1 - g.j as usize,
        ))
    };
    let order = pair_order(n);
    let rels0 = deformed_matrix_relations(0, 0, n);
    let rels1 = deformed_matrix_relations(1, 1, n);
    let mapped0: Vec<NCPoly> = rels0.iter().map(|r| r.substitute(&refl, true)).collect();
    if !span_equal(&order, &mapped0, &rels1) {
        return Err("reflection does not carry parameter 0 onto parameter 1".into());
    }
    let mapped1: Vec<NCPoly> = rels1.iter().map(|r| r.substitute(&refl, true)).collect();
    if !span_equal(&order, &mapped1, &rels0) {
        return Err("reflection does not carry parameter 1 onto parameter 0".into());
    }
    Ok(())
}

/// Check that renaming x -> t, d -> p (shifting the column block down by n)
/// sends every relation of the two-block quantized-space Weyl algebra to
/// zero in the rank-n matrix Weyl algebra at the same parameter.
pub fn check_weyl_diag_collapse(upsilon: u8, n: usize) -> Result<(), String> {
    let cfg = FamilyConfig::new(Family::Diag, n);
    let sub = |g: GenId| {
        let kind = match g.kind {
            GenKind::X => GenKind::T,
            GenKind::D => GenKind::P,
            other => other,
        };
        NCPoly::gen(gen(kind, g.i as usize, g.j as usize - n))
    };
    let target = build_w(upsilon, n);
    for rel in deformed_theta_relations(upsilon, upsilon, &cfg) {
        let mapped = rel.substitute(&sub, false);
        if !target.reduces_to_zero(&mapped) {
            return Err(format!("relation {rel} does not collapse"));
        }
    }
    Ok(())
}

/// Check that every deformed quantized-space exchange relation is realized
/// inside the ambient Weyl algebra: the product of the realized dual and
/// coordinate polynomials, minus the twisted image terms realized the same
/// way, minus the global scale times the pairing value, reduces to zero.
pub fn check_theta_weyl_realization(cfg: &FamilyConfig) -> Result<(), String> {
    let w = ambient_weyl(cfg);
    let (mu, global) = derive_theta_pairing(cfg);
    let tt = tau_theta(0, 0, cfg);
    let basis = x_basis_indices(cfg);
    for &(a, b) in &basis {
        for &(e, f) in &basis {
            let mut elt = &d_poly(cfg, a, b) * &x_poly(cfg, e, f);
            for &(a2, b2, ref c) in tt.apply(d(a, b), x(e, f)) {
                let term = &x_poly(cfg, a2.i as usize, a2.j as usize)
                    * &d_poly(cfg, b2.i as usize, b2.j as usize);
                elt = &elt - &term.scale(c);
            }
            let c0 = &global * &mu.value(d(a, b), x(e, f));
            if !c0.is_zero() {
                elt = &elt - &NCPoly::constant(c0);
            }
            if !w.reduces_to_zero(&elt) {
                return Err(format!(
                    "exchange relation at d[{a},{b}] x[{e},{f}] fails in the ambient algebra"
                ));
            }
        }
    }
    Ok(())
}
