//! The quantized coordinate ring of N x N matrices, its opposite algebra,
//! and the two-sided action of quantized gl_N on both.
//!
//! Generators are `t[i,j]` for the coordinate ring and `p[i,j]` for the
//! opposite copy. Relations come from the matrix equation
//! `R T1 T2 = T2 T1 R` (and `R21 P1 P2 = P2 P1 R21` for the opposite),
//! with `R` the standard R-matrix of [`crate::rmatrix::build_r`].
//!
//! The acting Hopf algebra never appears as an algebra of its own. Its
//! generators act through the letter tables below, extended to products by
//! the coproduct rules
//! `E.(ab) = (E.a)b + (K.a)(E.b)`, `F.(ab) = (F.a)(K^{-1}.b) + a(F.b)`,
//! and their right-handed mirrors.

use crate::opmat::OpMat;
use crate::poly::{gen, GenId, GenKind, NCPoly, OrderSpec, Word};
use crate::rewrite::{Presentation, Span};
use crate::rmatrix::{build_r, build_r21};
use crate::scalar::Scalar;

fn t(i: usize, j: usize) -> GenId {
    gen(GenKind::T, i, j)
}

fn p(i: usize, j: usize) -> GenId {
    gen(GenKind::P, i, j)
}

/// Row-major generator order t[1,1], t[1,2], ..., t[n,n].
pub fn t_order(n: usize) -> OrderSpec {
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            gens.push(t(i, j));
        }
    }
    OrderSpec::new(gens)
}

pub fn p_order(n: usize) -> OrderSpec {
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            gens.push(p(i, j));
        }
    }
    OrderSpec::new(gens)
}

fn symbol(kind: GenKind) -> impl Fn(usize, usize) -> NCPoly {
    move |a, c| NCPoly::gen(gen(kind, a, c))
}

/// Relations of the coordinate ring, harvested from R T1 T2 - T2 T1 R.
pub fn oq_matrix_relations(n: usize) -> Vec<NCPoly> {
    let r = OpMat::lift(&build_r(n));
    let t1 = OpMat::symbol_on_leg(n, 2, 1, symbol(GenKind::T));
    let t2 = OpMat::symbol_on_leg(n, 2, 2, symbol(GenKind::T));
    let lhs = r.matmul(&t1).matmul(&t2);
    let rhs = t2.matmul(&t1).matmul(&r);
    lhs.sub(&rhs).entry_polys()
}

/// Relations of the opposite algebra, from R21 P1 P2 - P2 P1 R21.
pub fn oqop_matrix_relations(n: usize) -> Vec<NCPoly> {
    let r21 = OpMat::lift(&build_r21(n));
    let p1 = OpMat::symbol_on_leg(n, 2, 1, symbol(GenKind::P));
    let p2 = OpMat::symbol_on_leg(n, 2, 2, symbol(GenKind::P));
    let lhs = r21.matmul(&p1).matmul(&p2);
    let rhs = p2.matmul(&p1).matmul(&r21);
    lhs.sub(&rhs).entry_polys()
}

pub fn oq_presentation(n: usize) -> Presentation {
    Presentation::new(t_order(n), oq_matrix_relations(n)).unwrap()
}

pub fn oqop_presentation(n: usize) -> Presentation {
    Presentation::new(p_order(n), oqop_matrix_relations(n)).unwrap()
}

/// The same relations written out row by row: entries in a common row or
/// column q-commute, antidiagonal pairs commute, and diagonal pairs pick up
/// the usual (q - q^{-1}) correction.
pub fn oq_explicit_relations(n: usize) -> Vec<NCPoly> {
    let q = Scalar::q();
    let qq = Scalar::q_minus_qinv();
    let mut rels = Vec::new();
    let pair = |a: GenId, b: GenId| {
        &NCPoly::gen(a) * &NCPoly::gen(b)
    };
    for k in 1..=n {
        for i in 1..=n {
            for j in i + 1..=n {
                rels.push(&pair(t(k, i), t(k, j)) - &pair(t(k, j), t(k, i)).scale(&q));
                rels.push(&pair(t(i, k), t(j, k)) - &pair(t(j, k), t(i, k)).scale(&q));
            }
        }
    }
    for i in 1..=n {
        for k in i + 1..=n {
            for j in 1..=n {
                for l in j + 1..=n {
                    rels.push(&pair(t(i, l), t(k, j)) - &pair(t(k, j), t(i, l)));
                    rels.push(
                        &(&pair(t(i, j), t(k, l)) - &pair(t(k, l), t(i, j)))
                            - &pair(t(k, j), t(i, l)).scale(&qq),
                    );
                }
            }
        }
    }
    rels
}

/// Reverse every word; the defining map of an opposite algebra.
pub fn opposite(poly: &NCPoly) -> NCPoly {
    NCPoly::from_terms(poly.terms().map(|(w, c)| {
        let mut rw = w.clone();
        rw.reverse();
        (rw, c.clone())
    }))
}

pub fn rename_gens(poly: &NCPoly, f: impl Fn(GenId) -> GenId) -> NCPoly {
    NCPoly::from_terms(
        poly.terms()
            .map(|(w, c)| (w.iter().map(|&g| f(g)).collect::<Word>(), c.clone())),
    )
}

pub fn oqop_explicit_relations(n: usize) -> Vec<NCPoly> {
    oq_explicit_relations(n)
        .iter()
        .map(|r| rename_gens(&opposite(r), |g| gen(GenKind::P, g.i as usize, g.j as usize)))
        .collect()
}

/// Index transposition g[i,j] -> g[j,i]; an algebra automorphism of both
/// the coordinate ring and its opposite.
pub fn transpose_indices(poly: &NCPoly) -> NCPoly {
    rename_gens(poly, |g| gen(g.kind, g.j as usize, g.i as usize))
}

fn star_kind(kind: GenKind) -> GenKind {
    match kind {
        GenKind::T => GenKind::P,
        GenKind::P => GenKind::T,
        GenKind::X => GenKind::D,
        GenKind::D => GenKind::X,
        GenKind::Tp => GenKind::Pp,
        GenKind::Pp => GenKind::Tp,
        GenKind::Xp => GenKind::Dp,
        GenKind::Dp => GenKind::Xp,
    }
}

/// The algebra anti-isomorphism pairing each generator with its dual:
/// words reverse and kinds swap t <-> p (and x <-> d).
pub fn star(poly: &NCPoly) -> NCPoly {
    NCPoly::from_terms(poly.terms().map(|(w, c)| {
        let mut rw: Word = w
            .iter()
            .map(|&g| gen(star_kind(g.kind), g.i as usize, g.j as usize))
            .collect();
        rw.reverse();
        (rw, c.clone())
    }))
}

/// One generator of the acting Hopf algebra. `K(r)` is the torus element
/// attached to the r-th diagonal weight; `E(k)`/`F(k)` are attached to the
/// k-th simple root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ULetter {
    E(usize),
    F(usize),
    K(usize),
    Kinv(usize),
}

impl ULetter {
    pub fn name(&self) -> String {
        match self {
            ULetter::E(k) => format!("E{k}"),
            ULetter::F(k) => format!("F{k}"),
            ULetter::K(r) => format!("K{r}"),
            ULetter::Kinv(r) => format!("K{r}^-1"),
        }
    }
}

/// E_k, F_k for k < n and K_r^{+-1} for r <= n.
pub fn standard_letters(n: usize) -> Vec<ULetter> {
    let mut out = Vec::new();
    for k in 1..n {
        out.push(ULetter::E(k));
        out.push(ULetter::F(k));
    }
    for r in 1..=n {
        out.push(ULetter::K(r));
        out.push(ULetter::Kinv(r));
    }
    out
}

/// How single generators respond to single Hopf-algebra letters. The word
/// actions below extend any implementation multiplicatively.
pub trait LetterAction {
    fn e_left(&self, k: usize, g: GenId) -> NCPoly;
    fn f_left(&self, k: usize, g: GenId) -> NCPoly;
    /// Exponent a in K_r . g = q^a g.
    fn k_exp_left(&self, r: usize, g: GenId) -> i64;
    fn e_right(&self, g: GenId, k: usize) -> NCPoly;
    fn f_right(&self, g: GenId, k: usize) -> NCPoly;
    fn k_exp_right(&self, g: GenId, r: usize) -> i64;
}

/// The defining two-sided action on t and p generators: E and F shift the
/// row index from the left and the column index from the right, torus
/// letters read off the matching weight. On the opposite copy the shifts
/// move the other way and carry the signs -q^{-1} and -q.
pub struct StandardTable {
    pub n: usize,
}

impl LetterAction for StandardTable {
    fn e_left(&self, k: usize, g: GenId) -> NCPoly {
        let (i, j) = (g.i as usize, g.j as usize);
        match g.kind {
            GenKind::T => {
                if i == k + 1 {
                    NCPoly::gen(t(k, j))
                } else {
                    NCPoly::zero()
                }
            }
            GenKind::P => {
                if i == k {
                    NCPoly::gen(p(k + 1, j)).scale(&Scalar::q_pow(-1)).scale(&Scalar::from_int(-1))
                } else {
                    NCPoly::zero()
                }
            }
            _ => panic!("letter action undefined for {:?}", g.kind),
        }
    }

    fn f_left(&self, k: usize, g: GenId) -> NCPoly {
        let (i, j) = (g.i as usize, g.j as usize);
        match g.kind {
            GenKind::T => {
                if i == k {
                    NCPoly::gen(t(k + 1, j))
                } else {
                    NCPoly::zero()
                }
            }
            GenKind::P => {
                if i == k + 1 {
                    NCPoly::gen(p(k, j)).scale(&Scalar::q()).scale(&Scalar::from_int(-1))
                } else {
                    NCPoly::zero()
                }
            }
            _ => panic!("letter action undefined for {:?}", g.kind),
        }
    }

    fn k_exp_left(&self, r: usize, g: GenId) -> i64 {
        let i = g.i as usize;
        match g.kind {
            GenKind::T => (i == r) as i64,
            GenKind::P => -((i == r) as i64),
            _ => panic!("letter action undefined for {:?}", g.kind),
        }
    }

    fn e_right(&self, g: GenId, k: usize) -> NCPoly {
        let (i, j) = (g.i as usize, g.j as usize);
        match g.kind {
            GenKind::T => {
                if j == k {
                    NCPoly::gen(t(i, k + 1))
                } else {
                    NCPoly::zero()
                }
            }
            GenKind::P => {
                if j == k + 1 {
                    NCPoly::gen(p(i, k)).scale(&Scalar::q()).scale(&Scalar::from_int(-1))
                } else {
                    NCPoly::zero()
                }
            }
            _ => panic!("letter action undefined for {:?}", g.kind),
        }
    }

    fn f_right(&self, g: GenId, k: usize) -> NCPoly {
        let (i, j) = (g.i as usize, g.j as usize);
        match g.kind {
            GenKind::T => {
                if j == k + 1 {
                    NCPoly::gen(t(i, k))
                } else {
                    NCPoly::zero()
                }
            }
            GenKind::P => {
                if j == k {
                    NCPoly::gen(p(i, k + 1)).scale(&Scalar::q_pow(-1)).scale(&Scalar::from_int(-1))
                } else {
                    NCPoly::zero()
                }
            }
            _ => panic!("letter action undefined for {:?}", g.kind),
        }
    }

    fn k_exp_right(&self, g: GenId, r: usize) -> i64 {
        let j = g.j as usize;
        match g.kind {
            GenKind::T => (j == r) as i64,
            GenKind::P => -((j == r) as i64),
            _ => panic!("letter action undefined for {:?}", g.kind),
        }
    }
}

fn k_simple_exp_left(tab: &impl LetterAction, k: usize, g: GenId) -> i64 {
    tab.k_exp_left(k, g) - tab.k_exp_left(k + 1, g)
}

fn k_simple_exp_right(tab: &impl LetterAction, g: GenId, k: usize) -> i64 {
    tab.k_exp_right(g, k) - tab.k_exp_right(g, k + 1)
}

fn word_poly(w: &[GenId]) -> NCPoly {
    NCPoly::monomial(w.to_vec(), Scalar::one())
}

fn letter_word_left(tab: &impl LetterAction, l: ULetter, w: &[GenId]) -> NCPoly {
    match l {
        ULetter::K(r) | ULetter::Kinv(r) => {
            let mut e: i64 = w.iter().map(|&g| tab.k_exp_left(r, g)).sum();
            if matches!(l, ULetter::Kinv(_)) {
                e = -e;
            }
            NCPoly::monomial(w.to_vec(), Scalar::q_pow(e))
        }
        ULetter::E(k) => {
            if w.is_empty() {
                return NCPoly::zero();
            }
            let (g, rest) = (w[0], &w[1..]);
            let head = &tab.e_left(k, g) * &word_poly(rest);
            let weight = Scalar::q_pow(k_simple_exp_left(tab, k, g));
            let tail = &NCPoly::gen(g) * &letter_word_left(tab, l, rest);
            &head + &tail.scale(&weight)
        }
        ULetter::F(k) => {
            if w.is_empty() {
                return NCPoly::zero();
            }
            let (g, rest) = (w[0], &w[1..]);
            let rest_weight: i64 = rest.iter().map(|&h| k_simple_exp_left(tab, k, h)).sum();
            let head = (&tab.f_left(k, g) * &word_poly(rest)).scale(&Scalar::q_pow(-rest_weight));
            let tail = &NCPoly::gen(g) * &letter_word_left(tab, l, rest);
            &head + &tail
        }
    }
}

fn letter_word_right(tab: &impl LetterAction, w: &[GenId], l: ULetter) -> NCPoly {
    match l {
        ULetter::K(r) | ULetter::Kinv(r) => {
            let mut e: i64 = w.iter().map(|&g| tab.k_exp_right(g, r)).sum();
            if matches!(l, ULetter::Kinv(_)) {
                e = -e;
            }
            NCPoly::monomial(w.to_vec(), Scalar::q_pow(e))
        }
        ULetter::E(k) => {
            if w.is_empty() {
                return NCPoly::zero();
            }
            let (init, g) = (&w[..w.len() - 1], w[w.len() - 1]);
            let head = &letter_word_right(tab, init, l) * &NCPoly::gen(g);
            let init_weight: i64 = init.iter().map(|&h| k_simple_exp_right(tab, h, k)).sum();
            let tail = (&word_poly(init) * &tab.e_right(g, k)).scale(&Scalar::q_pow(init_weight));
            &head + &tail
        }
        ULetter::F(k) => {
            if w.is_empty() {
                return NCPoly::zero();
            }
            let (init, g) = (&w[..w.len() - 1], w[w.len() - 1]);
            let weight = Scalar::q_pow(-k_simple_exp_right(tab, g, k));
            let head = (&letter_word_right(tab, init, l) * &NCPoly::gen(g)).scale(&weight);
            let tail = &word_poly(init) * &tab.f_right(g, k);
            &head + &tail
        }
    }
}

pub fn act_left(tab: &impl LetterAction, l: ULetter, poly: &NCPoly) -> NCPoly {
    let mut out = NCPoly::zero();
    for (w, c) in poly.terms() {
        out = &out + &letter_word_left(tab, l, w).scale(c);
    }
    out
}

pub fn act_right(tab: &impl LetterAction, poly: &NCPoly, l: ULetter) -> NCPoly {
    let mut out = NCPoly::zero();
    for (w, c) in poly.terms() {
        out = &out + &letter_word_right(tab, w, l).scale(c);
    }
    out
}

/// A finite sum of scalar multiples of letter words.
#[derive(Clone, Debug)]
pub struct UElt {
    pub terms: Vec<(Scalar, Vec<ULetter>)>,
}

impl UElt {
    pub fn letter(l: ULetter) -> Self {
        UElt {
            terms: vec![(Scalar::one(), vec![l])],
        }
    }

    pub fn word(ls: Vec<ULetter>) -> Self {
        UElt {
            terms: vec![(Scalar::one(), ls)],
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        UElt {
            terms: self
                .terms
                .iter()
                .map(|(c, w)| (c * s, w.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &UElt) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        UElt { terms }
    }

    pub fn sub(&self, other: &UElt) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn mul(&self, other: &UElt) -> Self {
        let mut terms = Vec::new();
        for (c, w) in &self.terms {
            for (c2, w2) in &other.terms {
                let mut word = w.clone();
                word.extend(w2.iter().copied());
                terms.push((c * c2, word));
            }
        }
        UElt { terms }
    }

    pub fn act_left(&self, tab: &impl LetterAction, poly: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (c, word) in &self.terms {
            let mut cur = poly.clone();
            for &l in word.iter().rev() {
                cur = act_left(tab, l, &cur);
            }
            out = &out + &cur.scale(c);
        }
        out
    }

    pub fn act_right(&self, tab: &impl LetterAction, poly: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (c, word) in &self.terms {
            let mut cur = poly.clone();
            for &l in word.iter() {
                cur = act_right(tab, &cur, l);
            }
            out = &out + &cur.scale(c);
        }
        out
    }
}

/// The linear antiautomorphism exchanging E and F:
/// E_k -> q^{-1} F_k K_k, F_k -> q K_k^{-1} E_k, torus letters fixed.
pub fn natural_letter(l: ULetter) -> UElt {
    match l {
        ULetter::E(k) => UElt::word(vec![ULetter::F(k), ULetter::K(k), ULetter::Kinv(k + 1)])
            .scale(&Scalar::q_pow(-1)),
        ULetter::F(k) => UElt::word(vec![ULetter::Kinv(k), ULetter::K(k + 1), ULetter::E(k)])
            .scale(&Scalar::q()),
        ULetter::K(_) | ULetter::Kinv(_) => UElt::letter(l),
    }
}

pub fn natural_elt(u: &UElt) -> UElt {
    let mut out = UElt { terms: Vec::new() };
    for (c, word) in &u.terms {
        let mut prod = UElt {
            terms: vec![(c.clone(), Vec::new())],
        };
        for &l in word.iter().rev() {
            prod = prod.mul(&natural_letter(l));
        }
        out = out.add(&prod);
    }
    out
}

/// Closed form of the composite a -> (S(a))^natural on letters.
pub fn natural_antipode_letter(l: ULetter) -> UElt {
    match l {
        ULetter::E(k) => UElt::letter(ULetter::F(k)).scale(&-&Scalar::q_pow(-1)),
        ULetter::F(k) => UElt::letter(ULetter::E(k)).scale(&-&Scalar::q()),
        ULetter::K(r) => UElt::letter(ULetter::Kinv(r)),
        ULetter::Kinv(r) => UElt::letter(ULetter::K(r)),
    }
}

/// Closed form of a -> (S^{-1}(a))^natural on letters.
pub fn natural_antipode_inv_letter(l: ULetter) -> UElt {
    match l {
        ULetter::E(k) => UElt::letter(ULetter::F(k)).scale(&-&Scalar::q()),
        ULetter::F(k) => UElt::letter(ULetter::E(k)).scale(&-&Scalar::q_pow(-1)),
        ULetter::K(r) => UElt::letter(ULetter::Kinv(r)),
        ULetter::Kinv(r) => UElt::letter(ULetter::K(r)),
    }
}

/// Antipode on letters: S(E_k) = -K_k^{-1} E_k, S(F_k) = -F_k K_k,
/// S(K_r) = K_r^{-1}.
pub fn antipode_letter(l: ULetter) -> UElt {
    match l {
        ULetter::E(k) => UElt::word(vec![ULetter::Kinv(k), ULetter::K(k + 1), ULetter::E(k)])
            .scale(&Scalar::from_int(-1)),
        ULetter::F(k) => UElt::word(vec![ULetter::F(k), ULetter::K(k), ULetter::Kinv(k + 1)])
            .scale(&Scalar::from_int(-1)),
        ULetter::K(r) => UElt::letter(ULetter::Kinv(r)),
        ULetter::Kinv(r) => UElt::letter(ULetter::K(r)),
    }
}

/// Inverse antipode on letters: S^{-1}(E_k) = -E_k K_k^{-1},
/// S^{-1}(F_k) = -K_k F_k.
pub fn antipode_inv_letter(l: ULetter) -> UElt {
    match l {
        ULetter::E(k) => UElt::word(vec![ULetter::E(k), ULetter::Kinv(k), ULetter::K(k + 1)])
            .scale(&Scalar::from_int(-1)),
        ULetter::F(k) => UElt::word(vec![ULetter::K(k), ULetter::Kinv(k + 1), ULetter::F(k)])
            .scale(&Scalar::from_int(-1)),
        ULetter::K(r) => UElt::letter(ULetter::Kinv(r)),
        ULetter::Kinv(r) => UElt::letter(ULetter::K(r)),
    }
}

/// Checks that every letter maps the linear span of the relations into
/// itself, from the given side.
pub fn check_relation_stability(
    pres: &Presentation,
    tab: &impl LetterAction,
    letters: &[ULetter],
    from_left: bool,
) -> Result<(), String> {
    let rels = pres.relations();
    let span = Span::new(pres.order().clone(), rels.clone());
    for &l in letters {
        for (idx, rel) in rels.iter().enumerate() {
            let image = if from_left {
                act_left(tab, l, rel)
            } else {
                act_right(tab, rel, l)
            };
            if !span.contains(&image) {
                let side = if from_left { "left" } else { "right" };
                return Err(format!(
                    "{side} action of {} sends relation #{idx} outside the relation span",
                    l.name()
                ));
            }
        }
    }
    Ok(())
}
