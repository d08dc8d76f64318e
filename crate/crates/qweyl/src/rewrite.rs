//! Rewriting machinery for algebras presented by relations: oriented rule
//! systems, normal forms, exact span arithmetic, graded and filtered
//! dimension counting, PBW-basis certification, and confluence sampling.
//!
//! A [`Presentation`] stores the reduced row echelon basis of the relation
//! span with respect to a graded-lexicographic word order; every relation is
//! oriented so that its leading word rewrites to strictly smaller terms.

use crate::poly::{GenId, NCPoly, OrderSpec, Word};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

/// Sort key realizing the graded-lexicographic order on words as the
/// natural order on `(length, ranks)` pairs.
fn word_key(order: &OrderSpec, w: &Word) -> (usize, Vec<usize>) {
    (w.len(), w.iter().map(|&g| order.rank(g)).collect())
}

/// All words of the given degree over the listed generators, in
/// lexicographic order by generator rank.
pub fn words_of_degree(gens: &[GenId], d: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        let mut next = Vec::with_capacity(out.len() * gens.len());
        for w in &out {
            for &g in gens {
                let mut v = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// An exact linear subspace of the free algebra, held as the canonical
/// monic reduced row echelon basis with respect to a word order. Two spans
/// are equal iff their canonical bases agree.
#[derive(Clone, Debug)]
pub struct Span {
    order: OrderSpec,
    /// Monic rows with pairwise distinct leading words; no row's leading
    /// word occurs anywhere in another row. Keyed by the leading word's
    /// sort key, ascending.
    rows: BTreeMap<(usize, Vec<usize>), NCPoly>,
}

impl Span {
    pub fn new(order: OrderSpec, vecs: impl IntoIterator<Item = NCPoly>) -> Span {
        let mut span = Span {
            order,
            rows: BTreeMap::new(),
        };
        for v in vecs {
            span.insert(v);
        }
        span.back_substitute();
        span
    }

    fn insert(&mut self, v: NCPoly) {
        let mut r = v;
        loop {
            if r.is_zero() {
                return;
            }
            let (lw, lc) = r.leading_term(&self.order).unwrap();
            let key = word_key(&self.order, &lw);
            match self.rows.get(&key) {
                Some(p) => r = &r - &p.scale(&lc),
                None => {
                    self.rows.insert(key, r.scale(&lc.inv()));
                    return;
                }
            }
        }
    }

    /// Eliminate every pivot word from the tails of the other rows,
    /// producing the canonical basis. Rows are processed by ascending
    /// leading word; tails only contain smaller words, so one pass
    /// suffices.
    fn back_substitute(&mut self) {
        let keys: Vec<_> = self.rows.keys().cloned().collect();
        for key in keys {
            let mut r = self.rows.remove(&key).unwrap();
            r = self.reduce_tail(r);
            self.rows.insert(key, r);
        }
    }

    fn reduce_tail(&self, mut r: NCPoly) -> NCPoly {
        loop {
            let hit = r
                .terms()
                .find(|(w, _)| {
                    let k = word_key(&self.order, w);
                    self.rows.contains_key(&k)
                })
                .map(|(w, c)| (w.clone(), c.clone()));
            match hit {
                Some((w, c)) => {
                    let p = &self.rows[&word_key(&self.order, &w)];
                    r = &r - &p.scale(&c);
                }
                None => return r,
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &NCPoly> {
        self.rows.values()
    }

    pub fn order(&self) -> &OrderSpec {
        &self.order
    }

    /// Remainder of `p` after full reduction by the basis; zero iff `p`
    /// lies in the span.
    pub fn reduce(&self, p: &NCPoly) -> NCPoly {
        self.reduce_tail(p.clone())
    }

    pub fn contains(&self, p: &NCPoly) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn equals(&self, other: &Span) -> bool {
        let a: Vec<&NCPoly> = self.rows.values().collect();
        let b: Vec<&NCPoly> = other.rows.values().collect();
        a == b
    }
}

/// True iff the two lists of polynomials span the same subspace of the
/// free algebra.
pub fn span_equal(order: &OrderSpec, a: &[NCPoly], b: &[NCPoly]) -> bool {
    Span::new(order.clone(), a.to_vec()).equals(&Span::new(order.clone(), b.to_vec()))
}

/// Exact rank of a family of vectors, cross-checked by evaluating the
/// coefficients at integer values of q and recomputing the rank over the
/// rationals. A specialization can only lower the rank; at least one of
/// the sample points must reproduce the exact rank, otherwise the
/// arithmetic itself is in doubt and we abort loudly.
pub fn rank_checked(order: &OrderSpec, rows: &[NCPoly]) -> usize {
    let exact = Span::new(order.clone(), rows.to_vec()).rank();
    const SAMPLE_POINTS: [i64; 5] = [2, 3, 5, 7, 11];
    for qv in SAMPLE_POINTS {
        match rank_at(order, rows, qv) {
            None => continue,
            Some(r) if r == exact => return exact,
            Some(r) => {
                assert!(
                    r < exact,
                    "specialized rank {r} exceeds exact rank {exact}: arithmetic bug"
                );
            }
        }
    }
    panic!("no sample point confirmed the exact rank {exact}");
}

/// Rank after evaluating every coefficient at q = qv, or None if any
/// coefficient has a pole there.
fn rank_at(order: &OrderSpec, rows: &[NCPoly], qv: i64) -> Option<usize> {
    let at = BigRational::from_integer(BigInt::from(qv));
    let mut pivots: BTreeMap<(usize, Vec<usize>), BTreeMap<(usize, Vec<usize>), BigRational>> =
        BTreeMap::new();
    for p in rows {
        let mut r: BTreeMap<(usize, Vec<usize>), BigRational> = BTreeMap::new();
        for (w, c) in p.terms() {
            let v = c.eval_at(&at).ok()?;
            if !v.is_zero() {
                r.insert(word_key(order, w), v);
            }
        }
        loop {
            let Some((lead, lc)) = r.iter().next_back().map(|(k, v)| (k.clone(), v.clone()))
            else {
                break;
            };
            match pivots.get(&lead) {
                Some(p) => {
                    for (k, v) in p {
                        let delta = v * &lc;
                        let entry = r.entry(k.clone()).or_insert_with(BigRational::zero);
                        *entry -= delta;
                        if entry.is_zero() {
                            r.remove(k);
                        }
                    }
                }
                None => {
                    let inv = lc.recip();
                    let monic: BTreeMap<_, _> =
                        r.iter().map(|(k, v)| (k.clone(), v * &inv)).collect();
                    pivots.insert(lead, monic);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

/// An algebra presentation: generators with a word order plus the relation
/// span, stored as oriented rewrite rules `lead -> lower terms`.
#[derive(Clone, Debug)]
pub struct Presentation {
    order: OrderSpec,
    /// Replacement for each leading word (the relation is
    /// `lead - replacement`).
    rules: HashMap<Word, NCPoly>,
    lead_lengths: Vec<usize>,
}

const DEFAULT_STEP_BUDGET: usize = 10_000_000;

impl Presentation {
    /// Build from arbitrary relation polynomials; the relation span is
    /// interreduced to its canonical echelon basis. Fails if the span
    /// contains a nonzero constant (inconsistent presentation).
    pub fn new(order: OrderSpec, relations: Vec<NCPoly>) -> Result<Presentation, String> {
        let span = Span::new(order.clone(), relations);
        let mut rules = HashMap::new();
        let mut lengths = Vec::new();
        for row in span.rows.values() {
            let (lead, _) = row.leading_term(&order).unwrap();
            if lead.is_empty() {
                return Err("relation span contains a nonzero constant".into());
            }
            let replacement = &NCPoly::monomial(lead.clone(), Scalar::one()) - row;
            if !lengths.contains(&lead.len()) {
                lengths.push(lead.len());
            }
            rules.insert(lead, replacement);
        }
        lengths.sort_unstable();
        Ok(Presentation {
            order,
            rules,
            lead_lengths: lengths,
        })
    }

    pub fn order(&self) -> &OrderSpec {
        &self.order
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    /// The canonical relation basis, ascending by leading word.
    pub fn relations(&self) -> Vec<NCPoly> {
        let mut rels: Vec<(Word, NCPoly)> = self
            .rules
            .iter()
            .map(|(lead, rhs)| {
                (
                    lead.clone(),
                    &NCPoly::monomial(lead.clone(), Scalar::one()) - rhs,
                )
            })
            .collect();
        rels.sort_by(|(a, _), (b, _)| word_key(&self.order, a).cmp(&word_key(&self.order, b)));
        rels.into_iter().map(|(_, r)| r).collect()
    }

    /// The presentation whose relations are the top homogeneous parts of
    /// this one's (the associated graded algebra of a filtered
    /// presentation).
    pub fn homogeneous_top(&self) -> Presentation {
        let rels = self
            .relations()
            .iter()
            .map(|r| r.homogeneous_part(r.degree().unwrap()))
            .collect();
        Presentation::new(self.order.clone(), rels).expect("top parts stay consistent")
    }

    pub fn is_homogeneous(&self) -> bool {
        self.relations().iter().all(|r| {
            let d = r.degree().unwrap();
            r.terms().all(|(w, _)| w.len() == d)
        })
    }

    /// Leftmost position (and matched length) at which some rule applies
    /// to `w`.
    fn find_redex(&self, w: &Word) -> Option<(usize, usize)> {
        for pos in 0..w.len() {
            for &len in &self.lead_lengths {
                if pos + len > w.len() {
                    break;
                }
                if self.rules.contains_key(&w[pos..pos + len]) {
                    return Some((pos, len));
                }
            }
        }
        None
    }

    pub fn is_irreducible_word(&self, w: &Word) -> bool {
        self.find_redex(w).is_none()
    }

    fn reduce_word(
        &self,
        w: &Word,
        memo: &mut HashMap<Word, NCPoly>,
        budget: &mut usize,
    ) -> Result<NCPoly, String> {
        if let Some(nf) = memo.get(w) {
            return Ok(nf.clone());
        }
        let Some((pos, len)) = self.find_redex(w) else {
            let nf = NCPoly::monomial(w.clone(), Scalar::one());
            memo.insert(w.clone(), nf.clone());
            return Ok(nf);
        };
        if *budget == 0 {
            return Err("rewrite step budget exhausted".into());
        }
        *budget -= 1;
        let rhs = self.rules[&w[pos..pos + len]].clone();
        let mut acc = NCPoly::zero();
        for (mid, c) in rhs.terms() {
            let mut nw = Vec::with_capacity(w.len() - len + mid.len());
            nw.extend_from_slice(&w[..pos]);
            nw.extend_from_slice(mid);
            nw.extend_from_slice(&w[pos + len..]);
            let sub = self.reduce_word(&nw, memo, budget)?;
            acc = &acc + &sub.scale(c);
        }
        memo.insert(w.clone(), acc.clone());
        Ok(acc)
    }

    /// Normal form by leftmost reduction with an explicit step budget.
    pub fn try_normal_form(&self, p: &NCPoly, budget: usize) -> Result<NCPoly, String> {
        let mut memo = HashMap::new();
        let mut budget = budget;
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let nf = self.reduce_word(w, &mut memo, &mut budget)?;
            out = &out + &nf.scale(c);
        }
        Ok(out)
    }

    pub fn normal_form(&self, p: &NCPoly) -> NCPoly {
        self.try_normal_form(p, DEFAULT_STEP_BUDGET)
            .expect("rewriting did not terminate within the step budget")
    }

    /// True iff `p` reduces to zero. For degree <= 2 this is exact ideal
    /// membership; in higher degree it certifies membership whenever the
    /// system is confluent there.
    pub fn reduces_to_zero(&self, p: &NCPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// All irreducible words of exactly degree `d`.
    pub fn irreducible_words(&self, d: usize) -> Vec<Word> {
        words_of_degree(self.order.gens(), d)
            .into_iter()
            .filter(|w| self.is_irreducible_word(w))
            .collect()
    }

    fn padded_relation_rows(&self, d: usize, filtered: bool) -> Vec<NCPoly> {
        let gens = self.order.gens();
        let mut rows = Vec::new();
        for rel in self.relations() {
            let k = rel.degree().unwrap();
            if k > d {
                continue;
            }
            for du in 0..=(d - k) {
                let dv_max = d - k - du;
                let dvs: Vec<usize> = if filtered {
                    (0..=dv_max).collect()
                } else {
                    vec![dv_max]
                };
                for u in words_of_degree(gens, du) {
                    let up = NCPoly::monomial(u.clone(), Scalar::one());
                    let left = &up * &rel;
                    for &dv in &dvs {
                        for v in words_of_degree(gens, dv) {
                            rows.push(&left * &NCPoly::monomial(v, Scalar::one()));
                        }
                    }
                }
            }
        }
        rows
    }

    /// Dimension of the degree-d component of the graded algebra cut out
    /// by homogeneous relations: number of words minus the exact rank of
    /// the degree-d slice of the relation ideal.
    pub fn graded_dim(&self, d: usize) -> usize {
        assert!(
            self.is_homogeneous(),
            "graded_dim requires homogeneous relations; use filtered_dim"
        );
        let total = self.order.gens().len().pow(d as u32);
        let rows = self.padded_relation_rows(d, false);
        if rows.is_empty() {
            return total;
        }
        total - rank_checked(&self.order, &rows)
    }

    /// Dimension of the filtration component spanned by words of degree
    /// <= d in the algebra presented by (possibly inhomogeneous)
    /// relations.
    pub fn filtered_dim(&self, d: usize) -> usize {
        let m = self.order.gens().len();
        let total: usize = (0..=d).map(|k| m.pow(k as u32)).sum();
        let rows = self.padded_relation_rows(d, true);
        if rows.is_empty() {
            return total;
        }
        total - rank_checked(&self.order, &rows)
    }

    /// Certify that the irreducible words of each degree <= d are exactly
    /// the nondecreasing words in the generator order and that their count
    /// matches the graded dimension.
    pub fn check_pbw(&self, d: usize) -> Result<(), String> {
        for k in 0..=d {
            let irr = self.irreducible_words(k);
            for w in &irr {
                if !self.order.is_sorted_word(w) {
                    let p = NCPoly::monomial(w.clone(), Scalar::one());
                    return Err(format!("irreducible word {p} is not sorted"));
                }
            }
            let dim = self.graded_dim(k);
            if irr.len() != dim {
                return Err(format!(
                    "degree {k}: {} irreducible words but graded dimension {dim}",
                    irr.len()
                ));
            }
        }
        Ok(())
    }

    /// Check that every word of degree <= d with more than one applicable
    /// first rewrite step reduces to the same normal form along each
    /// choice.
    pub fn check_confluence(&self, d: usize) -> Result<(), String> {
        for k in 2..=d {
            for w in words_of_degree(self.order.gens(), k) {
                let mut firsts: Vec<NCPoly> = Vec::new();
                for pos in 0..w.len() {
                    for &len in &self.lead_lengths {
                        if pos + len > w.len() {
                            break;
                        }
                        if let Some(rhs) = self.rules.get(&w[pos..pos + len]) {
                            let mut step = NCPoly::zero();
                            for (mid, c) in rhs.terms() {
                                let mut nw = Vec::with_capacity(w.len() - len + mid.len());
                                nw.extend_from_slice(&w[..pos]);
                                nw.extend_from_slice(mid);
                                nw.extend_from_slice(&w[pos + len..]);
                                step.add_term(nw, c.clone());
                            }
                            firsts.push(step);
                        }
                    }
                }
                if firsts.len() < 2 {
                    continue;
                }
                let nfs: Vec<NCPoly> = firsts.iter().map(|p| self.normal_form(p)).collect();
                for other in &nfs[1..] {
                    if other != &nfs[0] {
                        let p = NCPoly::monomial(w.clone(), Scalar::one());
                        return Err(format!(
                            "word {p} has diverging reductions: {} vs {}",
                            nfs[0], other
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}
