//! Free noncommutative polynomials over Q(q) in doubly indexed generators.
//!
//! Generators come in eight kinds: coordinate generators `t[i,j]`, dual
//! coordinates `p[i,j]`, invariant generators `x[i,j]`, dual invariants
//! `d[i,j]`, and primed copies of each (`t'`, `p'`, `x'`, `d'`) for extended
//! algebras and second tensor factors. A polynomial is a finitely supported
//! map from words to scalars with no zero values stored.

use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GenKind {
    T,
    P,
    X,
    D,
    Tp,
    Pp,
    Xp,
    Dp,
}

impl GenKind {
    pub fn head(self) -> &'static str {
        match self {
            GenKind::T => "t",
            GenKind::P => "p",
            GenKind::X => "x",
            GenKind::D => "d",
            GenKind::Tp => "t'",
            GenKind::Pp => "p'",
            GenKind::Xp => "x'",
            GenKind::Dp => "d'",
        }
    }
}

/// A single generator `kind[i,j]` with 1-based indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GenId {
    pub kind: GenKind,
    pub i: u8,
    pub j: u8,
}

pub fn gen(kind: GenKind, i: usize, j: usize) -> GenId {
    GenId {
        kind,
        i: i as u8,
        j: j as u8,
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.kind.head(), self.i, self.j)
    }
}

pub type Word = Vec<GenId>;

/// Graded lexicographic word order induced by an explicit generator list.
#[derive(Clone, Debug)]
pub struct OrderSpec {
    gens: Vec<GenId>,
    rank: BTreeMap<GenId, usize>,
}

impl OrderSpec {
    pub fn new(gens: Vec<GenId>) -> Self {
        let rank = gens.iter().enumerate().map(|(k, &g)| (g, k)).collect();
        OrderSpec { gens, rank }
    }

    pub fn reversed(&self) -> Self {
        let mut gens = self.gens.clone();
        gens.reverse();
        OrderSpec::new(gens)
    }

    pub fn gens(&self) -> &[GenId] {
        &self.gens
    }

    pub fn rank(&self, g: GenId) -> usize {
        *self
            .rank
            .get(&g)
            .unwrap_or_else(|| panic!("generator {g} not in order"))
    }

    /// Compare words by length first, then left-to-right by generator rank.
    pub fn word_cmp(&self, a: &Word, b: &Word) -> std::cmp::Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.iter().zip(b.iter()) {
                let c = self.rank(*x).cmp(&self.rank(*y));
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    }

    /// True if the letters of `w` appear in nondecreasing rank order.
    pub fn is_sorted_word(&self, w: &Word) -> bool {
        w.windows(2).all(|p| self.rank(p[0]) <= self.rank(p[1]))
    }
}

/// Noncommutative polynomial: finitely supported `Word -> Scalar`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        NCPoly::monomial(Vec::new(), Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        NCPoly::monomial(Vec::new(), c)
    }

    pub fn gen(g: GenId) -> Self {
        NCPoly::monomial(vec![g], Scalar::one())
    }

    pub fn monomial(w: Word, c: Scalar) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms(ts: impl IntoIterator<Item = (Word, Scalar)>) -> Self {
        let mut p = NCPoly::zero();
        for (w, c) in ts {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Maximal word length in the support, or None for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), a * c))
                .collect(),
        }
    }

    pub fn map_scalars(&self, f: impl Fn(&Scalar) -> Scalar) -> NCPoly {
        let mut p = NCPoly::zero();
        for (w, a) in &self.terms {
            p.add_term(w.clone(), f(a));
        }
        p
    }

    /// Apply the algebra map sending each generator to `f(g)`, with an
    /// optional twist of coefficients (e.g. the bar involution for
    /// semilinear maps).
    pub fn substitute(&self, f: &dyn Fn(GenId) -> NCPoly, bar_coefficients: bool) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NCPoly::constant(if bar_coefficients { c.bar() } else { c.clone() });
            for g in w {
                acc = &acc * &f(*g);
            }
            out = &out + &acc;
        }
        out
    }

    /// Leading (maximal) word under the given order, with its coefficient.
    pub fn leading_term(&self, order: &OrderSpec) -> Option<(Word, Scalar)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.word_cmp(a, b))
            .map(|(w, c)| (w.clone(), c.clone()))
    }

    /// Restrict to homogeneous degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == d)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }
}

impl std::ops::Add<&NCPoly> for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub<&NCPoly> for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl std::ops::Mul<&NCPoly> for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                out.add_term(w, c1 * c2);
            }
        }
        out
    }
}

impl std::ops::Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_poly_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for NCPoly {
            type Output = NCPoly;
            fn $method(self, rhs: NCPoly) -> NCPoly {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&NCPoly> for NCPoly {
            type Output = NCPoly;
            fn $method(self, rhs: &NCPoly) -> NCPoly {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<NCPoly> for &NCPoly {
            type Output = NCPoly;
            fn $method(self, rhs: NCPoly) -> NCPoly {
                self.$method(&rhs)
            }
        }
    };
}
forward_poly_binop!(Add, add);
forward_poly_binop!(Sub, sub);
forward_poly_binop!(Mul, mul);

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ts: Vec<(&Word, &Scalar)> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        for (k, (w, c)) in ts.iter().enumerate() {
            let neg = c.leading_coeff_negative();
            let cabs = if neg { -*c } else { (*c).clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let need_coeff = !cabs.is_one() || w.is_empty();
            if need_coeff {
                let s = cabs.laurent_string();
                if cabs.num_terms() > 1 || !cabs.is_laurent() {
                    write!(f, "({s})")?;
                } else {
                    write!(f, "{s}")?;
                }
                if !w.is_empty() {
                    write!(f, "*")?;
                }
            }
            for (m, g) in w.iter().enumerate() {
                if m > 0 {
                    write!(f, "*")?;
                }
                write!(f, "{g}")?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for NCPoly {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

// ---------------------------------------------------------------------------
// Expression parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(num_bigint::BigInt),
    Q,
    Gen(GenId),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let b: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < b.len() {
        let c = b[k];
        match c {
            ' ' | '\t' | '\n' => k += 1,
            '+' => {
                out.push(Tok::Plus);
                k += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                k += 1;
            }
            '*' => {
                out.push(Tok::Star);
                k += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                k += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                k += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                k += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                k += 1;
            }
            '0'..='9' => {
                let start = k;
                while k < b.len() && b[k].is_ascii_digit() {
                    k += 1;
                }
                let digits: String = b[start..k].iter().collect();
                out.push(Tok::Int(digits.parse().map_err(|e| format!("{e}"))?));
            }
            'q' => {
                out.push(Tok::Q);
                k += 1;
            }
            't' | 'p' | 'x' | 'd' => {
                let mut kind = match c {
                    't' => GenKind::T,
                    'p' => GenKind::P,
                    'x' => GenKind::X,
                    _ => GenKind::D,
                };
                k += 1;
                if k < b.len() && b[k] == '\'' {
                    kind = match kind {
                        GenKind::T => GenKind::Tp,
                        GenKind::P => GenKind::Pp,
                        GenKind::X => GenKind::Xp,
                        GenKind::D => GenKind::Dp,
                        other => other,
                    };
                    k += 1;
                }
                if k >= b.len() || b[k] != '[' {
                    return Err(format!("expected '[' after generator head at {k}"));
                }
                k += 1;
                let read_int = |k: &mut usize| -> Result<usize, String> {
                    let start = *k;
                    while *k < b.len() && b[*k].is_ascii_digit() {
                        *k += 1;
                    }
                    if start == *k {
                        return Err(format!("expected index at {start}"));
                    }
                    let digits: String = b[start..*k].iter().collect();
                    digits.parse().map_err(|e| format!("{e}"))
                };
                let i = read_int(&mut k)?;
                if k >= b.len() || b[k] != ',' {
                    return Err("expected ',' in generator index".into());
                }
                k += 1;
                let j = read_int(&mut k)?;
                if k >= b.len() || b[k] != ']' {
                    return Err("expected ']' in generator index".into());
                }
                k += 1;
                out.push(Tok::Gen(gen(kind, i, j)));
            }
            other => return Err(format!("unexpected character '{other}'")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<NCPoly, String> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<NCPoly, String> {
        let mut acc = self.factor()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Star => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Tok::Slash => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    let c = as_scalar(&rhs).ok_or("division by a non-scalar")?;
                    if c.is_zero() {
                        return Err("division by zero".into());
                    }
                    acc = acc.scale(&c.inv());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<NCPoly, String> {
        let mut negs = 0usize;
        while matches!(self.peek(), Some(Tok::Minus)) {
            negs += 1;
            self.pos += 1;
        }
        let mut base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let mut sign = 1i64;
            if matches!(self.peek(), Some(Tok::Minus)) {
                sign = -1;
                self.pos += 1;
            }
            let e = match self.next() {
                Some(Tok::Int(n)) => {
                    use num_traits::ToPrimitive;
                    n.to_i64().ok_or("exponent too large")?
                }
                _ => return Err("expected integer exponent".into()),
            };
            let e = sign * e;
            base = if e >= 0 {
                let mut acc = NCPoly::one();
                for _ in 0..e {
                    acc = &acc * &base;
                }
                acc
            } else {
                let c = as_scalar(&base).ok_or("negative power of a non-scalar")?;
                NCPoly::constant(c.pow(e))
            };
        }
        if negs % 2 == 1 {
            base = -&base;
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<NCPoly, String> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(NCPoly::constant(Scalar::normalized(
                crate::scalar::IntPoly::constant(n),
                0,
                crate::scalar::IntPoly::one(),
            ))),
            Some(Tok::Q) => Ok(NCPoly::constant(Scalar::q())),
            Some(Tok::Gen(g)) => Ok(NCPoly::gen(g)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err("expected ')'".into()),
                }
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

fn as_scalar(p: &NCPoly) -> Option<Scalar> {
    if p.is_zero() {
        return Some(Scalar::zero());
    }
    if p.terms.len() == 1 {
        if let Some((w, c)) = p.terms.iter().next() {
            if w.is_empty() {
                return Some(c.clone());
            }
        }
    }
    None
}

/// Parse a noncommutative polynomial expression such as
/// `t[1,1]*t[2,2] - (q-q^-1)*t[2,1]*t[1,2]`.
pub fn parse_poly(s: &str) -> Result<NCPoly, String> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input at token {}", p.pos));
    }
    Ok(e)
}

/// Parse a scalar expression such as `(q^2-1)/(q)` or `q - q^-1`.
pub fn parse_scalar(s: &str) -> Result<Scalar, String> {
    let p = parse_poly(s)?;
    as_scalar(&p).ok_or_else(|| format!("expression '{s}' is not a scalar"))
}
