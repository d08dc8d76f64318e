//! Exact arithmetic in the field Q(q) of rational functions in one variable q.
//!
//! A [`Scalar`] is kept in a canonical reduced form
//! `q^shift * num / den` where
//!
//! * `num` is an integer polynomial with nonzero constant term (or zero),
//! * `den` is an integer polynomial with nonzero constant term and positive
//!   leading coefficient,
//! * `gcd(num, den) = 1` in Z[q], content included.
//!
//! All q-powers of a denominator are pulled into `shift`, so denominators are
//! honest polynomials coprime to q and equality is plain structural equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Dense integer polynomial in q; `c[k]` is the coefficient of `q^k`.
/// Invariant: the last entry of `c` is nonzero (the zero polynomial is `c = []`).
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(a: BigInt) -> Self {
        let mut p = IntPoly { c: vec![a] };
        p.trim();
        p
    }

    pub fn monomial(a: BigInt, deg: usize) -> Self {
        if a.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); deg + 1];
        c[deg] = a;
        IntPoly { c }
    }

    pub fn from_coeffs(c: Vec<BigInt>) -> Self {
        let mut p = IntPoly { c };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.c.last(), Some(x) if x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.c.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Index of the lowest nonzero coefficient (0 for the zero polynomial).
    pub fn valuation(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }

    /// Divide by q^k, which must be exact.
    fn shr(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        assert!(self.valuation() >= k, "inexact division by q^{k}");
        IntPoly {
            c: self.c[k..].to_vec(),
        }
    }

    /// Multiply by q^k.
    pub fn shl(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend_from_slice(&self.c);
        IntPoly { c }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            c.push(self.coeff(k) + other.coeff(k));
        }
        IntPoly::from_coeffs(c)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            c.push(self.coeff(k) - other.coeff(k));
        }
        IntPoly::from_coeffs(c)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        IntPoly::from_coeffs(c)
    }

    pub fn mul_bigint(&self, a: &BigInt) -> IntPoly {
        if a.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            c: self.c.iter().map(|x| x * a).collect(),
        }
    }

    /// Coefficient reversal: q^deg * self(1/q).
    pub fn reversed(&self) -> IntPoly {
        let mut c = self.c.clone();
        c.reverse();
        IntPoly::from_coeffs(c)
    }

    /// gcd of all coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for a in &self.c {
            g = num_integer::Integer::gcd(&g, a);
        }
        g
    }

    /// Exact division, panicking if the remainder is nonzero.
    pub fn exact_div(&self, d: &IntPoly) -> IntPoly {
        let (quot, rem) = self.pseudo_like_div(d);
        assert!(rem.is_zero(), "inexact polynomial division");
        quot
    }

    /// Long division over Q, valid (and used) only when the result is exact
    /// over Z; returns (quotient, remainder) with remainder tracked over Q via
    /// scaling by the leading coefficient where needed.
    fn pseudo_like_div(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.leading();
        let mut rem = self.clone();
        let mut quot = IntPoly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let (qc, r) = num_integer::Integer::div_rem(&rem.leading(), &lead);
            if r.is_zero() {
                let m = IntPoly::monomial(qc, rd - dd);
                rem = rem.sub(&m.mul(d));
                quot = quot.add(&m);
            } else {
                break;
            }
        }
        (quot, rem)
    }

    /// Pseudo-remainder: lead(d)^(deg self - deg d + 1) * self mod d.
    fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("pseudo_rem by zero");
        let lead = d.leading();
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let m = IntPoly::monomial(rem.leading(), rd - dd);
            rem = rem.mul_bigint(&lead).sub(&m.mul(d));
        }
        rem
    }

    /// Primitive part with positive leading coefficient.
    fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut ct = self.content();
        if self.leading().is_negative() {
            ct = -ct;
        }
        IntPoly {
            c: self.c.iter().map(|x| x / &ct).collect(),
        }
    }

    /// Polynomial gcd in Z[q] (content included), positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive().mul_bigint(&other.content().abs());
        }
        if other.is_zero() {
            return self.primitive().mul_bigint(&self.content().abs());
        }
        let cg = num_integer::Integer::gcd(&self.content(), &other.content());
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.mul_bigint(&cg)
    }

    pub fn eval(&self, v: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for a in self.c.iter().rev() {
            acc = acc * v + BigRational::from_integer(a.clone());
        }
        acc
    }

    /// Render with `q^k` powers, highest degree first; "0" for zero.
    fn fmt_poly(&self, f: &mut fmt::Formatter<'_>, shift: i64) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.c.len()).rev() {
            let a = &self.c[k];
            if a.is_zero() {
                continue;
            }
            let e = k as i64 + shift;
            let abs = a.abs();
            if first {
                if a.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if a.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            if e == 0 {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                if e == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Error raised when a rational function is evaluated at a zero of its
/// denominator (or at q = 0 while carrying negative q-powers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleError {
    pub at: BigRational,
}

impl fmt::Display for PoleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pole at q = {}", self.at)
    }
}

impl std::error::Error for PoleError {}

/// An element of Q(q) in canonical reduced form; see the module docs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    num: IntPoly,
    shift: i64,
    den: IntPoly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: IntPoly::zero(),
            shift: 0,
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(a: i64) -> Self {
        Scalar::normalized(IntPoly::constant(BigInt::from(a)), 0, IntPoly::one())
    }

    pub fn from_ratio(a: i64, b: i64) -> Self {
        Scalar::normalized(
            IntPoly::constant(BigInt::from(a)),
            0,
            IntPoly::constant(BigInt::from(b)),
        )
    }

    /// q^k for any integer k.
    pub fn q_pow(k: i64) -> Self {
        Scalar {
            num: IntPoly::one(),
            shift: k,
            den: IntPoly::one(),
        }
    }

    pub fn q() -> Self {
        Scalar::q_pow(1)
    }

    /// q - q^-1.
    pub fn q_minus_qinv() -> Self {
        Scalar::q() - Scalar::q_pow(-1)
    }

    /// Canonicalize q^shift * num / den.
    pub fn normalized(num: IntPoly, shift: i64, den: IntPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar::zero();
        }
        let mut num = num;
        let mut den = den;
        let mut shift = shift;
        let v = num.valuation();
        if v > 0 {
            num = num.shr(v);
            shift += v as i64;
        }
        let dv = den.valuation();
        if dv > 0 {
            den = den.shr(dv);
            shift -= dv as i64;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num = num.exact_div(&g);
            den = den.exact_div(&g);
        }
        if den.leading().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Scalar { num, shift, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1, i.e. the element is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Number of monomials of the numerator (0 for zero).
    pub fn num_terms(&self) -> usize {
        self.num.c.iter().filter(|a| !a.is_zero()).count()
    }

    /// Sign of the highest-degree numerator coefficient (false for zero).
    pub fn leading_coeff_negative(&self) -> bool {
        self.num.leading().is_negative()
    }

    /// q-adic valuation (0 for zero): the power of q split off in canonical
    /// form, since numerator and denominator are coprime to q.
    pub fn q_valuation(&self) -> i64 {
        self.shift
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        Scalar::normalized(self.den.clone(), -self.shift, self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Scalar {
        if k == 0 {
            return Scalar::one();
        }
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// The bar involution q |-> q^-1, a ring automorphism of Q(q).
    pub fn bar(&self) -> Scalar {
        if self.is_zero() {
            return Scalar::zero();
        }
        let nd = self.num.degree().unwrap() as i64;
        let dd = self.den.degree().unwrap() as i64;
        Scalar::normalized(self.num.reversed(), -self.shift - nd + dd, self.den.reversed())
    }

    /// Exact evaluation at a nonzero rational point; reports poles.
    pub fn eval_at(&self, v: &BigRational) -> Result<BigRational, PoleError> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        if v.is_zero() && self.shift < 0 {
            return Err(PoleError { at: v.clone() });
        }
        let d = self.den.eval(v);
        if d.is_zero() {
            return Err(PoleError { at: v.clone() });
        }
        let mut r = self.num.eval(v) / d;
        if self.shift != 0 {
            if v.is_zero() {
                // shift >= 1 here
                return Ok(BigRational::zero());
            }
            let p = if self.shift > 0 { v.clone() } else { v.recip() };
            for _ in 0..self.shift.unsigned_abs() {
                r *= &p;
            }
        }
        Ok(r)
    }

    /// Numerator/denominator as plain polynomials: negative shifts move into
    /// the denominator, nonnegative shifts into the numerator.
    pub fn as_poly_fraction(&self) -> (IntPoly, IntPoly) {
        if self.shift >= 0 {
            (self.num.shl(self.shift as usize), self.den.clone())
        } else {
            (self.num.clone(), self.den.shl((-self.shift) as usize))
        }
    }

    /// Parse from the same syntax Display produces (plus free-form spacing).
    pub fn parse(s: &str) -> Result<Scalar, String> {
        crate::poly::parse_scalar(s)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.as_poly_fraction();
        if d.is_one() {
            n.fmt_poly(f, 0)
        } else {
            write!(f, "(")?;
            n.fmt_poly(f, 0)?;
            write!(f, ")/(")?;
            d.fmt_poly(f, 0)?;
            write!(f, ")")
        }
    }
}

impl Scalar {
    /// Laurent-style rendering used for polynomial coefficients: keeps
    /// negative q-powers inline (`q-q^-1`) when the denominator is 1.
    pub fn laurent_string(&self) -> String {
        struct L<'a>(&'a Scalar);
        impl fmt::Display for L<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let s = self.0;
                if s.den.is_one() {
                    s.num.fmt_poly(f, s.shift)
                } else {
                    write!(f, "{s}")
                }
            }
        }
        L(self).to_string()
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(rhs.shift);
        let a = self.num.shl((self.shift - s) as usize).mul(&rhs.den);
        let b = rhs.num.shl((rhs.shift - s) as usize).mul(&self.den);
        Scalar::normalized(a.add(&b), s, self.den.mul(&rhs.den))
    }
}
forward_binop!(Add, add);

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}
forward_binop!(Sub, sub);

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        Scalar::normalized(
            self.num.mul(&rhs.num),
            self.shift + rhs.shift,
            self.den.mul(&rhs.den),
        )
    }
}
forward_binop!(Mul, mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            shift: self.shift,
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        Scalar::parse(&s).map_err(serde::de::Error::custom)
    }
}
