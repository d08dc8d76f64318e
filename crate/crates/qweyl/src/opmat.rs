//! Matrices with noncommutative-polynomial entries.
//!
//! Quadratic relations of the algebras in this crate are stated as matrix
//! equations on a tensor power of the vector representation, with entries in
//! the algebra itself. `OpMat` carries such a matrix: rows and columns are
//! packed multi-indices exactly as in [`SparseMat`], entries are [`NCPoly`]
//! values, and multiplication keeps the entry product in operator order
//! (left factor's entries multiply on the left).

use std::collections::BTreeMap;

use crate::poly::NCPoly;
use crate::scalar::Scalar;
use crate::tensor::SparseMat;

#[derive(Clone, Debug)]
pub struct OpMat {
    n: usize,
    legs: usize,
    entries: BTreeMap<(u64, u64), NCPoly>,
}

impl OpMat {
    pub fn new(n: usize, legs: usize) -> Self {
        assert!(n > 0 && legs > 0);
        OpMat {
            n,
            legs,
            entries: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn dim(&self) -> u64 {
        (self.n as u64).pow(self.legs as u32)
    }

    fn pack(&self, idx: &[usize]) -> u64 {
        assert_eq!(idx.len(), self.legs);
        let mut code = 0u64;
        for &i in idx {
            assert!(1 <= i && i <= self.n);
            code = code * self.n as u64 + (i as u64 - 1);
        }
        code
    }

    fn unpack(&self, mut code: u64) -> Vec<usize> {
        let mut idx = vec![0usize; self.legs];
        for slot in idx.iter_mut().rev() {
            *slot = (code % self.n as u64) as usize + 1;
            code /= self.n as u64;
        }
        idx
    }

    pub fn lift(m: &SparseMat) -> Self {
        let mut out = OpMat::new(m.n(), m.legs());
        for (row, col, v) in m.iter() {
            let key = (out.pack(&row), out.pack(&col));
            out.entries.insert(key, NCPoly::constant(v.clone()));
        }
        out
    }

    /// Identity on every leg except `leg`, where entry (a, c) is `f(a, c)`.
    pub fn symbol_on_leg(
        n: usize,
        legs: usize,
        leg: usize,
        f: impl Fn(usize, usize) -> NCPoly,
    ) -> Self {
        assert!(1 <= leg && leg <= legs);
        let mut out = OpMat::new(n, legs);
        let dim = out.dim();
        for rest in 0..dim / n as u64 {
            for a in 1..=n {
                for c in 1..=n {
                    let value = f(a, c);
                    if value.is_zero() {
                        continue;
                    }
                    let mut row = out.unpack_rest(rest, leg);
                    let mut col = row.clone();
                    row[leg - 1] = a;
                    col[leg - 1] = c;
                    out.entries.insert((out.pack(&row), out.pack(&col)), value);
                }
            }
        }
        out
    }

    fn unpack_rest(&self, mut code: u64, leg: usize) -> Vec<usize> {
        let mut idx = vec![1usize; self.legs];
        for slot in (0..self.legs).rev() {
            if slot + 1 == leg {
                continue;
            }
            idx[slot] = (code % self.n as u64) as usize + 1;
            code /= self.n as u64;
        }
        idx
    }

    pub fn set(&mut self, row: &[usize], col: &[usize], value: NCPoly) {
        let key = (self.pack(row), self.pack(col));
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn get(&self, row: &[usize], col: &[usize]) -> NCPoly {
        self.entries
            .get(&(self.pack(row), self.pack(col)))
            .cloned()
            .unwrap_or_else(NCPoly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|p| p.is_zero())
    }

    pub fn matmul(&self, other: &OpMat) -> OpMat {
        assert_eq!(self.n, other.n);
        assert_eq!(self.legs, other.legs);
        let mut out = OpMat::new(self.n, self.legs);
        let mut by_row: BTreeMap<u64, Vec<(u64, &NCPoly)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        for (&(r, mid), a) in &self.entries {
            if let Some(row) = by_row.get(&mid) {
                for &(c, b) in row {
                    let prod = a * b;
                    if prod.is_zero() {
                        continue;
                    }
                    let slot = out
                        .entries
                        .entry((r, c))
                        .or_insert_with(NCPoly::zero);
                    *slot = &*slot + &prod;
                }
            }
        }
        out.entries.retain(|_, v| !v.is_zero());
        out
    }

    pub fn add(&self, other: &OpMat) -> OpMat {
        assert_eq!(self.n, other.n);
        assert_eq!(self.legs, other.legs);
        let mut out = self.clone();
        for (k, v) in &other.entries {
            let slot = out.entries.entry(*k).or_insert_with(NCPoly::zero);
            *slot = &*slot + v;
        }
        out.entries.retain(|_, v| !v.is_zero());
        out
    }

    pub fn sub(&self, other: &OpMat) -> OpMat {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> OpMat {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = v.scale(s);
        }
        out.entries.retain(|_, v| !v.is_zero());
        out
    }

    /// All nonzero entries with their multi-indices.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>, &NCPoly)> + '_ {
        self.entries
            .iter()
            .map(move |(&(r, c), v)| (self.unpack(r), self.unpack(c), v))
    }

    /// The nonzero entries, for harvesting relation lists.
    pub fn entry_polys(&self) -> Vec<NCPoly> {
        self.entries.values().cloned().collect()
    }
}
