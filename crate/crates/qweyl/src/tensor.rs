//! Sparse matrices acting on tensor powers (C^n)^(⊗ legs) with exact
//! [`Scalar`] entries.
//!
//! Rows and columns are multi-indices in {1..n}^legs. Only nonzero entries
//! are stored, so equality is structural equality of the entry maps.

use crate::scalar::{IntPoly, Scalar};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMat {
    n: usize,
    legs: usize,
    entries: BTreeMap<(u64, u64), Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularError;

impl std::fmt::Display for SingularError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "matrix is singular")
    }
}

impl std::error::Error for SingularError {}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    row: Vec<usize>,
    col: Vec<usize>,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct MatJson {
    n: usize,
    legs: usize,
    entries: Vec<EntryJson>,
}

impl SparseMat {
    pub fn new(n: usize, legs: usize) -> Self {
        assert!(n >= 1 && legs >= 1);
        SparseMat {
            n,
            legs,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, legs: usize) -> Self {
        let mut m = SparseMat::new(n, legs);
        for code in 0..m.dim() as u64 {
            m.entries.insert((code, code), Scalar::one());
        }
        m
    }

    /// The elementary matrix e_ij on one leg: e_ij v_k = delta_jk v_i.
    pub fn matrix_unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = SparseMat::new(n, 1);
        m.set(&[i], &[j], Scalar::one());
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    /// Total dimension n^legs of the underlying space.
    pub fn dim(&self) -> usize {
        self.n.pow(self.legs as u32)
    }

    fn pack(&self, idx: &[usize]) -> u64 {
        assert_eq!(idx.len(), self.legs, "multi-index arity mismatch");
        let mut code = 0u64;
        for &v in idx {
            assert!(1 <= v && v <= self.n, "index {v} out of range 1..={}", self.n);
            code = code * self.n as u64 + (v as u64 - 1);
        }
        code
    }

    fn unpack(&self, mut code: u64) -> Vec<usize> {
        let mut idx = vec![0usize; self.legs];
        for k in (0..self.legs).rev() {
            idx[k] = (code % self.n as u64) as usize + 1;
            code /= self.n as u64;
        }
        idx
    }

    pub fn get(&self, row: &[usize], col: &[usize]) -> Scalar {
        self.entries
            .get(&(self.pack(row), self.pack(col)))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, row: &[usize], col: &[usize], v: Scalar) {
        let key = (self.pack(row), self.pack(col));
        if v.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, v);
        }
    }

    pub fn add_to(&mut self, row: &[usize], col: &[usize], v: Scalar) {
        if v.is_zero() {
            return;
        }
        let key = (self.pack(row), self.pack(col));
        let s = self.entries.get(&key).map_or(v.clone(), |old| old + &v);
        if s.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    /// Iterate entries as (row multi-index, col multi-index, value),
    /// in deterministic order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>, &Scalar)> {
        self.entries
            .iter()
            .map(|(&(r, c), v)| (self.unpack(r), self.unpack(c), v))
    }

    pub fn map_values(&self, f: impl Fn(&Scalar) -> Scalar) -> SparseMat {
        let mut m = SparseMat::new(self.n, self.legs);
        for (&k, v) in &self.entries {
            let w = f(v);
            if !w.is_zero() {
                m.entries.insert(k, w);
            }
        }
        m
    }

    pub fn scale(&self, c: &Scalar) -> SparseMat {
        self.map_values(|v| v * c)
    }

    pub fn add(&self, other: &SparseMat) -> SparseMat {
        assert_eq!((self.n, self.legs), (other.n, other.legs));
        let mut m = self.clone();
        for (&k, v) in &other.entries {
            let s = m.entries.get(&k).map_or(v.clone(), |old| old + v);
            if s.is_zero() {
                m.entries.remove(&k);
            } else {
                m.entries.insert(k, s);
            }
        }
        m
    }

    pub fn sub(&self, other: &SparseMat) -> SparseMat {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn matmul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!((self.n, self.legs), (other.n, other.legs));
        let mut by_row: BTreeMap<u64, Vec<(u64, &Scalar)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut m = SparseMat::new(self.n, self.legs);
        for (&(r, mid), a) in &self.entries {
            if let Some(row) = by_row.get(&mid) {
                for &(c, b) in row {
                    let key = (r, c);
                    let s = m.entries.get(&key).map_or_else(|| a * b, |old| old + &(a * b));
                    if s.is_zero() {
                        m.entries.remove(&key);
                    } else {
                        m.entries.insert(key, s);
                    }
                }
            }
        }
        m
    }

    /// Kronecker product; legs concatenate.
    pub fn kron(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.n, other.n, "kron requires equal leg dimension");
        let mut m = SparseMat::new(self.n, self.legs + other.legs);
        let shift = other.n.pow(other.legs as u32) as u64;
        for (&(r1, c1), v1) in &self.entries {
            for (&(r2, c2), v2) in &other.entries {
                let v = v1 * v2;
                if !v.is_zero() {
                    m.entries.insert((r1 * shift + r2, c1 * shift + c2), v);
                }
            }
        }
        m
    }

    /// Embed a 2-leg matrix into `r` legs, acting on legs `i` and `j`
    /// (1-based, distinct) and as the identity elsewhere.
    pub fn place(&self, i: usize, j: usize, r: usize) -> SparseMat {
        assert_eq!(self.legs, 2, "place embeds 2-leg matrices");
        assert!(i != j && 1 <= i && i <= r && 1 <= j && j <= r);
        let mut m = SparseMat::new(self.n, r);
        let rest: Vec<usize> = (1..=r).filter(|&k| k != i && k != j).collect();
        let combos = self.n.pow(rest.len() as u32);
        for (rc, cc, v) in self.iter() {
            let (a, b, c, d) = (rc[0], rc[1], cc[0], cc[1]);
            for mut combo in 0..combos {
                let mut row = vec![0usize; r];
                let mut col = vec![0usize; r];
                row[i - 1] = a;
                row[j - 1] = b;
                col[i - 1] = c;
                col[j - 1] = d;
                for &k in rest.iter().rev() {
                    let val = combo % self.n + 1;
                    combo /= self.n;
                    row[k - 1] = val;
                    col[k - 1] = val;
                }
                m.set(&row, &col, v.clone());
            }
        }
        m
    }

    /// Partial transpose in the first leg only:
    /// (e_ij ⊗ e_kl)^t1 = e_ji ⊗ e_kl.
    pub fn transpose_t1(&self) -> SparseMat {
        assert_eq!(self.legs, 2);
        let mut m = SparseMat::new(self.n, 2);
        for (rc, cc, v) in self.iter() {
            m.set(&[cc[0], rc[1]], &[rc[0], cc[1]], v.clone());
        }
        m
    }

    /// Partial transpose in the second leg only:
    /// (e_ij ⊗ e_kl)^t2 = e_ij ⊗ e_lk.
    pub fn transpose_t2(&self) -> SparseMat {
        assert_eq!(self.legs, 2);
        let mut m = SparseMat::new(self.n, 2);
        for (rc, cc, v) in self.iter() {
            m.set(&[rc[0], cc[1]], &[cc[0], rc[1]], v.clone());
        }
        m
    }

    /// Full transpose.
    pub fn transpose(&self) -> SparseMat {
        let mut m = SparseMat::new(self.n, self.legs);
        for (&(r, c), v) in &self.entries {
            m.entries.insert((c, r), v.clone());
        }
        m
    }

    /// Conjugation of a 2-leg matrix by the flip of tensor factors:
    /// entry ((a,b),(c,d)) moves to ((b,a),(d,c)).
    pub fn flip(&self) -> SparseMat {
        assert_eq!(self.legs, 2);
        let mut m = SparseMat::new(self.n, 2);
        for (rc, cc, v) in self.iter() {
            m.set(&[rc[1], rc[0]], &[cc[1], cc[0]], v.clone());
        }
        m
    }

    /// Exact inverse by fraction-free (Bareiss) elimination with full
    /// pivoting on a denominator-cleared copy.
    pub fn inverse(&self) -> Result<SparseMat, SingularError> {
        let m = self.dim();
        // Clear each row to integer-polynomial entries, remembering the
        // scalar multiplier: B = D * A with D diagonal.
        let mut b: Vec<Vec<IntPoly>> = vec![vec![IntPoly::zero(); m]; m];
        let mut row_mult: Vec<Scalar> = vec![Scalar::one(); m];
        for r in 0..m as u64 {
            let mut mult = Scalar::one();
            for c in 0..m as u64 {
                if let Some(v) = self.entries.get(&(r, c)) {
                    let (_, den) = v.as_poly_fraction();
                    mult = &mult * &Scalar::normalized(den, 0, IntPoly::one());
                }
            }
            // Shift so every entry of the row has nonnegative q-degree.
            let mut min_shift = 0i64;
            for c in 0..m as u64 {
                if let Some(v) = self.entries.get(&(r, c)) {
                    min_shift = min_shift.min((v * &mult).q_valuation());
                }
            }
            mult = &mult * &Scalar::q_pow(-min_shift);
            for c in 0..m as u64 {
                if let Some(v) = self.entries.get(&(r, c)) {
                    let (num, den) = (v * &mult).as_poly_fraction();
                    assert!(den.is_one(), "row clearing failed");
                    b[r as usize][c as usize] = num;
                }
            }
            row_mult[r as usize] = mult;
        }

        // Augment with the identity (kept exact over Z[q] as well).
        let mut aug: Vec<Vec<IntPoly>> = vec![vec![IntPoly::zero(); m]; m];
        for (k, row) in aug.iter_mut().enumerate() {
            row[k] = IntPoly::one();
        }

        let mut col_perm: Vec<usize> = (0..m).collect();
        let mut prev = IntPoly::one();
        for k in 0..m {
            // Full pivoting: smallest (degree, term count) nonzero entry.
            let mut pivot: Option<(usize, usize, (usize, u64))> = None;
            for r in k..m {
                for c in k..m {
                    if b[r][c].is_zero() {
                        continue;
                    }
                    let deg = b[r][c].degree().unwrap();
                    let meas = (deg, b[r][c].coeff(deg).magnitude().bits());
                    if pivot.as_ref().map_or(true, |&(_, _, best)| meas < best) {
                        pivot = Some((r, c, meas));
                    }
                }
            }
            let Some((pr, pc, _)) = pivot else {
                return Err(SingularError);
            };
            b.swap(k, pr);
            aug.swap(k, pr);
            if pc != k {
                for row in b.iter_mut() {
                    row.swap(k, pc);
                }
                col_perm.swap(k, pc);
            }
            for r in 0..m {
                if r == k {
                    continue;
                }
                let fk = b[k][k].clone();
                let fr = b[r][k].clone();
                for c in 0..m {
                    let v = fk.mul(&b[r][c]).sub(&fr.mul(&b[k][c]));
                    b[r][c] = v.exact_div(&prev);
                }
                for c in 0..m {
                    let v = fk.mul(&aug[r][c]).sub(&fr.mul(&aug[k][c]));
                    aug[r][c] = v.exact_div(&prev);
                }
                b[r][k] = IntPoly::zero();
            }
            prev = b[k][k].clone();
        }

        // Now b is diagonal; divide out and undo permutations/multipliers.
        let mut out = SparseMat::new(self.n, self.legs);
        for k in 0..m {
            let diag = Scalar::normalized(b[k][k].clone(), 0, IntPoly::one());
            let dinv = diag.inv();
            for c in 0..m {
                if aug[k][c].is_zero() {
                    continue;
                }
                let v = Scalar::normalized(aug[k][c].clone(), 0, IntPoly::one());
                // Undo the row clearing of the original column c.
                let val = &(&v * &dinv) * &row_mult[c];
                if !val.is_zero() {
                    out.entries
                        .insert((col_perm[k] as u64, c as u64), val);
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<EntryJson> = self
            .iter()
            .map(|(row, col, v)| EntryJson {
                row,
                col,
                value: v.to_string(),
            })
            .collect();
        serde_json::to_value(MatJson {
            n: self.n,
            legs: self.legs,
            entries,
        })
        .expect("serialization cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SparseMat, String> {
        let mj: MatJson = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
        let mut m = SparseMat::new(mj.n, mj.legs);
        for e in mj.entries {
            m.set(&e.row, &e.col, Scalar::parse(&e.value)?);
        }
        Ok(m)
    }
}
