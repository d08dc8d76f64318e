//! The standard R-matrix of U_q(gl_N), its twisted relatives, and the
//! per-family data (J, G, parameter tuples) used by the symmetric-pair
//! constructions.
//!
//! Conventions: `R = sum r^{ij}_{kl} e_ik (x) e_jl`, stored with row
//! multi-index `(i,j)` and column multi-index `(k,l)`, so that
//! `R (v_k (x) v_l) = sum_{i,j} r^{ij}_{kl} v_i (x) v_j`.

use crate::scalar::Scalar;
use crate::tensor::SparseMat;

/// Standard R-matrix for the vector representation of U_q(gl_N):
/// `r^{ii}_{ii} = q`, `r^{ij}_{ij} = 1` for `i != j`,
/// `r^{ij}_{ji} = q - q^{-1}` for `j < i`, all other entries zero.
pub fn build_r(n: usize) -> SparseMat {
    let mut r = SparseMat::new(n, 2);
    let hook = Scalar::q_minus_qinv();
    for i in 1..=n {
        for j in 1..=n {
            let diag = if i == j { Scalar::q() } else { Scalar::one() };
            r.set(&[i, j], &[i, j], diag);
            if j < i {
                r.set(&[i, j], &[j, i], hook.clone());
            }
        }
    }
    r
}

/// `(R_21)^{-1}` in closed form: the transpose of R with every entry
/// mapped by `q -> q^{-1}`.
pub fn build_r21_inv(n: usize) -> SparseMat {
    build_r(n).map_values(|v| v.bar()).transpose()
}

/// `R_21`, the flip conjugate of R.
pub fn build_r21(n: usize) -> SparseMat {
    build_r(n).flip()
}

/// The matrix `S_0 = R`, `S_1 = (R_21)^{-1}` entering the twisted
/// multiplication rules, at the ambient size `n`.
pub fn s_matrix_plain(n: usize, gamma: u8) -> SparseMat {
    match gamma {
        0 => build_r(n),
        1 => build_r21_inv(n),
        _ => panic!("twist index must be 0 or 1"),
    }
}

/// The three families of symmetric pairs supported by the construction.
///
/// * `AI`: gl_n with the transpose involution.
/// * `AII`: gl_2n with the symplectic involution.
/// * `Diag`: gl_n + gl_n embedded block-diagonally in gl_2n, with the
///   factor-swapping involution.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Family {
    AI,
    AII,
    Diag,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::AI, Family::AII, Family::Diag];

    pub fn name(&self) -> &'static str {
        match self {
            Family::AI => "AI",
            Family::AII => "AII",
            Family::Diag => "DIAG",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_uppercase().as_str() {
            "AI" => Some(Family::AI),
            "AII" => Some(Family::AII),
            "DIAG" | "DIAGONAL" => Some(Family::Diag),
            _ => None,
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A family member at fixed size, together with the weight tuple
/// `a = (a_1, ..., a_n)` of nonzero scalars attached to J.
#[derive(Clone, Debug)]
pub struct FamilyConfig {
    pub family: Family,
    pub n: usize,
    pub a: Vec<Scalar>,
}

impl FamilyConfig {
    /// Configuration with all weights equal to one.
    pub fn new(family: Family, n: usize) -> Self {
        assert!(n >= 1);
        FamilyConfig {
            family,
            n,
            a: vec![Scalar::one(); n],
        }
    }

    pub fn with_a(family: Family, n: usize, a: Vec<Scalar>) -> Self {
        assert_eq!(a.len(), n, "need one weight per index 1..=n");
        assert!(a.iter().all(|v| !v.is_zero()), "weights must be nonzero");
        FamilyConfig { family, n, a }
    }

    /// Rank of the underlying Lie algebra; this is the size of the J, G
    /// and X/D matrices.
    pub fn rank(&self) -> usize {
        match self.family {
            Family::AI => self.n,
            Family::AII | Family::Diag => 2 * self.n,
        }
    }

    /// Size N of the coordinate algebra the family lives in
    /// (`O_q(Mat_N)`, block quotient in the diagonal case).
    pub fn ambient(&self) -> usize {
        self.rank()
    }

    /// The weight a_k, 1-based.
    pub fn a(&self, k: usize) -> &Scalar {
        &self.a[k - 1]
    }

    /// The matrix J(a) defining the involution and the invariants.
    pub fn j_matrix(&self) -> SparseMat {
        let mut j = SparseMat::new(self.rank(), 1);
        match self.family {
            Family::AI => {
                for k in 1..=self.n {
                    j.set(&[k], &[k], self.a(k).clone());
                }
            }
            Family::AII => {
                for k in 1..=self.n {
                    j.set(&[2 * k - 1], &[2 * k], self.a(k).clone());
                    j.set(&[2 * k], &[2 * k - 1], -(self.a(k) * &Scalar::q()));
                }
            }
            Family::Diag => {
                for k in 1..=self.n {
                    j.set(&[k], &[self.n + k], self.a(k).clone());
                    j.set(&[self.n + k], &[k], self.a(k).clone());
                }
            }
        }
        j
    }

    /// The family R-matrix acting on the rank-sized vector space: the
    /// standard R for AI/AII, and the block matrix `(R, I, I, R)` in the
    /// diagonal case.
    pub fn rg_matrix(&self) -> SparseMat {
        match self.family {
            Family::AI => build_r(self.n),
            Family::AII => build_r(2 * self.n),
            Family::Diag => {
                let n = self.n;
                let r = build_r(n);
                let mut m = SparseMat::new(2 * n, 2);
                for (rc, cc, v) in r.iter() {
                    m.set(&[rc[0], rc[1]], &[cc[0], cc[1]], v.clone());
                    m.set(&[rc[0] + n, rc[1] + n], &[cc[0] + n, cc[1] + n], v.clone());
                }
                for i in 1..=n {
                    for j in 1..=n {
                        m.set(&[i + n, j], &[i + n, j], Scalar::one());
                        m.set(&[i, j + n], &[i, j + n], Scalar::one());
                    }
                }
                m
            }
        }
    }

    /// `S_0 = R_g`, `S_1 = (R_g)_21^{-1}`.
    pub fn s_matrix(&self, gamma: u8) -> SparseMat {
        match gamma {
            0 => self.rg_matrix(),
            1 => self
                .rg_matrix()
                .flip()
                .inverse()
                .expect("R_21 is invertible"),
            _ => panic!("twist index must be 0 or 1"),
        }
    }

    /// Diagonal matrix G with `G_kk = q^{-2k}` for `1 <= k <= rank`.
    pub fn g_matrix(&self) -> SparseMat {
        let mut g = SparseMat::new(self.rank(), 1);
        for k in 1..=self.rank() {
            g.set(&[k], &[k], Scalar::q_pow(-2 * k as i64));
        }
        g
    }

    /// Node indices `u` carrying a deformed coideal generator B_u with
    /// parameter b_u: `1..n-1` for AI and the diagonal family, the even
    /// indices `2, 4, ..., 2n-2` for AII.
    pub fn coideal_b_nodes(&self) -> Vec<usize> {
        match self.family {
            Family::AI | Family::Diag => (1..self.n).collect(),
            Family::AII => (1..self.n).map(|u| 2 * u).collect(),
        }
    }

    /// The coefficient b attached to the coideal node `u` that makes the
    /// quadratic invariants right-invariant: `a_{u+1}/a_u` for AI,
    /// `q^3 a_{u+1}/a_u` for AII (at node 2u), `q a_{u+1}/a_u` diagonally.
    pub fn b_param(&self, node: usize) -> Scalar {
        match self.family {
            Family::AI => {
                assert!((1..self.n).contains(&node));
                self.a(node + 1) * &self.a(node).inv()
            }
            Family::AII => {
                assert!(node % 2 == 0 && (1..self.n).contains(&(node / 2)));
                let u = node / 2;
                &(self.a(u + 1) * &self.a(u).inv()) * &Scalar::q_pow(3)
            }
            Family::Diag => {
                assert!((1..self.n).contains(&node));
                &(self.a(node + 1) * &self.a(node).inv()) * &Scalar::q()
            }
        }
    }

    /// The weight tuple c making the dual invariants right-invariant for
    /// the same b: `c_u = q^{-2u} a_u^{-1}` (AI, diagonal),
    /// `c_u = q^{-4u+2} a_u^{-1}` (AII).
    pub fn c_param(&self, u: usize) -> Scalar {
        assert!((1..=self.n).contains(&u));
        let inv = self.a(u).inv();
        match self.family {
            Family::AI | Family::Diag => &inv * &Scalar::q_pow(-2 * u as i64),
            Family::AII => &inv * &Scalar::q_pow(-4 * (u as i64) + 2),
        }
    }
}

fn ensure_eq(tag: &str, lhs: &SparseMat, rhs: &SparseMat) -> Result<(), String> {
    let d = lhs.sub(rhs);
    if d.is_zero() {
        return Ok(());
    }
    let (row, col, v) = d.iter().next().map(|(r, c, v)| (r, c, v.clone())).unwrap();
    Err(format!(
        "{tag}: sides differ at row {row:?}, col {col:?} by {v}"
    ))
}

fn ensure_zero_scalar(tag: &str, v: &Scalar) -> Result<(), String> {
    if v.is_zero() {
        Ok(())
    } else {
        Err(format!("{tag}: expected 0, got {v}"))
    }
}

/// Quantum Yang-Baxter equation `R12 R13 R23 = R23 R13 R12` for a 2-leg
/// matrix.
pub fn check_qybe(r: &SparseMat) -> Result<(), String> {
    let r12 = r.place(1, 2, 3);
    let r13 = r.place(1, 3, 3);
    let r23 = r.place(2, 3, 3);
    let lhs = r12.matmul(&r13).matmul(&r23);
    let rhs = r23.matmul(&r13).matmul(&r12);
    ensure_eq("qybe", &lhs, &rhs)
}

/// The closed form for `(R_21)^{-1}` really is the two-sided inverse of
/// `R_21`.
pub fn check_r21_inverse(n: usize) -> Result<(), String> {
    let r21 = build_r21(n);
    let r21_inv = build_r21_inv(n);
    let id = SparseMat::identity(n, 2);
    ensure_eq("r21 * r21_inv", &r21.matmul(&r21_inv), &id)?;
    ensure_eq("r21_inv * r21", &r21_inv.matmul(&r21), &id)
}

/// Identities tying the partial transposes of R, its inverse, and the
/// flipped matrices together, plus the flip-invariance of the twisted
/// matrices:
/// `(R^{-1})^{t1} = (R_21^{-1})^{t2}` and its mirror,
/// `(R_21)^{t1} = R^{t2}` and its mirror,
/// `flip(R^{t2}) = R^{t2}`, `flip((R_21^{-1})^{t2}) = (R_21^{-1})^{t2}`,
/// and `R^{t1 t2} = R_21`.
pub fn check_transpose_identities(n: usize) -> Result<(), String> {
    let r = build_r(n);
    let r_inv = r.inverse().map_err(|e| format!("R not invertible: {e}"))?;
    let r21 = build_r21(n);
    let r21_inv = build_r21_inv(n);
    ensure_eq(
        "(R^-1)^t1 = (R21^-1)^t2",
        &r_inv.transpose_t1(),
        &r21_inv.transpose_t2(),
    )?;
    ensure_eq(
        "(R^-1)^t2 = (R21^-1)^t1",
        &r_inv.transpose_t2(),
        &r21_inv.transpose_t1(),
    )?;
    ensure_eq("(R21)^t1 = R^t2", &r21.transpose_t1(), &r.transpose_t2())?;
    ensure_eq("(R21)^t2 = R^t1", &r21.transpose_t2(), &r.transpose_t1())?;
    let rt2 = r.transpose_t2();
    ensure_eq("flip(R^t2) = R^t2", &rt2.flip(), &rt2)?;
    let st2 = r21_inv.transpose_t2();
    ensure_eq("flip((R21^-1)^t2) = (R21^-1)^t2", &st2.flip(), &st2)?;
    ensure_eq(
        "R^t1t2 = R21",
        &r.transpose_t1().transpose_t2(),
        &r21,
    )
}

/// Partial transpose of the second leg under the alternative reading where
/// it also transposes the first leg: `(e_ij (x) e_kl) -> e_ji (x) e_lk`.
fn transpose_t2_both_legs(m: &SparseMat) -> SparseMat {
    m.transpose()
}

/// Decide between the two candidate conventions for the second-leg
/// partial transpose by testing which one satisfies `R^{t1 t2} = R_21`.
///
/// Returns `(second_leg_only_holds, both_legs_holds)`.
pub fn decide_t2_convention(n: usize) -> (bool, bool) {
    let r = build_r(n);
    let r21 = build_r21(n);
    let second_only = r.transpose_t1().transpose_t2() == r21;
    let both = transpose_t2_both_legs(&r.transpose_t1()) == r21;
    (second_only, both)
}

/// The reflection equation for the family R-matrix and J(a):
/// `Rg J1 Rg^t1 J2 = J2 Rg^t1 J1 Rg`. Holds for every weight tuple.
pub fn check_reflection(cfg: &FamilyConfig) -> Result<(), String> {
    let rg = cfg.rg_matrix();
    let rg_t1 = rg.transpose_t1();
    let j = cfg.j_matrix();
    let id = SparseMat::identity(cfg.rank(), 1);
    let j1 = j.kron(&id);
    let j2 = id.kron(&j);
    let lhs = rg.matmul(&j1).matmul(&rg_t1).matmul(&j2);
    let rhs = j2.matmul(&rg_t1).matmul(&j1).matmul(&rg);
    ensure_eq("Rg J1 Rg^t1 J2 = J2 Rg^t1 J1 Rg", &lhs, &rhs)
}

/// The companion reflection equation
/// `J2 Rg J1 Rg^t1 = Rg^t1 J1 Rg J2`, valid exactly when J(a) is a scalar
/// multiple of its own inverse, i.e. when all the squares a_k^2 agree
/// (in particular for the standard choice a = (1, ..., 1)).
pub fn check_reflection_companion(cfg: &FamilyConfig) -> Result<(), String> {
    let rg = cfg.rg_matrix();
    let rg_t1 = rg.transpose_t1();
    let j = cfg.j_matrix();
    let id = SparseMat::identity(cfg.rank(), 1);
    let j1 = j.kron(&id);
    let j2 = id.kron(&j);
    let lhs = j2.matmul(&rg).matmul(&j1).matmul(&rg_t1);
    let rhs = rg_t1.matmul(&j1).matmul(&rg).matmul(&j2);
    ensure_eq("J2 Rg J1 Rg^t1 = Rg^t1 J1 Rg J2", &lhs, &rhs)
}

/// The weighted diagonal sums
/// `sum_k q^{-2k} (S_v^{t2})^{gg}_{kk} (S_a^{t1})_{uu}^{kk}` vanish for all
/// `g != u` whenever the twist indices sum to one.
pub fn check_zero_sums(cfg: &FamilyConfig) -> Result<(), String> {
    let rank = cfg.rank();
    for (alpha, upsilon) in [(0u8, 1u8), (1, 0)] {
        let sv_t2 = cfg.s_matrix(upsilon).transpose_t2();
        let sa_t1 = cfg.s_matrix(alpha).transpose_t1();
        for g in 1..=rank {
            for u in 1..=rank {
                if g == u {
                    continue;
                }
                let mut sum = Scalar::zero();
                for k in 1..=rank {
                    let term = &sv_t2.get(&[g, g], &[k, k]) * &sa_t1.get(&[k, k], &[u, u]);
                    sum = &sum + &(&term * &Scalar::q_pow(-2 * k as i64));
                }
                ensure_zero_scalar(
                    &format!(
                        "zero sum (alpha,upsilon)=({alpha},{upsilon}), g={g}, u={u} [{}]",
                        cfg.family
                    ),
                    &sum,
                )?;
            }
        }
    }
    Ok(())
}

/// The four conjugation formulas for the inverses of the partially
/// transposed family matrices:
/// `(Rg^t2)^{-1} = G_i ((Rg)_21^{-1})^{t1} G_i^{-1}` and
/// `(((Rg)_21^{-1})^t2)^{-1} = G_i (Rg)^{t1} G_i^{-1}` for i = 1, 2.
pub fn check_twisted_inverses(cfg: &FamilyConfig) -> Result<(), String> {
    let rank = cfg.rank();
    let id1 = SparseMat::identity(rank, 1);
    let g = cfg.g_matrix();
    let g_inv = g.map_values(|v| v.inv());
    let conjugators = [
        ("G1", g.kron(&id1), g_inv.kron(&id1)),
        ("G2", id1.kron(&g), id1.kron(&g_inv)),
    ];
    let id2 = SparseMat::identity(rank, 2);
    let s0 = cfg.s_matrix(0);
    let s1 = cfg.s_matrix(1);
    for (base_tag, base_t2, other_t1) in [
        ("Rg^t2", s0.transpose_t2(), s1.transpose_t1()),
        ("(Rg21^-1)^t2", s1.transpose_t2(), s0.transpose_t1()),
    ] {
        for (gi_tag, gi, gi_inv) in &conjugators {
            let candidate = gi.matmul(&other_t1).matmul(gi_inv);
            ensure_eq(
                &format!("({base_tag})^-1 via {gi_tag} [{}]", cfg.family),
                &base_t2.matmul(&candidate),
                &id2,
            )?;
            ensure_eq(
                &format!("({base_tag})^-1 via {gi_tag}, reversed [{}]", cfg.family),
                &candidate.matmul(&base_t2),
                &id2,
            )?;
        }
    }
    Ok(())
}

/// Conjugation identities used when composing the twisted inverses:
/// for twist indices with `beta + sigma = 1`,
/// `S_b^{t2} G2 S_s^{t1} = G2` and `((S_b^{t2})^{-1})^{t1} G2 = G2 S_s`.
pub fn check_g_conjugation(cfg: &FamilyConfig) -> Result<(), String> {
    let rank = cfg.rank();
    let id1 = SparseMat::identity(rank, 1);
    let g2 = id1.kron(&cfg.g_matrix());
    for (beta, sigma) in [(0u8, 1u8), (1, 0)] {
        let sb = cfg.s_matrix(beta);
        let ss = cfg.s_matrix(sigma);
        let lhs = sb.transpose_t2().matmul(&g2).matmul(&ss.transpose_t1());
        ensure_eq(
            &format!("S_b^t2 G2 S_s^t1 = G2 at (beta,sigma)=({beta},{sigma}) [{}]", cfg.family),
            &lhs,
            &g2,
        )?;
        let sb_t2_inv = sb
            .transpose_t2()
            .inverse()
            .map_err(|e| format!("S_b^t2 not invertible: {e}"))?;
        ensure_eq(
            &format!(
                "((S_b^t2)^-1)^t1 G2 = G2 S_s at (beta,sigma)=({beta},{sigma}) [{}]",
                cfg.family
            ),
            &sb_t2_inv.transpose_t1().matmul(&g2),
            &g2.matmul(&ss),
        )?;
    }
    Ok(())
}

/// J(a) is a scalar multiple of its own inverse, and G's entrywise bar
/// image is its inverse.
pub fn check_j_g_basics(cfg: &FamilyConfig) -> Result<(), String> {
    let j = cfg.j_matrix();
    let j_inv = j
        .inverse()
        .map_err(|e| format!("J not invertible: {e}"))?;
    let jj = j.matmul(&j);
    let mut ratio: Option<Scalar> = None;
    for (rc, cc, v) in jj.iter() {
        if rc != cc {
            return Err(format!("J^2 has off-diagonal entry at {rc:?}, {cc:?}: {v}"));
        }
        match &ratio {
            None => ratio = Some(v.clone()),
            Some(r) if r == v => {}
            Some(r) => {
                return Err(format!("J^2 is not scalar: entries {r} and {v} differ"));
            }
        }
    }
    let lambda = ratio.ok_or_else(|| "J^2 is zero".to_string())?;
    ensure_eq(
        "J = lambda J^{-1}",
        &j,
        &j_inv.scale(&lambda),
    )?;
    let g = cfg.g_matrix();
    ensure_eq(
        "bar(G) = G^{-1}",
        &g.map_values(|v| v.bar()),
        &g.inverse().map_err(|e| format!("G not invertible: {e}"))?,
    )?;
    // The two parameter conversions agree: the b making the x's invariant
    // equals the expression in the c's making the d's invariant.
    for node in cfg.coideal_b_nodes() {
        let u = match cfg.family {
            Family::AII => node / 2,
            _ => node,
        };
        let from_c = &cfg.c_param(u + 1).inv() * &cfg.c_param(u);
        let expected = match cfg.family {
            Family::AI => &from_c * &Scalar::q_pow(-2),
            Family::AII | Family::Diag => &from_c * &Scalar::q_pow(-1),
        };
        let diff = &cfg.b_param(node) - &expected;
        ensure_zero_scalar(
            &format!("b/c compatibility at node {node} [{}]", cfg.family),
            &diff,
        )?;
    }
    Ok(())
}
