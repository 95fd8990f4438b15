//! The twisted tensor power 𝔠ⁿ_P, its L-function as det(I − M·U) for the
//! explicit banded matrix M over F_q[T], and analytic ranks.
//!
//! Matrix storage is 0-based: entry (r, c) here is entry (r+1, c+1) of the
//! usual 1-based statement
//!
//! ```text
//! M_{i,j} = Σ_{l=0}^{n} T^{n−l} (−1)^l C(n,l) a_{iq−j−l},   a_* = 0 outside [0, m]
//! ```
//!
//! so row r is supported on columns q(r+1)−1−m−n ..= q(r+1)−1.

use crate::error::{Error, Result};
use crate::ff::{binom_mod_p, FieldCtx, Ring};
use crate::matrix::{berkowitz, Matrix};
use crate::poly::{LFun, Poly, PolyRing};

/// The pair (P, n) with P ∈ F_q[θ] nonzero and n >= 1. Its τ-matrix is the
/// 1×1 matrix P·(T − θ)ⁿ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPower {
    field: FieldCtx,
    p: Poly<u32>,
    n: u32,
}

impl TwistedPower {
    pub fn new(field: FieldCtx, p: Poly<u32>, n: u32) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if n == 0 {
            return Err(Error::ZeroTensorPower);
        }
        if p.coeffs().iter().any(|&c| c >= field.q()) {
            return Err(Error::Parse("coefficient outside the field".into()));
        }
        Ok(TwistedPower { field, p, n })
    }

    /// Convenience constructor from a little-endian coefficient list.
    pub fn from_coeffs(field: &FieldCtx, coeffs: &[u32], n: u32) -> Result<Self> {
        let p = PolyRing::new(field.clone()).poly(coeffs.to_vec());
        TwistedPower::new(field.clone(), p, n)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn poly(&self) -> &Poly<u32> {
        &self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// deg P
    pub fn m(&self) -> usize {
        self.p.degree().expect("P is nonzero")
    }

    /// Leading coefficient a_m.
    pub fn leading(&self) -> u32 {
        *self.p.leading().expect("P is nonzero")
    }

    /// a_i, zero outside [0, m].
    pub fn a(&self, i: i64) -> u32 {
        if i < 0 {
            0
        } else {
            self.p.at(i as usize)
        }
    }

    /// ⌈(m+n)/(q−1)⌉
    pub fn k_min(&self) -> usize {
        let d = self.field.q() as usize - 1;
        (self.m() + self.n as usize).div_ceil(d)
    }

    /// m ≡ −n mod (q−1) and a_m = (−1)ⁿ: the coset on which rank >= 1 is forced.
    pub fn in_distinguished_coset(&self) -> bool {
        let d = self.field.q() as usize - 1;
        let sign = if self.n % 2 == 0 { 1 } else { self.field.neg_el(1) };
        (self.m() + self.n as usize) % d == 0 && self.leading() == sign
    }
}

/// (−1)^l C(n,l) as field codes, l = 0..=n.
fn signed_binomials(field: &FieldCtx, n: u32) -> Vec<u32> {
    (0..=n)
        .map(|l| {
            let b = binom_mod_p(n as u64, l as u64, field.p());
            if l % 2 == 1 {
                field.neg_el(b)
            } else {
                b
            }
        })
        .collect()
}

/// Entry (r, c), 0-based, of the infinite matrix. Coefficients are
/// little-endian in T.
pub fn matrix_entry(tp: &TwistedPower, r: usize, c: usize) -> Poly<u32> {
    let signs = signed_binomials(&tp.field, tp.n);
    entry_with(tp, &signs, r, c)
}

fn entry_with(tp: &TwistedPower, signs: &[u32], r: usize, c: usize) -> Poly<u32> {
    let f = &tp.field;
    let n = tp.n as usize;
    let top = (f.q() as i64) * (r as i64 + 1) - c as i64 - 1;
    let mut v = vec![0u32; n + 1];
    for (l, &s) in signs.iter().enumerate() {
        let a = tp.a(top - l as i64);
        if a != 0 && s != 0 {
            v[n - l] = f.mul_el(a, s);
        }
    }
    PolyRing::new(f.clone()).poly(v)
}

/// A k×k section of the matrix, with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MMatrix {
    field: FieldCtx,
    n: u32,
    entries: Matrix<Poly<u32>>,
}

impl MMatrix {
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.entries.rows()
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    /// 0-based entry.
    pub fn get(&self, r: usize, c: usize) -> &Poly<u32> {
        self.entries.get(r, c)
    }

    pub fn entries(&self) -> &Matrix<Poly<u32>> {
        &self.entries
    }

    /// det(I − M·U).
    pub fn char_series(&self) -> LFun {
        let ring = PolyRing::new(self.field.clone());
        LFun::new(self.field.clone(), berkowitz(&ring, &self.entries))
    }
}

/// The k×k matrix for k >= k_min.
pub fn build_matrix(tp: &TwistedPower, k: usize) -> Result<MMatrix> {
    if k < tp.k_min() {
        return Err(Error::MatrixTooSmall { k, k_min: tp.k_min() });
    }
    Ok(build_matrix_any(tp, k))
}

/// Any leading k×k section, including k below k_min.
pub fn build_matrix_any(tp: &TwistedPower, k: usize) -> MMatrix {
    let signs = signed_binomials(&tp.field, tp.n);
    MMatrix {
        field: tp.field.clone(),
        n: tp.n,
        entries: Matrix::from_fn(k, k, |r, c| entry_with(tp, &signs, r, c)),
    }
}

/// L(𝔠ⁿ_P, U) = det(I − M·U) at k = k_min.
pub fn l_function(tp: &TwistedPower) -> LFun {
    build_matrix_any(tp, tp.k_min()).char_series()
}

/// Reciprocal of the local factor at infinity for the twisting level `level`:
/// 1 − (−1)ⁿ a_m U when level = −(m+n)/(q−1) exactly, otherwise 1.
pub fn infinity_factor(tp: &TwistedPower, level: i64) -> Result<LFun> {
    let num = (tp.m() + tp.n as usize) as i64;
    let den = tp.field.q() as i64 - 1;
    if level * den > -num {
        return Err(Error::LevelTooLarge { level, num: num as u64, den: den as u64 });
    }
    let f = &tp.field;
    if level * den == -num {
        let s = if tp.n % 2 == 0 { tp.leading() } else { f.neg_el(tp.leading()) };
        Ok(LFun::from_constants(f.clone(), &[1, f.neg_el(s)]))
    } else {
        Ok(LFun::one(f.clone()))
    }
}

/// Order of vanishing of L at U = 1.
pub fn analytic_rank(tp: &TwistedPower) -> u32 {
    l_function(tp).order_at(1).expect("L has constant term 1")
}

/// Writes L = Σ_i C_i U^{k−i} and expands Σ_i C_i (W+1)^i = Σ_t D_t W^t;
/// returns D_0..=D_k. The rank is >= r iff D_0 = … = D_{r−1} = 0.
pub fn d_coefficients(l: &LFun, k: usize) -> Result<Vec<Poly<u32>>> {
    let deg = l.degree().unwrap_or(0);
    if deg > k {
        return Err(Error::UDegreeTooLarge { deg, bound: k });
    }
    let f = l.field();
    let ring = PolyRing::new(f.clone());
    let c: Vec<Poly<u32>> = (0..=k).map(|i| l.coeff(k - i)).collect();
    Ok((0..=k)
        .map(|t| {
            (t..=k).fold(Poly::zero(), |acc, i| {
                let b = binom_mod_p(i as u64, t as u64, f.p());
                if b == 0 || c[i].is_zero() {
                    acc
                } else {
                    ring.add(&acc, &ring.scale(&b, &c[i]))
                }
            })
        })
        .collect())
}

/// Rank computation tuned for exhaustive scans.
///
/// Trailing rows of the k_min matrix that vanish left of the diagonal split
/// off linear factors 1 − M_rr·U. What remains is a leading block B;
/// det(I − B) ∈ F_q[T] has degree <= n·size(B), so it is evaluated at that
/// many plus one points of an extension field, and exact Berkowitz over
/// F_q[T] runs only when all of those values vanish.
#[derive(Clone, Debug)]
pub struct RankEngine {
    field: FieldCtx,
    n: u32,
    signs: Vec<u32>,
    big: FieldCtx,
    embed: Vec<u32>,
    /// Powers t^0..=t^n of each sample point, in the big field.
    point_powers: Vec<Vec<u32>>,
    max_k: usize,
}

/// How a rank was obtained by [`RankEngine::rank_detailed`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankOutcome {
    pub rank: u32,
    /// Rows split off as linear factors.
    pub peeled: usize,
    /// True when the exact determinant of the remaining block was needed.
    pub exact: bool,
}

impl RankEngine {
    /// Engine for matrices up to size `max_k`.
    pub fn new(field: &FieldCtx, n: u32, max_k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroTensorPower);
        }
        let need = (n as u64 * max_k as u64 + 2).max(512);
        let (p, e0) = (field.p(), field.e());
        let mut e = e0;
        while (p as u64).pow(e) < need {
            e += e0;
            if (p as u64).saturating_pow(e) > crate::ff::MAX_FIELD_SIZE {
                return Err(Error::FieldTooLarge { p, e, max: crate::ff::MAX_FIELD_SIZE });
            }
        }
        let big = FieldCtx::new(p, e)?;
        let embed = big.embedding_from(field).expect("degree divides");
        let g = big.generator();
        let count = n as usize * max_k + 1;
        let point_powers = (1..=count as u64)
            .map(|i| {
                let t = big.pow_el(g, i);
                let mut pw = Vec::with_capacity(n as usize + 1);
                let mut x = 1;
                for _ in 0..=n {
                    pw.push(x);
                    x = big.mul_el(x, t);
                }
                pw
            })
            .collect();
        Ok(RankEngine { field: field.clone(), n, signs: signed_binomials(field, n), big, embed, point_powers, max_k })
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rank(&self, tp: &TwistedPower) -> u32 {
        self.rank_detailed(tp).rank
    }

    pub fn rank_detailed(&self, tp: &TwistedPower) -> RankOutcome {
        assert!(tp.field == self.field && tp.n == self.n, "engine built for another (q, n)");
        let k = tp.k_min();
        if k > self.max_k {
            return RankOutcome { rank: analytic_rank(tp), peeled: 0, exact: true };
        }
        let mut ent: Vec<Option<Poly<u32>>> = vec![None; k * k];
        let mut get = |r: usize, c: usize| -> Poly<u32> {
            ent[r * k + c].get_or_insert_with(|| entry_with(tp, &self.signs, r, c)).clone()
        };
        let q = self.field.q() as i64;
        let (m, n) = (tp.m() as i64, self.n as i64);

        let mut size = k;
        let mut ones = 0u32;
        while size > 0 {
            let r = size - 1;
            let lo = (q * (r as i64 + 1) - 1 - m - n).max(0) as usize;
            if (lo..r).any(|c| !get(r, c).is_zero()) {
                break;
            }
            if get(r, r).coeffs() == [1] {
                ones += 1;
            }
            size -= 1;
        }
        let peeled = k - size;
        if size == 0 {
            return RankOutcome { rank: ones, peeled, exact: false };
        }

        let block: Vec<Poly<u32>> = (0..size * size).map(|i| get(i / size, i % size)).collect();
        let needed = self.n as usize * size + 1;
        let mut work = vec![0u32; size * size];
        for pw in &self.point_powers[..needed] {
            for (w, e) in work.iter_mut().zip(&block) {
                let v = e.coeffs().iter().zip(pw).fold(0u32, |acc, (&a, &t)| {
                    if a == 0 {
                        acc
                    } else {
                        self.big.add_el(acc, self.big.mul_el(self.embed[a as usize], t))
                    }
                });
                *w = self.big.neg_el(v);
            }
            for i in 0..size {
                work[i * size + i] = self.big.add_el(work[i * size + i], 1);
            }
            if !det_is_zero(&self.big, &mut work, size) {
                return RankOutcome { rank: ones, peeled, exact: false };
            }
        }

        let ring = PolyRing::new(self.field.clone());
        let b = Matrix::from_fn(size, size, |r, c| block[r * size + c].clone());
        let l = LFun::new(self.field.clone(), berkowitz(&ring, &b));
        RankOutcome { rank: ones + l.order_at(1).expect("constant term 1"), peeled, exact: true }
    }
}

// Gaussian elimination in place on a row-major size×size matrix.
fn det_is_zero(f: &FieldCtx, a: &mut [u32], size: usize) -> bool {
    for col in 0..size {
        let Some(piv) = (col..size).find(|&r| a[r * size + col] != 0) else {
            return true;
        };
        if piv != col {
            for j in col..size {
                a.swap(piv * size + j, col * size + j);
            }
        }
        let inv = f.inv_el(a[col * size + col]).expect("nonzero pivot");
        for r in col + 1..size {
            let x = a[r * size + col];
            if x == 0 {
                continue;
            }
            let factor = f.mul_el(x, inv);
            for j in col..size {
                let v = f.sub_el(a[r * size + j], f.mul_el(factor, a[col * size + j]));
                a[r * size + j] = v;
            }
        }
    }
    false
}
