//! Finite fields.
//!
//! [`FieldCtx`] is F_{p^e} with table-driven multiplication; elements are
//! `u32` codes whose base-p digits are the coefficients of the element in
//! the polynomial basis (little-endian). [`ResidueCtx`] is the residue field
//! F_q[θ]/𝔓 of a prime of F_q[θ], with elements stored as coefficient
//! vectors of length deg 𝔓.
//!
//! Contexts are immutable and cheap to clone (they share their tables).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

/// Largest cardinality accepted by [`FieldCtx::new`].
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// Fields of at most this size also get a precomputed addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

/// A commutative ring with identity.
pub trait Ring: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Image of an integer under the canonical map Z -> R.
    fn from_int(&self, n: i64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// A finite field, viewed as an extension of a designated base field.
///
/// The Frobenius of the context is x ↦ x^b where b is the base cardinality:
/// p for [`FieldCtx`], q for [`ResidueCtx`].
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn characteristic(&self) -> u32;
    fn cardinality(&self) -> u64;
    fn base_cardinality(&self) -> u64;
    /// Degree over the base field, i.e. the order of the Frobenius.
    fn degree_over_base(&self) -> u32;
    /// The `i`-th element in a fixed enumeration, `i < cardinality()`.
    fn element(&self, i: u64) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// x ↦ x^{b^k} with b the base cardinality.
    fn frobenius(&self, a: &Self::Elem, k: u32) -> Self::Elem {
        let k = k % self.degree_over_base();
        let b = self.base_cardinality();
        let mut x = a.clone();
        for _ in 0..k {
            x = self.pow(&x, b);
        }
        x
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power q = p^e into (p, e).
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, e))
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// C(j, i) mod p via Lucas' theorem. Zero when i > j.
pub fn binom_mod_p(mut j: u64, mut i: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    while i > 0 || j > 0 {
        let (jd, id) = (j % p64, i % p64);
        if id > jd {
            return 0;
        }
        acc = acc * small_binom_mod(jd, id, p64) % p64;
        j /= p64;
        i /= p64;
    }
    acc as u32
}

// jd < p, so every factor below is invertible mod p.
fn small_binom_mod(jd: u64, id: u64, p: u64) -> u64 {
    let id = id.min(jd - id);
    let (mut num, mut den) = (1u64, 1u64);
    for t in 0..id {
        num = num * ((jd - t) % p) % p;
        den = den * ((t + 1) % p) % p;
    }
    num * pow_mod(den, p - 2, p) % p
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

struct FieldInner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus over F_p, little-endian, length e+1.
    modulus: Vec<u32>,
    /// exp[i] = g^i for i < 2(q-1).
    exp: Vec<u32>,
    /// log[x] for x != 0; log[0] unused.
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    neg_table: Vec<u32>,
}

/// The finite field F_{p^e}.
#[derive(Clone)]
pub struct FieldCtx(Arc<FieldInner>);

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)?;
        if self.0.e > 1 {
            write!(f, " (mod {:?})", self.0.modulus)?;
        }
        Ok(())
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e
    }
}
impl Eq for FieldCtx {}

fn digits(mut x: u64, base: u64, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut() {
        *slot = (x % base) as u32;
        x /= base;
    }
    out
}

fn undigits(ds: &[u32], base: u64) -> u64 {
    ds.iter().rev().fold(0u64, |acc, &d| acc * base + d as u64)
}

/// Multiply two elements of F_p[x]/(modulus) given as digit codes.
fn raw_mul(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let e = modulus.len() - 1;
    let (da, db) = (digits(a as u64, p as u64, e), digits(b as u64, p as u64, e));
    let mut prod = vec![0u64; 2 * e];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    for deg in (e..2 * e).rev() {
        let c = prod[deg];
        if c != 0 {
            for (t, &m) in modulus[..e].iter().enumerate() {
                let sub = c * m as u64 % p as u64;
                prod[deg - e + t] = (prod[deg - e + t] + p as u64 - sub) % p as u64;
            }
            prod[deg] = 0;
        }
    }
    let lo: Vec<u32> = prod[..e].iter().map(|&v| v as u32).collect();
    undigits(&lo, p as u64) as u32
}

fn raw_pow(a: u32, mut n: u64, p: u32, modulus: &[u32]) -> u32 {
    let mut base = a;
    let mut acc = 1u32;
    while n > 0 {
        if n & 1 == 1 {
            acc = raw_mul(acc, base, p, modulus);
        }
        base = raw_mul(base, base, p, modulus);
        n >>= 1;
    }
    acc
}

impl FieldCtx {
    /// F_{p^e}. For e > 1 the modulus is the smallest monic irreducible of
    /// degree e over F_p, in the numeric order of its little-endian
    /// coefficient code.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::ZeroExtensionDegree);
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_FIELD_SIZE);
        let q = q.ok_or(Error::FieldTooLarge { p, e, max: MAX_FIELD_SIZE })? as u32;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            let prime = FieldCtx::new(p, 1)?;
            let ring = PolyRing::new(prime);
            (0..q as u64)
                .map(|c| {
                    let mut m = digits(c, p as u64, e as usize);
                    m.push(1);
                    m
                })
                .find(|m| ring.is_irreducible(&ring.poly(m.clone())))
                .expect("irreducible polynomials exist in every degree")
        };
        Ok(Self::with_modulus(p, e, q, modulus))
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// F_q from its cardinality.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q)?;
        Self::new(p, e)
    }

    fn with_modulus(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Self {
        let order = (q - 1) as u64;
        let factors = distinct_prime_factors(order);
        let mul = |a: u32, b: u32| -> u32 {
            if e == 1 {
                ((a as u64 * b as u64) % p as u64) as u32
            } else {
                raw_mul(a, b, p, &modulus)
            }
        };
        let pow = |a: u32, n: u64| -> u32 {
            if e == 1 {
                pow_mod(a as u64, n, p as u64) as u32
            } else {
                raw_pow(a, n, p, &modulus)
            }
        };
        let g = (1..q)
            .find(|&g| factors.iter().all(|&r| pow(g, order / r) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * (q as usize - 1).max(1)];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..(q - 1) as usize {
            exp[i] = x;
            log[x as usize] = i as u32;
            x = mul(x, g);
        }
        for i in (q - 1) as usize..exp.len() {
            exp[i] = exp[i - (q - 1) as usize];
        }
        let digit_add = |a: u32, b: u32| -> u32 {
            let (mut a, mut b) = (a, b);
            let (mut out, mut place) = (0u32, 1u32);
            for _ in 0..e {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        };
        let digit_neg = |a: u32| -> u32 {
            let mut a = a;
            let (mut out, mut place) = (0u32, 1u32);
            for _ in 0..e {
                out += ((p - a % p) % p) * place;
                a /= p;
                place *= p;
            }
            out
        };
        let add_table = (e > 1 && q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b);
                }
            }
            t
        });
        let neg_table = (0..q).map(digit_neg).collect();
        FieldCtx(Arc::new(FieldInner { p, e, q, modulus, exp, log, add_table, neg_table }))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Defining modulus over F_p (little-endian, monic).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// A fixed generator of the multiplicative group.
    pub fn generator(&self) -> u32 {
        self.0.exp[1 % self.0.exp.len()]
    }

    #[inline]
    pub fn add_el(&self, a: u32, b: u32) -> u32 {
        let f = &*self.0;
        if f.e == 1 {
            let s = a + b;
            if s >= f.p {
                s - f.p
            } else {
                s
            }
        } else if let Some(t) = &f.add_table {
            t[(a * f.q + b) as usize]
        } else {
            let (mut a, mut b) = (a, b);
            let (mut out, mut place) = (0u32, 1u32);
            for _ in 0..f.e {
                out += ((a % f.p + b % f.p) % f.p) * place;
                a /= f.p;
                b /= f.p;
                place *= f.p;
            }
            out
        }
    }

    #[inline]
    pub fn neg_el(&self, a: u32) -> u32 {
        self.0.neg_table[a as usize]
    }

    #[inline]
    pub fn sub_el(&self, a: u32, b: u32) -> u32 {
        self.add_el(a, self.neg_el(b))
    }

    #[inline]
    pub fn mul_el(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let f = &*self.0;
        f.exp[(f.log[a as usize] + f.log[b as usize]) as usize]
    }

    #[inline]
    pub fn inv_el(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let f = &*self.0;
        let l = f.log[a as usize];
        Some(f.exp[((f.q - 1 - l) % (f.q - 1)) as usize])
    }

    pub fn pow_el(&self, a: u32, n: u64) -> u32 {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let f = &*self.0;
        let l = (f.log[a as usize] as u64 * (n % (f.q as u64 - 1))) % (f.q as u64 - 1);
        f.exp[l as usize]
    }

    /// Embedding F_{p^a} -> self, as a lookup table indexed by element code.
    /// Requires a | e; the image of the subfield generator is the smallest
    /// root (by code) of its modulus in self.
    pub fn embedding_from(&self, sub: &FieldCtx) -> Option<Vec<u32>> {
        if sub.p() != self.p() || self.e() % sub.e() != 0 {
            return None;
        }
        if sub.e() == 1 {
            return Some((0..sub.q()).collect());
        }
        let m = sub.modulus();
        let root = (0..self.q()).find(|&x| {
            let mut acc = 0u32;
            for &c in m.iter().rev() {
                acc = self.add_el(self.mul_el(acc, x), c);
            }
            acc == 0
        })?;
        let table = (0..sub.q())
            .map(|code| {
                let ds = digits(code as u64, sub.p() as u64, sub.e() as usize);
                ds.iter().rev().fold(0u32, |acc, &d| self.add_el(self.mul_el(acc, root), d))
            })
            .collect();
        Some(table)
    }
}

impl Ring for FieldCtx {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.add_el(*a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        self.neg_el(*a)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.sub_el(*a, *b)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.mul_el(*a, *b)
    }
    fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }
}

impl Field for FieldCtx {
    fn inv(&self, a: &u32) -> Option<u32> {
        self.inv_el(*a)
    }
    fn characteristic(&self) -> u32 {
        self.0.p
    }
    fn cardinality(&self) -> u64 {
        self.0.q as u64
    }
    fn base_cardinality(&self) -> u64 {
        self.0.p as u64
    }
    fn degree_over_base(&self) -> u32 {
        self.0.e
    }
    fn element(&self, i: u64) -> u32 {
        i as u32
    }
    fn pow(&self, a: &u32, e: u64) -> u32 {
        self.pow_el(*a, e)
    }
}

struct ResidueInner {
    base: FieldCtx,
    modulus: Poly<u32>,
    d: usize,
}

/// The residue field F_q[θ]/𝔓 for a monic irreducible 𝔓 of degree d.
#[derive(Clone)]
pub struct ResidueCtx(Arc<ResidueInner>);

impl fmt::Debug for ResidueCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[θ]/({})", self.0.base, self.0.modulus.to_text())
    }
}

impl ResidueCtx {
    pub fn new(base: FieldCtx, modulus: Poly<u32>) -> Result<Self> {
        let ring = PolyRing::new(base.clone());
        let d = modulus.degree().ok_or(Error::NotIrreducible)?;
        if modulus.leading() != Some(&1) {
            return Err(Error::NotMonic);
        }
        if !ring.is_irreducible(&modulus) {
            return Err(Error::NotIrreducible);
        }
        Ok(ResidueCtx(Arc::new(ResidueInner { base, modulus, d })))
    }

    pub fn base(&self) -> &FieldCtx {
        &self.0.base
    }

    pub fn modulus(&self) -> &Poly<u32> {
        &self.0.modulus
    }

    pub fn degree(&self) -> usize {
        self.0.d
    }

    /// Reduction F_q[θ] -> F_q[θ]/𝔓.
    pub fn reduce(&self, a: &Poly<u32>) -> Vec<u32> {
        let ring = PolyRing::new(self.0.base.clone());
        let r = ring.rem(a, &self.0.modulus);
        let mut out = r.coeffs().to_vec();
        out.resize(self.0.d, 0);
        out
    }

    pub fn embed(&self, c: u32) -> Vec<u32> {
        let mut out = vec![0u32; self.0.d];
        out[0] = c;
        out
    }

    /// The element as a member of F_q, when it lies there.
    pub fn to_base(&self, x: &[u32]) -> Option<u32> {
        x[1..].iter().all(|&c| c == 0).then(|| x[0])
    }
}

impl Ring for ResidueCtx {
    type Elem = Vec<u32>;

    fn zero(&self) -> Vec<u32> {
        vec![0; self.0.d]
    }
    fn one(&self) -> Vec<u32> {
        self.embed(1)
    }
    fn is_zero(&self, a: &Vec<u32>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let f = &self.0.base;
        a.iter().zip(b).map(|(&x, &y)| f.add_el(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u32>) -> Vec<u32> {
        let f = &self.0.base;
        a.iter().map(|&x| f.neg_el(x)).collect()
    }
    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        let f = &self.0.base;
        let d = self.0.d;
        let mut prod = vec![0u32; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add_el(prod[i + j], f.mul_el(x, y));
            }
        }
        let m = self.0.modulus.coeffs();
        for deg in (d..2 * d - 1).rev() {
            let c = prod[deg];
            if c != 0 {
                for t in 0..d {
                    prod[deg - d + t] = f.sub_el(prod[deg - d + t], f.mul_el(c, m[t]));
                }
                prod[deg] = 0;
            }
        }
        prod.truncate(d);
        prod
    }
    fn from_int(&self, n: i64) -> Vec<u32> {
        self.embed(self.0.base.from_int(n))
    }
}

impl Field for ResidueCtx {
    fn inv(&self, a: &Vec<u32>) -> Option<Vec<u32>> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.cardinality() - 2))
    }
    fn characteristic(&self) -> u32 {
        self.0.base.p()
    }
    fn cardinality(&self) -> u64 {
        (self.0.base.q() as u64).pow(self.0.d as u32)
    }
    fn base_cardinality(&self) -> u64 {
        self.0.base.q() as u64
    }
    fn degree_over_base(&self) -> u32 {
        self.0.d as u32
    }
    fn element(&self, i: u64) -> Vec<u32> {
        digits(i, self.0.base.q() as u64, self.0.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_binom(n: u64, k: u64) -> u128 {
        if k > n {
            return 0;
        }
        let mut acc = 1u128;
        for t in 0..k {
            acc = acc * (n - t) as u128 / (t + 1) as u128;
        }
        acc
    }

    #[test]
    fn prime_fields() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f3.q(), 3);
        assert_eq!(f3.add_el(2, 2), 1);
        assert_eq!(f3.inv_el(2), Some(2));
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(f2.add_el(1, 1), 0);
        assert_eq!(f2.mul_el(1, 1), 1);
    }

    #[test]
    fn f9_modulus_is_theta_squared_plus_one() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        // θ has code 3; θ^3 = -θ = 2θ (code 6)
        assert_eq!(f9.frobenius(&3, 1), 6);
        assert_eq!(f9.mul_el(3, 3), 2); // θ² = -1
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(FieldCtx::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(FieldCtx::new(3, 0), Err(Error::ZeroExtensionDegree)));
        assert!(matches!(FieldCtx::new(3, 11), Err(Error::FieldTooLarge { .. })));
        assert!(FieldCtx::new(2, 16).is_ok());
    }

    #[test]
    fn frobenius_examples() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(f3.frobenius(&2, 5), 2);
        for ctx in [FieldCtx::new(3, 2).unwrap(), FieldCtx::new(2, 3).unwrap()] {
            assert_eq!(ctx.frobenius(&0, 1), 0);
            for x in 0..ctx.q() {
                assert_eq!(ctx.pow_el(x, ctx.q() as u64), x);
                assert_eq!(ctx.frobenius(&x, ctx.e()), x);
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (3, 2), (5, 1), (2, 3)] {
            let f = FieldCtx::new(p, e).unwrap();
            let q = f.q();
            for a in 0..q {
                if a != 0 {
                    assert_eq!(f.mul_el(a, f.inv_el(a).unwrap()), 1);
                }
                assert_eq!(f.add_el(a, f.neg_el(a)), 0);
                for b in 0..q {
                    assert_eq!(f.add_el(a, b), f.add_el(b, a));
                    assert_eq!(f.mul_el(a, b), f.mul_el(b, a));
                    // (a+b)^p = a^p + b^p
                    let lhs = f.pow_el(f.add_el(a, b), p as u64);
                    let rhs = f.add_el(f.pow_el(a, p as u64), f.pow_el(b, p as u64));
                    assert_eq!(lhs, rhs);
                    for c in 0..q {
                        assert_eq!(f.mul_el(a, f.add_el(b, c)), f.add_el(f.mul_el(a, b), f.mul_el(a, c)));
                        assert_eq!(f.mul_el(f.mul_el(a, b), c), f.mul_el(a, f.mul_el(b, c)));
                        assert_eq!(f.add_el(f.add_el(a, b), c), f.add_el(a, f.add_el(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let f9 = FieldCtx::new(3, 2).unwrap();
        let f81 = FieldCtx::new(3, 4).unwrap();
        let emb = f81.embedding_from(&f9).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(emb[f9.add_el(a, b) as usize], f81.add_el(emb[a as usize], emb[b as usize]));
                assert_eq!(emb[f9.mul_el(a, b) as usize], f81.mul_el(emb[a as usize], emb[b as usize]));
            }
        }
        assert!(f81.embedding_from(&FieldCtx::new(3, 3).unwrap()).is_none());
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom_mod_p(3, 1, 3), 0);
        assert_eq!(binom_mod_p(8, 5, 3), 2);
        assert_eq!(binom_mod_p(5, 9, 3), 0);
        assert_eq!(binom_mod_p(0, 0, 2), 1);
    }

    #[test]
    fn binom_matches_exact_integers() {
        for p in [2u32, 3, 5] {
            for j in 0..=30u64 {
                for i in 0..=j {
                    assert_eq!(binom_mod_p(j, i, p) as u128, exact_binom(j, i) % p as u128, "C({j},{i}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn residue_field_frobenius_has_order_d() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let ring = PolyRing::new(f3.clone());
        let res = ResidueCtx::new(f3, ring.poly(vec![1, 2, 0, 1])).unwrap(); // θ³+2θ+1
        assert_eq!(res.cardinality(), 27);
        for i in 0..27 {
            let x = res.element(i);
            assert_eq!(res.frobenius(&x, 3), x);
            if i != 0 {
                assert_eq!(res.mul(&x, &res.inv(&x).unwrap()), res.one());
            }
        }
        // θ̄ is not fixed by one Frobenius step
        let theta = res.element(3);
        assert_ne!(res.frobenius(&theta, 1), theta);
    }

    #[test]
    fn residue_rejects_reducible_modulus() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let ring = PolyRing::new(f3.clone());
        assert!(matches!(ResidueCtx::new(f3.clone(), ring.poly(vec![2, 0, 1])), Err(Error::NotIrreducible)));
        assert!(matches!(ResidueCtx::new(f3, ring.poly(vec![1, 0, 2])), Err(Error::NotMonic)));
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9).unwrap(), (3, 2));
        assert_eq!(prime_power(7).unwrap(), (7, 1));
        assert!(prime_power(12).is_err());
        assert!(prime_power(1).is_err());
    }
}
