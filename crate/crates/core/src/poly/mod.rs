//! Dense univariate polynomials over the rings of [`crate::ff`], and the
//! nested ring F_q[T][U] holding L-functions ([`LFun`]).
//!
//! A [`Poly`] is a bare, normalized coefficient vector (index = exponent);
//! arithmetic goes through a [`PolyRing`] that carries the coefficient ring.

mod lfun;

pub use lfun::{LFun, LFunTerm, TMap};

use crate::error::{Error, Result};
use crate::ff::{Field, FieldCtx, Ring};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

impl Poly<u32> {
    /// Coefficient at X^i, zero past the degree.
    pub fn at(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Little-endian "a0,a1,...,am"; the zero polynomial is "0".
    pub fn to_text(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        self.coeffs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }

    /// Inverse of [`Poly::to_text`]; codes must lie in [0, q).
    pub fn parse(field: &FieldCtx, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        let coeffs = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                let v: u32 = t.parse().map_err(|_| Error::Parse(format!("bad coefficient {t:?}")))?;
                if v >= field.q() {
                    return Err(Error::Parse(format!("coefficient {v} is not in [0, {})", field.q())));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyRing::new(field.clone()).poly(coeffs))
    }
}

/// Polynomial ring R[X] over a coefficient ring R.
#[derive(Clone, Debug)]
pub struct PolyRing<R> {
    base: R,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    /// Normalizing constructor.
    pub fn poly(&self, mut coeffs: Vec<R::Elem>) -> Poly<R::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        self.poly(vec![c])
    }

    /// c·X^deg
    pub fn monomial(&self, c: R::Elem, deg: usize) -> Poly<R::Elem> {
        let mut v = vec![self.base.zero(); deg + 1];
        v[deg] = c;
        self.poly(v)
    }

    pub fn x(&self) -> Poly<R::Elem> {
        self.monomial(self.base.one(), 1)
    }

    pub fn coeff_or_zero(&self, a: &Poly<R::Elem>, i: usize) -> R::Elem {
        a.coeffs.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn add_polys(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let v = (0..n)
            .map(|i| match (a.coeffs.get(i), b.coeffs.get(i)) {
                (Some(x), Some(y)) => self.base.add(x, y),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        self.poly(v)
    }

    pub fn neg_poly(&self, a: &Poly<R::Elem>) -> Poly<R::Elem> {
        Poly { coeffs: a.coeffs.iter().map(|c| self.base.neg(c)).collect() }
    }

    pub fn mul_polys(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] = self.base.add(&v[i + j], &self.base.mul(x, y));
            }
        }
        self.poly(v)
    }

    pub fn scale(&self, c: &R::Elem, a: &Poly<R::Elem>) -> Poly<R::Elem> {
        self.poly(a.coeffs.iter().map(|x| self.base.mul(c, x)).collect())
    }

    /// a·X^k
    pub fn shift(&self, a: &Poly<R::Elem>, k: usize) -> Poly<R::Elem> {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![self.base.zero(); k];
        v.extend(a.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn pow_poly(&self, a: &Poly<R::Elem>, mut e: u64) -> Poly<R::Elem> {
        let mut base = a.clone();
        let mut acc = self.constant(self.base.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_polys(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_polys(&base, &base);
            }
        }
        acc
    }

    pub fn eval(&self, a: &Poly<R::Elem>, x: &R::Elem) -> R::Elem {
        a.coeffs.iter().rev().fold(self.base.zero(), |acc, c| self.base.add(&self.base.mul(&acc, x), c))
    }

    /// a(c·X + d)
    pub fn compose_affine(&self, a: &Poly<R::Elem>, c: &R::Elem, d: &R::Elem) -> Poly<R::Elem> {
        let lin = self.poly(vec![d.clone(), c.clone()]);
        a.coeffs.iter().rev().fold(Poly::zero(), |acc, coef| {
            self.add_polys(&self.mul_polys(&acc, &lin), &self.constant(coef.clone()))
        })
    }

    /// a(X^k)
    pub fn inflate(&self, a: &Poly<R::Elem>, k: usize) -> Poly<R::Elem> {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![self.base.zero(); (a.coeffs.len() - 1) * k + 1];
        for (i, c) in a.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Poly { coeffs: v }
    }

    pub fn derivative(&self, a: &Poly<R::Elem>) -> Poly<R::Elem> {
        let v = a.coeffs.iter().enumerate().skip(1).map(|(i, c)| self.base.mul(&self.base.from_int(i as i64), c)).collect();
        self.poly(v)
    }
}

impl<F: Field> PolyRing<F> {
    /// Euclidean division; panics if `b` is zero.
    pub fn div_rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>) {
        let db = b.degree().expect("division by the zero polynomial");
        let lead_inv = self.base.inv(b.leading().unwrap()).expect("leading coefficient is a unit");
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return (Poly::zero(), a.clone());
        }
        let mut quo = vec![self.base.zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            let c = self.base.mul(&r[i], &lead_inv);
            if self.base.is_zero(&c) {
                continue;
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                let k = i - db + j;
                r[k] = self.base.sub(&r[k], &self.base.mul(&c, bc));
            }
            quo[i - db] = c;
        }
        r.truncate(db);
        (self.poly(quo), self.poly(r))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.div_rem(a, b).1
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.leading() {
            None => Poly::zero(),
            Some(l) => {
                let li = self.base.inv(l).expect("nonzero leading coefficient");
                self.scale(&li, a)
            }
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn mul_mod(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.rem(&self.mul_polys(a, b), m)
    }

    pub fn pow_mod(&self, a: &Poly<F::Elem>, mut e: u64, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut base = self.rem(a, m);
        let mut acc = self.rem(&self.constant(self.base.one()), m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_mod(&base, &base, m);
            }
        }
        acc
    }

    /// True iff gcd(P, P') is a nonzero constant. A nonconstant P with
    /// P' = 0 is a p-th power and therefore not squarefree.
    pub fn is_squarefree(&self, a: &Poly<F::Elem>) -> Result<bool> {
        match a.degree() {
            None => Err(Error::ZeroPolynomial),
            Some(0) => Ok(true),
            Some(_) => {
                let d = self.derivative(a);
                if d.is_zero() {
                    return Ok(false);
                }
                Ok(self.gcd(a, &d).degree() == Some(0))
            }
        }
    }

    /// Ben-Or: f of degree d is irreducible iff gcd(f, X^{q^i} - X) = 1
    /// for every i <= d/2.
    pub fn is_irreducible(&self, f: &Poly<F::Elem>) -> bool {
        let d = match f.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(d) => d,
        };
        let q = self.base.cardinality();
        let x = self.x();
        let mut h = x.clone();
        for _ in 1..=d / 2 {
            h = self.pow_mod(&h, q, f);
            let g = self.gcd(f, &self.sub(&h, &x));
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly::zero()
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add_polys(a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.neg_poly(a)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul_polys(a, b)
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_int(n))
    }
}

/// Monic polynomials of degree `d` over F_q in numeric order of the
/// little-endian code of their lower coefficients.
pub fn monic_of_degree(field: &FieldCtx, d: usize) -> impl Iterator<Item = Poly<u32>> + '_ {
    let q = field.q() as u64;
    let total = q.pow(d as u32);
    (0..total).map(move |mut c| {
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..d {
            v.push((c % q) as u32);
            c /= q;
        }
        v.push(1);
        Poly { coeffs: v }
    })
}

/// The monic irreducibles of degree `d` over F_q, in [`monic_of_degree`] order.
pub fn irreducibles_of_degree(field: &FieldCtx, d: usize) -> impl Iterator<Item = Poly<u32>> + '_ {
    let ring = PolyRing::new(field.clone());
    monic_of_degree(field, d).filter(move |f| ring.is_irreducible(f))
}

/// Number of monic irreducibles of degree d over F_q: (1/d) Σ_{t|d} μ(t) q^{d/t}.
pub fn irreducible_count(q: u64, d: u32) -> u64 {
    fn mobius(mut n: u32) -> i64 {
        let mut sign = 1;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                n /= p;
                if n % p == 0 {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if n > 1 {
            sign = -sign;
        }
        sign
    }
    let total: i64 = (1..=d).filter(|t| d % t == 0).map(|t| mobius(t) * q.pow(d / t) as i64).sum();
    (total / d as i64) as u64
}
