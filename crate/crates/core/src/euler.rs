//! L-functions from their definition as Euler products over the primes of
//! F_q[θ]. Nothing here touches the matrix of [`crate::motive`], so the two
//! computations check each other.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::ff::{Field, FieldCtx, ResidueCtx, Ring};
use crate::motive::TwistedPower;
use crate::poly::{irreducibles_of_degree, LFun, Poly, PolyRing};

/// The inverse local factor 1 − N(T)·U^d at a prime of degree d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    pub prime: Poly<u32>,
    pub d: usize,
    /// The twisted product of the reduced τ-matrix, descended to F_q[T].
    pub norm: Poly<u32>,
}

impl LocalFactor {
    /// 1 − N·U^d as a polynomial in U.
    pub fn inverse_factor(&self, field: &FieldCtx) -> LFun {
        let ring = PolyRing::new(field.clone());
        let mut c = vec![Poly::zero(); self.d + 1];
        c[0] = ring.one();
        c[self.d] = ring.neg(&self.norm);
        LFun::new(field.clone(), c)
    }
}

type CacheKey = (u32, u32, usize);

fn prime_cache() -> &'static Mutex<HashMap<CacheKey, Arc<Vec<Poly<u32>>>>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Vec<Poly<u32>>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Monic irreducibles of degree d, computed once per (q, d).
pub fn primes_of_degree(field: &FieldCtx, d: usize) -> Arc<Vec<Poly<u32>>> {
    let key = (field.p(), field.e(), d);
    if let Some(v) = prime_cache().lock().expect("cache lock").get(&key) {
        return v.clone();
    }
    let v: Arc<Vec<Poly<u32>>> = Arc::new(irreducibles_of_degree(field, d).collect());
    prime_cache().lock().expect("cache lock").entry(key).or_insert(v).clone()
}

/// P̄·(T − θ̄)ⁿ over the residue field F_q[θ]/𝔓.
pub fn reduce_tau(tp: &TwistedPower, prime: &Poly<u32>) -> Result<(ResidueCtx, Poly<Vec<u32>>)> {
    let res = ResidueCtx::new(tp.field().clone(), prime.clone())?;
    let ring = PolyRing::new(res.clone());
    let theta = res.reduce(&PolyRing::new(tp.field().clone()).x());
    let linear = ring.poly(vec![res.neg(&theta), res.one()]);
    let p_bar = res.reduce(tp.poly());
    let q = ring.scale(&p_bar, &ring.pow_poly(&linear, tp.n() as u64));
    Ok((res, q))
}

/// a^{(d−1)}···a^{(1)}·a, where a^{(k)} raises every coefficient to the q^k-th power.
pub fn twisted_power(res: &ResidueCtx, a: &Poly<Vec<u32>>, d: usize) -> Poly<Vec<u32>> {
    let ring = PolyRing::new(res.clone());
    let mut acc = a.clone();
    for k in 1..d {
        let tw = ring.poly(a.coeffs().iter().map(|c| res.frobenius(c, k as u32)).collect());
        acc = ring.mul(&tw, &acc);
    }
    acc
}

pub fn local_factor(tp: &TwistedPower, prime: &Poly<u32>) -> Result<LocalFactor> {
    let (res, red) = reduce_tau(tp, prime)?;
    let d = res.degree();
    let tw = twisted_power(&res, &red, d);
    let coeffs = tw
        .coeffs()
        .iter()
        .map(|c| res.to_base(c).ok_or_else(|| Error::FrobeniusInvariance { prime: prime.to_text() }))
        .collect::<Result<Vec<u32>>>()?;
    let norm = PolyRing::new(tp.field().clone()).poly(coeffs);
    Ok(LocalFactor { prime: prime.clone(), d, norm })
}

/// Π_𝔓 (1 − N_𝔓 U^{deg 𝔓})^{−1} over primes of degree <= D, modulo U^{D+1}.
pub fn truncated_product(tp: &TwistedPower, max_deg: usize) -> Result<LFun> {
    let f = tp.field();
    let ring = PolyRing::new(f.clone());
    let mut s = vec![Poly::zero(); max_deg + 1];
    s[0] = ring.one();
    for d in 1..=max_deg {
        for prime in primes_of_degree(f, d).iter() {
            let lf = local_factor(tp, prime)?;
            if lf.norm.is_zero() {
                continue;
            }
            // multiply by 1 + N U^d + N² U^{2d} + …
            for j in d..=max_deg {
                if !s[j - d].is_zero() {
                    let add = ring.mul(&lf.norm, &s[j - d]);
                    s[j] = ring.add(&s[j], &add);
                }
            }
        }
    }
    Ok(LFun::new(f.clone(), s))
}

/// The full L-function from the Euler product, truncated at U-degree k_min.
pub fn euler_l_function(tp: &TwistedPower) -> Result<LFun> {
    truncated_product(tp, tp.k_min())
}

/// Distinct monic prime factors of a nonzero Q, by trial division.
pub fn prime_factors(field: &FieldCtx, q: &Poly<u32>) -> Result<Vec<Poly<u32>>> {
    let ring = PolyRing::new(field.clone());
    if q.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rest = ring.monic(q);
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        for p in primes_of_degree(field, d).iter() {
            let mut hit = false;
            loop {
                let (quo, rem) = ring.div_rem(&rest, p);
                if !rem.is_zero() {
                    break;
                }
                rest = quo;
                hit = true;
            }
            if hit {
                out.push(p.clone());
            }
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest);
    }
    out.sort();
    Ok(out)
}

/// L(𝔠ⁿ_P)·Π (1 − N_𝔔 U^{deg 𝔔}) over the given primes 𝔔: the L-function with
/// those Euler factors removed.
pub fn remove_local_factors(tp: &TwistedPower, l: &LFun, primes: &[Poly<u32>]) -> Result<LFun> {
    let mut acc = l.clone();
    for p in primes {
        acc = acc.mul(&local_factor(tp, p)?.inverse_factor(tp.field()));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motive::l_function;

    fn f3() -> FieldCtx {
        FieldCtx::new(3, 1).unwrap()
    }

    fn p(f: &FieldCtx, c: &[u32]) -> Poly<u32> {
        PolyRing::new(f.clone()).poly(c.to_vec())
    }

    fn tp(f: &FieldCtx, c: &[u32], n: u32) -> TwistedPower {
        TwistedPower::from_coeffs(f, c, n).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let f = f3();
        let (res, r) = reduce_tau(&tp(&f, &[1], 1), &p(&f, &[0, 1])).unwrap();
        assert_eq!(r.coeffs(), &[res.embed(0), res.embed(1)]);
        let (_, r) = reduce_tau(&tp(&f, &[1], 1), &p(&f, &[1, 1])).unwrap();
        assert_eq!(r.coeffs(), &[vec![1], vec![1]]);
        // 2(T−2)² = 2T² + 1·T + 2
        let (_, r) = reduce_tau(&tp(&f, &[0, 1], 2), &p(&f, &[1, 1])).unwrap();
        assert_eq!(r.coeffs(), &[vec![2], vec![1], vec![2]]);
        assert!(matches!(reduce_tau(&tp(&f, &[1], 1), &p(&f, &[2, 0, 1])), Err(Error::NotIrreducible)));
    }

    #[test]
    fn twisted_power_over_a_quadratic_prime() {
        let f = f3();
        let prime = p(&f, &[1, 0, 1]);
        let lf = local_factor(&tp(&f, &[1], 1), &prime).unwrap();
        assert_eq!(lf.d, 2);
        assert_eq!(lf.norm, p(&f, &[1, 0, 1]));
        let lf = local_factor(&tp(&f, &[1], 1), &p(&f, &[0, 1])).unwrap();
        assert_eq!(lf.norm, p(&f, &[0, 1]));
        let lf = local_factor(&tp(&f, &[0, 1], 1), &p(&f, &[0, 1])).unwrap();
        assert!(lf.norm.is_zero());
        assert!(lf.inverse_factor(&f).is_one());
    }

    #[test]
    fn untwisted_norm_is_the_prime_itself() {
        let f = f3();
        let t = tp(&f, &[1], 1);
        for d in 1..=4 {
            for prime in primes_of_degree(&f, d).iter() {
                assert_eq!(&local_factor(&t, prime).unwrap().norm, prime);
            }
        }
    }

    #[test]
    fn product_examples() {
        let f = f3();
        assert!(truncated_product(&tp(&f, &[1], 1), 3).unwrap().is_one());
        let w = tp(&f, &[0, 2, 0, 2], 1);
        assert_eq!(truncated_product(&w, 3).unwrap(), LFun::from_constants(f.clone(), &[1, 1, 1]));
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(euler_l_function(&tp(&f2, &[1], 1)).unwrap(), LFun::from_constants(f2.clone(), &[1, 1]));
        assert_eq!(l_function(&tp(&f2, &[1], 1)), LFun::from_constants(f2, &[1, 1]));
    }

    #[test]
    fn factoring() {
        let f = f3();
        // θ²−1 = (θ+1)(θ+2)
        assert_eq!(prime_factors(&f, &p(&f, &[2, 0, 1])).unwrap(), vec![p(&f, &[1, 1]), p(&f, &[2, 1])]);
        assert_eq!(prime_factors(&f, &p(&f, &[0, 0, 2])).unwrap(), vec![p(&f, &[0, 1])]);
        assert_eq!(prime_factors(&f, &p(&f, &[2, 0, 2])).unwrap(), vec![p(&f, &[1, 0, 1])]);
        assert!(prime_factors(&f, &p(&f, &[2])).unwrap().is_empty());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

        #[test]
        fn euler_product_equals_matrix_l(
            q in proptest::sample::select(vec![2u32, 3]),
            c in proptest::collection::vec(0u32..3, 1..=8),
            n in 1u32..=2,
        ) {
            let f = FieldCtx::of_order(q as u64).unwrap();
            let mut c: Vec<u32> = c.into_iter().map(|x| x % q).collect();
            *c.last_mut().unwrap() = 1;
            let t = tp(&f, &c, n);
            let l = l_function(&t);
            proptest::prop_assert_eq!(euler_l_function(&t).unwrap(), l.clone());
            proptest::prop_assert_eq!(truncated_product(&t, 4).unwrap(), l.truncate(4));
        }

        #[test]
        fn twist_by_a_power_keeps_good_local_factors(
            c in proptest::collection::vec(0u32..3, 1..=5),
            extra in proptest::collection::vec(0u32..3, 1..=3),
        ) {
            let f = f3();
            let ring = PolyRing::new(f.clone());
            let p1 = ring.poly(c);
            let r = ring.poly(extra);
            proptest::prop_assume!(!p1.is_zero() && !r.is_zero());
            let p2 = ring.mul(&p1, &ring.pow_poly(&r, 2));
            let t1 = TwistedPower::new(f.clone(), p1, 1).unwrap();
            let t2 = TwistedPower::new(f.clone(), p2, 1).unwrap();
            for d in 1..=3 {
                for prime in primes_of_degree(&f, d).iter() {
                    if ring.rem(&r, prime).is_zero() {
                        continue;
                    }
                    proptest::prop_assert_eq!(local_factor(&t1, prime).unwrap().norm, local_factor(&t2, prime).unwrap().norm);
                }
            }
        }
    }
}
