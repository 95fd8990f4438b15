//! The action of the generators μ_d, ν_c, ι, τ_c, σ_k and multiplication by
//! (q−1)-th powers on twists, the matching identities between L-functions,
//! and finite-window checks of the matrix conjugacies behind them.
//!
//! Infinite matrices are handled through windows: rows and columns [0, K).
//! Row r of the matrix is supported on columns q(r+1)−1−m−n ..= q(r+1)−1 and
//! every conjugator is upper triangular, so computing products over indices
//! [0, N) with N = qK + m + n (plus the conjugator bandwidth for σ) gives
//! exact values on the window.

use crate::error::{Error, Result};
use crate::euler::{local_factor, prime_factors, remove_local_factors};
use crate::ff::{binom_mod_p, FieldCtx, Ring};
use crate::matrix::Matrix;
use crate::motive::{l_function, matrix_entry, TwistedPower};
use crate::poly::{LFun, Poly, PolyRing, TMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupElem {
    /// θ ↦ θ + d
    Mu(u32),
    /// θ ↦ cθ
    Nu(u32),
    /// Coefficient reversal at length m+1; `None` picks the smallest
    /// admissible m >= deg P with m ≡ −n mod (q−1).
    Iota(Option<usize>),
    /// P ↦ c^{−n}P
    Tau(u32),
    /// n ↦ q^k n
    Sigma(u32),
    /// P ↦ P·Q^{q−1}
    TwistMul(Poly<u32>),
}

impl GroupElem {
    pub fn name(&self) -> String {
        match self {
            GroupElem::Mu(d) => format!("mu({d})"),
            GroupElem::Nu(c) => format!("nu({c})"),
            GroupElem::Iota(Some(m)) => format!("iota(m={m})"),
            GroupElem::Iota(None) => "iota".to_string(),
            GroupElem::Tau(c) => format!("tau({c})"),
            GroupElem::Sigma(k) => format!("sigma({k})"),
            GroupElem::TwistMul(q) => format!("twist({})", q.to_text()),
        }
    }
}

/// Smallest m >= deg P with m ≡ −n mod (q−1).
pub fn smallest_iota_degree(tp: &TwistedPower) -> usize {
    let d = tp.field().q() as usize - 1;
    let mut m = tp.m();
    while (m + tp.n() as usize) % d != 0 {
        m += 1;
    }
    m
}

fn iota_degree(tp: &TwistedPower, m: Option<usize>) -> Result<usize> {
    let d = tp.field().q() as usize - 1;
    match m {
        None => Ok(smallest_iota_degree(tp)),
        Some(m) if m >= tp.m() && (m + tp.n() as usize) % d == 0 => Ok(m),
        Some(m) => Err(Error::InadmissibleIota { m }),
    }
}

fn pow_el(f: &FieldCtx, c: u32, e: u64) -> u32 {
    f.pow_el(c, e)
}

pub fn act_on_poly(g: &GroupElem, tp: &TwistedPower) -> Result<TwistedPower> {
    let f = tp.field();
    let ring = PolyRing::new(f.clone());
    let p = tp.poly();
    let n = tp.n();
    let (poly, n2) = match g {
        GroupElem::Mu(d) => (ring.compose_affine(p, &1, d), n),
        GroupElem::Nu(c) => {
            if *c == 0 {
                return Err(Error::ZeroScale);
            }
            (ring.compose_affine(p, c, &0), n)
        }
        GroupElem::Iota(m) => {
            let m = iota_degree(tp, *m)?;
            (ring.poly((0..=m).map(|i| p.at(m - i)).collect()), n)
        }
        GroupElem::Tau(c) => {
            let ci = f.inv_el(*c).ok_or(Error::ZeroScale)?;
            (ring.scale(&pow_el(f, ci, n as u64), p), n)
        }
        GroupElem::Sigma(k) => (p.clone(), n * f.q().pow(*k)),
        GroupElem::TwistMul(q) => {
            if q.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            (ring.mul(p, &ring.pow_poly(q, f.q() as u64 - 1)), n)
        }
    };
    TwistedPower::new(f.clone(), poly, n2)
}

/// Both sides of an L-function identity and whether they agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub lhs: LFun,
    pub rhs: LFun,
}

fn theta(f: &FieldCtx) -> Poly<u32> {
    PolyRing::new(f.clone()).x()
}

/// L with the Euler factor at θ removed.
pub fn l_without_theta(tp: &TwistedPower) -> Result<LFun> {
    remove_local_factors(tp, &l_function(tp), &[theta(tp.field())])
}

/// Compares L of the image under g, with the compensating substitution,
/// against L of tp.
pub fn check_l_identity(g: &GroupElem, tp: &TwistedPower) -> Result<IdentityCheck> {
    let f = tp.field();
    let image = act_on_poly(g, tp)?;
    let n = tp.n() as u64;
    let (lhs, rhs) = match g {
        GroupElem::Mu(d) => (l_function(&image).substitute(TMap::Shift(*d), 1)?, l_function(tp)),
        GroupElem::Nu(c) => {
            let ci = f.inv_el(*c).ok_or(Error::ZeroScale)?;
            (l_function(&image).substitute(TMap::Scale(ci), pow_el(f, *c, n))?, l_function(tp))
        }
        GroupElem::Iota(_) => {
            let lhs = l_without_theta(&image)?.substitute(TMap::Invert { n: tp.n() }, 1)?;
            (lhs, l_without_theta(tp)?)
        }
        GroupElem::Tau(c) => (l_function(&image).substitute(TMap::Identity, pow_el(f, *c, n))?, l_function(tp)),
        GroupElem::Sigma(k) => (l_function(&image), l_function(tp).substitute(TMap::FrobeniusPower(*k), 1)?),
        GroupElem::TwistMul(q) => {
            let primes = prime_factors(f, q)?;
            (l_function(&image), remove_local_factors(tp, &l_function(tp), &primes)?)
        }
    };
    Ok(IdentityCheck { holds: lhs == rhs, lhs, rhs })
}

/// Analytic rank is unchanged by μ_d, so it is constant on these orbits.
pub fn mu_orbit(tp: &TwistedPower) -> Vec<Poly<u32>> {
    let mut out: Vec<Poly<u32>> =
        (0..tp.field().q()).map(|d| act_on_poly(&GroupElem::Mu(d), tp).expect("mu is total").poly().clone()).collect();
    out.sort();
    out.dedup();
    out
}

/// A K×K′ window of an infinite matrix over F_q[T], together with the
/// internal index range used to compute it exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowMatrix {
    pub entries: Matrix<Poly<u32>>,
    pub internal: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conjugator {
    /// (i, j) ↦ C(j,i) d^{j−i} for j >= i
    W1(u32),
    /// diag(c^i)
    W2(u32),
    /// the k×k antidiagonal permutation
    W3(usize),
    /// (i, j) ↦ T^{j−i} for j >= i
    W5,
}

fn w1(f: &FieldCtx, d: u32, size: usize) -> Matrix<Poly<u32>> {
    let ring = PolyRing::new(f.clone());
    Matrix::from_fn(size, size, |i, j| {
        if j < i {
            Poly::zero()
        } else {
            let b = binom_mod_p(j as u64, i as u64, f.p());
            ring.constant(f.mul_el(b, pow_el(f, d, (j - i) as u64)))
        }
    })
}

fn w2(f: &FieldCtx, c: u32, size: usize) -> Matrix<Poly<u32>> {
    let ring = PolyRing::new(f.clone());
    Matrix::from_fn(size, size, |i, j| if i == j { ring.constant(pow_el(f, c, i as u64)) } else { Poly::zero() })
}

/// W5^s with T replaced by T^e. For s >= 0 this is (1 − T^e·S)^{−s} with S
/// the shift, entries C(t+s−1, t) T^{et}; for s < 0 it is (1 − T^e·S)^{|s|},
/// entries C(|s|, t) (−T^e)^t.
fn w5_power(f: &FieldCtx, s: i64, size: usize, e: usize) -> Matrix<Poly<u32>> {
    let ring = PolyRing::new(f.clone());
    Matrix::from_fn(size, size, |i, j| {
        if j < i {
            return Poly::zero();
        }
        let t = (j - i) as u64;
        let c = if s >= 0 {
            if s == 0 {
                u32::from(t == 0)
            } else {
                binom_mod_p(t + s as u64 - 1, t, f.p())
            }
        } else {
            let b = binom_mod_p((-s) as u64, t, f.p());
            if t % 2 == 1 {
                f.neg_el(b)
            } else {
                b
            }
        };
        ring.monomial(c, e * t as usize)
    })
}

pub fn conjugator(field: &FieldCtx, kind: Conjugator, window: usize) -> Result<WindowMatrix> {
    if window == 0 {
        return Err(Error::WindowTooSmall("window must be at least 1".into()));
    }
    let ring = PolyRing::new(field.clone());
    let entries = match kind {
        Conjugator::W1(d) => w1(field, d, window),
        Conjugator::W2(c) => {
            if c == 0 {
                return Err(Error::ZeroScale);
            }
            w2(field, c, window)
        }
        Conjugator::W3(k) => {
            if k == 0 {
                return Err(Error::WindowTooSmall("antidiagonal size must be at least 1".into()));
            }
            Matrix::from_fn(k, k, |i, j| if i + j + 1 == k { ring.one() } else { Poly::zero() })
        }
        Conjugator::W5 => w5_power(field, 1, window, 1),
    };
    let internal = entries.rows();
    Ok(WindowMatrix { entries, internal })
}

fn infinite_section(tp: &TwistedPower, size: usize) -> Matrix<Poly<u32>> {
    Matrix::from_fn(size, size, |r, c| matrix_entry(tp, r, c))
}

fn map_entries(m: &Matrix<Poly<u32>>, f: impl Fn(&Poly<u32>) -> Poly<u32>) -> Matrix<Poly<u32>> {
    m.map(f)
}

/// (A·M·B) restricted to [0, K)², where A and B are N×N.
fn window_conj(
    ring: &PolyRing<FieldCtx>,
    a: &Matrix<Poly<u32>>,
    m: &Matrix<Poly<u32>>,
    b: &Matrix<Poly<u32>>,
    k: usize,
) -> Matrix<Poly<u32>> {
    let am = a.submatrix(0, 0, k, a.cols()).mul(ring, m);
    am.mul(ring, &b.submatrix(0, 0, b.rows(), k))
}

/// Checks the conjugacy relation attached to g on the window [0, K)².
///
/// * μ_d: M(μ_d P)(T−d) = W1(d)·M(P)·W1(−d)
/// * ν_c: M(ν_c P)(T/c) = c^{−n}·W2(c)·M(P)·W2(c)^{−1}
/// * ι:   W3·M(P)·W3^{−1} = (−T)ⁿ·M(ι P)(1/T) at the fixed size (m+n)/(q−1) − 1; K is ignored
/// * τ_c: M(τ_c P) = c^{−n}·M(P)
/// * σ_k: with n′ = q^{k−1}n and V = W5 evaluated at T^q (entries T^{q(j−i)}),
///   V^{n′}·M(P, qn′)·V^{−n′} has zero top n′ rows and lower-right block M(P, n′)(T^q)
/// * θ^{q−1}: M(Pθ^{q−1}) has corner a_0Tⁿ, zeros beside it, and M(P) shifted by one
pub fn verify_conjugacy(g: &GroupElem, tp: &TwistedPower, window: usize) -> Result<bool> {
    let f = tp.field().clone();
    let ring = PolyRing::new(f.clone());
    let (m, n, q) = (tp.m(), tp.n() as usize, f.q() as usize);
    if window == 0 {
        return Err(Error::WindowTooSmall("window must be at least 1".into()));
    }
    let big = q * window + m + n;
    let image = act_on_poly(g, tp)?;
    match g {
        GroupElem::Mu(d) => {
            let lhs = map_entries(&infinite_section(&image, window), |e| ring.compose_affine(e, &1, &f.neg_el(*d)));
            let rhs = window_conj(&ring, &w1(&f, *d, big), &infinite_section(tp, big), &w1(&f, f.neg_el(*d), big), window);
            Ok(lhs == rhs)
        }
        GroupElem::Nu(c) => {
            let ci = f.inv_el(*c).ok_or(Error::ZeroScale)?;
            let lhs = map_entries(&infinite_section(&image, window), |e| ring.compose_affine(e, &ci, &0));
            let conj = window_conj(&ring, &w2(&f, *c, big), &infinite_section(tp, big), &w2(&f, ci, big), window);
            let s = pow_el(&f, ci, n as u64);
            Ok(lhs == conj.scale(&ring, &ring.constant(s)))
        }
        GroupElem::Iota(mi) => {
            let mm = iota_degree(tp, *mi)?;
            let k = (mm + n) / (q - 1) - 1;
            if k == 0 {
                return Err(Error::WindowTooSmall(format!("iota at m={mm} gives an empty matrix")));
            }
            let lhs_full = infinite_section(tp, k);
            let lhs = Matrix::from_fn(k, k, |i, j| lhs_full.get(k - 1 - i, k - 1 - j).clone());
            let sign = if n % 2 == 1 { f.neg_el(1) } else { 1 };
            let rhs = map_entries(&infinite_section(&image, k), |e| {
                let mut v = vec![0u32; n + 1];
                for (i, &a) in e.coeffs().iter().enumerate() {
                    v[n - i] = f.mul_el(a, sign);
                }
                ring.poly(v)
            });
            Ok(lhs == rhs)
        }
        GroupElem::Tau(c) => {
            let ci = f.inv_el(*c).ok_or(Error::ZeroScale)?;
            let s = ring.constant(pow_el(&f, ci, n as u64));
            Ok(infinite_section(&image, window) == infinite_section(tp, window).scale(&ring, &s))
        }
        GroupElem::Sigma(k) => {
            if *k == 0 {
                return Ok(image == *tp);
            }
            let np = tp.n() as usize * q.pow(k - 1);
            if window <= np {
                return Err(Error::WindowTooSmall(format!("window {window} must exceed the zero block size {np}")));
            }
            let lower = TwistedPower::new(f.clone(), tp.poly().clone(), np as u32)?;
            let upper = TwistedPower::new(f.clone(), tp.poly().clone(), (q * np) as u32)?;
            let big = q * window + m + q * np + 1;
            let conj = window_conj(
                &ring,
                &w5_power(&f, np as i64, big, q),
                &infinite_section(&upper, big),
                &w5_power(&f, -(np as i64), big, q),
                window,
            );
            let top_zero = (0..np).all(|i| (0..window).all(|j| conj.get(i, j).is_zero()));
            let block = infinite_section(&lower, window - np);
            let block_ok = (np..window).all(|i| {
                (np..window).all(|j| *conj.get(i, j) == ring.inflate(block.get(i - np, j - np), q))
            });
            Ok(top_zero && block_ok)
        }
        GroupElem::TwistMul(qq) => {
            if *qq != theta(&f) {
                return Err(Error::Unsupported(
                    "matrix relation for multiplication by Q^{q-1} is only implemented for Q = θ".into(),
                ));
            }
            let big = infinite_section(&image, window);
            let small = infinite_section(tp, window);
            let corner = ring.monomial(tp.a(0), n);
            let ok = *big.get(0, 0) == corner
                && (1..window).all(|j| big.get(0, j).is_zero())
                && (1..window).all(|i| (1..window).all(|j| big.get(i, j) == small.get(i - 1, j - 1)));
            Ok(ok)
        }
    }
}

/// L-identity for every standard generator at once; used by orbit reports.
pub fn standard_generators(field: &FieldCtx) -> Vec<GroupElem> {
    let mut out = Vec::new();
    for d in 1..field.q() {
        out.push(GroupElem::Mu(d));
    }
    for c in 2..field.q() {
        out.push(GroupElem::Nu(c));
    }
    out.push(GroupElem::Iota(None));
    for c in 2..field.q() {
        out.push(GroupElem::Tau(c));
    }
    out.push(GroupElem::Sigma(1));
    out.push(GroupElem::TwistMul(theta(field)));
    out
}

/// The θ-factor N_θ = a_0 Tⁿ, exposed for tests of the ι identity.
pub fn theta_norm(tp: &TwistedPower) -> Result<Poly<u32>> {
    Ok(local_factor(tp, &theta(tp.field()))?.norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motive::analytic_rank;
    use proptest::prelude::*;

    fn f3() -> FieldCtx {
        FieldCtx::new(3, 1).unwrap()
    }

    fn tp(f: &FieldCtx, c: &[u32], n: u32) -> TwistedPower {
        TwistedPower::from_coeffs(f, c, n).unwrap()
    }

    #[test]
    fn actions_on_small_polys() {
        let f = f3();
        let t = tp(&f, &[0, 1], 1);
        assert_eq!(act_on_poly(&GroupElem::Mu(1), &t).unwrap().poly().coeffs(), &[1, 1]);
        let t = tp(&f, &[2, 1], 1);
        assert_eq!(act_on_poly(&GroupElem::Iota(Some(1)), &t).unwrap().poly().coeffs(), &[1, 2]);
        assert!(matches!(act_on_poly(&GroupElem::Iota(Some(2)), &t), Err(Error::InadmissibleIota { m: 2 })));
        assert_eq!(act_on_poly(&GroupElem::Tau(2), &t).unwrap().poly().coeffs(), &[1, 2]);
        let s = act_on_poly(&GroupElem::Sigma(2), &t).unwrap();
        assert_eq!(s.n(), 9);
    }

    #[test]
    fn conjugator_examples() {
        let f = f3();
        let w = conjugator(&f, Conjugator::W1(1), 3).unwrap().entries;
        let rows: Vec<Vec<u32>> = (0..3).map(|i| (0..3).map(|j| w.get(i, j).at(0)).collect()).collect();
        assert_eq!(rows, vec![vec![1, 1, 1], vec![0, 1, 2], vec![0, 0, 1]]);
        let id = conjugator(&f, Conjugator::W1(0), 4).unwrap().entries;
        assert_eq!(id, Matrix::identity(&PolyRing::new(f.clone()), 4));
        let ring = PolyRing::new(f.clone());
        let w5 = w5_power(&f, 1, 5, 1);
        let w5i = w5_power(&f, -1, 5, 1);
        assert_eq!(w5.mul(&ring, &w5i), Matrix::identity(&ring, 5));
        assert_eq!(w5i.get(0, 1), &ring.poly(vec![0, 2]));
        assert_eq!(w5_power(&f, 3, 6, 3).mul(&ring, &w5_power(&f, -3, 6, 3)), Matrix::identity(&ring, 6));
        assert!(conjugator(&f, Conjugator::W1(1), 0).is_err());
    }

    #[test]
    fn w1_is_a_one_parameter_group() {
        let f = FieldCtx::new(3, 2).unwrap();
        let ring = PolyRing::new(f.clone());
        for d in 0..9 {
            for e in 0..9 {
                let prod = w1(&f, d, 12).mul(&ring, &w1(&f, e, 12));
                assert_eq!(prod, w1(&f, f.add_el(d, e), 12));
            }
        }
    }

    #[test]
    fn rank_is_constant_on_mu_orbits() {
        let f = f3();
        for m in 0..=6usize {
            for code in 0..3u64.pow(m as u32) {
                let mut c: Vec<u32> = (0..m).map(|i| ((code / 3u64.pow(i as u32)) % 3) as u32).collect();
                c.push(1);
                let t = tp(&f, &c, 1);
                let r = analytic_rank(&t);
                for d in 1..3 {
                    assert_eq!(analytic_rank(&act_on_poly(&GroupElem::Mu(d), &t).unwrap()), r);
                }
            }
        }
    }

    #[test]
    fn tau_nu_composite_preserves_rank_in_even_degree() {
        let f = f3();
        for code in 0..3u64.pow(6) {
            let mut c: Vec<u32> = (0..6).map(|i| ((code / 3u64.pow(i)) % 3) as u32).collect();
            c.push(1);
            let t = tp(&f, &c, 1);
            let nu = act_on_poly(&GroupElem::Nu(2), &t).unwrap();
            let both = act_on_poly(&GroupElem::Tau(2), &nu).unwrap();
            assert_eq!(both.leading(), 2);
            assert_eq!(analytic_rank(&both), analytic_rank(&t));
        }
    }

    #[test]
    fn orbit_sizes() {
        let f = f3();
        let ss = tp(&f, &[0, 2, 0, 1], 1); // θ³ − θ
        assert_eq!(mu_orbit(&ss).len(), 1);
        assert_eq!(mu_orbit(&tp(&f, &[0, 1, 1], 1)).len(), 3);
    }

    fn arb_poly(q: u32, max_m: usize) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0..q, 1..=max_m + 1).prop_map(|mut c| {
            if *c.last().unwrap() == 0 {
                *c.last_mut().unwrap() = 1;
            }
            c
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn l_identities_q3(c in arb_poly(3, 8), n in 1u32..=2, d in 0u32..3, cc in 1u32..3) {
            let f = f3();
            let t = tp(&f, &c, n);
            for g in [GroupElem::Mu(d), GroupElem::Nu(cc), GroupElem::Iota(None), GroupElem::Tau(cc), GroupElem::Sigma(1)] {
                let chk = check_l_identity(&g, &t).unwrap();
                prop_assert!(chk.holds, "{} failed: {:?}", g.name(), chk);
            }
        }

        #[test]
        fn l_identities_q4(c in arb_poly(4, 5), d in 0u32..4, cc in 1u32..4) {
            let f = FieldCtx::new(2, 2).unwrap();
            let t = tp(&f, &c, 1);
            for g in [GroupElem::Mu(d), GroupElem::Nu(cc), GroupElem::Iota(None), GroupElem::Tau(cc)] {
                prop_assert!(check_l_identity(&g, &t).unwrap().holds, "{}", g.name());
            }
        }

        #[test]
        fn twist_mul_identity(c in arb_poly(3, 5), qc in prop::collection::vec(0u32..3, 1..=3)) {
            let f = f3();
            let q = PolyRing::new(f.clone()).poly(qc);
            prop_assume!(!q.is_zero());
            let t = tp(&f, &c, 1);
            prop_assert!(check_l_identity(&GroupElem::TwistMul(q), &t).unwrap().holds);
        }

        #[test]
        fn conjugacies(c in arb_poly(3, 7), n in 1u32..=2, d in 0u32..3, cc in 1u32..3, k in 1usize..=10) {
            let f = f3();
            let t = tp(&f, &c, n);
            prop_assert!(verify_conjugacy(&GroupElem::Mu(d), &t, k).unwrap());
            prop_assert!(verify_conjugacy(&GroupElem::Nu(cc), &t, k).unwrap());
            prop_assert!(verify_conjugacy(&GroupElem::Tau(cc), &t, k).unwrap());
            prop_assert!(verify_conjugacy(&GroupElem::TwistMul(theta(&f)), &t, k).unwrap());
            let mut mi = smallest_iota_degree(&t);
            if (mi + n as usize) / 2 < 2 { mi += 2; }
            prop_assert!(verify_conjugacy(&GroupElem::Iota(Some(mi)), &t, k).unwrap());
            if k > n as usize {
                prop_assert!(verify_conjugacy(&GroupElem::Sigma(1), &t, k).unwrap());
            }
        }
    }
}
