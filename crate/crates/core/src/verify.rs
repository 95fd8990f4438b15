//! Seeded randomized suites: Euler product against the matrix, L-function
//! identities under the group action, and matrix conjugacies on windows.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::{euler_l_function, truncated_product};
use crate::ff::FieldCtx;
use crate::motive::{l_function, TwistedPower};
use crate::poly::{Poly, PolyRing};
use crate::symmetry::{check_l_identity, smallest_iota_degree, verify_conjugacy, GroupElem};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    Mu,
    Nu,
    Iota,
    Tau,
    Sigma,
    Twist,
}

impl GenKind {
    pub const ALL: [GenKind; 6] = [GenKind::Mu, GenKind::Nu, GenKind::Iota, GenKind::Tau, GenKind::Sigma, GenKind::Twist];

    pub fn name(self) -> &'static str {
        match self {
            GenKind::Mu => "mu",
            GenKind::Nu => "nu",
            GenKind::Iota => "iota",
            GenKind::Tau => "tau",
            GenKind::Sigma => "sigma",
            GenKind::Twist => "twist",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GenKind::ALL
            .into_iter()
            .find(|g| g.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown generator {s:?} (expected mu, nu, iota, tau, sigma, twist)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Euler,
    Identities,
    Conj,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "euler" => Ok(Suite::Euler),
            "identities" | "identity" | "l" => Ok(Suite::Identities),
            "conj" | "conjugacy" => Ok(Suite::Conj),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parse(format!("unknown suite {s:?} (expected euler, identities, conj, all)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: impl Into<String>) -> Self {
        SuiteReport { name: name.into(), cases: 0, passed: 0, failures: Vec::new() }
    }

    fn record(&mut self, label: impl FnOnce() -> String, outcome: Result<bool>) {
        self.cases += 1;
        match outcome {
            Ok(true) => self.passed += 1,
            Ok(false) => self.failures.push(label()),
            Err(e) => self.failures.push(format!("{}: {e}", label())),
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.cases
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub cases: usize,
    pub seed: u64,
    /// Generators to exercise; empty means all.
    pub gens: Vec<GenKind>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { cases: 100, seed: DEFAULT_SEED, gens: Vec::new() }
    }
}

impl SuiteOptions {
    fn gens(&self) -> Vec<GenKind> {
        if self.gens.is_empty() {
            GenKind::ALL.to_vec()
        } else {
            self.gens.clone()
        }
    }
}

/// A random P of degree <= max_deg with nonzero leading coefficient.
pub fn random_poly(rng: &mut impl Rng, field: &FieldCtx, max_deg: usize) -> Poly<u32> {
    let q = field.q();
    let m = rng.gen_range(0..=max_deg);
    let mut c: Vec<u32> = (0..m).map(|_| rng.gen_range(0..q)).collect();
    c.push(rng.gen_range(1..q));
    PolyRing::new(field.clone()).poly(c)
}

fn field_of(q: u32) -> FieldCtx {
    FieldCtx::of_order(q as u64).expect("suite fields are small prime powers")
}

fn label(tp: &TwistedPower, what: &str) -> String {
    format!("{what} q={} n={} P={}", tp.field().q(), tp.n(), tp.poly().to_text())
}

/// Euler product against the matrix determinant: q in {2,3}, deg P <= 9,
/// n <= 2; compared through U-degree 4 and exactly at D = k_min and k_min + 1.
pub fn euler_suite(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = [field_of(2), field_of(3)];
    let mut rep = SuiteReport::new("euler");
    for _ in 0..cases {
        let f = &fields[rng.gen_range(0..2)];
        let p = random_poly(&mut rng, f, 9);
        let n = rng.gen_range(1..=2);
        let tp = match TwistedPower::new(f.clone(), p, n) {
            Ok(t) => t,
            Err(e) => {
                rep.record(|| "construct".into(), Err(e));
                continue;
            }
        };
        let outcome = (|| {
            let l = l_function(&tp);
            let k = tp.k_min();
            Ok(truncated_product(&tp, 4)? == l.truncate(4)
                && euler_l_function(&tp)? == l
                && truncated_product(&tp, k + 1)? == l)
        })();
        rep.record(|| label(&tp, "euler"), outcome);
    }
    rep
}

fn random_elem(rng: &mut impl Rng, f: &FieldCtx, kind: GenKind) -> GroupElem {
    let q = f.q();
    match kind {
        GenKind::Mu => GroupElem::Mu(rng.gen_range(0..q)),
        GenKind::Nu => GroupElem::Nu(rng.gen_range(1..q)),
        GenKind::Iota => GroupElem::Iota(None),
        GenKind::Tau => GroupElem::Tau(rng.gen_range(1..q)),
        GenKind::Sigma => GroupElem::Sigma(1),
        GenKind::Twist => GroupElem::TwistMul(random_poly(rng, f, 2)),
    }
}

/// The L-function identity of each generator on `cases` random P.
/// Fields F_2, F_3, F_4, F_5; deg P <= 8; n <= 3. The twist suite removes
/// the Euler factors at the primes dividing the random Q (deg Q <= 2).
pub fn identity_suite(opts: &SuiteOptions) -> Vec<SuiteReport> {
    let fields: Vec<FieldCtx> = [2, 3, 4, 5].into_iter().map(field_of).collect();
    let mut out = Vec::new();
    for (gi, kind) in opts.gens().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ ((gi as u64 + 1) << 32));
        let mut rep = SuiteReport::new(format!("identity/{kind}"));
        for _ in 0..opts.cases {
            let f = &fields[rng.gen_range(0..fields.len())];
            let p = random_poly(&mut rng, f, 8);
            let mut n = rng.gen_range(1..=3u32);
            let mut g = random_elem(&mut rng, f, kind);
            if kind == GenKind::Sigma {
                // keep q^k n small enough for quick determinants
                let k = rng.gen_range(1..=2u32);
                while n > 1 && n * f.q().pow(k) > 27 {
                    n -= 1;
                }
                g = GroupElem::Sigma(if n * f.q().pow(k) > 27 { 1 } else { k });
            }
            let tp = TwistedPower::new(f.clone(), p, n).expect("random P is nonzero");
            let outcome = check_l_identity(&g, &tp).map(|c| c.holds);
            rep.record(|| label(&tp, &g.name()), outcome);
        }
        out.push(rep);
    }
    out
}

/// Matrix conjugacy of each generator on windows K in 1..=10.
pub fn conjugacy_suite(opts: &SuiteOptions) -> Vec<SuiteReport> {
    let fields: Vec<FieldCtx> = [2, 3, 4, 5].into_iter().map(field_of).collect();
    let mut out = Vec::new();
    for (gi, kind) in opts.gens().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ ((gi as u64 + 1) << 40));
        let mut rep = SuiteReport::new(format!("conj/{kind}"));
        for _ in 0..opts.cases {
            let f = &fields[rng.gen_range(0..fields.len())];
            let ring = PolyRing::new(f.clone());
            let p = random_poly(&mut rng, f, 8);
            let n = rng.gen_range(1..=3u32);
            let mut window = rng.gen_range(1..=10usize);
            let tp = TwistedPower::new(f.clone(), p, n).expect("random P is nonzero");
            let g = match kind {
                GenKind::Iota => {
                    let q = f.q() as usize;
                    let mut m = smallest_iota_degree(&tp);
                    if (m + n as usize) / (q - 1) < 2 {
                        m += q - 1;
                    }
                    GroupElem::Iota(Some(m))
                }
                GenKind::Sigma => {
                    window = window.max(n as usize + 1);
                    GroupElem::Sigma(1)
                }
                GenKind::Twist => GroupElem::TwistMul(ring.x()),
                _ => random_elem(&mut rng, f, kind),
            };
            let outcome = verify_conjugacy(&g, &tp, window);
            rep.record(|| format!("{} K={window}", label(&tp, &g.name())), outcome);
        }
        out.push(rep);
    }
    out
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Vec<SuiteReport> {
    match suite {
        Suite::Euler => vec![euler_suite(opts.cases, opts.seed)],
        Suite::Identities => identity_suite(opts),
        Suite::Conj => conjugacy_suite(opts),
        Suite::All => {
            let mut v = vec![euler_suite(opts.cases, opts.seed)];
            v.extend(identity_suite(opts));
            v.extend(conjugacy_suite(opts));
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_are_reproducible() {
        let opts = SuiteOptions { cases: 8, seed: 7, gens: Vec::new() };
        let a = run_suite(Suite::All, &opts);
        assert_eq!(a.len(), 1 + 2 * GenKind::ALL.len());
        for r in &a {
            assert!(r.ok(), "{r:?}");
            assert_eq!(r.cases, 8);
        }
        assert_eq!(run_suite(Suite::All, &opts), a);
    }

    #[test]
    fn parsing() {
        assert_eq!("Mu".parse::<GenKind>().unwrap(), GenKind::Mu);
        assert!("rho".parse::<GenKind>().is_err());
        assert_eq!("conj".parse::<Suite>().unwrap(), Suite::Conj);
    }
}
