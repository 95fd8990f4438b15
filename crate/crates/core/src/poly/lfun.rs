use serde::{Deserialize, Serialize};

use super::{Poly, PolyRing};
use crate::error::{Error, Result};
use crate::ff::{FieldCtx, Ring};

/// Σ_j C_j(T)·U^j with C_j ∈ F_q[T].
///
/// Trailing zero U-coefficients are trimmed. For the L-function of a twisted
/// Carlitz power the constant term is 1 and deg_T C_j <= n·j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LFun {
    field: FieldCtx,
    coeffs: Vec<Poly<u32>>,
}

/// Substitutions in the variable T.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TMap {
    Identity,
    /// T ↦ T − d
    Shift(u32),
    /// T ↦ c·T
    Scale(u32),
    /// T ↦ T^{q^k}
    FrobeniusPower(u32),
    /// U^j-coefficient C_j ↦ (−1)^{nj} T^{nj} C_j(1/T); needs deg C_j <= n·j.
    Invert { n: u32 },
}

/// One term of the JSON form: `{"u_deg": j, "coeffs_T": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LFunTerm {
    pub u_deg: usize,
    #[serde(rename = "coeffs_T")]
    pub coeffs_t: Vec<u32>,
}

impl LFun {
    pub fn new(field: FieldCtx, mut coeffs: Vec<Poly<u32>>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        LFun { field, coeffs }
    }

    pub fn one(field: FieldCtx) -> Self {
        LFun { field, coeffs: vec![Poly { coeffs: vec![1] }] }
    }

    /// Σ c_j U^j with constant coefficients.
    pub fn from_constants(field: FieldCtx, cs: &[u32]) -> Self {
        let ring = PolyRing::new(field.clone());
        let coeffs = cs.iter().map(|&c| ring.constant(c)).collect();
        LFun::new(field, coeffs)
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    fn ring(&self) -> PolyRing<FieldCtx> {
        PolyRing::new(self.field.clone())
    }

    pub fn coeffs(&self) -> &[Poly<u32>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Poly<u32> {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    /// U-degree; `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].coeffs() == [1]
    }

    pub fn constant_term_is_one(&self) -> bool {
        self.coeffs.first().is_some_and(|c| c.coeffs() == [1])
    }

    /// deg_T C_j <= n·j for every j.
    pub fn satisfies_degree_bound(&self, n: u32) -> bool {
        self.coeffs.iter().enumerate().all(|(j, c)| c.degree().map_or(true, |d| d <= n as usize * j))
    }

    pub fn mul(&self, other: &LFun) -> LFun {
        self.mul_truncated(other, usize::MAX)
    }

    /// Product modulo U^{max_deg+1}.
    pub fn mul_truncated(&self, other: &LFun, max_deg: usize) -> LFun {
        let ring = self.ring();
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return LFun::new(self.field.clone(), vec![]);
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(max_deg.saturating_add(1));
        let mut out = vec![Poly::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] = ring.add(&out[i + j], &ring.mul(a, b));
            }
        }
        LFun::new(self.field.clone(), out)
    }

    /// Drops U-degrees above `max_deg`.
    pub fn truncate(&self, max_deg: usize) -> LFun {
        let mut c = self.coeffs.clone();
        c.truncate(max_deg.saturating_add(1));
        LFun::new(self.field.clone(), c)
    }

    /// The value at U = γ, an element of F_q[T].
    pub fn eval_u(&self, gamma: u32) -> Poly<u32> {
        let ring = self.ring();
        let g = ring.constant(gamma);
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| ring.add(&ring.mul(&acc, &g), c))
    }

    /// Largest r with (U − γ)^r | L in F_q[T][U], by repeated synthetic
    /// division. Formal derivatives are not used: in characteristic p they
    /// vanish identically on p-th powers.
    pub fn order_at(&self, gamma: u32) -> Result<u32> {
        if gamma == 0 {
            return Err(Error::ZeroPoint);
        }
        if self.coeffs.is_empty() {
            return Err(Error::Unsupported("order of the zero series".into()));
        }
        let ring = self.ring();
        let g = ring.constant(gamma);
        let mut cur = self.coeffs.clone();
        let mut order = 0;
        while cur.len() > 1 {
            // cur = (U − γ)·quo + rem
            let d = cur.len() - 1;
            let mut quo = vec![Poly::zero(); d];
            quo[d - 1] = cur[d].clone();
            for j in (1..d).rev() {
                quo[j - 1] = ring.add(&cur[j], &ring.mul(&g, &quo[j]));
            }
            let rem = ring.add(&cur[0], &ring.mul(&g, &quo[0]));
            if !rem.is_zero() {
                break;
            }
            order += 1;
            cur = quo;
        }
        Ok(order)
    }

    /// Applies a T-substitution and U ↦ γ·U.
    pub fn substitute(&self, t_map: TMap, u_scale: u32) -> Result<LFun> {
        if u_scale == 0 {
            return Err(Error::ZeroScale);
        }
        let f = &self.field;
        let ring = self.ring();
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut gamma_pow = 1u32;
        for (j, c) in self.coeffs.iter().enumerate() {
            let mapped = match t_map {
                TMap::Identity => c.clone(),
                TMap::Shift(d) => ring.compose_affine(c, &1, &f.neg_el(d)),
                TMap::Scale(s) => {
                    if s == 0 {
                        return Err(Error::ZeroScale);
                    }
                    ring.compose_affine(c, &s, &0)
                }
                TMap::FrobeniusPower(k) => ring.inflate(c, (f.q() as usize).pow(k)),
                TMap::Invert { n } => {
                    let top = n as usize * j;
                    if c.degree().is_some_and(|d| d > top) {
                        return Err(Error::DegreeBound { n, j });
                    }
                    let mut v = vec![0u32; top + 1];
                    for (i, &a) in c.coeffs().iter().enumerate() {
                        v[top - i] = a;
                    }
                    let p = ring.poly(v);
                    if (n as usize * j) % 2 == 1 {
                        ring.neg(&p)
                    } else {
                        p
                    }
                }
            };
            out.push(ring.scale(&gamma_pow, &mapped));
            gamma_pow = f.mul_el(gamma_pow, u_scale);
        }
        Ok(LFun::new(self.field.clone(), out))
    }

    /// `[{"u_deg": j, "coeffs_T": [...]}, ...]` for every j up to the degree.
    pub fn to_terms(&self) -> Vec<LFunTerm> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| LFunTerm { u_deg: j, coeffs_t: c.coeffs().to_vec() })
            .collect()
    }

    pub fn to_terms_json(&self) -> String {
        serde_json::to_string(&self.to_terms()).expect("plain data serializes")
    }

    pub fn from_terms(field: FieldCtx, terms: &[LFunTerm]) -> Result<LFun> {
        let len = terms.iter().map(|t| t.u_deg + 1).max().unwrap_or(0);
        let mut coeffs = vec![Poly::zero(); len];
        let ring = PolyRing::new(field.clone());
        for t in terms {
            if t.coeffs_t.iter().any(|&c| c >= field.q()) {
                return Err(Error::Parse(format!("coefficient out of range at U^{}", t.u_deg)));
            }
            coeffs[t.u_deg] = ring.add(&coeffs[t.u_deg], &ring.poly(t.coeffs_t.clone()));
        }
        Ok(LFun::new(field, coeffs))
    }

    pub fn from_terms_json(field: FieldCtx, s: &str) -> Result<LFun> {
        let terms: Vec<LFunTerm> = serde_json::from_str(s)?;
        LFun::from_terms(field, &terms)
    }

    /// `{"0": [1], "2": [0, 1]}`: U-degree to T-coefficients, zero terms omitted.
    pub fn to_degree_map(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                m.insert(j.to_string(), serde_json::json!(c.coeffs()));
            }
        }
        serde_json::Value::Object(m)
    }

    pub fn from_degree_map(field: FieldCtx, v: &serde_json::Value) -> Result<LFun> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
        let mut terms = Vec::with_capacity(obj.len());
        for (k, c) in obj {
            let u_deg = k.parse().map_err(|_| Error::Parse(format!("bad U-degree key {k:?}")))?;
            let coeffs_t: Vec<u32> = serde_json::from_value(c.clone())?;
            terms.push(LFunTerm { u_deg, coeffs_t });
        }
        LFun::from_terms(field, &terms)
    }
}
