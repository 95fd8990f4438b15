//! Browser bindings: L-function and rank of one P, a group-action identity
//! check, and a small exhaustive scan. Each call returns a JSON string.

use clrank_core::ff::FieldCtx;
use clrank_core::motive::{build_matrix, l_function, RankEngine, TwistedPower};
use clrank_core::poly::Poly;
use clrank_core::scan::{run_scan, ScanMode, ScanSpec};
use clrank_core::symmetry::{act_on_poly, check_l_identity, GroupElem};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Scans in the page stay below 3^10 polynomials.
pub const WEB_SCAN_CAP: u64 = 59_049;

fn tp(q: u32, n: u32, poly: &str) -> Result<TwistedPower, String> {
    let f = FieldCtx::of_order(q as u64).map_err(|e| e.to_string())?;
    let p = Poly::parse(&f, poly).map_err(|e| e.to_string())?;
    TwistedPower::new(f, p, n).map_err(|e| e.to_string())
}

pub fn lfun_json(q: u32, n: u32, poly: &str) -> Result<String, String> {
    let t = tp(q, n, poly)?;
    let l = l_function(&t);
    let k = t.k_min();
    let m = build_matrix(&t, k).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<String>> = (0..k).map(|i| (0..k).map(|j| m.get(i, j).to_text()).collect()).collect();
    let rank = RankEngine::new(t.field(), n, k).map_err(|e| e.to_string())?.rank(&t);
    Ok(json!({
        "poly": t.poly().to_text(),
        "k": k,
        "matrix": rows,
        "l": l.to_degree_map(),
        "rank": rank,
        "coset": t.in_distinguished_coset(),
    })
    .to_string())
}

fn parse_gen(field: &FieldCtx, gen: &str, param: &str) -> Result<GroupElem, String> {
    let num = |s: &str| -> Result<u32, String> {
        let v: u32 = s.trim().parse().map_err(|_| format!("bad parameter {s:?}"))?;
        if v >= field.q() {
            return Err(format!("{v} is not an element of F_{}", field.q()));
        }
        Ok(v)
    };
    Ok(match gen {
        "mu" => GroupElem::Mu(num(param)?),
        "nu" => GroupElem::Nu(num(param)?),
        "tau" => GroupElem::Tau(num(param)?),
        "iota" => GroupElem::Iota(if param.trim().is_empty() {
            None
        } else {
            Some(param.trim().parse().map_err(|_| format!("bad degree {param:?}"))?)
        }),
        "sigma" => GroupElem::Sigma(param.trim().parse().map_err(|_| format!("bad exponent {param:?}"))?),
        "twist" => {
            GroupElem::TwistMul(Poly::parse(field, param).map_err(|e| e.to_string())?)
        }
        _ => return Err(format!("unknown generator {gen:?}")),
    })
}

pub fn identity_json(q: u32, n: u32, poly: &str, gen: &str, param: &str) -> Result<String, String> {
    let t = tp(q, n, poly)?;
    let g = parse_gen(t.field(), gen, param)?;
    if let GroupElem::Sigma(k) = g {
        if (n as u64) * (q as u64).pow(k) > 81 {
            return Err("q^k n above 81 is too slow for the page".into());
        }
    }
    let image = act_on_poly(&g, &t).map_err(|e| e.to_string())?;
    let c = check_l_identity(&g, &t).map_err(|e| e.to_string())?;
    Ok(json!({
        "generator": g.name(),
        "image": image.poly().to_text(),
        "image_n": image.n(),
        "holds": c.holds,
        "lhs": c.lhs.to_degree_map(),
        "rhs": c.rhs.to_degree_map(),
    })
    .to_string())
}

pub fn scan_json(q: u32, n: u32, m: usize, lead: u32, shift_stable: bool) -> Result<String, String> {
    let f = FieldCtx::of_order(q as u64).map_err(|e| e.to_string())?;
    let mode = if shift_stable { ScanMode::ShiftStable } else { ScanMode::AllSquarefree };
    let mut spec = ScanSpec::new(f, n, m, lead, mode);
    spec.cap = WEB_SCAN_CAP;
    spec.workers = 1;
    spec.witness_cap = 4;
    let table = run_scan(&spec).map_err(|e| e.to_string())?;
    let cell = table.cell(m, lead).ok_or("empty scan")?;
    Ok(json!({
        "m": m,
        "a": lead,
        "enumerated": cell.enumerated,
        "squarefree": cell.squarefree,
        "histogram": cell.histogram,
        "witnesses": cell.witnesses,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn lfun(q: u32, n: u32, poly: &str) -> Result<String, JsValue> {
    lfun_json(q, n, poly).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn identity(q: u32, n: u32, poly: &str, gen: &str, param: &str) -> Result<String, JsValue> {
    identity_json(q, n, poly, gen, param).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn scan(q: u32, n: u32, m: usize, lead: u32, shift_stable: bool) -> Result<String, JsValue> {
    scan_json(q, n, m, lead, shift_stable).map_err(|e| JsValue::from_str(&e))
}
