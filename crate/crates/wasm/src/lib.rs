//! Browser bindings: saddle constants, the g'(iy) curve, and a small
//! exact-vs-estimate table.
//!
//! Each export is a thin wrapper over a plain function returning JSON, so the
//! logic can be tested natively.

use serde_json::{json, Value};
use sumsq::asymptotic::{compare_table_with, estimate, stable_constants};
use sumsq::qseries::{r_k, Convolution};
use sumsq::saddle::{constants, eval_g1};
use sumsq::HighPrecReal;
use wasm_bindgen::prelude::*;

const BITS: usize = 128;
/// Largest n for which the page computes r_n(an+b) exactly.
pub const EXACT_LIMIT: u64 = 1500;
const MAX_CURVE_SAMPLES: u32 = 2000;

fn to_json(v: Value) -> String {
    v.to_string()
}

/// `{"a","b","y","A","B","g2"}` with decimal strings of `digits` significant digits.
pub fn constants_json(a: u32, b: i32, digits: u32) -> Result<String, String> {
    if a == 0 {
        return Err("a must be at least 1".into());
    }
    let digits = digits.clamp(1, 60) as usize;
    let bits = (digits as f64 / std::f64::consts::LOG10_2) as usize + 32;
    let sd = constants(a as u64, b as i64, bits.max(BITS)).map_err(|e| e.to_string())?;
    Ok(to_json(json!({
        "a": a,
        "b": b,
        "y": sd.y.to_decimal_string(digits),
        "A": sd.growth.to_decimal_string(digits),
        "B": sd.prefactor.to_decimal_string(digits),
        "g2": sd.curvature.to_decimal_string(digits),
    })))
}

/// `samples` points of `(y, g'(iy))` on a log-spaced grid over `[y_min, y_max]`,
/// flattened as `[y0, g0, y1, g1, ...]`.
pub fn g_prime_samples(a: u32, y_min: f64, y_max: f64, samples: u32) -> Result<Vec<f64>, String> {
    if a == 0 {
        return Err("a must be at least 1".into());
    }
    if !(y_min > 0.0 && y_max > y_min && y_max.is_finite()) {
        return Err("need 0 < y_min < y_max".into());
    }
    let samples = samples.clamp(2, MAX_CURVE_SAMPLES);
    let (lo, hi) = (y_min.ln(), y_max.ln());
    let mut out = Vec::with_capacity(2 * samples as usize);
    for i in 0..samples {
        let y = (lo + (hi - lo) * i as f64 / (samples - 1) as f64).exp();
        let g1 = eval_g1(a as u64, &HighPrecReal::from_f64(y, BITS)).map_err(|e| e.to_string())?;
        out.push(y);
        out.push(g1.to_f64());
    }
    Ok(out)
}

/// Rows of exact r_n(an+b), the estimate and their ratio for a comma list of n.
/// Rows above [`EXACT_LIMIT`] carry the estimate only.
pub fn table_json(a: u32, b: i32, ns: &str) -> Result<String, String> {
    if a == 0 {
        return Err("a must be at least 1".into());
    }
    let ns: Vec<u64> = ns
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u64>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or(format!("bad n: {s:?}"))
        })
        .collect::<Result<_, _>>()?;
    if ns.is_empty() {
        return Err("the list of n is empty".into());
    }
    let sd = stable_constants(a as u64, b as i64, &ns, BITS, 10).map_err(|e| e.to_string())?;
    let small: Vec<u64> = ns.iter().copied().filter(|&n| n <= EXACT_LIMIT).collect();
    let mut exact_rows = if small.is_empty() {
        Vec::new()
    } else {
        compare_table_with(&sd, &small, Convolution::Schoolbook).map_err(|e| e.to_string())?
    }
    .into_iter();
    let mut rows = Vec::with_capacity(ns.len());
    for &n in &ns {
        let est = estimate(&sd, n).map_err(|e| e.to_string())?;
        let row = if n <= EXACT_LIMIT { exact_rows.next() } else { None };
        rows.push(json!({
            "n": n,
            "exact": row.as_ref().map(|r| r.exact.map(|v| v.render(10)).unwrap_or_else(|| "0".into())),
            "estimate": est.render(10),
            "ratio": row.as_ref().filter(|r| !r.is_flagged()).map(|r| format!("{:.10}", r.ratio)),
            "flagged": row.as_ref().is_some_and(|r| r.is_flagged()),
        }));
    }
    Ok(to_json(json!({
        "A": sd.growth.to_decimal_string(12),
        "B": sd.prefactor.to_decimal_string(12),
        "rows": rows,
    })))
}

/// r_k(m) as a decimal string.
pub fn exact_string(k: u32, m: i32) -> Result<String, String> {
    if k > 4 * EXACT_LIMIT as u32 || m > 4 * EXACT_LIMIT as i32 {
        return Err(format!(
            "k and m are limited to {} in the browser",
            4 * EXACT_LIMIT
        ));
    }
    Ok(r_k(k as u64, m as i64).to_string())
}

#[wasm_bindgen]
pub fn saddle_constants(a: u32, b: i32, digits: u32) -> Result<String, JsError> {
    constants_json(a, b, digits).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn g_prime_curve(a: u32, y_min: f64, y_max: f64, samples: u32) -> Result<Vec<f64>, JsError> {
    g_prime_samples(a, y_min, y_max, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ratio_table(a: u32, b: i32, ns: &str) -> Result<String, JsError> {
    table_json(a, b, ns).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn exact(k: u32, m: i32) -> Result<String, JsError> {
    exact_string(k, m).map_err(|e| JsError::new(&e))
}
