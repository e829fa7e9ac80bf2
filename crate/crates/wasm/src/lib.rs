//! Bindings behind `www/index.html`. Each export wraps a plain function so the
//! logic stays testable off the browser.

use hyperftc::expr;
use hyperftc::integrate::{definite_0_to_1, definite_0_to_inf};
use hyperftc::multivar::{ialpha_series, IalphaVariant};
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

const TOL: f64 = 1e-12;

/// Real parts of `text` at `n` evenly spaced points of [x0, x1]. Points where
/// the engine rejects the input come back as NaN so the plot shows a gap.
pub fn curve(text: &str, x0: f64, x1: f64, n: usize) -> Result<Vec<f64>, String> {
    let e = expr::parse(text).map_err(|e| e.to_string())?;
    let n = n.clamp(2, 2000);
    let step = (x1 - x0) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let x = Complex64::new(x0 + step * i as f64, 0.0);
            e.eval_scalar(x, TOL).map(|v| v.re).unwrap_or(f64::NAN)
        })
        .collect())
}

/// Result of a definite integral as shown on the page.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Integral {
    value: f64,
    closed_form: Option<String>,
    method: String,
}

#[wasm_bindgen]
impl Integral {
    #[wasm_bindgen(getter)]
    pub fn value(&self) -> f64 {
        self.value
    }

    #[wasm_bindgen(getter, js_name = closedForm)]
    pub fn closed_form(&self) -> Option<String> {
        self.closed_form.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn method(&self) -> String {
        self.method.clone()
    }
}

/// ∫ from 0 to 1, or to ∞ when `to_inf` is set.
pub fn integral(text: &str, to_inf: bool) -> Result<Integral, String> {
    let e = expr::parse(text).map_err(|e| e.to_string())?;
    let spec = expr::to_integrand(&e).map_err(|e| e.to_string())?;
    let res = if to_inf { definite_0_to_inf(&spec, TOL) } else { definite_0_to_1(&spec, TOL) }.map_err(|e| e.to_string())?;
    Ok(Integral { value: res.scalar.re, closed_form: res.closed_form, method: res.method.join("\n") })
}

/// I_α sampled on [a0, a1], through the double series.
pub fn ialpha(a0: f64, a1: f64, n: usize) -> Vec<f64> {
    let n = n.clamp(2, 400);
    let step = (a1 - a0) / (n - 1) as f64;
    (0..n)
        .map(|i| ialpha_series(a0 + step * i as f64, IalphaVariant::Direct, TOL).unwrap_or(f64::NAN))
        .collect()
}

#[wasm_bindgen(js_name = evalCurve)]
pub fn eval_curve(text: &str, x0: f64, x1: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    curve(text, x0, x1, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = integrateExpr)]
pub fn integrate_expr(text: &str, to_inf: bool) -> Result<Integral, JsValue> {
    integral(text, to_inf).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = ialphaCurve)]
pub fn ialpha_curve(a0: f64, a1: f64, n: usize) -> Vec<f64> {
    ialpha(a0, a1, n)
}
