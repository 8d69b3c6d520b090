//! Three operations of the `laplaza` toolkit exported to JavaScript. Each
//! returns a JSON string, or throws the error message as a string.

use laplaza::nf::{LaplazaSpec, Projection};
use laplaza::term::{canonicalize, Signature, Term};
use laplaza::two_theory::cobordism::Cobordism;
use laplaza::two_theory::{two_equal, TwoTerm};
use serde_json::json;
use wasm_bindgen::prelude::*;

fn fail(e: impl ToString) -> JsValue {
    JsValue::from_str(&e.to_string())
}

pub fn normalize_json(sig: &str, term: &str, laplaza: &str) -> Result<String, String> {
    let sig =
        Signature::builtin(sig).ok_or_else(|| format!("unknown signature `{sig}` (cmon, csr)"))?;
    let w = Term::parse(&sig, term, None).map_err(|e| e.to_string())?;
    let normal_form = match Projection::of(&sig, &w) {
        Projection::Free(t) => canonicalize(&sig, &t).display(&sig).to_string(),
        other => other.to_string(),
    };
    let member = if laplaza.is_empty() {
        None
    } else {
        let spec: LaplazaSpec = laplaza.parse().map_err(|e: laplaza::Error| e.to_string())?;
        Some(laplaza::nf::laplaza_member(spec, &sig, &w).map_err(|e| e.to_string())?)
    };
    Ok(json!({
        "term": w.display(&sig).to_string(),
        "arity": w.arity(),
        "normal_form": normal_form,
        "member": member,
    })
    .to_string())
}

pub fn two_equal_json(left: &str, right: &str) -> Result<String, String> {
    let s = TwoTerm::parse(left, None).map_err(|e| e.to_string())?;
    let t = TwoTerm::parse(right, None).map_err(|e| e.to_string())?;
    let n = s.arity().max(t.arity());
    let s = TwoTerm::parse(left, Some(n)).map_err(|e| e.to_string())?;
    let t = TwoTerm::parse(right, Some(n)).map_err(|e| e.to_string())?;
    let equal = two_equal(&s, &t).map_err(|e| e.to_string())?;
    Ok(json!({
        "equal": equal,
        "left_normal_form": s.normalize().map_err(|e| e.to_string())?.to_json(),
        "right_normal_form": t.normalize().map_err(|e| e.to_string())?.to_json(),
    })
    .to_string())
}

pub fn glue_json(worldsheet: &str, labels: &str) -> Result<String, String> {
    let x: Cobordism = serde_json::from_str(worldsheet).map_err(|e| e.to_string())?;
    let labels: Vec<String> = labels
        .split(',')
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect();
    let y = x.self_glue(&labels).map_err(|e| e.to_string())?;
    Ok(json!({ "result": y, "total_genus": y.total_genus() }).to_string())
}

/// Normal form of a word over `cmon` or `csr`, with Laplaza membership when
/// `laplaza` is non-empty.
#[wasm_bindgen]
pub fn normalize(sig: &str, term: &str, laplaza: &str) -> Result<String, JsValue> {
    normalize_json(sig, term, laplaza).map_err(fail)
}

/// Equality of two words of the cancellation 2-operad.
#[wasm_bindgen(js_name = twoEqual)]
pub fn two_equal_js(left: &str, right: &str) -> Result<String, JsValue> {
    two_equal_json(left, right).map_err(fail)
}

/// Self-gluing of a worldsheet along comma separated labels.
#[wasm_bindgen]
pub fn glue(worldsheet: &str, labels: &str) -> Result<String, JsValue> {
    glue_json(worldsheet, labels).map_err(fail)
}
