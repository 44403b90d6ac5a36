//! Browser bindings: alcove projection, fusion products and quantum dimensions.
//! Every function takes a type label such as `"A2"` and returns a JSON string.

use std::sync::Arc;

use serde_json::json;
use verlinde_core::fusion::{qdim_finite, FusionRing, VerlindeElement};
use verlinde_core::weyl::{alcove_project, lift_to_level, AlcoveResult};
use verlinde_core::{CartanDatum, CartanType};
use wasm_bindgen::prelude::*;

fn datum(ty: &str) -> Result<Arc<CartanDatum>, String> {
    let t: CartanType = ty.parse().map_err(|e: verlinde_core::Error| e.to_string())?;
    CartanDatum::build(t).map(Arc::new).map_err(|e| e.to_string())
}

fn parse_weight(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| format!("not a weight: {s:?}")))
        .collect()
}

fn ring(ty: &str, k: i64) -> Result<FusionRing, String> {
    FusionRing::new(datum(ty)?, k).map_err(|e| e.to_string())
}

fn index(f: &FusionRing, k: i64, w: &str) -> Result<usize, String> {
    let w = parse_weight(w)?;
    let lam = if w.len() == f.datum().rank() { lift_to_level(f.datum(), &w, k) } else { w };
    f.index_of(&lam).map_err(|e| e.to_string())
}

pub fn project_json(ty: &str, k: i64, weight: &str) -> Result<String, String> {
    let d = datum(ty)?;
    let r = alcove_project(&d, &parse_weight(weight)?, k).map_err(|e| e.to_string())?;
    Ok(match r {
        AlcoveResult::Null => json!({"status": "null"}),
        AlcoveResult::Signed { sign, weight } => json!({"status": "signed", "sign": sign, "weight": weight}),
    }
    .to_string())
}

pub fn basis_json(ty: &str, k: i64) -> Result<String, String> {
    let f = ring(ty, k)?;
    let qdims: Vec<f64> = f.basis.iter().map(|lam| f.qdim(lam)).collect();
    Ok(json!({"basis": f.basis, "qdim": qdims}).to_string())
}

pub fn fusion_json(ty: &str, k: i64, w1: &str, w2: &str) -> Result<String, String> {
    let f = ring(ty, k)?;
    let (a, b) = (index(&f, k, w1)?, index(&f, k, w2)?);
    let n = f.size();
    let p = f
        .multiply(&VerlindeElement::basis(n, a), &VerlindeElement::basis(n, b))
        .map_err(|e| e.to_string())?;
    let terms: Vec<_> = p
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(i, c)| json!({"coeff": c, "weight": f.basis[i]}))
        .collect();
    Ok(json!({"terms": terms, "v": p.to_v_string()}).to_string())
}

pub fn qdim_json(ty: &str, k: i64, weight: &str) -> Result<String, String> {
    let d = datum(ty)?;
    if k < 1 {
        return Err("level must be positive".into());
    }
    let w = parse_weight(weight)?;
    let fin = match w.len() {
        n if n == d.rank() => &w[..],
        n if n == d.rank() + 1 => &w[1..],
        n => return Err(format!("weight has {n} coordinates, expected {}", d.rank())),
    };
    Ok(json!({"qdim": qdim_finite(&d, k, fin)}).to_string())
}

#[wasm_bindgen]
pub fn project(ty: &str, k: i64, weight: &str) -> Result<String, JsValue> {
    project_json(ty, k, weight).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn basis(ty: &str, k: i64) -> Result<String, JsValue> {
    basis_json(ty, k).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn fusion(ty: &str, k: i64, w1: &str, w2: &str) -> Result<String, JsValue> {
    fusion_json(ty, k, w1, w2).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn qdim(ty: &str, k: i64, weight: &str) -> Result<String, JsValue> {
    qdim_json(ty, k, weight).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_projection() {
        let v: serde_json::Value = serde_json::from_str(&project_json("A2", 6, "4,4").unwrap()).unwrap();
        assert_eq!(v, json!({"status": "signed", "sign": -1, "weight": [0, 3, 3]}));
        let v: serde_json::Value = serde_json::from_str(&project_json("A2", 6, "5,2").unwrap()).unwrap();
        assert_eq!(v, json!({"status": "null"}));
        assert!(project_json("A2", 6, "4").is_err());
    }

    #[test]
    fn a2_fusion_and_qdim() {
        let v: serde_json::Value = serde_json::from_str(&fusion_json("A2", 1, "1,0", "1,0").unwrap()).unwrap();
        assert_eq!(v["terms"][0]["weight"], json!([0, 0, 1]));
        let q: serde_json::Value = serde_json::from_str(&qdim_json("A2", 6, "2,2").unwrap()).unwrap();
        assert!((q["qdim"].as_f64().unwrap() - 8.63816).abs() < 1e-5);
        let b: serde_json::Value = serde_json::from_str(&basis_json("A2", 3).unwrap()).unwrap();
        assert_eq!(b["basis"].as_array().unwrap().len(), 10);
    }
}
