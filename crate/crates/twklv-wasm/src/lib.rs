//! Three entry points for the static demo page. Each takes strings and returns JSON.

use wasm_bindgen::prelude::*;

use twklv::arthur::{AParameter, DatumKind, DatumSpec, Embedding};
use twklv::foundations::{parse_lambda, validate_infchar, InfChar};
use twklv::hecke_klv::compute_block;
use twklv::params::ParamSet;
use twklv::report::{blocks_report, packet_report, params_report, BlockKlv};

fn infchar(lambda: &str) -> Result<InfChar, String> {
    let raw = parse_lambda(lambda.trim()).ok_or_else(|| format!("cannot parse λ \"{}\"", lambda))?;
    if raw.len() > 6 {
        return Err("the demo stops at N = 6".into());
    }
    validate_infchar(&raw).map_err(|e| e.to_string())
}

fn param_set(lambda: &str) -> Result<ParamSet, String> {
    ParamSet::new(&infchar(lambda)?).map_err(|e| e.to_string())
}

/// {"params": …, "blocks": …, "twisted_blocks": …}
pub fn params_and_blocks(lambda: &str) -> Result<String, String> {
    let ps = param_set(lambda)?;
    let v = serde_json::json!({
        "params": params_report(&ps),
        "blocks": blocks_report(&ps, false),
        "twisted_blocks": blocks_report(&ps, true),
    });
    Ok(v.to_string())
}

pub fn klv_block(lambda: &str, twisted: bool, block: usize) -> Result<String, String> {
    let ps = param_set(lambda)?;
    let src = if twisted { &ps.twisted_blocks } else { &ps.blocks };
    let b = src
        .get(block)
        .ok_or_else(|| format!("block {} out of range (there are {})", block, src.len()))?;
    let bc = compute_block(&ps.lc, b).map_err(|e| e.to_string())?;
    serde_json::to_string(&BlockKlv::from_computation(block, &bc)).map_err(|e| e.to_string())
}

/// `kind` is "simple1" or "simple2"; `embedding` is "split" or "quasisplit".
pub fn packet(psi_json: &str, kind: &str, embedding: &str) -> Result<String, String> {
    let psi: AParameter = serde_json::from_str(psi_json).map_err(|e| format!("ψ JSON: {}", e))?;
    let kind = match kind {
        "simple1" => DatumKind::Simple1,
        "simple2" => DatumKind::Simple2,
        k => return Err(format!("unknown datum kind {}", k)),
    };
    let embedding = match embedding {
        "quasisplit" => Embedding::Quasisplit,
        _ => Embedding::Split,
    };
    let d = DatumSpec {
        kind,
        n: psi.dim(),
        embedding,
    }
    .resolve()
    .map_err(|e| e.to_string())?;
    let r = packet_report(&psi, &d).map_err(|e| e.to_string())?;
    serde_json::to_string(&r).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = paramsAndBlocks)]
pub fn params_and_blocks_js(lambda: &str) -> Result<String, JsValue> {
    params_and_blocks(lambda).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = klvBlock)]
pub fn klv_block_js(lambda: &str, twisted: bool, block: usize) -> Result<String, JsValue> {
    klv_block(lambda, twisted, block).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = packet)]
pub fn packet_js(psi_json: &str, kind: &str, embedding: &str) -> Result<String, JsValue> {
    packet(psi_json, kind, embedding).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_points() {
        let v: serde_json::Value = serde_json::from_str(&params_and_blocks("1/2,-1/2").unwrap()).unwrap();
        assert_eq!(v["params"]["params"].as_array().unwrap().len(), 5);
        let k: serde_json::Value = serde_json::from_str(&klv_block("1/2,-1/2", true, 0).unwrap()).unwrap();
        assert!(k["twisted"].as_bool().unwrap());
        assert!(klv_block("1/2,-1/2", false, 99).is_err());
        let psi = r#"{"summands":[{"mu":{"kind":"onedim","delta":0,"t":"0"},"n":3}]}"#;
        let p: serde_json::Value = serde_json::from_str(&packet(psi, "simple1", "split").unwrap()).unwrap();
        assert_eq!(p["eta_ar"].as_array().unwrap().len(), 2);
        assert!(packet(psi, "simple2", "split").is_err());
        assert!(params_and_blocks("1,1").unwrap_err().contains("NotRegular"));
    }
}
