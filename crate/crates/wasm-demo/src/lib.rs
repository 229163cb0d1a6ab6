//! Browser bindings for the recognizer. Every export takes and returns
//! strings; results are JSON and errors are thrown as JS strings.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use ntx_core::datetime::resolve::{resolve_set, resolve_with};
use ntx_core::lang::{load_config, LanguageConfig};
use ntx_core::model::{parse_timex, AnchorContext, MentionRecord, Timex};
use ntx_core::recognizer::recognize;
use serde_json::json;
use wasm_bindgen::prelude::*;

fn config(lang: &str) -> Result<&'static LanguageConfig, String> {
    static CACHE: OnceLock<Mutex<BTreeMap<String, &'static LanguageConfig>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    if let Some(c) = cache.get(lang) {
        return Ok(c);
    }
    let c: &'static LanguageConfig = Box::leak(Box::new(load_config(lang).map_err(|e| e.to_string())?));
    cache.insert(lang.to_string(), c);
    Ok(c)
}

fn anchor(s: &str) -> Result<Option<AnchorContext>, String> {
    match s.trim() {
        "" => Ok(None),
        s => s.parse().map(Some).map_err(|e: ntx_core::model::BadAnchor| e.to_string()),
    }
}

fn required_anchor(s: &str) -> Result<AnchorContext, String> {
    anchor(s)?.ok_or_else(|| "an anchor date is required".to_string())
}

pub fn recognize_json(lang: &str, text: &str, anchor_str: &str) -> Result<String, String> {
    let a = anchor(anchor_str)?;
    let ms = recognize(config(lang)?, text, a.as_ref()).map_err(|e| e.to_string())?;
    let records: Vec<MentionRecord> = ms.iter().map(MentionRecord::from).collect();
    Ok(json!({ "lang": lang, "anchor": a, "mentions": records }).to_string())
}

pub fn resolve_json(timex: &str, anchor_str: &str) -> Result<String, String> {
    let t = parse_timex(timex.trim()).map_err(|e| e.to_string())?;
    let a = required_anchor(anchor_str)?;
    let rs = resolve_with(&t, &a, &config("en")?.holidays.registry).map_err(|e| e.to_string())?;
    Ok(json!({ "timex": t.to_string(), "resolutions": rs }).to_string())
}

pub fn occurrences_json(timex: &str, anchor_str: &str, k: usize) -> Result<String, String> {
    let Timex::Set(s) = parse_timex(timex.trim()).map_err(|e| e.to_string())? else {
        return Err(format!("`{}` is not a set expression", timex.trim()));
    };
    let r = resolve_set(&s, &required_anchor(anchor_str)?, k.clamp(1, 50));
    Ok(serde_json::to_string(&r).expect("resolution serializes"))
}

#[wasm_bindgen(js_name = recognize)]
pub fn js_recognize(lang: &str, text: &str, anchor: &str) -> Result<String, JsValue> {
    recognize_json(lang, text, anchor).map_err(JsValue::from)
}

#[wasm_bindgen(js_name = resolveTimex)]
pub fn js_resolve(timex: &str, anchor: &str) -> Result<String, JsValue> {
    resolve_json(timex, anchor).map_err(JsValue::from)
}

#[wasm_bindgen(js_name = nextOccurrences)]
pub fn js_occurrences(timex: &str, anchor: &str, k: usize) -> Result<String, JsValue> {
    occurrences_json(timex, anchor, k).map_err(JsValue::from)
}
