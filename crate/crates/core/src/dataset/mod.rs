//! Gold dataset files: one JSON array of documents per file.
//!
//! Field names are a reconstruction (`text`, `lang`, `anchor`, `entities`
//! with `start`, `length`, `text`, `type`, `value`, `resolutions`,
//! `notSupported`, `note`). Unknown fields are kept and written back.

pub mod stats;
pub mod validate;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{AnchorContext, EntityMention, MentionRecord, Resolution};

pub use stats::{stats, DatasetStats, LanguageStats};
pub use validate::{validate, IssueKind, ValidationIssue};

/// One gold annotation. The sub-type stays a string so that unknown names
/// survive loading and are reported by the validator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldEntity {
    pub start: usize,
    pub length: usize,
    pub text: String,
    #[serde(rename = "type")]
    pub sub_type: String,
    pub value: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub resolutions: Vec<Resolution>,
    #[serde(rename = "notSupported", default, skip_serializing_if = "std::ops::Not::not")]
    pub not_supported: bool,
    /// Why a `notSupported` entity is beyond the system.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NtxDocument {
    pub text: String,
    pub lang: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<AnchorContext>,
    #[serde(default)]
    pub entities: Vec<GoldEntity>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl From<&MentionRecord> for GoldEntity {
    fn from(m: &MentionRecord) -> Self {
        GoldEntity {
            start: m.start,
            length: m.length,
            text: m.text.clone(),
            sub_type: m.sub_type.name().to_string(),
            value: m.value.clone(),
            resolutions: m.resolutions.clone(),
            not_supported: false,
            note: None,
            extra: BTreeMap::new(),
        }
    }
}

impl From<&EntityMention> for GoldEntity {
    fn from(m: &EntityMention) -> Self {
        GoldEntity::from(&MentionRecord::from(m))
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: document {doc}: field `{field}`: {reason}")]
    Schema { path: PathBuf, doc: usize, field: String, reason: String },
}

/// Parses a JSON array of documents. `path` only labels errors.
pub fn parse_dataset(src: &str, path: &Path) -> Result<Vec<NtxDocument>, DatasetError> {
    let schema = |doc: usize, field: &str, reason: String| DatasetError::Schema {
        path: path.to_path_buf(),
        doc,
        field: field.to_string(),
        reason,
    };
    let values: Vec<serde_json::Value> = serde_json::from_str(src).map_err(|e| schema(0, "$", e.to_string()))?;
    let mut docs = Vec::with_capacity(values.len());
    for (i, v) in values.into_iter().enumerate() {
        let doc: NtxDocument = serde_path_to_error::deserialize(v).map_err(|e| {
            let field = e.path().to_string();
            schema(i, &field, e.into_inner().to_string())
        })?;
        let chars = doc.text.chars().count();
        for (j, e) in doc.entities.iter().enumerate() {
            if e.length == 0 || e.start + e.length > chars {
                return Err(schema(i, &format!("entities[{j}]"), format!("span {}+{} outside text of {chars} chars", e.start, e.length)));
            }
        }
        docs.push(doc);
    }
    Ok(docs)
}

/// Loads one dataset file, or every `*.json` file directly inside a
/// directory in path order.
pub fn load_dataset(path: &Path) -> Result<Vec<NtxDocument>, DatasetError> {
    let mut docs = Vec::new();
    for file in dataset_files(path)? {
        let src = std::fs::read_to_string(&file).map_err(|source| DatasetError::Io { path: file.clone(), source })?;
        docs.extend(parse_dataset(&src, &file)?);
    }
    Ok(docs)
}

/// The files `load_dataset` reads for `path`.
pub fn dataset_files(path: &Path) -> Result<Vec<PathBuf>, DatasetError> {
    let io = |source| DatasetError::Io { path: path.to_path_buf(), source };
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(path)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// Pretty JSON with a trailing newline.
pub fn serialize_dataset(docs: &[NtxDocument]) -> String {
    let mut s = serde_json::to_string_pretty(docs).expect("documents serialize");
    s.push('\n');
    s
}
