//! The full pipeline: capture, dictionary tagging, composition, filtering,
//! then normalization and optional resolution of every kept mention.

use thiserror::Error;

use crate::datetime::normalize::timezone_extraction;
use crate::datetime::timezone::with_explicit_offset;
use crate::datetime::{normalize, resolve_with, ResolveError, UnparsableTimex};
use crate::lang::LanguageConfig;
use crate::model::{AnchorContext, EntityMention, EntitySubType, Normalized, NumericValue, UnitClass};
use crate::number::{parse_number_value, parse_numeric, UnparsableNumber};
use crate::rules::{run_capture, run_composition, run_filter_audited, RawExtraction, RuleError};
use crate::unit::{classify_age, extract_quantities};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizeError {
    #[error(transparent)]
    Timex(#[from] UnparsableTimex),
    #[error("cannot normalize `{surface}` as {sub_type}: {reason}")]
    Numeric { surface: String, sub_type: EntitySubType, reason: String },
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Rules(#[from] RuleError),
}

/// Extractions at each pipeline stage, for debugging rule tables.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub captured: Vec<RawExtraction>,
    /// Candidates no parser in the cascade accepts.
    pub unparsable: Vec<RawExtraction>,
    pub composed: Vec<RawExtraction>,
    pub dropped: Vec<(RawExtraction, String)>,
    pub kept: Vec<RawExtraction>,
}

fn class_of(t: EntitySubType) -> Option<UnitClass> {
    match t {
        EntitySubType::Age => Some(UnitClass::Age),
        EntitySubType::Currency => Some(UnitClass::Currency),
        EntitySubType::Dimension => Some(UnitClass::Dimension),
        EntitySubType::Temperature => Some(UnitClass::Temperature),
        _ => None,
    }
}

/// The normalized form of one extraction.
pub fn normalize_extraction(ex: &RawExtraction, text: &str, config: &LanguageConfig) -> Result<Normalized, RecognizeError> {
    if ex.sub_type.is_temporal() {
        return Ok(Normalized::Timex(normalize(ex, text, config)?));
    }
    let fail = |reason: String| RecognizeError::Numeric {
        surface: ex.surface(text).to_string(),
        sub_type: ex.sub_type,
        reason,
    };
    let value = match class_of(ex.sub_type) {
        Some(class) => {
            let number = ex.group("number").ok_or_else(|| fail("no number part".into()))?;
            let unit = ex.group("unit").ok_or_else(|| fail("no unit part".into()))?;
            let value = parse_number_value(number, config).map_err(|e: UnparsableNumber| fail(e.to_string()))?;
            NumericValue::Quantity { value, unit: unit.to_string(), class }
        }
        None => parse_numeric(ex.sub_type, ex.surface(text), config).map_err(|e| fail(e.to_string()))?,
    };
    value.validate().map_err(|e| fail(e.to_string()))?;
    Ok(Normalized::Numeric(value))
}

/// Runs capture through filtering and returns the kept extractions along
/// with every intermediate stage.
pub fn extract_traced(config: &LanguageConfig, text: &str) -> Result<Trace, RecognizeError> {
    let boundary = config.overrides.token_boundary();
    let mut captured = run_capture(&config.rules.capture, text, boundary);
    if let (Some(tz), true) = (&config.timezones, config.supports(EntitySubType::Timezone)) {
        captured.extend(tz.find_all(text).into_iter().map(|m| timezone_extraction(&with_explicit_offset(text, m))));
    }
    for (class, table) in &config.unit_tables {
        let sub_type = crate::unit::subtype_of_class(*class);
        if config.supports(sub_type) {
            captured.extend(extract_quantities(text, &captured.clone(), table, config));
        }
    }
    if config.supports(EntitySubType::Age) {
        captured.extend(classify_age(text, &captured.clone(), config));
    }

    let ok = |e: &RawExtraction| normalize_extraction(e, text, config).is_ok();
    let (valid, unparsable): (Vec<_>, Vec<_>) = captured.iter().cloned().partition(|e| ok(e));
    let composed = run_composition(&config.rules.composition, valid, text, &ok)?;
    let outcome = run_filter_audited(&config.rules, composed.clone(), text);
    Ok(Trace { captured, unparsable, composed, dropped: outcome.dropped, kept: outcome.kept })
}

pub fn extract(config: &LanguageConfig, text: &str) -> Result<Vec<RawExtraction>, RecognizeError> {
    extract_traced(config, text).map(|t| t.kept)
}

/// Recognizes every mention in `text`. With an anchor, temporal mentions
/// also carry their resolutions; without one they carry none and can be
/// resolved later from the normalized form.
pub fn recognize(config: &LanguageConfig, text: &str, anchor: Option<&AnchorContext>) -> Result<Vec<EntityMention>, RecognizeError> {
    let mut out = Vec::new();
    for ex in extract(config, text)? {
        let normalized = normalize_extraction(&ex, text, config)?;
        let resolutions = match (&normalized, anchor) {
            (Normalized::Timex(t), Some(a)) => resolve_with(t, a, &config.holidays.registry)?,
            _ => Vec::new(),
        };
        out.push(EntityMention {
            span: ex.span,
            surface: ex.surface(text).to_string(),
            sub_type: ex.sub_type,
            normalized,
            resolutions,
        });
    }
    Ok(out)
}
