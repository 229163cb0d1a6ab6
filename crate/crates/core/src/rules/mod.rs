//! Rule tables for the capture → composition → filter pipeline.

mod engine;

use std::collections::BTreeMap;
use std::fmt;

use regex::Regex;
use serde::Deserialize;
use thiserror::Error;

use crate::model::{EntitySubType, Span};

pub use engine::{run_capture, run_composition, run_filter, run_filter_audited, FilterOutcome, MAX_GAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule `{id}`: {reason}")]
    Pattern { id: String, reason: String },
    #[error("composition did not reach a fixed point (state repeated after {0} merges)")]
    CompositionCycle(usize),
}

/// Named merge functions available to composition rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Combiner {
    /// date + time → datetime
    Datetime,
    /// begin + end → range triple
    Range,
    /// time + timezone → time carrying a UTC offset
    Timezone,
    /// set + date → set with a since-constraint
    SetSince,
    /// set + time → set whose base carries the time
    SetTime,
    /// date + time range → datetime range on that date
    DateTimeRange,
    /// duration + duration → summed duration
    Sum,
}

impl Combiner {
    pub const ALL: [Combiner; 7] = [
        Combiner::Datetime,
        Combiner::Range,
        Combiner::Timezone,
        Combiner::SetSince,
        Combiner::SetTime,
        Combiner::DateTimeRange,
        Combiner::Sum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Combiner::Datetime => "datetime",
            Combiner::Range => "range",
            Combiner::Timezone => "timezone",
            Combiner::SetSince => "set_since",
            Combiner::SetTime => "set_time",
            Combiner::DateTimeRange => "date_timerange",
            Combiner::Sum => "sum",
        }
    }

    pub fn from_name(s: &str) -> Option<Combiner> {
        Combiner::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// A candidate mention with the provenance needed to normalize it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RawExtraction {
    pub span: Span,
    pub sub_type: EntitySubType,
    pub rule_trail: Vec<String>,
    pub capture_groups: BTreeMap<String, String>,
    pub priority: i32,
    /// Merged parts, left to right, for composed extractions.
    pub children: Vec<RawExtraction>,
    pub combiner: Option<Combiner>,
}

impl RawExtraction {
    pub fn new(span: Span, sub_type: EntitySubType, rule_id: &str, priority: i32) -> Self {
        RawExtraction {
            span,
            sub_type,
            rule_trail: vec![rule_id.to_string()],
            capture_groups: BTreeMap::new(),
            priority,
            children: Vec::new(),
            combiner: None,
        }
    }

    pub fn group(&self, name: &str) -> Option<&str> {
        self.capture_groups.get(name).map(String::as_str)
    }

    pub fn rule_id(&self) -> &str {
        self.rule_trail.last().map(String::as_str).unwrap_or("")
    }

    pub fn surface<'a>(&self, text: &'a str) -> &'a str {
        self.span.slice(text).unwrap_or("")
    }
}

#[derive(Debug, Clone)]
pub struct CaptureRule {
    pub id: String,
    pub sub_type: EntitySubType,
    pub priority: i32,
    pub source: String,
    pub regex: Regex,
}

#[derive(Debug, Clone)]
pub struct CompositionRule {
    pub id: String,
    pub left: Vec<EntitySubType>,
    pub right: Vec<EntitySubType>,
    /// Must match text immediately before the left part; it joins the span.
    pub prefix: Option<Regex>,
    /// Must match the whole gap between the parts.
    pub connector: Regex,
    pub sub_type: EntitySubType,
    pub combiner: Combiner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    NegativeLookup,
    ContextGuard,
    OverlapPolicy,
}

#[derive(Debug, Clone)]
pub struct FilterRule {
    pub id: String,
    pub kind: FilterKind,
    /// Sub-types the rule applies to; empty means all.
    pub sub_types: Vec<EntitySubType>,
    pub surface: Option<Regex>,
    /// Tested against the text before the mention, anchored at its end.
    pub left: Option<Regex>,
    /// Tested against the text after the mention, anchored at its start.
    pub right: Option<Regex>,
}

impl FilterRule {
    pub fn applies_to(&self, t: EntitySubType) -> bool {
        self.sub_types.is_empty() || self.sub_types.contains(&t)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    pub capture: Vec<CaptureRule>,
    pub composition: Vec<CompositionRule>,
    pub filter: Vec<FilterRule>,
}

impl RuleSet {
    pub fn overlap_rule_id(&self) -> &str {
        self.filter
            .iter()
            .find(|f| f.kind == FilterKind::OverlapPolicy)
            .map(|f| f.id.as_str())
            .unwrap_or("overlap")
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleFile {
    #[serde(default)]
    defs: BTreeMap<String, String>,
    #[serde(default)]
    capture: Vec<CaptureSpec>,
    #[serde(default)]
    composition: Vec<CompositionSpec>,
    #[serde(default)]
    filter: Vec<FilterSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CaptureSpec {
    id: String,
    subtype: String,
    #[serde(default)]
    priority: i32,
    pattern: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompositionSpec {
    id: String,
    left: Vec<String>,
    right: Vec<String>,
    #[serde(default)]
    prefix: Option<String>,
    connector: String,
    subtype: String,
    combiner: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilterSpec {
    id: String,
    kind: String,
    #[serde(default)]
    subtypes: Vec<String>,
    #[serde(default)]
    surface: Option<String>,
    #[serde(default)]
    left: Option<String>,
    #[serde(default)]
    right: Option<String>,
    #[serde(default)]
    case_sensitive: bool,
}

/// Pattern definitions available to `{NAME}` references. Generated
/// definitions take a value filter: `{DURATION_UNIT:H,MIN}`.
#[derive(Debug, Clone, Default)]
pub struct Defs {
    plain: BTreeMap<String, String>,
    generated: BTreeMap<String, Vec<(String, String)>>,
}

impl Defs {
    pub fn insert(&mut self, name: &str, pattern: String) {
        self.plain.insert(name.to_string(), pattern);
    }

    /// A def built from (surface, value) pairs; expands to an alternation
    /// of the surfaces, longest first.
    pub fn insert_words(&mut self, name: &str, words: Vec<(String, String)>) {
        self.generated.insert(name.to_string(), words);
    }

    fn words(&self, name: &str, filter: Option<&str>) -> Option<String> {
        let words = self.generated.get(name)?;
        let values: Option<Vec<&str>> = filter.map(|f| f.split(',').map(str::trim).collect());
        let mut surfaces: Vec<&str> = words
            .iter()
            .filter(|(_, v)| values.as_ref().is_none_or(|vs| vs.contains(&v.as_str())))
            .map(|(s, _)| s.as_str())
            .collect();
        surfaces.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));
        surfaces.dedup();
        if surfaces.is_empty() {
            return Some("(?:[^\\s\\S])".to_string());
        }
        let alts: Vec<String> = surfaces
            .iter()
            .map(|s| s.split_whitespace().map(regex::escape).collect::<Vec<_>>().join(r"\s+"))
            .collect();
        Some(format!("(?:{})", alts.join("|")))
    }

    /// Replaces every `{NAME}` / `{NAME:filter}` reference, recursively.
    pub fn expand(&self, pattern: &str) -> Result<String, String> {
        self.expand_depth(pattern, 0)
    }

    fn expand_depth(&self, pattern: &str, depth: usize) -> Result<String, String> {
        if depth > 16 {
            return Err("definitions nest too deeply (cycle?)".into());
        }
        let mut out = String::with_capacity(pattern.len());
        let mut rest = pattern;
        while let Some(open) = rest.find('{') {
            let after = &rest[open + 1..];
            let close = after.find('}');
            let body = close.map(|c| &after[..c]);
            let is_ref = body.is_some_and(|b| {
                let name = b.split(':').next().unwrap_or("");
                name.starts_with(|c: char| c.is_ascii_uppercase())
                    && name.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
            });
            // an escaped brace is a literal
            if !is_ref || rest[..open].ends_with('\\') {
                out.push_str(&rest[..=open]);
                rest = after;
                continue;
            }
            let body = body.unwrap_or_default();
            out.push_str(&rest[..open]);
            let (name, filter) = match body.split_once(':') {
                Some((n, f)) => (n, Some(f)),
                None => (body, None),
            };
            let replacement = if let Some(p) = self.plain.get(name).filter(|_| filter.is_none()) {
                format!("(?:{})", self.expand_depth(p, depth + 1)?)
            } else if let Some(w) = self.words(name, filter) {
                w
            } else {
                return Err(format!("unknown definition `{{{body}}}`"));
            };
            out.push_str(&replacement);
            rest = &after[body.len() + 1..];
        }
        out.push_str(rest);
        Ok(out)
    }
}

fn compile(id: &str, source: &str, defs: &Defs, case_sensitive: bool, wrap: fn(&str) -> String) -> Result<Regex, RuleError> {
    let expanded = defs.expand(source).map_err(|reason| RuleError::Pattern { id: id.to_string(), reason })?;
    let flags = if case_sensitive { "" } else { "(?i)" };
    Regex::new(&format!("{flags}{}", wrap(&expanded)))
        .map_err(|e| RuleError::Pattern { id: id.to_string(), reason: e.to_string() })
}

fn subtypes(id: &str, names: &[String]) -> Result<Vec<EntitySubType>, RuleError> {
    names
        .iter()
        .map(|n| {
            crate::model::subtype_of(n).map_err(|e| RuleError::Pattern { id: id.to_string(), reason: e.to_string() })
        })
        .collect()
}

impl RuleSet {
    /// Parses and compiles a rule table. Every problem is reported, not
    /// just the first.
    pub fn load(src: &str, base_defs: &Defs) -> Result<RuleSet, Vec<RuleError>> {
        let file: RuleFile = toml::from_str(src)
            .map_err(|e| vec![RuleError::Pattern { id: "<rules.toml>".into(), reason: e.to_string() }])?;
        let mut defs = base_defs.clone();
        for (k, v) in &file.defs {
            defs.insert(k, v.clone());
        }
        let mut errors = Vec::new();
        let mut set = RuleSet::default();
        let mut ids = std::collections::BTreeSet::new();
        let mut check_id = |id: &str, errors: &mut Vec<RuleError>| {
            if !ids.insert(id.to_string()) {
                errors.push(RuleError::Pattern { id: id.to_string(), reason: "duplicate rule id".into() });
            }
        };
        for c in file.capture {
            check_id(&c.id, &mut errors);
            let r = subtypes(&c.id, std::slice::from_ref(&c.subtype))
                .and_then(|t| Ok((t[0], compile(&c.id, &c.pattern, &defs, false, |p| p.to_string())?)));
            match r {
                Ok((sub_type, regex)) => set.capture.push(CaptureRule {
                    id: c.id,
                    sub_type,
                    priority: c.priority,
                    source: c.pattern,
                    regex,
                }),
                Err(e) => errors.push(e),
            }
        }
        for c in file.composition {
            check_id(&c.id, &mut errors);
            let built = (|| {
                let combiner = Combiner::from_name(&c.combiner).ok_or_else(|| RuleError::Pattern {
                    id: c.id.clone(),
                    reason: format!("unknown combiner `{}`", c.combiner),
                })?;
                Ok::<_, RuleError>(CompositionRule {
                    left: subtypes(&c.id, &c.left)?,
                    right: subtypes(&c.id, &c.right)?,
                    prefix: c
                        .prefix
                        .as_deref()
                        .map(|p| compile(&c.id, p, &defs, false, |p| format!("(?:{p})$")))
                        .transpose()?,
                    connector: compile(&c.id, &c.connector, &defs, false, |p| format!("^(?:{p})$"))?,
                    sub_type: subtypes(&c.id, std::slice::from_ref(&c.subtype))?[0],
                    combiner,
                    id: c.id.clone(),
                })
            })();
            match built {
                Ok(r) => set.composition.push(r),
                Err(e) => errors.push(e),
            }
        }
        for f in file.filter {
            check_id(&f.id, &mut errors);
            let built = (|| {
                let kind = match f.kind.as_str() {
                    "negativeLookup" => FilterKind::NegativeLookup,
                    "contextGuard" => FilterKind::ContextGuard,
                    "overlapPolicy" => FilterKind::OverlapPolicy,
                    other => {
                        return Err(RuleError::Pattern { id: f.id.clone(), reason: format!("unknown filter kind `{other}`") })
                    }
                };
                let cs = f.case_sensitive;
                let surface = f.surface.as_deref().map(|p| compile(&f.id, p, &defs, cs, |p| format!("^(?:{p})$"))).transpose()?;
                let left = f.left.as_deref().map(|p| compile(&f.id, p, &defs, cs, |p| format!("(?:{p})$"))).transpose()?;
                let right = f.right.as_deref().map(|p| compile(&f.id, p, &defs, cs, |p| format!("^(?:{p})"))).transpose()?;
                if kind != FilterKind::OverlapPolicy && surface.is_none() && left.is_none() && right.is_none() {
                    return Err(RuleError::Pattern { id: f.id.clone(), reason: "filter has no pattern".into() });
                }
                Ok(FilterRule { id: f.id.clone(), kind, sub_types: subtypes(&f.id, &f.subtypes)?, surface, left, right })
            })();
            match built {
                Ok(r) => set.filter.push(r),
                Err(e) => errors.push(e),
            }
        }
        if errors.is_empty() { Ok(set) } else { Err(errors) }
    }
}

impl fmt::Display for RawExtraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}+{} [{}]", self.sub_type, self.span.start, self.span.length, self.rule_trail.join(">"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defs() -> Defs {
        let mut d = Defs::default();
        d.insert("YEAR", r"\d{4}".into());
        d.insert("WHEN", r"in {YEAR}".into());
        d.insert_words("UNIT", vec![("hour".into(), "H".into()), ("day".into(), "D".into()), ("half day".into(), "D".into())]);
        d
    }

    #[test]
    fn expansion() {
        let d = defs();
        assert_eq!(d.expand(r"{WHEN}").unwrap(), r"(?:in (?:\d{4}))");
        assert_eq!(d.expand("{UNIT:H}").unwrap(), "(?:hour)");
        assert_eq!(d.expand("{UNIT}").unwrap(), r"(?:half\s+day|hour|day)");
        assert_eq!(d.expand(r"a\{B}").unwrap(), r"a\{B}");
        assert_eq!(d.expand(r"x{2,3}").unwrap(), r"x{2,3}");
        assert!(d.expand("{NOPE}").is_err());
        let mut cyc = Defs::default();
        cyc.insert("A", "{A}".into());
        assert!(cyc.expand("{A}").is_err());
    }

    #[test]
    fn load_reports_all_errors() {
        let src = r#"
[[capture]]
id = "a"
subtype = "weekday"
pattern = "x"
[[capture]]
id = "a"
subtype = "date"
pattern = "("
[[composition]]
id = "c"
left = ["date"]
right = ["time"]
connector = "\\s*"
subtype = "datetime"
combiner = "glue"
"#;
        let errs = RuleSet::load(src, &defs()).unwrap_err();
        assert_eq!(errs.len(), 4, "{errs:?}");
    }

    #[test]
    fn load_ok() {
        let src = r#"
[defs]
HOUR = '\d{1,2}'
[[capture]]
id = "time.h"
subtype = "time"
priority = 3
pattern = '{HOUR} ?pm'
[[composition]]
id = "dt"
left = ["date"]
right = ["time"]
connector = '\s*(?:at)?\s*'
subtype = "datetime"
combiner = "datetime"
[[filter]]
id = "g"
kind = "contextGuard"
subtypes = ["date"]
surface = 'may'
right = '\s+i\b'
"#;
        let set = RuleSet::load(src, &defs()).unwrap();
        assert_eq!(set.capture[0].priority, 3);
        assert!(set.capture[0].regex.is_match("3PM"));
        assert!(set.composition[0].connector.is_match(" at "));
        assert!(!set.composition[0].connector.is_match(" on "));
        assert_eq!(set.overlap_rule_id(), "overlap");
    }
}
