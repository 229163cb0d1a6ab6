//! Per-language configuration: rule tables, word lists, unit, holiday and
//! timezone tables, and the override map.

pub mod lexicon;
pub mod overrides;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::datetime::holiday::HolidayTable;
use crate::datetime::timezone::parse_timezones;
use crate::model::{subtype_of, EntitySubType, UnitClass};
use crate::rules::{Defs, RuleSet};
use crate::trie::Dictionary;
use crate::unit::UnitTable;

pub use lexicon::Lexicon;
pub use overrides::{Effective, FunctionHandle, OverrideName, Overrides};

/// Language tags with an embedded configuration.
pub const SHIPPED_LANGUAGES: [&str; 2] = ["en", "es"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown language `{0}`")]
    UnknownLanguage(String),
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("unknown override name `{0}`")]
    UnknownOverrideName(String),
    #[error("sub-type `{sub_type}` is not supported for language `{lang}`")]
    UnsupportedForLanguage { lang: String, sub_type: EntitySubType },
}

/// Raw file contents of one language directory.
#[derive(Debug, Clone, Default)]
pub struct ConfigSources {
    pub config: String,
    pub rules: String,
    pub lexicon: String,
    pub overrides: Option<String>,
    pub currency: Option<String>,
    pub dimension: Option<String>,
    pub temperature: Option<String>,
    pub age: Option<String>,
    pub timezones: Option<String>,
    pub holidays: Option<String>,
}

macro_rules! embedded {
    ($dir:literal) => {
        ConfigSources {
            config: include_str!(concat!("../../config/", $dir, "/config.toml")).to_string(),
            rules: include_str!(concat!("../../config/", $dir, "/rules.toml")).to_string(),
            lexicon: include_str!(concat!("../../config/", $dir, "/lexicon.tsv")).to_string(),
            overrides: Some(include_str!(concat!("../../config/", $dir, "/overrides.toml")).to_string()),
            ..Default::default()
        }
    };
}

fn embedded_sources(tag: &str) -> Option<ConfigSources> {
    match tag {
        "en" => Some(ConfigSources {
            currency: Some(include_str!("../../config/en/currency.tsv").to_string()),
            dimension: Some(include_str!("../../config/en/dimension.tsv").to_string()),
            temperature: Some(include_str!("../../config/en/temperature.tsv").to_string()),
            age: Some(include_str!("../../config/en/age.tsv").to_string()),
            timezones: Some(include_str!("../../config/en/timezones.tsv").to_string()),
            holidays: Some(include_str!("../../config/en/holidays.tsv").to_string()),
            ..embedded!("en")
        }),
        "es" => Some(embedded!("es")),
        _ => None,
    }
}

impl ConfigSources {
    /// Reads a language directory; table files other than `config.toml`,
    /// `rules.toml` and `lexicon.tsv` are optional.
    pub fn from_dir(dir: &Path) -> std::io::Result<ConfigSources> {
        let req = |f: &str| std::fs::read_to_string(dir.join(f));
        let opt = |f: &str| {
            let p = dir.join(f);
            if p.exists() { std::fs::read_to_string(p).map(Some) } else { Ok(None) }
        };
        Ok(ConfigSources {
            config: req("config.toml")?,
            rules: req("rules.toml")?,
            lexicon: req("lexicon.tsv")?,
            overrides: opt("overrides.toml")?,
            currency: opt("currency.tsv")?,
            dimension: opt("dimension.tsv")?,
            temperature: opt("temperature.tsv")?,
            age: opt("age.tsv")?,
            timezones: opt("timezones.tsv")?,
            holidays: opt("holidays.tsv")?,
        })
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    tag: String,
    group_separator: String,
    decimal_separator: String,
    subtypes: Vec<String>,
}

/// A fully validated, immutable language configuration.
#[derive(Debug, Clone)]
pub struct LanguageConfig {
    pub tag: String,
    pub group_separator: char,
    pub decimal_separator: char,
    pub supported: BTreeSet<EntitySubType>,
    pub lexicon: Lexicon,
    pub rules: RuleSet,
    pub unit_tables: BTreeMap<UnitClass, UnitTable>,
    pub holidays: HolidayTable,
    pub timezones: Option<Dictionary>,
    pub overrides: Overrides,
    sources: ConfigSources,
}

/// Loads one of the shipped configurations.
pub fn load_config(tag: &str) -> Result<LanguageConfig, ConfigError> {
    let sources = embedded_sources(tag).ok_or_else(|| ConfigError::UnknownLanguage(tag.to_string()))?;
    LanguageConfig::from_sources(sources)
}

/// Loads a configuration from a directory laid out like the shipped ones.
pub fn load_config_from_dir(dir: &Path) -> Result<LanguageConfig, ConfigError> {
    let sources = ConfigSources::from_dir(dir).map_err(|e| ConfigError::Validation(vec![format!("{}: {e}", dir.display())]))?;
    LanguageConfig::from_sources(sources)
}

/// The override for `name` when the config has one, otherwise the core default.
pub fn effective_function(config: &LanguageConfig, name: &str) -> Result<Effective, ConfigError> {
    let n = OverrideName::from_name(name).ok_or_else(|| ConfigError::UnknownOverrideName(name.to_string()))?;
    Ok(config.overrides.effective(n))
}

fn single_char(field: &str, s: &str, issues: &mut Vec<String>) -> char {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => c,
        _ => {
            issues.push(format!("config.toml: `{field}` must be one character"));
            ','
        }
    }
}

/// Digit-sequence pattern honoring the separators: `1,234.5` in en.
fn digits_pattern(group: char, decimal: char) -> String {
    let g = regex::escape(&group.to_string());
    let d = regex::escape(&decimal.to_string());
    format!(r"(?:\d{{1,3}}(?:{g}\d{{3}})+(?:{d}\d+)?|\d+(?:{d}\d+)?)")
}

impl LanguageConfig {
    pub fn from_sources(sources: ConfigSources) -> Result<LanguageConfig, ConfigError> {
        let overrides = match &sources.overrides {
            Some(src) => Overrides::parse(src).map_err(ConfigError::Validation)?,
            None => Overrides::empty(),
        };
        Self::build(sources, overrides)
    }

    /// The same configuration with a different override map.
    pub fn with_overrides(&self, overrides: Overrides) -> Result<LanguageConfig, ConfigError> {
        Self::build(self.sources.clone(), overrides)
    }

    fn build(sources: ConfigSources, overrides: Overrides) -> Result<LanguageConfig, ConfigError> {
        let mut issues = Vec::new();
        let file: ConfigFile = toml::from_str(&sources.config)
            .map_err(|e| ConfigError::Validation(vec![format!("config.toml: {e}")]))?;
        let group = single_char("group_separator", &file.group_separator, &mut issues);
        let decimal = single_char("decimal_separator", &file.decimal_separator, &mut issues);
        if group == decimal {
            issues.push("config.toml: group and decimal separators must differ".into());
        }
        let mut supported = BTreeSet::new();
        for s in &file.subtypes {
            if s == "all" {
                supported.extend(EntitySubType::ALL);
            } else {
                match subtype_of(s) {
                    Ok(t) => {
                        supported.insert(t);
                    }
                    Err(e) => issues.push(format!("config.toml: {e}")),
                }
            }
        }
        let lexicon = Lexicon::parse(&sources.lexicon).unwrap_or_else(|e| {
            issues.push(e);
            Lexicon::default()
        });

        let mut unit_tables = BTreeMap::new();
        for (class, src) in [
            (UnitClass::Currency, &sources.currency),
            (UnitClass::Dimension, &sources.dimension),
            (UnitClass::Temperature, &sources.temperature),
            (UnitClass::Age, &sources.age),
        ] {
            if let Some(src) = src {
                match UnitTable::parse(class, src) {
                    Ok(t) => {
                        unit_tables.insert(class, t);
                    }
                    Err(e) => issues.extend(e),
                }
            }
        }
        let holidays = match &sources.holidays {
            Some(src) => HolidayTable::parse(src).unwrap_or_else(|e| {
                issues.extend(e);
                HolidayTable::default()
            }),
            None => HolidayTable::default(),
        };
        let timezones = match &sources.timezones {
            Some(src) => match parse_timezones(src) {
                Ok(d) => Some(d),
                Err(e) => {
                    issues.extend(e);
                    None
                }
            },
            None => None,
        };

        let mut defs = Defs::default();
        for cat in lexicon.categories() {
            let words = lexicon
                .surfaces(cat, None)
                .into_iter()
                .map(|s| (s.to_string(), lexicon.value(cat, s).unwrap_or_default().to_string()))
                .collect();
            defs.insert_words(&cat.to_uppercase(), words);
        }
        defs.insert_words("HOLIDAY", holidays.surfaces.iter().map(|(s, n)| (s.to_lowercase(), n.clone())).collect());
        defs.insert("DIGITS", digits_pattern(group, decimal));
        let rc = overrides.range_connectors();
        let words = |ws: &[&str]| ws.iter().map(|w| (w.to_string(), w.to_string())).collect::<Vec<_>>();
        defs.insert_words("RANGE_FROM", words(rc.from));
        defs.insert_words("RANGE_TO", words(rc.to));
        defs.insert_words("RANGE_BETWEEN", words(rc.between));
        defs.insert_words("RANGE_AND", words(rc.and));

        let rules = RuleSet::load(&sources.rules, &defs).unwrap_or_else(|errs| {
            issues.extend(errs.into_iter().map(|e| e.to_string()));
            RuleSet::default()
        });
        for r in &rules.capture {
            if !supported.contains(&r.sub_type) {
                issues.push(format!("rule `{}` produces unsupported sub-type `{}`", r.id, r.sub_type));
            }
        }
        for r in &rules.composition {
            if !supported.contains(&r.sub_type) {
                issues.push(format!("rule `{}` produces unsupported sub-type `{}`", r.id, r.sub_type));
            }
        }
        if !issues.is_empty() {
            return Err(ConfigError::Validation(issues));
        }
        Ok(LanguageConfig {
            tag: file.tag,
            group_separator: group,
            decimal_separator: decimal,
            supported,
            lexicon,
            rules,
            unit_tables,
            holidays,
            timezones,
            overrides,
            sources,
        })
    }

    pub fn supports(&self, t: EntitySubType) -> bool {
        self.supported.contains(&t)
    }

    pub fn check_supported(&self, t: EntitySubType) -> Result<(), ConfigError> {
        if self.supports(t) {
            Ok(())
        } else {
            Err(ConfigError::UnsupportedForLanguage { lang: self.tag.clone(), sub_type: t })
        }
    }
}
