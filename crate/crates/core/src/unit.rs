//! Number-with-unit recognition: currency, dimension, temperature and age.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::lang::LanguageConfig;
use crate::model::{CharIndex, EntitySubType, Span, UnitClass};
use crate::number::parse_number_value;
use crate::rules::RawExtraction;
use crate::trie::{DictEntry, DictMatch, Dictionary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown unit `{0}`")]
pub struct UnknownUnit(pub String);

const CURRENCIES: &[&str] = &[
    "AUD", "BRL", "CAD", "CHF", "CNY", "DKK", "EUR", "GBP", "HKD", "INR", "JPY", "KRW", "MXN", "NOK", "NZD", "PLN",
    "RUB", "SEK", "SGD", "USD", "ZAR",
];
const DIMENSIONS: &[&str] = &[
    "km", "m", "cm", "mm", "mi", "yd", "ft", "in", "kg", "g", "mg", "lb", "oz", "t", "l", "ml", "gal", "m2", "km2",
    "ft2", "acre", "ha", "km/h", "mph", "m/s", "B", "KB", "MB", "GB", "TB",
];
const TEMPERATURES: &[&str] = &["C", "F", "K"];
const AGES: &[&str] = &["Year", "Month", "Week", "Day"];

/// Canonical unit codes for a class: ISO-4217 currencies, SI/customary
/// dimension codes, C/F/K, and Year/Month/Week/Day for ages.
pub fn unit_registry(class: UnitClass) -> &'static [&'static str] {
    match class {
        UnitClass::Currency => CURRENCIES,
        UnitClass::Dimension => DIMENSIONS,
        UnitClass::Temperature => TEMPERATURES,
        UnitClass::Age => AGES,
    }
}

#[derive(Debug, Clone)]
pub struct UnitTable {
    pub class: UnitClass,
    pub dictionary: Dictionary,
    /// Surfaces (as written in the table) allowed before the number.
    pub prefix: BTreeSet<String>,
}

impl UnitTable {
    /// Rows are `surface<TAB>code[<TAB>flags]`; flags are `cs` (case
    /// sensitive) and `prefix` (may precede the number).
    pub fn parse(class: UnitClass, src: &str) -> Result<UnitTable, Vec<String>> {
        let mut entries = Vec::new();
        let mut prefix = BTreeSet::new();
        let mut issues = Vec::new();
        for (i, line) in src.lines().enumerate() {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cols.len() < 2 || cols[0].is_empty() {
                issues.push(format!("{} line {}: expected surface and code", class.name(), i + 1));
                continue;
            }
            if !unit_registry(class).contains(&cols[1]) {
                issues.push(format!("{} line {}: `{}` is not a registered code", class.name(), i + 1, cols[1]));
                continue;
            }
            let flags: Vec<&str> = cols.get(2).map(|f| f.split(',').map(str::trim).collect()).unwrap_or_default();
            let cs = flags.contains(&"cs");
            if flags.contains(&"prefix") {
                prefix.insert(cols[0].to_string());
            }
            entries.push(DictEntry { surface: cols[0].to_string(), payload: cols[1].to_string(), case_sensitive: cs });
        }
        if !issues.is_empty() {
            return Err(issues);
        }
        let dictionary = Dictionary::build(entries).map_err(|e| vec![format!("{}: {e}", class.name())])?;
        Ok(UnitTable { class, dictionary, prefix })
    }

    pub fn is_prefix(&self, surface: &str) -> bool {
        self.prefix.iter().any(|p| {
            let entry = self.dictionary.entries().iter().find(|e| &e.surface == p);
            match entry {
                Some(e) if e.case_sensitive => p == surface,
                _ => p.to_lowercase() == surface.to_lowercase(),
            }
        })
    }
}

/// Maps a unit surface to its canonical code.
pub fn canonical_unit(surface: &str, table: &UnitTable) -> Result<String, UnknownUnit> {
    table.dictionary.lookup(surface).map(str::to_string).ok_or_else(|| UnknownUnit(surface.to_string()))
}

pub fn subtype_of_class(class: UnitClass) -> EntitySubType {
    match class {
        UnitClass::Age => EntitySubType::Age,
        UnitClass::Currency => EntitySubType::Currency,
        UnitClass::Dimension => EntitySubType::Dimension,
        UnitClass::Temperature => EntitySubType::Temperature,
    }
}

/// Longest gap (in chars) between a number and a unit written after it.
const SUFFIX_GAP: usize = 2;

fn gap_ok(gap: &str, allow_hyphen: bool) -> bool {
    gap.chars().count() <= SUFFIX_GAP && gap.chars().all(|c| c == ' ' || (allow_hyphen && c == '-'))
}

fn quantity(number: &RawExtraction, unit: &DictMatch, class: UnitClass, text: &str, rule: &str) -> RawExtraction {
    let span = number.span.union(&unit.span);
    let mut ex = RawExtraction::new(span, subtype_of_class(class), rule, number.priority);
    ex.rule_trail = number.rule_trail.iter().cloned().chain([rule.to_string()]).collect();
    ex.capture_groups.insert("number".into(), number.surface(text).to_string());
    ex.capture_groups.insert("unit".into(), unit.payload.clone());
    ex.children.push(number.clone());
    ex
}

/// One quantity per number that has a unit from `table` right after it, or
/// a prefix unit ("$", "€") right before it. The prefix reading wins when
/// both are present.
pub fn extract_quantities(
    text: &str,
    numbers: &[RawExtraction],
    table: &UnitTable,
    _config: &LanguageConfig,
) -> Vec<RawExtraction> {
    let idx = CharIndex::new(text);
    let matches = table.dictionary.find_all(text);
    let slice = |a: usize, b: usize| {
        let (x, y) = idx.bytes_of_span(Span::new(a, b - a));
        &text[x..y]
    };
    let class = table.class;
    let mut out = Vec::new();
    for n in numbers.iter().filter(|n| n.sub_type == EntitySubType::Cardinal) {
        let prefix = matches
            .iter()
            .filter(|m| m.span.end() <= n.span.start && gap_ok(slice(m.span.end(), n.span.start), false))
            .filter(|m| table.is_prefix(slice(m.span.start, m.span.end())))
            .max_by_key(|m| m.span.length);
        if let Some(m) = prefix {
            out.push(quantity(n, m, class, text, &format!("unit.{}.prefix", class.name())));
            continue;
        }
        let suffix = matches
            .iter()
            .filter(|m| m.span.start >= n.span.end() && gap_ok(slice(n.span.end(), m.span.start), true))
            .max_by_key(|m| (std::cmp::Reverse(m.span.start), m.span.length));
        if let Some(m) = suffix {
            out.push(quantity(n, m, class, text, &format!("unit.{}.suffix", class.name())));
        }
    }
    out
}

/// Ages stated with a copula: "She is eight", "Maria turned 30". The
/// subject must be a listed pronoun or a capitalized name-like word that is
/// not excluded ("It", "That"), the number a whole value up to 130, and the
/// next word must not make it a time, duration or measurement.
pub fn classify_age(text: &str, numbers: &[RawExtraction], config: &LanguageConfig) -> Vec<RawExtraction> {
    let idx = CharIndex::new(text);
    let lex = &config.lexicon;
    let mut copulas = lex.surfaces("copula", None);
    copulas.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let mut out = Vec::new();
    for n in numbers.iter().filter(|n| n.sub_type == EntitySubType::Cardinal) {
        let (b0, b1) = idx.bytes_of_span(n.span);
        let Ok(value) = parse_number_value(&text[b0..b1], config) else { continue };
        if !value.is_integer() || value < num_rational::Ratio::from_integer(1) || value > num_rational::Ratio::from_integer(130) {
            continue;
        }
        let before = &text[..b0];
        let Some(subject_start) = copula_subject(before, &copulas, config) else { continue };
        if blocks_age(&text[b1..], config) {
            continue;
        }
        let start = idx.char_of(subject_start);
        let span = Span::new(start, n.span.end() - start);
        let mut ex = RawExtraction::new(span, EntitySubType::Age, "unit.age.copula", n.priority);
        ex.rule_trail = n.rule_trail.iter().cloned().chain(["unit.age.copula".to_string()]).collect();
        ex.capture_groups.insert("number".into(), text[b0..b1].to_string());
        ex.capture_groups.insert("unit".into(), "Year".into());
        ex.children.push(n.clone());
        out.push(ex);
    }
    out
}

/// Byte offset of the subject word when `before` ends in "<subject> <copula> ".
fn copula_subject(before: &str, copulas: &[&str], config: &LanguageConfig) -> Option<usize> {
    let trimmed = before.trim_end();
    if trimmed.len() == before.len() {
        return None;
    }
    let lower = trimmed.to_lowercase();
    let cop = copulas.iter().find(|c| {
        lower.ends_with(*c) && lower[..lower.len() - c.len()].ends_with(char::is_whitespace)
    })?;
    let rest = trimmed[..trimmed.len() - cop.len()].trim_end();
    let word_start = rest.rfind(|c: char| !c.is_alphabetic()).map_or(0, |i| i + rest[i..].chars().next().map_or(1, char::len_utf8));
    let subject = &rest[word_start..];
    let first = subject.chars().next()?;
    let key = subject.to_lowercase();
    let pronoun = config.lexicon.contains("age_subject", &key);
    let name_like = first.is_uppercase() && !config.lexicon.contains("age_exclude", &key);
    (pronoun || name_like).then_some(word_start)
}

fn blocks_age(after: &str, config: &LanguageConfig) -> bool {
    let rest = after.trim_start();
    if rest.starts_with(|c: char| c == '%' || c == ':')
        || (rest.len() < after.len() && rest.starts_with(|c: char| c.is_ascii_digit()))
        || after.starts_with(|c: char| c == '.' || c == ',') && after[1..].starts_with(|c: char| c.is_ascii_digit())
    {
        return true;
    }
    let word: String = rest.chars().take_while(|c| c.is_alphanumeric() || *c == '.' || *c == '\'' || *c == '’').collect();
    let word = word.trim_end_matches([',', '.']).to_lowercase();
    if word.is_empty() {
        return false;
    }
    let lex = &config.lexicon;
    let in_lex = ["duration_unit", "ampm", "percent", "fraction", "num_scale", "num_hundred"]
        .iter()
        .any(|cat| lex.contains(cat, &word) || lex.contains(cat, &format!("{word}.")));
    let in_tables = config.unit_tables.values().any(|t| t.dictionary.find_all(rest).iter().any(|m| m.span.start == 0));
    in_lex || in_tables || word.starts_with("o'clock") || word.starts_with("o’clock")
}
