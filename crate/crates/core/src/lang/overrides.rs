//! The closed registry of per-language overridable functions.
//!
//! A config names an implementation id per registry entry in
//! `overrides.toml`; entries it leaves out use the `core` implementation.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::lexicon::Lexicon;
use crate::model::rational::{parse_rational, Rational};
use crate::trie::is_word_char;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OverrideName {
    TokenBoundary,
    OrdinalSuffixParse,
    DateComponentOrder,
    AmPmInterpretation,
    FractionConnectorParse,
    RangeConnectorSet,
}

impl OverrideName {
    pub const ALL: [OverrideName; 6] = [
        OverrideName::TokenBoundary,
        OverrideName::OrdinalSuffixParse,
        OverrideName::DateComponentOrder,
        OverrideName::AmPmInterpretation,
        OverrideName::FractionConnectorParse,
        OverrideName::RangeConnectorSet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OverrideName::TokenBoundary => "tokenBoundary",
            OverrideName::OrdinalSuffixParse => "ordinalSuffixParse",
            OverrideName::DateComponentOrder => "dateComponentOrder",
            OverrideName::AmPmInterpretation => "amPmInterpretation",
            OverrideName::FractionConnectorParse => "fractionConnectorParse",
            OverrideName::RangeConnectorSet => "rangeConnectorSet",
        }
    }

    pub fn from_name(s: &str) -> Option<OverrideName> {
        OverrideName::ALL.into_iter().find(|n| n.name() == s)
    }

    /// Implementation ids available for this entry; the first is the core default.
    pub fn implementations(self) -> &'static [&'static str] {
        match self {
            OverrideName::TokenBoundary => &["core", "none"],
            OverrideName::OrdinalSuffixParse => &["core", "es"],
            OverrideName::DateComponentOrder => &["core", "mdy", "dmy", "ymd"],
            OverrideName::AmPmInterpretation => &["core", "h24"],
            OverrideName::FractionConnectorParse => &["core", "es"],
            OverrideName::RangeConnectorSet => &["core", "es"],
        }
    }
}

impl fmt::Display for OverrideName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One component of a date mention before role assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DateToken {
    /// A number and how many digits it was written with.
    Number(u32, usize),
    /// A month word, already mapped to 1–12.
    Month(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DateParts {
    pub year: Option<i32>,
    pub month: u32,
    pub day: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Meridiem {
    Am,
    Pm,
}

/// Connector words for ranges: "from A to B" and "between A and B".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeConnectors {
    pub from: &'static [&'static str],
    pub to: &'static [&'static str],
    pub between: &'static [&'static str],
    pub and: &'static [&'static str],
}

pub type TokenBoundaryFn = fn(Option<char>, &str, Option<char>) -> bool;
pub type OrdinalSuffixFn = fn(&str) -> Option<u64>;
pub type DateOrderFn = fn([Option<DateToken>; 3]) -> Option<DateParts>;
pub type AmPmFn = fn(u32, Option<Meridiem>) -> Option<u32>;
pub type FractionConnectorFn = fn(&str, &Lexicon) -> Option<(String, Rational)>;
pub type RangeConnectorFn = fn() -> RangeConnectors;

#[derive(Clone, Copy)]
pub enum FunctionHandle {
    TokenBoundary(TokenBoundaryFn),
    OrdinalSuffixParse(OrdinalSuffixFn),
    DateComponentOrder(DateOrderFn),
    AmPmInterpretation(AmPmFn),
    FractionConnectorParse(FractionConnectorFn),
    RangeConnectorSet(RangeConnectorFn),
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            FunctionHandle::TokenBoundary(_) => "TokenBoundary",
            FunctionHandle::OrdinalSuffixParse(_) => "OrdinalSuffixParse",
            FunctionHandle::DateComponentOrder(_) => "DateComponentOrder",
            FunctionHandle::AmPmInterpretation(_) => "AmPmInterpretation",
            FunctionHandle::FractionConnectorParse(_) => "FractionConnectorParse",
            FunctionHandle::RangeConnectorSet(_) => "RangeConnectorSet",
        };
        write!(f, "FunctionHandle::{n}")
    }
}

/// The resolved function for a registry entry.
#[derive(Debug, Clone, Copy)]
pub struct Effective {
    pub name: OverrideName,
    pub implementation: &'static str,
    pub handle: FunctionHandle,
}

impl Effective {
    pub fn is_core_default(&self) -> bool {
        self.implementation == "core"
    }
}

/// Implementation ids chosen by a config; absent entries mean `core`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    map: BTreeMap<OverrideName, &'static str>,
}

impl Overrides {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Parses an `overrides.toml` table of `name = "implementation"` pairs.
    pub fn parse(src: &str) -> Result<Overrides, Vec<String>> {
        let table: toml::Table = src.parse().map_err(|e| vec![format!("overrides.toml: {e}")])?;
        let mut out = Overrides::default();
        let mut issues = Vec::new();
        for (k, v) in table {
            let Some(name) = OverrideName::from_name(&k) else {
                issues.push(format!("unknown override name `{k}`"));
                continue;
            };
            match v.as_str() {
                Some(id) => {
                    if let Err(e) = out.set(name, id) {
                        issues.push(e);
                    }
                }
                None => issues.push(format!("override `{k}` must name an implementation")),
            }
        }
        if issues.is_empty() { Ok(out) } else { Err(issues) }
    }

    pub fn set(&mut self, name: OverrideName, id: &str) -> Result<(), String> {
        let known = name.implementations().iter().find(|&&i| i == id);
        match known {
            Some(&i) => {
                self.map.insert(name, i);
                Ok(())
            }
            None => Err(format!("unknown implementation `{id}` for `{name}`")),
        }
    }

    pub fn implementation(&self, name: OverrideName) -> &'static str {
        self.map.get(&name).copied().unwrap_or("core")
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (OverrideName, &'static str)> + '_ {
        self.map.iter().map(|(k, v)| (*k, *v))
    }

    pub fn effective(&self, name: OverrideName) -> Effective {
        let implementation = self.implementation(name);
        let handle = match (name, implementation) {
            (OverrideName::TokenBoundary, "none") => FunctionHandle::TokenBoundary(boundary_none),
            (OverrideName::TokenBoundary, _) => FunctionHandle::TokenBoundary(boundary_core),
            (OverrideName::OrdinalSuffixParse, "es") => FunctionHandle::OrdinalSuffixParse(ordinal_suffix_es),
            (OverrideName::OrdinalSuffixParse, _) => FunctionHandle::OrdinalSuffixParse(ordinal_suffix_core),
            (OverrideName::DateComponentOrder, "dmy") => FunctionHandle::DateComponentOrder(date_order_dmy),
            (OverrideName::DateComponentOrder, "ymd") => FunctionHandle::DateComponentOrder(date_order_ymd),
            (OverrideName::DateComponentOrder, _) => FunctionHandle::DateComponentOrder(date_order_core),
            (OverrideName::AmPmInterpretation, "h24") => FunctionHandle::AmPmInterpretation(ampm_h24),
            (OverrideName::AmPmInterpretation, _) => FunctionHandle::AmPmInterpretation(ampm_core),
            (OverrideName::FractionConnectorParse, "es") => FunctionHandle::FractionConnectorParse(fraction_es),
            (OverrideName::FractionConnectorParse, _) => FunctionHandle::FractionConnectorParse(fraction_core),
            (OverrideName::RangeConnectorSet, "es") => FunctionHandle::RangeConnectorSet(range_es),
            (OverrideName::RangeConnectorSet, _) => FunctionHandle::RangeConnectorSet(range_core),
        };
        Effective { name, implementation, handle }
    }

    pub fn token_boundary(&self) -> TokenBoundaryFn {
        match self.effective(OverrideName::TokenBoundary).handle {
            FunctionHandle::TokenBoundary(f) => f,
            _ => unreachable!(),
        }
    }

    pub fn ordinal_suffix_parse(&self) -> OrdinalSuffixFn {
        match self.effective(OverrideName::OrdinalSuffixParse).handle {
            FunctionHandle::OrdinalSuffixParse(f) => f,
            _ => unreachable!(),
        }
    }

    pub fn date_component_order(&self) -> DateOrderFn {
        match self.effective(OverrideName::DateComponentOrder).handle {
            FunctionHandle::DateComponentOrder(f) => f,
            _ => unreachable!(),
        }
    }

    pub fn am_pm(&self) -> AmPmFn {
        match self.effective(OverrideName::AmPmInterpretation).handle {
            FunctionHandle::AmPmInterpretation(f) => f,
            _ => unreachable!(),
        }
    }

    pub fn fraction_connector(&self) -> FractionConnectorFn {
        match self.effective(OverrideName::FractionConnectorParse).handle {
            FunctionHandle::FractionConnectorParse(f) => f,
            _ => unreachable!(),
        }
    }

    pub fn range_connectors(&self) -> RangeConnectors {
        match self.effective(OverrideName::RangeConnectorSet).handle {
            FunctionHandle::RangeConnectorSet(f) => f(),
            _ => unreachable!(),
        }
    }
}

/// A match may not start or end inside a word.
fn boundary_core(prev: Option<char>, surface: &str, next: Option<char>) -> bool {
    let (Some(first), Some(last)) = (surface.chars().next(), surface.chars().last()) else {
        return false;
    };
    let joins = |edge: char, neighbor: Option<char>| is_word_char(edge) && neighbor.is_some_and(is_word_char);
    !joins(first, prev) && !joins(last, next)
}

fn boundary_none(_: Option<char>, surface: &str, _: Option<char>) -> bool {
    !surface.is_empty()
}

fn split_digits(s: &str) -> Option<(u64, &str)> {
    let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    if end == 0 {
        return None;
    }
    Some((s[..end].parse().ok()?, &s[end..]))
}

/// "1st", "22nd", "23rd", "4th".
fn ordinal_suffix_core(s: &str) -> Option<u64> {
    let (n, rest) = split_digits(s.trim())?;
    matches!(rest.to_lowercase().as_str(), "st" | "nd" | "rd" | "th").then_some(n).filter(|&n| n > 0)
}

/// "3º", "1.ª", "1er", "2do".
fn ordinal_suffix_es(s: &str) -> Option<u64> {
    let (n, rest) = split_digits(s.trim())?;
    let rest = rest.trim_start_matches('.').to_lowercase();
    matches!(rest.as_str(), "º" | "ª" | "°" | "o" | "a" | "er" | "ra" | "do" | "da" | "ro" | "to" | "ta" | "mo" | "ma" | "vo" | "va" | "no" | "na")
        .then_some(n)
        .filter(|&n| n > 0)
}

fn expand_year(n: u32, digits: usize) -> Option<i32> {
    match digits {
        4 => Some(n as i32),
        2 if n < 50 => Some(2000 + n as i32),
        2 => Some(1900 + n as i32),
        _ => None,
    }
}

fn checked(year: Option<i32>, month: u32, day: Option<u32>) -> Option<DateParts> {
    ((1..=12).contains(&month) && day.is_none_or(|d| (1..=31).contains(&d))).then_some(DateParts { year, month, day })
}

#[derive(Clone, Copy, PartialEq)]
enum Role {
    Year,
    Month,
    Day,
}

fn assign_positional(tokens: [Option<DateToken>; 3], roles: [Role; 3]) -> Option<DateParts> {
    let (mut year, mut month, mut day) = (None, None, None);
    for (tok, role) in tokens.into_iter().zip(roles) {
        let Some(tok) = tok else { continue };
        match (role, tok) {
            (Role::Month, DateToken::Month(m)) | (Role::Month, DateToken::Number(m, 1..=2)) => month = Some(m),
            (Role::Day, DateToken::Number(d, 1..=2)) => day = Some(d),
            (Role::Year, DateToken::Number(y, n)) => year = Some(expand_year(y, n)?),
            _ => return None,
        }
    }
    checked(year, month?, day)
}

/// Month-day-year, except that a month word and a four-digit year claim
/// their roles wherever they appear ("12 March 2011", "March 12").
fn date_order_core(tokens: [Option<DateToken>; 3]) -> Option<DateParts> {
    let mut month = None;
    let mut year = None;
    let mut rest = Vec::new();
    for tok in tokens.into_iter().flatten() {
        match tok {
            DateToken::Month(m) if month.is_none() => month = Some(m),
            DateToken::Month(_) => return None,
            DateToken::Number(y, 4) if year.is_none() => year = Some(y as i32),
            DateToken::Number(n, d) => rest.push((n, d)),
        }
    }
    let mut day = None;
    for (n, digits) in rest {
        if month.is_none() && digits <= 2 {
            month = Some(n);
        } else if day.is_none() && digits <= 2 {
            day = Some(n);
        } else if year.is_none() {
            year = Some(expand_year(n, digits)?);
        } else {
            return None;
        }
    }
    checked(year, month?, day)
}

fn date_order_dmy(tokens: [Option<DateToken>; 3]) -> Option<DateParts> {
    assign_positional(tokens, [Role::Day, Role::Month, Role::Year])
}

fn date_order_ymd(tokens: [Option<DateToken>; 3]) -> Option<DateParts> {
    assign_positional(tokens, [Role::Year, Role::Month, Role::Day])
}

/// 12-hour clock with a.m./p.m.: 12 a.m. is midnight, 12 p.m. is noon.
fn ampm_core(hour: u32, m: Option<Meridiem>) -> Option<u32> {
    match m {
        None => (hour <= 23).then_some(hour),
        Some(_) if !(1..=12).contains(&hour) => None,
        Some(Meridiem::Am) => Some(hour % 12),
        Some(Meridiem::Pm) => Some(hour % 12 + 12),
    }
}

fn ampm_h24(hour: u32, m: Option<Meridiem>) -> Option<u32> {
    (m.is_none() && hour <= 23).then_some(hour)
}

fn fraction_value(word: &str, lex: &Lexicon) -> Option<Rational> {
    lex.value("fraction", word).and_then(parse_rational).filter(|r| !r.is_zero())
}

/// "two and a half" → ("two", 1/2).
fn fraction_core(s: &str, lex: &Lexicon) -> Option<(String, Rational)> {
    let words: Vec<&str> = s.split_whitespace().collect();
    let n = words.len();
    if n < 4 || !words[n - 3].eq_ignore_ascii_case("and") {
        return None;
    }
    if !matches!(words[n - 2].to_lowercase().as_str(), "a" | "an" | "one") {
        return None;
    }
    Some((words[..n - 3].join(" "), fraction_value(words[n - 1], lex)?))
}

/// "dos y medio" → ("dos", 1/2).
fn fraction_es(s: &str, lex: &Lexicon) -> Option<(String, Rational)> {
    let words: Vec<&str> = s.split_whitespace().collect();
    let n = words.len();
    if n < 3 || !words[n - 2].eq_ignore_ascii_case("y") {
        return None;
    }
    Some((words[..n - 2].join(" "), fraction_value(words[n - 1], lex)?))
}

fn range_core() -> RangeConnectors {
    RangeConnectors {
        from: &["from"],
        to: &["to", "until", "till", "through", "-", "–"],
        between: &["between"],
        and: &["and"],
    }
}

fn range_es() -> RangeConnectors {
    RangeConnectors {
        from: &["desde el", "desde", "del", "de"],
        to: &["hasta el", "hasta", "al", "a", "-", "–"],
        between: &["entre el", "entre"],
        and: &["y el", "y"],
    }
}
