//! Holiday rules and the registry that maps canonical names to them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;

use super::calendar::{add_days, easter, nth_weekday, ymd};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HolidayRule {
    Fixed { month: u32, day: u32 },
    /// `n`th ISO weekday of the month; `n = -1` is the last.
    NthWeekday { month: u32, weekday: u32, n: i32 },
    /// Days relative to Easter Sunday.
    Easter { offset: i32 },
}

impl HolidayRule {
    pub fn date_in(&self, year: i32) -> Option<NaiveDate> {
        match *self {
            HolidayRule::Fixed { month, day } => ymd(year, month, day),
            HolidayRule::NthWeekday { month, weekday, n } => nth_weekday(year, month, weekday, n),
            HolidayRule::Easter { offset } => add_days(easter(year)?, offset as i64),
        }
    }
}

/// Rule syntax: `fixed:MM-DD`, `nth:MONTH:WEEKDAY:N` (N = -1 for last),
/// `easter:OFFSET`.
impl FromStr for HolidayRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad holiday rule `{s}`");
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |p: &str| p.parse::<i32>().map_err(|_| bad());
        let rule = match parts.as_slice() {
            ["fixed", md] => {
                let (m, d) = md.split_once('-').ok_or_else(bad)?;
                HolidayRule::Fixed { month: num(m)? as u32, day: num(d)? as u32 }
            }
            ["nth", m, wd, n] => HolidayRule::NthWeekday { month: num(m)? as u32, weekday: num(wd)? as u32, n: num(n)? },
            ["easter", off] => HolidayRule::Easter { offset: num(off)? },
            _ => return Err(bad()),
        };
        // exactly one date per year over the supported range
        if (1900..=2100).any(|y| rule.date_in(y).is_none()) {
            return Err(bad());
        }
        Ok(rule)
    }
}

impl fmt::Display for HolidayRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HolidayRule::Fixed { month, day } => write!(f, "fixed:{month:02}-{day:02}"),
            HolidayRule::NthWeekday { month, weekday, n } => write!(f, "nth:{month}:{weekday}:{n}"),
            HolidayRule::Easter { offset } => write!(f, "easter:{offset}"),
        }
    }
}

const BUILTIN: &[(&str, &str)] = &[
    ("NEW_YEAR", "fixed:01-01"),
    ("MLK_DAY", "nth:1:1:3"),
    ("VALENTINES_DAY", "fixed:02-14"),
    ("ST_PATRICKS_DAY", "fixed:03-17"),
    ("GOOD_FRIDAY", "easter:-2"),
    ("EASTER", "easter:0"),
    ("EASTER_MONDAY", "easter:1"),
    ("MOTHERS_DAY", "nth:5:7:2"),
    ("MEMORIAL_DAY", "nth:5:1:-1"),
    ("FATHERS_DAY", "nth:6:7:3"),
    ("INDEPENDENCE_DAY", "fixed:07-04"),
    ("LABOR_DAY", "nth:9:1:1"),
    ("HALLOWEEN", "fixed:10-31"),
    ("VETERANS_DAY", "fixed:11-11"),
    ("THANKSGIVING", "nth:11:4:4"),
    ("CHRISTMAS_EVE", "fixed:12-24"),
    ("CHRISTMAS", "fixed:12-25"),
    ("NEW_YEARS_EVE", "fixed:12-31"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolidayRegistry {
    rules: BTreeMap<String, HolidayRule>,
}

impl Default for HolidayRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl HolidayRegistry {
    /// Rules for every canonical holiday name the shipped tables use.
    pub fn builtin() -> Self {
        let rules = BUILTIN
            .iter()
            .map(|(n, r)| (n.to_string(), r.parse().expect("builtin holiday rule")))
            .collect();
        HolidayRegistry { rules }
    }

    pub fn get(&self, name: &str) -> Option<&HolidayRule> {
        self.rules.get(name)
    }

    pub fn insert(&mut self, name: &str, rule: HolidayRule) {
        self.rules.insert(name.to_string(), rule);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.rules.keys().map(String::as_str)
    }
}

/// A language's holiday surfaces: surface → canonical name.
#[derive(Debug, Clone, Default)]
pub struct HolidayTable {
    pub surfaces: Vec<(String, String)>,
    pub registry: HolidayRegistry,
}

impl HolidayTable {
    /// Rows are `surface<TAB>NAME[<TAB>rule]`; the rule column defines or
    /// replaces the rule for NAME.
    pub fn parse(src: &str) -> Result<HolidayTable, Vec<String>> {
        let mut table = HolidayTable::default();
        let mut issues = Vec::new();
        for (i, line) in src.lines().enumerate() {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            if cols.len() < 2 || cols[0].is_empty() || cols[1].is_empty() {
                issues.push(format!("holidays line {}: expected surface, name[, rule]", i + 1));
                continue;
            }
            if let Some(rule) = cols.get(2).filter(|r| !r.is_empty()) {
                match rule.parse() {
                    Ok(r) => table.registry.insert(cols[1], r),
                    Err(e) => issues.push(format!("holidays line {}: {e}", i + 1)),
                }
            }
            if table.registry.get(cols[1]).is_none() {
                issues.push(format!("holidays line {}: no rule for `{}`", i + 1, cols[1]));
            }
            table.surfaces.push((cols[0].to_string(), cols[1].to_string()));
        }
        if issues.is_empty() { Ok(table) } else { Err(issues) }
    }

    pub fn name_of(&self, surface: &str) -> Option<&str> {
        let key = crate::lang::lexicon::normalize_surface(surface);
        self.surfaces
            .iter()
            .find(|(s, _)| crate::lang::lexicon::normalize_surface(s) == key)
            .map(|(_, n)| n.as_str())
    }
}
