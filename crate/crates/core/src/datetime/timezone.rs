//! Timezone surface table: fixed standard-time offsets, no DST rules.

use std::sync::OnceLock;

use regex::Regex;

use crate::model::span::CharIndex;
use crate::trie::{DictEntry, DictMatch, Dictionary};

pub const MIN_OFFSET: i32 = -12 * 60;
pub const MAX_OFFSET: i32 = 14 * 60;

/// Parses `surface<TAB>offset-minutes[<TAB>flags]` rows (flag `cs` marks
/// case-sensitive abbreviations) into a dictionary whose payload is the
/// offset in minutes.
pub fn parse_timezones(src: &str) -> Result<Dictionary, Vec<String>> {
    let mut entries = Vec::new();
    let mut issues = Vec::new();
    for (i, line) in src.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        let offset = cols.get(1).and_then(|o| o.parse::<i32>().ok());
        match (cols.first().filter(|s| !s.is_empty()), offset) {
            (Some(surface), Some(off)) if (MIN_OFFSET..=MAX_OFFSET).contains(&off) => {
                let cs = cols.get(2).is_some_and(|f| f.split(',').any(|x| x.trim() == "cs"));
                entries.push(DictEntry { surface: surface.to_string(), payload: off.to_string(), case_sensitive: cs });
            }
            _ => issues.push(format!("timezones line {}: expected surface and an offset in [-720, 840]", i + 1)),
        }
    }
    if !issues.is_empty() {
        return Err(issues);
    }
    Dictionary::build(entries).map_err(|e| vec![format!("timezones: {e}")])
}

/// Widens a zero-offset match such as `UTC` or `GMT` over a directly
/// following `+h`, `-hh:mm` or `+hhmm` and adds that offset.
pub fn with_explicit_offset(text: &str, m: DictMatch) -> DictMatch {
    static SUFFIX: OnceLock<Regex> = OnceLock::new();
    let re = SUFFIX.get_or_init(|| Regex::new(r"^([+\-−])(\d{1,2})(?::?(\d{2}))?\b").expect("offset pattern"));
    if m.payload != "0" {
        return m;
    }
    let idx = CharIndex::new(text);
    let Some(from) = idx.byte_of(m.span.end()) else { return m };
    let Some(c) = re.captures(&text[from..]) else { return m };
    let (h, mi): (i32, i32) = (c[2].parse().unwrap_or(99), c.get(3).map_or(0, |x| x.as_str().parse().unwrap_or(99)));
    let sign = if &c[1] == "+" { 1 } else { -1 };
    let off = sign * (h * 60 + mi);
    if mi > 59 || !(MIN_OFFSET..=MAX_OFFSET).contains(&off) {
        return m;
    }
    let end = idx.char_of(from + c[0].len());
    DictMatch { span: crate::model::Span::new(m.span.start, end - m.span.start), payload: off.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table() {
        let d = parse_timezones("Chicago time\t-360\nPST\t-480\tcs\n").unwrap();
        assert_eq!(d.lookup("chicago time"), Some("-360"));
        assert_eq!(d.lookup("pst"), None);
        assert!(parse_timezones("Mars time\t-900\n").is_err());
    }

    #[test]
    fn explicit_offsets() {
        let d = parse_timezones("UTC\t0\tcs\nPST\t-480\tcs\n").unwrap();
        let one = |t: &str| {
            let m = d.find_all(t).into_iter().next().unwrap();
            let m = with_explicit_offset(t, m);
            (m.span.slice(t).unwrap().to_string(), m.payload)
        };
        assert_eq!(one("at UTC+5:30 sharp"), ("UTC+5:30".into(), "330".into()));
        assert_eq!(one("é UTC−06"), ("UTC−06".into(), "-360".into()));
        assert_eq!(one("UTC+0530"), ("UTC+0530".into(), "330".into()));
        assert_eq!(one("UTC+15"), ("UTC".into(), "0".into()));
        assert_eq!(one("UTC+5:75"), ("UTC".into(), "0".into()));
        assert_eq!(one("PST+1"), ("PST".into(), "-480".into()));
        assert_eq!(one("UTC +1"), ("UTC".into(), "0".into()));
    }
}
