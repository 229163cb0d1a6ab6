//! Oracles and fixtures shared by the integration tests. Each oracle is a
//! separate implementation that only borrows the library's data types.

#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use chrono::{NaiveDate, NaiveDateTime, NaiveTime};
use ntx_core::dataset::{load_dataset, NtxDocument};
use ntx_core::lang::{load_config, LanguageConfig};
use ntx_core::model::rational::int;
use ntx_core::model::timex::{Direction, DurationUnit, TimexDuration};
use ntx_core::model::{AnchorContext, CalendarValue};
use ntx_core::trie::DictEntry;
use rand::rngs::StdRng;
use rand::Rng;

pub fn en() -> &'static LanguageConfig {
    static C: OnceLock<LanguageConfig> = OnceLock::new();
    C.get_or_init(|| load_config("en").expect("en config"))
}

pub fn es() -> &'static LanguageConfig {
    static C: OnceLock<LanguageConfig> = OnceLock::new();
    C.get_or_init(|| load_config("es").expect("es config"))
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn mini_en() -> Vec<NtxDocument> {
    load_dataset(&fixture("mini-en.json")).expect("mini-en loads")
}

pub fn mini_es() -> Vec<NtxDocument> {
    load_dataset(&fixture("mini-es.json")).expect("mini-es loads")
}

// ---- number words -------------------------------------------------------

const SMALL: [&str; 20] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
    "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
];
const DECADES: [&str; 8] = ["twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"];

/// Every spelling of 1..=99 the generator knows, as (value, words).
fn two_digit(hyphen: bool) -> Vec<(u32, String)> {
    let mut out: Vec<(u32, String)> = (1..20).map(|n| (n, SMALL[n as usize].to_string())).collect();
    for (i, dec) in DECADES.iter().enumerate() {
        let base = 20 + 10 * i as u32;
        out.push((base, dec.to_string()));
        for u in 1..10 {
            out.push((base + u, format!("{dec}{}{}", if hyphen { '-' } else { ' ' }, SMALL[u as usize])));
        }
    }
    out
}

/// English cardinal words for `n` in 0..=9999, built by table lookup over
/// the thousands, hundreds and remainder parts.
pub fn cardinal_words(n: u32, hyphen: bool, with_and: bool) -> String {
    assert!(n < 10_000);
    if n == 0 {
        return "zero".into();
    }
    let table = two_digit(hyphen);
    let spell = |k: u32| table.iter().find(|(v, _)| *v == k).map(|(_, w)| w.clone()).expect("1..=99");
    let (th, hu, rest) = (n / 1000, (n / 100) % 10, n % 100);
    let mut words = Vec::new();
    if th > 0 {
        words.push(format!("{} thousand", spell(th)));
    }
    if hu > 0 {
        words.push(format!("{} hundred", SMALL[hu as usize]));
    }
    if rest > 0 {
        if with_and && (th > 0 || hu > 0) {
            words.push("and".into());
        }
        words.push(spell(rest));
    }
    words.join(" ")
}

pub fn ordinal_words(n: u32, hyphen: bool, with_and: bool) -> String {
    let card = cardinal_words(n, hyphen, with_and);
    let cut = card.rfind([' ', '-']).map_or(0, |i| i + 1);
    let (head, last) = card.split_at(cut);
    let irregular = [
        ("one", "first"),
        ("two", "second"),
        ("three", "third"),
        ("five", "fifth"),
        ("eight", "eighth"),
        ("nine", "ninth"),
        ("twelve", "twelfth"),
    ];
    let tail = match irregular.iter().find(|(c, _)| *c == last) {
        Some((_, o)) => o.to_string(),
        None if last.ends_with('y') => format!("{}ieth", last.trim_end_matches('y')),
        None => format!("{last}th"),
    };
    format!("{head}{tail}")
}

pub fn ordinal_numeral(n: u32) -> String {
    let suffix = match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    };
    format!("{n}{suffix}")
}

// ---- dictionary scan ----------------------------------------------------

/// Longest match per start position by direct comparison at every offset;
/// case-sensitive entries win a length tie. ASCII inputs only.
pub fn naive_scan(entries: &[DictEntry], text: &str) -> Vec<(usize, usize, String)> {
    let t: Vec<char> = text.chars().collect();
    let word = |c: char| c.is_alphanumeric() || c == '_';
    let mut out = Vec::new();
    for start in 0..t.len() {
        let mut best: Option<(usize, bool, &str)> = None;
        for e in entries {
            let s: Vec<char> = e.surface.chars().collect();
            let end = start + s.len();
            if s.is_empty() || end > t.len() {
                continue;
            }
            let window: String = t[start..end].iter().collect();
            let equal = if e.case_sensitive { window == e.surface } else { window.eq_ignore_ascii_case(&e.surface) };
            if !equal {
                continue;
            }
            if s[0].is_alphanumeric() && start > 0 && word(t[start - 1]) {
                continue;
            }
            if s[s.len() - 1].is_alphanumeric() && end < t.len() && word(t[end]) {
                continue;
            }
            if best.is_none_or(|(l, cs, _)| (s.len(), e.case_sensitive) > (l, cs)) {
                best = Some((s.len(), e.case_sensitive, &e.payload));
            }
        }
        if let Some((l, _, p)) = best {
            out.push((start, l, p.to_string()));
        }
    }
    out
}

/// A random dictionary whose payload is a function of the entry key, so no
/// two entries conflict.
pub fn random_dictionary(rng: &mut StdRng) -> Vec<DictEntry> {
    const ALPHA: &[u8] = b"abAB$ -1";
    let n = rng.gen_range(1..10);
    let mut out: Vec<DictEntry> = Vec::new();
    for _ in 0..n {
        let len = rng.gen_range(1..5);
        let s: String = (0..len).map(|_| ALPHA[rng.gen_range(0..ALPHA.len())] as char).collect();
        let cs = rng.gen_bool(0.3);
        let key = if cs { s.clone() } else { s.to_ascii_lowercase() };
        let payload = format!("{}{}", if cs { "cs:" } else { "ci:" }, key);
        if !out.iter().any(|e| e.case_sensitive == cs && (if cs { e.surface == s } else { e.surface.eq_ignore_ascii_case(&s) })) {
            out.push(DictEntry { surface: s, payload, case_sensitive: cs });
        }
    }
    out
}

pub fn random_text(rng: &mut StdRng) -> String {
    const ALPHA: &[u8] = b"abAB$ -1c.";
    let len = rng.gen_range(0..40);
    (0..len).map(|_| ALPHA[rng.gen_range(0..ALPHA.len())] as char).collect()
}

// ---- calendar -----------------------------------------------------------

pub fn leap(y: i64) -> bool {
    (y % 4 == 0 && y % 100 != 0) || y % 400 == 0
}

pub fn month_len(y: i64, m: i64) -> i64 {
    [31, if leap(y) { 29 } else { 28 }, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31][(m - 1) as usize]
}

/// Days since 1970-01-01 of a proleptic Gregorian date.
pub fn day_number(y: i64, m: i64, d: i64) -> i64 {
    let y = if m <= 2 { y - 1 } else { y };
    let era = y.div_euclid(400);
    let yoe = y - era * 400;
    let doy = (153 * (if m > 2 { m - 3 } else { m + 9 }) + 2) / 5 + d - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

pub fn from_day_number(z: i64) -> (i64, i64, i64) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let m = if mp < 10 { mp + 3 } else { mp - 9 };
    (yoe + era * 400 + i64::from(m <= 2), m, d)
}

/// A random duration drawn as (unit, amount) parts with positive amounts.
#[derive(Debug, Clone)]
pub struct DurationCase {
    pub parts: Vec<(DurationUnit, i64)>,
}

impl DurationCase {
    pub fn timex(&self) -> TimexDuration {
        self.parts.iter().fold(TimexDuration::new(), |d, (u, n)| d.with(*u, int(*n as i128)))
    }

    fn get(&self, u: DurationUnit) -> i64 {
        self.parts.iter().filter(|(x, _)| *x == u).map(|(_, n)| n).sum()
    }
}

/// Expected value of shifting `anchor` by `d`: calendar months first with
/// the day clamped to the target month, then exact days and seconds.
pub fn shift_oracle(anchor: &AnchorContext, d: &DurationCase, back: bool) -> CalendarValue {
    let sign = if back { -1 } else { 1 };
    let (y, m, day) = (anchor.date.format("%Y").to_string(), anchor.date.format("%m").to_string(), anchor.date.format("%d").to_string());
    let (y, m, day): (i64, i64, i64) = (y.parse().unwrap(), m.parse().unwrap(), day.parse().unwrap());
    let months = y * 12 + (m - 1) + sign * (12 * d.get(DurationUnit::Year) + d.get(DurationUnit::Month));
    let (ny, nm) = (months.div_euclid(12), months.rem_euclid(12) + 1);
    let nd = day.min(month_len(ny, nm));
    let tod = anchor.time.map_or(0, |t| {
        let s = t.format("%H:%M:%S").to_string();
        let v: Vec<i64> = s.split(':').map(|x| x.parse().unwrap()).collect();
        v[0] * 3600 + v[1] * 60 + v[2]
    });
    let delta = d.get(DurationUnit::Week) * 7 * 86_400
        + d.get(DurationUnit::Day) * 86_400
        + d.get(DurationUnit::Hour) * 3600
        + d.get(DurationUnit::Minute) * 60
        + d.get(DurationUnit::Second);
    let total = day_number(ny, nm, nd) * 86_400 + tod + sign * delta;
    let (ry, rm, rd) = from_day_number(total.div_euclid(86_400));
    let date = NaiveDate::from_ymd_opt(ry as i32, rm as u32, rd as u32).unwrap();
    let time_units = [DurationUnit::Hour, DurationUnit::Minute, DurationUnit::Second];
    if d.parts.iter().all(|(u, _)| !time_units.contains(u)) {
        CalendarValue::Date(date)
    } else {
        let secs = total.rem_euclid(86_400) as u32;
        let t = NaiveTime::from_hms_opt(secs / 3600, (secs / 60) % 60, secs % 60).unwrap();
        CalendarValue::DateTime(NaiveDateTime::new(date, t), anchor.utc_offset_minutes)
    }
}

/// Anchors biased toward leap days and month ends.
pub fn random_anchor(rng: &mut StdRng) -> AnchorContext {
    let y = rng.gen_range(1900..2100i64);
    let (m, d) = match rng.gen_range(0..4) {
        0 => (2, if leap(y) { 29 } else { 28 }),
        1 => {
            let m = rng.gen_range(1..=12);
            (m, month_len(y, m))
        }
        _ => {
            let m = rng.gen_range(1..=12);
            (m, rng.gen_range(1..=month_len(y, m)))
        }
    };
    let date = NaiveDate::from_ymd_opt(y as i32, m as u32, d as u32).unwrap();
    let time = rng.gen_bool(0.4).then(|| NaiveTime::from_hms_opt(rng.gen_range(0..24), rng.gen_range(0..60), rng.gen_range(0..60)).unwrap());
    let utc_offset_minutes = (time.is_some() && rng.gen_bool(0.3)).then(|| rng.gen_range(-12..=14) * 60);
    AnchorContext { date, time, utc_offset_minutes }
}

pub fn random_duration(rng: &mut StdRng) -> DurationCase {
    let mut parts = Vec::new();
    let units = [
        (DurationUnit::Year, 30),
        (DurationUnit::Month, 40),
        (DurationUnit::Week, 60),
        (DurationUnit::Day, 800),
        (DurationUnit::Hour, 100),
        (DurationUnit::Minute, 200),
        (DurationUnit::Second, 5000),
    ];
    for (u, max) in units {
        let p = if matches!(u, DurationUnit::Hour | DurationUnit::Minute | DurationUnit::Second) { 0.2 } else { 0.45 };
        if rng.gen_bool(p) {
            parts.push((u, rng.gen_range(1..=max)));
        }
    }
    DurationCase { parts }
}

pub fn direction(back: bool) -> Direction {
    if back { Direction::Back } else { Direction::Forward }
}

/// Western Easter Sunday, 1990–2030, from published tables.
pub const EASTER: [(i32, u32, u32); 41] = [
    (1990, 4, 15), (1991, 3, 31), (1992, 4, 19), (1993, 4, 11), (1994, 4, 3), (1995, 4, 16), (1996, 4, 7),
    (1997, 3, 30), (1998, 4, 12), (1999, 4, 4), (2000, 4, 23), (2001, 4, 15), (2002, 3, 31), (2003, 4, 20),
    (2004, 4, 11), (2005, 3, 27), (2006, 4, 16), (2007, 4, 8), (2008, 3, 23), (2009, 4, 12), (2010, 4, 4),
    (2011, 4, 24), (2012, 4, 8), (2013, 3, 31), (2014, 4, 20), (2015, 4, 5), (2016, 3, 27), (2017, 4, 16),
    (2018, 4, 1), (2019, 4, 21), (2020, 4, 12), (2021, 4, 4), (2022, 4, 17), (2023, 4, 9), (2024, 3, 31),
    (2025, 4, 20), (2026, 4, 5), (2027, 3, 28), (2028, 4, 16), (2029, 4, 1), (2030, 4, 21),
];

// ---- scorer mutations ---------------------------------------------------

use ntx_core::dataset::GoldEntity;

/// Predictions derived from gold by random edits: dropped, shifted,
/// retyped, renormalized or re-resolved entities, plus spurious ones.
pub fn mutate_predictions(gold: &[NtxDocument], rng: &mut StdRng) -> Vec<Vec<GoldEntity>> {
    gold.iter()
        .map(|d| {
            let mut out = Vec::new();
            for g in &d.entities {
                let mut p = g.clone();
                p.not_supported = false;
                match rng.gen_range(0..7) {
                    0 => continue,
                    1 => p.start += 1,
                    2 => p.sub_type = if p.sub_type == "cardinal" { "ordinal".into() } else { "cardinal".into() },
                    3 => p.value = format!("{}0", p.value),
                    4 => p.resolutions.clear(),
                    5 => {
                        for r in &mut p.resolutions {
                            r.value = r.value.map(|_| CalendarValue::Date(NaiveDate::from_ymd_opt(1999, 1, 1).unwrap()));
                        }
                    }
                    _ => {}
                }
                out.push(p);
            }
            if rng.gen_bool(0.2) {
                let mut extra = d.entities.first().cloned().unwrap_or_else(|| GoldEntity {
                    start: 0,
                    length: 1,
                    text: String::new(),
                    sub_type: "cardinal".into(),
                    value: "1".into(),
                    resolutions: vec![],
                    not_supported: false,
                    note: None,
                    extra: Default::default(),
                });
                extra.start += 2;
                out.push(extra);
            }
            out
        })
        .collect()
}
