//! Raw extraction → timex value. Capture rules are normalized by a cascade
//! over their capture groups; composed extractions by the combiner named on
//! the composition rule.

use num_traits::Zero;
use thiserror::Error;

use crate::lang::overrides::{DateToken, Meridiem};
use crate::lang::LanguageConfig;
use crate::model::rational::{int, Rational};
use crate::model::timex::{
    DateSpec, Direction, DurationUnit, HolidayRef, Modifier, RangeElement, RefKind, TimeOfDay, TimexDuration,
    TimexPoint, TimexRange, TimexReference, TimexSet,
};
use crate::model::{EntitySubType, Timex};
use crate::number::parse_number_value;
use crate::rules::{Combiner, RawExtraction};

use super::calendar::{days_in_month, last_of_month, ymd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot normalize `{surface}` as {sub_type}: {reason}")]
pub struct UnparsableTimex {
    pub surface: String,
    pub sub_type: EntitySubType,
    pub reason: String,
}

type Res<T> = Result<T, String>;

/// Normalizes a temporal extraction found in `text`.
pub fn normalize(ex: &RawExtraction, text: &str, config: &LanguageConfig) -> Result<Timex, UnparsableTimex> {
    let fail = |reason: String| UnparsableTimex {
        surface: ex.surface(text).to_string(),
        sub_type: ex.sub_type,
        reason,
    };
    if !ex.sub_type.is_temporal() {
        return Err(fail("not a temporal sub-type".into()));
    }
    let t = Normalizer { config }.run(ex).map_err(fail)?;
    t.validate().map_err(|e| fail(e.to_string()))?;
    Ok(t)
}

/// Merges a time (or datetime) extraction with an adjacent timezone match
/// into one extraction of the time's sub-type.
pub fn attach_timezone(time: &RawExtraction, tz: &crate::trie::DictMatch, _config: &LanguageConfig) -> RawExtraction {
    let zone = timezone_extraction(tz);
    let mut trail = time.rule_trail.clone();
    trail.extend(zone.rule_trail.iter().cloned());
    trail.push("compose.attach-timezone".into());
    RawExtraction {
        span: time.span.union(&tz.span),
        sub_type: time.sub_type,
        rule_trail: trail,
        capture_groups: Default::default(),
        priority: time.priority.min(zone.priority),
        children: vec![time.clone(), zone],
        combiner: Some(Combiner::Timezone),
    }
}

/// A standalone timezone extraction from a dictionary match.
pub fn timezone_extraction(tz: &crate::trie::DictMatch) -> RawExtraction {
    let mut ex = RawExtraction::new(tz.span, EntitySubType::Timezone, "timezone.table", 0);
    ex.capture_groups.insert("offset".into(), tz.payload.clone());
    ex
}

struct Normalizer<'a> {
    config: &'a LanguageConfig,
}

fn point(t: Timex) -> Res<TimexPoint> {
    match t {
        Timex::Point(p) => Ok(p),
        other => Err(format!("expected a calendar point, got `{other}`")),
    }
}

impl Normalizer<'_> {
    fn run(&self, ex: &RawExtraction) -> Res<Timex> {
        if let Some(c) = ex.combiner {
            return self.combine(c, ex);
        }
        match ex.sub_type {
            EntitySubType::Date => self.date(ex),
            EntitySubType::Time => self.time(ex).map(Timex::Point),
            EntitySubType::DateTime => self.datetime(ex),
            EntitySubType::DateRange => self.daterange(ex),
            EntitySubType::TimeRange => self.timerange(ex),
            EntitySubType::DateTimeRange => self.last_n(ex),
            EntitySubType::Duration => self.duration(ex).map(Timex::Duration),
            EntitySubType::Holiday => self.holiday(ex),
            EntitySubType::Timezone => self.timezone(ex),
            EntitySubType::Set => self.set(ex),
            _ => Err("not a temporal sub-type".into()),
        }
    }

    fn lex(&self, category: &str, surface: &str) -> Option<&str> {
        self.config.lexicon.value(category, surface)
    }

    fn lex_num(&self, category: &str, surface: &str) -> Res<u32> {
        self.lex(category, surface)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| format!("`{surface}` is not a known {category}"))
    }

    fn number(&self, s: &str) -> Res<Rational> {
        if matches!(s.trim().to_lowercase().as_str(), "a" | "an") {
            return Ok(int(1));
        }
        parse_number_value(s, self.config).map_err(|e| e.to_string())
    }

    fn small(&self, s: &str) -> Res<u32> {
        let v = self.number(s)?;
        if !v.is_integer() || v < int(0) || v > int(10_000) {
            return Err(format!("`{s}` is not a small whole number"));
        }
        Ok(v.to_integer() as u32)
    }

    fn unit(&self, s: &str) -> Res<DurationUnit> {
        self.lex("duration_unit", s)
            .and_then(DurationUnit::from_code)
            .ok_or_else(|| format!("`{s}` is not a duration unit"))
    }

    fn direction(&self, category: &str, s: &str) -> Res<Direction> {
        match self.lex(category, s) {
            Some("back") => Ok(Direction::Back),
            Some("forward") => Ok(Direction::Forward),
            _ => Err(format!("`{s}` is not a direction")),
        }
    }

    // ---- dates

    fn day_of(s: &str) -> Res<u32> {
        let digits: String = s.chars().take_while(char::is_ascii_digit).collect();
        digits.parse().map_err(|_| format!("bad day `{s}`"))
    }

    fn year_of(s: &str) -> Res<i32> {
        s.parse().map_err(|_| format!("bad year `{s}`"))
    }

    fn date(&self, ex: &RawExtraction) -> Res<Timex> {
        let g = |n: &str| ex.group(n);
        if let Some(r) = g("relday") {
            let n: i64 = self.lex("relday", r).and_then(|v| v.parse().ok()).ok_or("unknown relative day")?;
            return Ok(shifted(TimexDuration::of(DurationUnit::Day, int(n.abs() as i128)), n < 0, n == 0));
        }
        if let (Some(num), Some(unit), Some(dir)) = (g("num"), g("unit"), g("dir")) {
            return self.ago(num, unit, dir);
        }
        if g("c1").is_some() {
            return self.component_date(ex).map(Timex::Point);
        }
        if let Some(m) = g("month") {
            let month = self.lex_num("month", m)?;
            let day = g("day").map(Self::day_of).transpose()?;
            let year = g("year").map(Self::year_of).transpose()?;
            return Ok(Timex::Point(TimexPoint::ymd(year, Some(month), day)));
        }
        if let Some(w) = g("weekday") {
            return Ok(Timex::Point(TimexPoint::weekday(self.lex_num("weekday", w)?)));
        }
        Err("no date components captured".into())
    }

    /// Numeric or mixed dates whose component roles come from the language's
    /// date order: "3/5/2021", "3 de mayo de 2021".
    fn component_date(&self, ex: &RawExtraction) -> Res<TimexPoint> {
        let mut tokens = [None; 3];
        for (i, name) in ["c1", "c2", "c3"].iter().enumerate() {
            if let Some(s) = ex.group(name) {
                tokens[i] = Some(if s.chars().all(|c| c.is_ascii_digit()) {
                    DateToken::Number(s.parse().map_err(|_| format!("bad component `{s}`"))?, s.len())
                } else {
                    DateToken::Month(self.lex_num("month", s)?)
                });
            }
        }
        let parts = self.config.overrides.date_component_order()(tokens)
            .ok_or_else(|| format!("components {tokens:?} do not form a date"))?;
        Ok(TimexPoint::ymd(parts.year, Some(parts.month), parts.day))
    }

    fn ago(&self, num: &str, unit: &str, dir: &str) -> Res<Timex> {
        let d = cascade(self.unit(unit)?, self.number(num)?)?;
        let back = self.direction("direction", dir)? == Direction::Back;
        Ok(shifted(d, back, false))
    }

    // ---- times

    fn meridiem(&self, s: Option<&str>) -> Res<Option<Meridiem>> {
        match s.map(|s| self.lex("ampm", s)) {
            None => Ok(None),
            Some(Some("am")) => Ok(Some(Meridiem::Am)),
            Some(Some("pm")) => Ok(Some(Meridiem::Pm)),
            Some(_) => Err("unknown am/pm marker".into()),
        }
    }

    fn clock(&self, hour: u32, minute: Option<&str>, ampm: Option<&str>) -> Res<TimeOfDay> {
        let h = self.config.overrides.am_pm()(hour, self.meridiem(ampm)?).ok_or_else(|| format!("bad hour {hour}"))?;
        let m = minute.map(|m| m.parse::<u32>().map_err(|_| format!("bad minute `{m}`"))).transpose()?;
        Ok(TimeOfDay::hm(h, m.unwrap_or(0)))
    }

    fn time(&self, ex: &RawExtraction) -> Res<TimexPoint> {
        let g = |n: &str| ex.group(n);
        let tod = if let Some(n) = g("named") {
            let v = self.lex("named_time", n).ok_or("unknown named time")?;
            let (h, m) = v.split_once(':').ok_or("bad named time")?;
            TimeOfDay::hm(h.parse().map_err(|_| "bad named time")?, m.parse().map_err(|_| "bad named time")?)
        } else {
            let hour = match (g("hour"), g("hourword")) {
                (Some(h), _) => h.parse().map_err(|_| format!("bad hour `{h}`"))?,
                (None, Some(w)) => self.small(w)?,
                _ => return Err("no hour captured".into()),
            };
            let mut t = self.clock(hour, g("minute"), g("ampm"))?;
            if let Some(s) = g("second") {
                t.second = Some(s.parse().map_err(|_| format!("bad second `{s}`"))?);
            }
            t
        };
        Ok(TimexPoint { time: Some(tod), ..Default::default() })
    }

    fn datetime(&self, ex: &RawExtraction) -> Res<Timex> {
        if ex.group("now").is_some() {
            return Ok(Timex::present());
        }
        match (ex.group("num"), ex.group("unit"), ex.group("dir")) {
            (Some(n), Some(u), Some(d)) => self.ago(n, u, d),
            _ => Err("no datetime components captured".into()),
        }
    }

    // ---- ranges

    fn relation(&self, ex: &RawExtraction) -> Res<Option<Modifier>> {
        ex.group("rel")
            .map(|r| self.lex("relation", r).and_then(Modifier::from_token).ok_or_else(|| format!("unknown relation `{r}`")))
            .transpose()
    }

    fn daterange(&self, ex: &RawExtraction) -> Res<Timex> {
        let g = |n: &str| ex.group(n);
        if g("dir").is_some() {
            return self.last_n(ex);
        }
        if let (Some(y1), Some(y2)) = (g("y1"), g("y2")) {
            let (a, b) = (Self::year_of(y1)?, Self::year_of(y2)?);
            let span = b - a + 1;
            if span < 1 {
                return Err("years out of order".into());
            }
            return Ok(closed_range(
                TimexPoint::ymd(Some(a), None, None),
                TimexPoint::ymd(Some(b), None, None),
                TimexDuration::of(DurationUnit::Year, int(span as i128)),
            ));
        }
        if let (Some(d1), Some(d2), Some(m)) = (g("d1"), g("d2"), g("month")) {
            let (a, b) = (Self::day_of(d1)?, Self::day_of(d2)?);
            let month = self.lex_num("month", m)?;
            let year = g("year").map(Self::year_of).transpose()?;
            if b < a {
                return Err("days out of order".into());
            }
            return Ok(closed_range(
                TimexPoint::ymd(year, Some(month), Some(a)),
                TimexPoint::ymd(year, Some(month), Some(b)),
                TimexDuration::of(DurationUnit::Day, int((b - a + 1) as i128)),
            ));
        }
        let month = g("month").map(|m| self.lex_num("month", m)).transpose()?;
        let year = g("year").or(g("year2")).map(Self::year_of).transpose()?;
        if month.is_none() && year.is_none() {
            return Err("no month or year captured".into());
        }
        let mut p = TimexPoint::ymd(year, month, None);
        if let Some(pos) = g("pos") {
            let cat = if self.lex("position", pos).is_some() { "position" } else { "position_adj" };
            let m = match self.lex(cat, pos) {
                Some("EO") if month.is_some() => Modifier::Eom,
                Some("EO") => Modifier::Eoy,
                Some(tok) => Modifier::from_token(tok).ok_or_else(|| format!("bad position `{tok}`"))?,
                None => return Err(format!("unknown position `{pos}`")),
            };
            p.modifiers.push(m);
        }
        Ok(relate(p, self.relation(ex)?))
    }

    /// "the last 3 days", "the next two hours".
    fn last_n(&self, ex: &RawExtraction) -> Res<Timex> {
        let (Some(dir), Some(num), Some(unit)) = (ex.group("dir"), ex.group("num"), ex.group("unit")) else {
            return Err("no period captured".into());
        };
        let d = cascade(self.unit(unit)?, self.number(num)?)?;
        let here = Some(RangeElement::Reference(TimexReference { kind: RefKind::Present, shift: None }));
        Ok(Timex::Range(match self.direction("period_rel", dir)? {
            Direction::Back => TimexRange { begin: None, end: here, duration: Some(d) },
            Direction::Forward => TimexRange { begin: here, end: None, duration: Some(d) },
        }))
    }

    fn timerange(&self, ex: &RawExtraction) -> Res<Timex> {
        let g = |n: &str| ex.group(n);
        let (Some(h1), Some(h2)) = (g("h1"), g("h2")) else {
            return Err("no hours captured".into());
        };
        let h1: u32 = h1.parse().map_err(|_| "bad hour")?;
        let h2: u32 = h2.parse().map_err(|_| "bad hour")?;
        let end = self.clock(h2, g("m2"), g("ap2"))?;
        let begin = match g("ap1") {
            Some(a) => self.clock(h1, g("m1"), Some(a))?,
            // "3 to 4 p.m." shares the marker; "11 to 1 p.m." crosses noon
            None => {
                let shared = self.clock(h1, g("m1"), g("ap2"))?;
                if shared.seconds_of_day() < end.seconds_of_day() { shared } else { self.clock(h1, g("m1"), Some("am"))? }
            }
        };
        time_range(begin, end)
    }

    // ---- durations

    fn duration(&self, ex: &RawExtraction) -> Res<TimexDuration> {
        let unit = self.unit(ex.group("unit").ok_or("no unit captured")?)?;
        let mut amount = match ex.group("num") {
            Some(n) => self.number(n)?,
            None => int(0),
        };
        if ex.group("half").is_some() {
            amount += Rational::new(1, 2);
        }
        if amount <= int(0) {
            return Err("duration amount must be positive".into());
        }
        cascade(unit, amount)
    }

    fn holiday(&self, ex: &RawExtraction) -> Res<Timex> {
        let s = ex.group("holiday").ok_or("no holiday captured")?;
        let name = self.config.holidays.name_of(s).ok_or_else(|| format!("unknown holiday `{s}`"))?;
        let year = ex.group("year").map(Self::year_of).transpose()?;
        Ok(Timex::Holiday(HolidayRef { name: name.to_string(), year }))
    }

    fn timezone(&self, ex: &RawExtraction) -> Res<Timex> {
        let off = ex.group("offset").ok_or("no offset")?;
        off.parse().map(Timex::Timezone).map_err(|_| format!("bad offset `{off}`"))
    }

    fn set(&self, ex: &RawExtraction) -> Res<Timex> {
        let g = |n: &str| ex.group(n);
        if let Some(w) = g("setword") {
            return match self.lex("setword", w).map(str::parse::<Timex>) {
                Some(Ok(Timex::Duration(period))) => Ok(Timex::Set(TimexSet { base: None, period, since: None })),
                _ => Err(format!("unknown set word `{w}`")),
            };
        }
        let every = match g("every") {
            Some(e) => self.lex_num("every", e)?,
            None => 1,
        };
        let step = |u: DurationUnit, n: u32| TimexDuration::of(u, int(n as i128));
        let (base, period) = if let Some(w) = g("weekday") {
            (Some(TimexPoint::weekday(self.lex_num("weekday", w)?)), step(DurationUnit::Week, every))
        } else if let Some(m) = g("month") {
            (Some(TimexPoint::ymd(None, Some(self.lex_num("month", m)?), None)), step(DurationUnit::Year, every))
        } else if let Some(u) = g("unit") {
            let n = g("num").map(|n| self.small(n)).transpose()?.unwrap_or(1);
            (None, step(self.unit(u)?, n * every))
        } else {
            return Err("no recurrence captured".into());
        };
        Ok(Timex::Set(TimexSet { base, period, since: None }))
    }

    // ---- combiners

    fn combine(&self, c: Combiner, ex: &RawExtraction) -> Res<Timex> {
        let [l, r] = ex.children.as_slice() else {
            return Err("composition needs two parts".into());
        };
        let (lt, rt) = (self.run(l)?, self.run(r)?);
        match c {
            Combiner::Timezone => {
                let Timex::Timezone(off) = rt else { return Err("right part is not a timezone".into()) };
                let mut p = point(lt)?;
                if p.time.is_none() {
                    return Err("timezone needs a time of day".into());
                }
                p.utc_offset_minutes = Some(off);
                Ok(Timex::Point(p))
            }
            Combiner::Datetime => {
                let (a, b) = (point(lt)?, point(rt)?);
                let (date, time) = if a.time.is_none() { (a, b) } else { (b, a) };
                merge_date_time(date, time).map(Timex::Point)
            }
            Combiner::Range => {
                let (a, b) = (point(lt)?, point(rt)?);
                if a.time.is_some() && b.time.is_some() && a.date.is_none() && b.date.is_none() {
                    return time_range(a.time.unwrap(), b.time.unwrap());
                }
                let d = span_between(&a, &b)?;
                Ok(closed_range(a, b, d))
            }
            Combiner::DateTimeRange => {
                let date = point(lt)?;
                let Timex::Range(mut range) = rt else { return Err("right part is not a time range".into()) };
                for e in [&mut range.begin, &mut range.end] {
                    match e.take() {
                        Some(RangeElement::Point(t)) => *e = Some(RangeElement::Point(merge_date_time(date.clone(), t)?)),
                        _ => return Err("time range needs both endpoints".into()),
                    }
                }
                Ok(Timex::Range(range))
            }
            Combiner::SetSince => {
                let Timex::Set(mut s) = lt else { return Err("left part is not a set".into()) };
                s.since = Some(point(rt)?);
                Ok(Timex::Set(s))
            }
            Combiner::SetTime => {
                let Timex::Set(mut s) = lt else { return Err("left part is not a set".into()) };
                let t = point(rt)?;
                if t.date.is_some() || t.time.is_none() {
                    return Err("right part is not a bare time".into());
                }
                s.base = Some(match s.base.take() {
                    Some(b) => merge_date_time(b, t)?,
                    None => t,
                });
                Ok(Timex::Set(s))
            }
            Combiner::Sum => match (lt, rt) {
                (Timex::Duration(a), Timex::Duration(b)) => {
                    Ok(Timex::Duration(b.components().iter().fold(a, |acc, (u, v)| acc.with(*u, *v))))
                }
                _ => Err("sum needs two durations".into()),
            },
        }
    }
}

fn shifted(d: TimexDuration, back: bool, zero: bool) -> Timex {
    let shift = (!zero).then(|| (if back { Direction::Back } else { Direction::Forward }, d));
    Timex::Reference(TimexReference { kind: RefKind::Present, shift })
}

fn closed_range(begin: TimexPoint, end: TimexPoint, d: TimexDuration) -> Timex {
    Timex::Range(TimexRange {
        begin: Some(RangeElement::Point(begin)),
        end: Some(RangeElement::Point(end)),
        duration: Some(d),
    })
}

/// AFTER and BEFORE turn the point into an open range; APPROX stays on it.
fn relate(mut p: TimexPoint, rel: Option<Modifier>) -> Timex {
    match rel {
        Some(Modifier::After) => {
            p.modifiers.push(Modifier::After);
            Timex::Range(TimexRange { begin: Some(RangeElement::Point(p)), ..Default::default() })
        }
        Some(Modifier::Before) => {
            p.modifiers.push(Modifier::Before);
            Timex::Range(TimexRange { end: Some(RangeElement::Point(p)), ..Default::default() })
        }
        Some(m) => {
            p.modifiers.push(m);
            Timex::Point(p)
        }
        None => Timex::Point(p),
    }
}

fn merge_date_time(date: TimexPoint, time: TimexPoint) -> Res<TimexPoint> {
    if date.date.is_none() || date.time.is_some() || !date.modifiers.is_empty() {
        return Err("left part is not a plain date".into());
    }
    if time.date.is_some() || time.time.is_none() {
        return Err("right part is not a bare time".into());
    }
    Ok(TimexPoint { date: date.date, ..time })
}

fn time_range(begin: TimeOfDay, end: TimeOfDay) -> Res<Timex> {
    let secs = end.seconds_of_day() as i64 - begin.seconds_of_day() as i64;
    if secs <= 0 {
        return Err("time range ends before it begins".into());
    }
    let mut d = TimexDuration::new();
    for (u, q) in [(DurationUnit::Hour, secs / 3600), (DurationUnit::Minute, secs % 3600 / 60), (DurationUnit::Second, secs % 60)] {
        if q > 0 {
            d = d.with(u, int(q as i128));
        }
    }
    let p = |t| TimexPoint { time: Some(t), ..Default::default() };
    Ok(closed_range(p(begin), p(end), d))
}

/// Splits a fractional amount into whole units plus the remainder in the
/// next smaller unit: 2.5 hours → 2H 30MIN.
pub fn cascade(unit: DurationUnit, amount: Rational) -> Res<TimexDuration> {
    let mut d = TimexDuration::new();
    let (mut u, mut a) = (unit, amount);
    loop {
        let whole = a.trunc();
        let rest = a - whole;
        let next = match u {
            DurationUnit::Year => Some((DurationUnit::Month, 12)),
            DurationUnit::Week => Some((DurationUnit::Day, 7)),
            DurationUnit::Day => Some((DurationUnit::Hour, 24)),
            DurationUnit::Hour => Some((DurationUnit::Minute, 60)),
            DurationUnit::Minute => Some((DurationUnit::Second, 60)),
            _ => None,
        };
        match next {
            Some((n, f)) if !rest.is_zero() => {
                if !whole.is_zero() {
                    d = d.with(u, whole);
                }
                u = n;
                a = rest * int(f);
            }
            _ => return Ok(d.with(u, a)),
        }
    }
}

/// Calendar extent of a date point in `year`, positional modifier applied.
pub(crate) fn extent(p: &TimexPoint, year: i32) -> Option<(chrono::NaiveDate, chrono::NaiveDate)> {
    let Some(DateSpec::Calendar { month, day, .. }) = p.date else { return None };
    let (b, e) = match (month, day) {
        (Some(m), Some(d)) => (ymd(year, m, d)?, ymd(year, m, d)?),
        (Some(m), None) => (ymd(year, m, 1)?, last_of_month(year, m)),
        (None, None) => (ymd(year, 1, 1)?, ymd(year, 12, 31)?),
        (None, Some(_)) => return None,
    };
    Some(match (p.positional(), month) {
        (None, _) => (b, e),
        (Some(Modifier::Eoy | Modifier::Eom), _) => (e, e),
        (Some(pos), Some(m)) => {
            let (from, to) = match pos {
                Modifier::Start => (1, 10),
                Modifier::Mid => (11, 20),
                _ => (21, days_in_month(year, m)),
            };
            (ymd(year, m, from)?, ymd(year, m, to)?)
        }
        (Some(pos), None) => {
            let (from, to) = match pos {
                Modifier::Start => (1, 4),
                Modifier::Mid => (5, 8),
                _ => (9, 12),
            };
            (ymd(year, from, 1)?, last_of_month(year, to))
        }
    })
}

/// Length of the closed range `a..b` counted in the finest unit either end
/// states: days, months or years. A missing year is taken from the other
/// end.
fn span_between(a: &TimexPoint, b: &TimexPoint) -> Res<TimexDuration> {
    let parts = |p: &TimexPoint| match p.date {
        Some(DateSpec::Calendar { year, month, day }) if p.time.is_none() => Ok((year, month, day)),
        _ => Err("range endpoints must be calendar dates".to_string()),
    };
    let (pa, pb) = (parts(a)?, parts(b)?);
    let year_a = pa.0.or(pb.0).unwrap_or(2001);
    let year_b = pb.0.or(pa.0).unwrap_or(2001);
    let (Some((begin, _)), Some((_, end))) = (extent(a, year_a), extent(b, year_b)) else {
        return Err("range endpoint has no calendar extent".into());
    };
    if end < begin {
        return Err("range ends before it begins".into());
    }
    let months = |x: chrono::NaiveDate| {
        use chrono::Datelike;
        x.year() as i64 * 12 + x.month0() as i64
    };
    let (unit, n) = if pa.2.is_some() || pb.2.is_some() {
        (DurationUnit::Day, (end - begin).num_days() + 1)
    } else if pa.1.is_some() || pb.1.is_some() {
        (DurationUnit::Month, months(end) - months(begin) + 1)
    } else {
        use chrono::Datelike;
        (DurationUnit::Year, (end.year() - begin.year() + 1) as i64)
    };
    Ok(TimexDuration::of(unit, int(n as i128)))
}
