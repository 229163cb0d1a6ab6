//! Timex value + anchor → concrete calendar values.

use chrono::{Datelike, NaiveDate, NaiveDateTime, NaiveTime, TimeDelta};
use thiserror::Error;

use crate::model::rational::int;
use crate::model::timex::{
    DateSpec, Direction, DurationUnit, HolidayRef, Modifier, RangeElement, RefKind, TimeOfDay, TimexDuration,
    TimexPoint, TimexRange, TimexReference, TimexSet,
};
use crate::model::{AnchorContext, CalendarValue, Modality, Resolution, Timex};

use super::calendar::{add_days, add_months, iso_week_start, iso_weekday};
use super::holiday::{HolidayRegistry, HolidayRule};
use super::normalize::extent;

/// Exemplars listed for a recurring set.
pub const SET_EXEMPLARS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("cannot resolve `{timex}`: {reason}")]
    Unresolvable { timex: String, reason: String },
    #[error("unknown holiday `{0}`")]
    UnknownHoliday(String),
}

/// Resolves against the built-in holiday rules.
pub fn resolve(t: &Timex, anchor: &AnchorContext) -> Result<Vec<Resolution>, ResolveError> {
    resolve_with(t, anchor, &HolidayRegistry::builtin())
}

pub fn resolve_with(t: &Timex, anchor: &AnchorContext, holidays: &HolidayRegistry) -> Result<Vec<Resolution>, ResolveError> {
    let fail = |reason: &str| ResolveError::Unresolvable { timex: t.to_string(), reason: reason.to_string() };
    match t {
        Timex::Point(p) => resolve_point(p, anchor).ok_or_else(|| fail("point has no concrete reading")),
        Timex::Reference(r) => resolve_reference(r, anchor).map(|v| vec![v]).ok_or_else(|| fail("out of calendar range")),
        Timex::Duration(d) => Ok(vec![Resolution::duration(d.total_seconds())]),
        Timex::Timezone(off) => Ok(vec![Resolution::offset(*off)]),
        Timex::Holiday(h) => {
            let rule = holidays.get(&h.name).ok_or_else(|| ResolveError::UnknownHoliday(h.name.clone()))?;
            let out = resolve_holiday(h, rule, anchor);
            if out.is_empty() { Err(fail("holiday has no date near the anchor")) } else { Ok(out) }
        }
        Timex::Range(r) => resolve_range(r, anchor).ok_or_else(|| fail("range endpoints have no concrete reading")),
        Timex::Set(s) => Ok(vec![resolve_set(s, anchor, SET_EXEMPLARS)]),
    }
}

/// A duration counted from the anchor: calendar months and years clamp to
/// the month end, weeks, days and clock units are exact. Date-only
/// durations give a date, anything else a datetime.
pub fn resolve_duration_anchor(d: &TimexDuration, dir: Direction, anchor: &AnchorContext) -> Resolution {
    match shift_datetime(anchor.datetime(), d, dir) {
        Some(dt) if d.is_date_only() => Resolution::value(CalendarValue::Date(dt.date())),
        Some(dt) => Resolution::value(CalendarValue::DateTime(dt, anchor.utc_offset_minutes)),
        None => Resolution::value(CalendarValue::Date(anchor.date)),
    }
}

/// Nearest occurrence on or before the anchor and the first one after it;
/// a year-qualified mention has exactly one reading.
pub fn resolve_holiday(h: &HolidayRef, rule: &HolidayRule, anchor: &AnchorContext) -> Vec<Resolution> {
    if let Some(y) = h.year {
        return rule.date_in(y).map(|d| vec![Resolution::value(CalendarValue::Date(d))]).unwrap_or_default();
    }
    let a = anchor.date;
    let past = (a.year() - 1..=a.year()).rev().filter_map(|y| rule.date_in(y)).find(|d| *d <= a);
    let future = (a.year()..=a.year() + 1).filter_map(|y| rule.date_in(y)).find(|d| *d > a);
    dual(past.map(|d| Resolution::value(CalendarValue::Date(d))), future.map(|d| Resolution::value(CalendarValue::Date(d))))
}

/// The first `k` occurrences on or after the anchor day, and on or after
/// the nearest reading of the since-constraint when the set has one.
pub fn resolve_set(s: &TimexSet, anchor: &AnchorContext, k: usize) -> Resolution {
    let mut start = anchor.datetime();
    let day_start = |d: NaiveDate| d.and_time(NaiveTime::MIN);
    if let Some(since) = &s.since {
        if let Some((b, _)) = nearest_extent(since, anchor.date) {
            start = start.max(day_start(b));
        }
    }
    let base = s.base.as_ref();
    let with_time = base.and_then(|b| b.time);
    let offset = base.and_then(|b| b.utc_offset_minutes);
    let timed = |d: NaiveDate| match with_time {
        Some(t) => CalendarValue::DateTime(d.and_time(clock(t)), offset),
        None => CalendarValue::Date(d),
    };
    let first = match base.and_then(|b| b.date) {
        Some(DateSpec::Week { weekday: Some(w), .. }) => {
            let back = (iso_weekday(start.date()) + 7 - w) % 7;
            let d = add_days(start.date(), -(back as i64));
            d.and_then(|d| if d < start.date() { add_days(d, 7) } else { Some(d) })
        }
        Some(DateSpec::Calendar { month: Some(m), day, .. }) => {
            let y = start.date().year();
            [y, y + 1].iter().filter_map(|&y| NaiveDate::from_ymd_opt(y, m, day.unwrap_or(1))).find(|d| *d >= start.date())
        }
        _ => None,
    };
    let mut out = Vec::with_capacity(k);
    match first {
        Some(first) => {
            for i in 0..k {
                let step = scale(&s.period, i as i128);
                if let Some(dt) = shift_datetime(day_start(first), &step, Direction::Forward) {
                    out.push(timed(dt.date()));
                }
            }
        }
        None if with_time.is_some() || !s.period.is_date_only() => {
            // clock-based recurrences start at the first instant not before the start
            let t = match with_time {
                Some(tod) => {
                    let at = start.date().and_time(clock(tod));
                    if anchor.time.is_some() && at < start { at + TimeDelta::days(1) } else { at }
                }
                None => start,
            };
            for i in 0..k {
                if let Some(dt) = shift_datetime(t, &scale(&s.period, i as i128), Direction::Forward) {
                    out.push(CalendarValue::DateTime(dt, offset));
                }
            }
        }
        None => {
            for i in 0..k {
                if let Some(dt) = shift_datetime(day_start(start.date()), &scale(&s.period, i as i128), Direction::Forward) {
                    out.push(CalendarValue::Date(dt.date()));
                }
            }
        }
    }
    Resolution::set(out)
}

fn scale(d: &TimexDuration, n: i128) -> TimexDuration {
    d.components().iter().fold(TimexDuration::new(), |acc, (u, v)| acc.with(*u, *v * int(n)))
}

fn clock(t: TimeOfDay) -> NaiveTime {
    NaiveTime::from_hms_opt(t.hour, t.minute.unwrap_or(0), t.second.unwrap_or(0)).unwrap_or(NaiveTime::MIN)
}

fn dual(past: Option<Resolution>, future: Option<Resolution>) -> Vec<Resolution> {
    match (past, future) {
        (Some(p), Some(f)) => vec![p.with_modality(Modality::Past), f.with_modality(Modality::Future)],
        (p, f) => p.into_iter().chain(f).collect(),
    }
}

/// `d` forward or back from `from`, month and year parts clamped to month
/// ends, the rest exact. Fractional months fall back to 30-day months.
pub(crate) fn shift_datetime(from: NaiveDateTime, d: &TimexDuration, dir: Direction) -> Option<NaiveDateTime> {
    let sign: i64 = if dir == Direction::Back { -1 } else { 1 };
    let months = d.get(DurationUnit::Year) * int(12) + d.get(DurationUnit::Month);
    let whole_months = months.trunc();
    let mut secs = (months - whole_months) * int(30 * 86_400);
    for u in [DurationUnit::Week, DurationUnit::Day, DurationUnit::Hour, DurationUnit::Minute, DurationUnit::Second] {
        secs += d.get(u) * int(u.seconds() as i128);
    }
    let date = add_months(from.date(), sign * i64::try_from(whole_months.to_integer()).ok()?)?;
    let secs = i64::try_from(secs.trunc().to_integer()).ok()?;
    let shifted = add_days(date, sign * secs.div_euclid(86_400))?.and_time(from.time());
    shifted.checked_add_signed(TimeDelta::seconds(sign * secs.rem_euclid(86_400)))
}

/// Concrete extent of a date point: its days, plus a time of day when the
/// point has one.
#[derive(Debug, Clone, Copy)]
struct Extent {
    begin: CalendarValue,
    end: CalendarValue,
}

fn point_extent(p: &TimexPoint, date: Option<(NaiveDate, NaiveDate)>) -> Option<Extent> {
    let time = p.time.map(clock);
    let off = p.utc_offset_minutes;
    Some(match (date, time) {
        (Some((b, e)), Some(t)) => {
            Extent { begin: CalendarValue::DateTime(b.and_time(t), off), end: CalendarValue::DateTime(e.and_time(t), off) }
        }
        (Some((b, e)), None) => Extent { begin: CalendarValue::Date(b), end: CalendarValue::Date(e) },
        (None, Some(t)) => Extent { begin: CalendarValue::Time(t, off), end: CalendarValue::Time(t, off) },
        (None, None) => return None,
    })
}

/// Date extent of a point in a given year; week dates carry their own year.
fn dated(p: &TimexPoint, year: i32) -> Option<(NaiveDate, NaiveDate)> {
    match p.date? {
        DateSpec::Calendar { .. } => extent(p, year),
        DateSpec::Week { year: y, week, weekday } => {
            let monday = iso_week_start(y.unwrap_or(year), week?)?;
            match weekday {
                Some(w) => {
                    let d = add_days(monday, w as i64 - 1)?;
                    Some((d, d))
                }
                None => Some((monday, add_days(monday, 6)?)),
            }
        }
    }
}

/// Occurrences of an underspecified point around `a`: the latest whose
/// start is on or before `a` and the earliest starting after it.
fn occurrences(p: &TimexPoint, a: NaiveDate) -> (Option<(NaiveDate, NaiveDate)>, Option<(NaiveDate, NaiveDate)>) {
    if let Some(DateSpec::Week { year: None, week: None, weekday: Some(w) }) = p.date {
        let back = (iso_weekday(a) + 7 - w) % 7;
        let past = add_days(a, -(back as i64));
        let future = past.and_then(|d| add_days(d, 7));
        return (past.map(|d| (d, d)), future.map(|d| (d, d)));
    }
    // Feb 29 may skip up to seven years
    let years: Vec<i32> = (a.year() - 8..=a.year() + 8).collect();
    let past = years.iter().rev().filter_map(|&y| dated(p, y)).find(|(b, _)| *b <= a);
    let future = years.iter().filter_map(|&y| dated(p, y)).find(|(b, _)| *b > a);
    (past, future)
}

fn nearest_extent(p: &TimexPoint, a: NaiveDate) -> Option<(NaiveDate, NaiveDate)> {
    if !is_underspecified(p) {
        return dated(p, a.year());
    }
    match occurrences(p, a) {
        (Some(x), Some(y)) => Some(if (a - x.0) <= (y.0 - a) { x } else { y }),
        (x, y) => x.or(y),
    }
}

fn is_underspecified(p: &TimexPoint) -> bool {
    match p.date {
        Some(DateSpec::Calendar { year, .. }) => year.is_none(),
        Some(DateSpec::Week { year, week, .. }) => year.is_none() || week.is_none(),
        None => false,
    }
}

fn extent_resolution(p: &TimexPoint, x: Extent) -> Resolution {
    let single = matches!(p.date, Some(DateSpec::Calendar { day: Some(_), .. }) | Some(DateSpec::Week { weekday: Some(_), .. }))
        || (p.date.is_none() && p.time.is_some());
    match p.relational() {
        Some(Modifier::After) => Resolution::range(after(x.end), None),
        Some(Modifier::Before) => Resolution::range(None, before(x.begin)),
        _ if single => Resolution::value(x.begin),
        _ => Resolution::range(Some(x.begin), Some(x.end)),
    }
}

fn after(v: CalendarValue) -> Option<CalendarValue> {
    match v {
        CalendarValue::Date(d) => add_days(d, 1).map(CalendarValue::Date),
        other => Some(other),
    }
}

fn before(v: CalendarValue) -> Option<CalendarValue> {
    match v {
        CalendarValue::Date(d) => add_days(d, -1).map(CalendarValue::Date),
        other => Some(other),
    }
}

fn resolve_point(p: &TimexPoint, anchor: &AnchorContext) -> Option<Vec<Resolution>> {
    if p.date.is_none() || !is_underspecified(p) {
        let year = p.date.and_then(|d| d.year()).unwrap_or(anchor.date.year());
        let x = point_extent(p, if p.date.is_some() { Some(dated(p, year)?) } else { None })?;
        return Some(vec![extent_resolution(p, x)]);
    }
    let (past, future) = occurrences(p, anchor.date);
    let res = |d: Option<(NaiveDate, NaiveDate)>| d.and_then(|d| point_extent(p, Some(d))).map(|x| extent_resolution(p, x));
    let out = dual(res(past), res(future));
    (!out.is_empty()).then_some(out)
}

/// The anchor at its own granularity, shifted when the reference says so.
fn resolve_reference(r: &TimexReference, anchor: &AnchorContext) -> Option<Resolution> {
    let here = match anchor.time {
        Some(t) => CalendarValue::DateTime(anchor.date.and_time(t), anchor.utc_offset_minutes),
        None => CalendarValue::Date(anchor.date),
    };
    match (r.kind, &r.shift) {
        (RefKind::Present, None) => Some(Resolution::value(here)),
        (RefKind::Present, Some((dir, d))) => {
            let v = resolve_duration_anchor(d, *dir, anchor);
            v.value?;
            Some(v)
        }
        (RefKind::Past, _) => Some(Resolution::range(None, Some(here))),
        (RefKind::Future, _) => Some(Resolution::range(Some(here), None)),
    }
}

/// `base` places a bare weekday: the first such day on or after it.
fn element_extent(e: &RangeElement, year: Option<i32>, base: Option<NaiveDate>, anchor: &AnchorContext) -> Option<Extent> {
    match e {
        RangeElement::Point(p) => {
            let date = match (p.date, base) {
                (Some(DateSpec::Week { year: None, week: None, weekday: Some(w) }), Some(b)) => {
                    let d = add_days(b, ((w + 7 - iso_weekday(b)) % 7) as i64)?;
                    Some((d, d))
                }
                (Some(_), _) => Some(dated(p, p.date.and_then(|d| d.year()).or(year)?)?),
                (None, _) => None,
            };
            point_extent(p, date)
        }
        RangeElement::Reference(r) => {
            let v = resolve_reference(r, anchor)?;
            let at = v.value.or(v.begin).or(v.end)?;
            Some(Extent { begin: at, end: at })
        }
    }
}

fn shift_value(v: CalendarValue, d: &TimexDuration, dir: Direction) -> Option<CalendarValue> {
    match v {
        CalendarValue::Date(x) if d.is_date_only() => {
            shift_datetime(x.and_time(NaiveTime::MIN), d, dir).map(|t| CalendarValue::Date(t.date()))
        }
        CalendarValue::Date(x) => shift_datetime(x.and_time(NaiveTime::MIN), d, dir).map(|t| CalendarValue::DateTime(t, None)),
        CalendarValue::DateTime(x, off) => shift_datetime(x, d, dir).map(|t| CalendarValue::DateTime(t, off)),
        CalendarValue::Time(t, off) => {
            let secs = d.total_seconds() * if dir == Direction::Back { -1 } else { 1 };
            Some(CalendarValue::Time(t.overflowing_add_signed(TimeDelta::seconds(secs)).0, off))
        }
    }
}

fn open_relation(e: &RangeElement) -> Option<Modifier> {
    match e {
        RangeElement::Point(p) => p.relational().filter(|m| matches!(m, Modifier::After | Modifier::Before)),
        RangeElement::Reference(_) => None,
    }
}

fn range_in(r: &TimexRange, year: Option<i32>, base: Option<NaiveDate>, anchor: &AnchorContext) -> Option<Resolution> {
    let b = match &r.begin {
        Some(e) => Some(element_extent(e, year, base, anchor)?),
        None => None,
    };
    let end_base = b.and_then(|x| x.begin.date()).or(base);
    let e = match &r.end {
        Some(e) => Some(element_extent(e, year, end_base, anchor)?),
        None => None,
    };
    let mut begin = b.map(|x| x.begin);
    let mut end = e.map(|x| x.end);
    if let (Some(x), Some(Modifier::After)) = (b, r.begin.as_ref().and_then(open_relation)) {
        begin = after(x.end);
    }
    if let (Some(x), Some(Modifier::Before)) = (e, r.end.as_ref().and_then(open_relation)) {
        end = before(x.begin);
    }
    if let Some(d) = &r.duration {
        match (begin, end) {
            (Some(b), None) => end = shift_value(b, d, Direction::Forward),
            (None, Some(e)) => begin = shift_value(e, d, Direction::Back),
            _ => {}
        }
    }
    let res = Resolution::range(begin.map(|b| align(b, end)), end.map(|e| align(e, begin)));
    res.is_ordered().then_some(res)
}

/// A date paired with a datetime becomes midnight of that date, so both
/// ends of a range share one granularity.
fn align(v: CalendarValue, other: Option<CalendarValue>) -> CalendarValue {
    match (v, other) {
        (CalendarValue::Date(d), Some(CalendarValue::DateTime(..))) => CalendarValue::DateTime(d.and_time(NaiveTime::MIN), None),
        _ => v,
    }
}

fn year_of_element(e: &Option<RangeElement>) -> Option<i32> {
    match e {
        Some(RangeElement::Point(p)) => p.date.and_then(|d| d.year()),
        _ => None,
    }
}

fn needs_year(e: &Option<RangeElement>) -> bool {
    matches!(e, Some(RangeElement::Point(p)) if p.date.is_some_and(|d| d.year().is_none()))
}

/// Ranges take a missing year from the other end; when neither end has
/// one, the begin point's past and future occurrences give two readings.
fn resolve_range(r: &TimexRange, anchor: &AnchorContext) -> Option<Vec<Resolution>> {
    let known = year_of_element(&r.begin).or(year_of_element(&r.end));
    if known.is_some() || !(needs_year(&r.begin) || needs_year(&r.end)) {
        return range_in(r, known, None, anchor).map(|x| vec![x]);
    }
    let pivot = match (&r.begin, &r.end) {
        (Some(RangeElement::Point(p)), _) | (None, Some(RangeElement::Point(p))) => p,
        _ => return None,
    };
    let (past, future) = occurrences(pivot, anchor.date);
    let reading = |d: Option<(NaiveDate, NaiveDate)>| {
        let (base, _) = d?;
        let y = base.year();
        range_in(r, Some(y), Some(base), anchor).or_else(|| {
            // an end month before the begin month falls in the next year
            let mut r2 = r.clone();
            if let Some(RangeElement::Point(p)) = &mut r2.end {
                if let Some(DateSpec::Calendar { year, .. }) = &mut p.date {
                    *year = Some(y + 1);
                }
            }
            range_in(&r2, Some(y), Some(base), anchor)
        })
    };
    let out = dual(reading(past), reading(future));
    (!out.is_empty()).then_some(out)
}
