//! Canonical temporal values and their string grammar.
//!
//! The grammar (see `docs/timex-grammar.md`) is the normalization wire
//! format: every normalized temporal mention is emitted as one of these
//! strings, and `parse_timex(format_timex(t)) == t` holds for every valid
//! value. Resolution against an anchor lives in `datetime::resolve`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use super::rational::{format_rational, is_terminating, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimexError {
    #[error("malformed timex at {position}: {reason}")]
    Malformed { position: usize, reason: String },
    #[error("timex invariant violated: {0}")]
    InvariantViolation(String),
}

fn violation(msg: impl Into<String>) -> TimexError {
    TimexError::InvariantViolation(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modifier {
    Eoy,
    Eom,
    Mid,
    Start,
    End,
    Approx,
    Before,
    After,
}

impl Modifier {
    pub const ALL: [Modifier; 8] = [
        Modifier::Eoy,
        Modifier::Eom,
        Modifier::Mid,
        Modifier::Start,
        Modifier::End,
        Modifier::Approx,
        Modifier::Before,
        Modifier::After,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Modifier::Eoy => "EOY",
            Modifier::Eom => "EOM",
            Modifier::Mid => "MID",
            Modifier::Start => "START",
            Modifier::End => "END",
            Modifier::Approx => "APPROX",
            Modifier::Before => "BEFORE",
            Modifier::After => "AFTER",
        }
    }

    pub fn from_token(s: &str) -> Option<Modifier> {
        Modifier::ALL.into_iter().find(|m| m.token() == s)
    }

    /// Positional modifiers pick a part of the element; relational ones
    /// (APPROX, BEFORE, AFTER) relate the mention to it.
    pub fn is_positional(self) -> bool {
        matches!(
            self,
            Modifier::Eoy | Modifier::Eom | Modifier::Mid | Modifier::Start | Modifier::End
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DurationUnit {
    Year,
    Month,
    Week,
    Day,
    Hour,
    Minute,
    Second,
}

impl DurationUnit {
    pub const ALL: [DurationUnit; 7] = [
        DurationUnit::Year,
        DurationUnit::Month,
        DurationUnit::Week,
        DurationUnit::Day,
        DurationUnit::Hour,
        DurationUnit::Minute,
        DurationUnit::Second,
    ];

    /// Short code used in lexicons and the component map: Y, M, W, D, H, MIN, S.
    pub fn code(self) -> &'static str {
        match self {
            DurationUnit::Year => "Y",
            DurationUnit::Month => "M",
            DurationUnit::Week => "W",
            DurationUnit::Day => "D",
            DurationUnit::Hour => "H",
            DurationUnit::Minute => "MIN",
            DurationUnit::Second => "S",
        }
    }

    pub fn from_code(s: &str) -> Option<DurationUnit> {
        DurationUnit::ALL.into_iter().find(|u| u.code() == s)
    }

    fn designator(self) -> char {
        match self {
            DurationUnit::Year => 'Y',
            DurationUnit::Month | DurationUnit::Minute => 'M',
            DurationUnit::Week => 'W',
            DurationUnit::Day => 'D',
            DurationUnit::Hour => 'H',
            DurationUnit::Second => 'S',
        }
    }

    pub fn is_time(self) -> bool {
        matches!(self, DurationUnit::Hour | DurationUnit::Minute | DurationUnit::Second)
    }

    /// Nominal length in seconds (years are 365 days, months 30).
    pub fn seconds(self) -> i64 {
        match self {
            DurationUnit::Year => 365 * 86_400,
            DurationUnit::Month => 30 * 86_400,
            DurationUnit::Week => 7 * 86_400,
            DurationUnit::Day => 86_400,
            DurationUnit::Hour => 3_600,
            DurationUnit::Minute => 60,
            DurationUnit::Second => 1,
        }
    }
}

/// A duration as a unit → amount map. Zero components are kept as parsed
/// but ignored by equality, so `P0D` equals `PT0S`.
#[derive(Debug, Clone, Default)]
pub struct TimexDuration {
    components: BTreeMap<DurationUnit, Rational>,
}

impl PartialEq for TimexDuration {
    fn eq(&self, other: &Self) -> bool {
        self.nonzero().eq(other.nonzero())
    }
}

impl Eq for TimexDuration {}

impl TimexDuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn of(unit: DurationUnit, amount: Rational) -> Self {
        Self::new().with(unit, amount)
    }

    pub fn with(mut self, unit: DurationUnit, amount: Rational) -> Self {
        *self.components.entry(unit).or_insert_with(Rational::zero) += amount;
        self
    }

    pub fn components(&self) -> &BTreeMap<DurationUnit, Rational> {
        &self.components
    }

    pub fn get(&self, unit: DurationUnit) -> Rational {
        self.components.get(&unit).copied().unwrap_or_else(Rational::zero)
    }

    fn nonzero(&self) -> impl Iterator<Item = (&DurationUnit, &Rational)> {
        self.components.iter().filter(|(_, v)| !v.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero().next().is_none()
    }

    /// True when only Y/M/W/D components are non-zero.
    pub fn is_date_only(&self) -> bool {
        self.nonzero().all(|(u, _)| !u.is_time())
    }

    /// Nominal length in whole seconds, truncating any sub-second remainder.
    pub fn total_seconds(&self) -> i64 {
        let total: Rational = self
            .components
            .iter()
            .map(|(u, v)| *v * Rational::from_integer(u.seconds() as i128))
            .sum();
        total.to_integer() as i64
    }

    fn validate(&self) -> Result<(), TimexError> {
        for (u, v) in &self.components {
            if v.is_negative() {
                return Err(violation(format!("negative {} amount", u.code())));
            }
            if !is_terminating(v) {
                return Err(violation(format!("{} amount has no finite decimal form", u.code())));
            }
        }
        Ok(())
    }
}

impl fmt::Display for TimexDuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("PT0S");
        }
        f.write_str("P")?;
        let mut in_time = false;
        for (u, v) in self.nonzero() {
            if u.is_time() && !in_time {
                f.write_str("T")?;
                in_time = true;
            }
            write!(f, "{}{}", format_rational(v), u.designator())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DateSpec {
    /// `YYYY[-MM[-DD]]`; absent components render as X digits.
    Calendar { year: Option<i32>, month: Option<u32>, day: Option<u32> },
    /// `YYYY-Www[-d]` with ISO weekday numbering (1 = Monday).
    Week { year: Option<i32>, week: Option<u32>, weekday: Option<u32> },
}

impl DateSpec {
    pub fn year(&self) -> Option<i32> {
        match *self {
            DateSpec::Calendar { year, .. } | DateSpec::Week { year, .. } => year,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeOfDay {
    pub hour: u32,
    pub minute: Option<u32>,
    pub second: Option<u32>,
}

impl TimeOfDay {
    pub fn hm(hour: u32, minute: u32) -> Self {
        TimeOfDay { hour, minute: Some(minute), second: None }
    }

    pub fn seconds_of_day(&self) -> u32 {
        self.hour * 3600 + self.minute.unwrap_or(0) * 60 + self.second.unwrap_or(0)
    }
}

/// A calendar point, possibly underspecified, with optional time of day,
/// UTC offset and modifier chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TimexPoint {
    pub date: Option<DateSpec>,
    pub time: Option<TimeOfDay>,
    pub utc_offset_minutes: Option<i32>,
    pub modifiers: Vec<Modifier>,
}

impl TimexPoint {
    pub fn ymd(year: Option<i32>, month: Option<u32>, day: Option<u32>) -> Self {
        TimexPoint {
            date: Some(DateSpec::Calendar { year, month, day }),
            ..Default::default()
        }
    }

    pub fn weekday(weekday: u32) -> Self {
        TimexPoint {
            date: Some(DateSpec::Week { year: None, week: None, weekday: Some(weekday) }),
            ..Default::default()
        }
    }

    pub fn time(hour: u32, minute: u32) -> Self {
        TimexPoint { time: Some(TimeOfDay::hm(hour, minute)), ..Default::default() }
    }

    pub fn with_modifier(mut self, m: Modifier) -> Self {
        self.modifiers.push(m);
        self
    }

    pub fn positional(&self) -> Option<Modifier> {
        self.modifiers.iter().copied().find(|m| m.is_positional())
    }

    pub fn relational(&self) -> Option<Modifier> {
        self.modifiers.iter().copied().find(|m| !m.is_positional())
    }

    fn validate(&self) -> Result<(), TimexError> {
        if self.date.is_none() && self.time.is_none() {
            return Err(violation("point has neither date nor time"));
        }
        match self.date {
            Some(DateSpec::Calendar { year, month, day }) => {
                if let Some(y) = year {
                    if !(0..=9999).contains(&y) {
                        return Err(violation("year out of range"));
                    }
                }
                if let Some(m) = month {
                    if !(1..=12).contains(&m) {
                        return Err(violation("month out of range"));
                    }
                }
                if let Some(d) = day {
                    let max = match (year, month) {
                        (Some(y), Some(m)) => days_in_month(y, m),
                        (None, Some(2)) => 29,
                        (_, Some(m)) => days_in_month(2001, m),
                        (_, None) => 31,
                    };
                    if d < 1 || d > max {
                        return Err(violation("day out of range"));
                    }
                }
            }
            Some(DateSpec::Week { year, week, weekday }) => {
                if year.is_some_and(|y| !(0..=9999).contains(&y)) {
                    return Err(violation("year out of range"));
                }
                if week.is_some_and(|w| !(1..=53).contains(&w)) {
                    return Err(violation("week out of range"));
                }
                if weekday.is_some_and(|d| !(1..=7).contains(&d)) {
                    return Err(violation("weekday out of range"));
                }
            }
            None => {}
        }
        if let Some(t) = self.time {
            if t.hour > 23 || t.minute.is_some_and(|m| m > 59) || t.second.is_some_and(|s| s > 59) {
                return Err(violation("time of day out of range"));
            }
            if t.second.is_some() && t.minute.is_none() {
                return Err(violation("seconds without minutes"));
            }
        }
        if let Some(off) = self.utc_offset_minutes {
            if self.time.is_none() {
                return Err(violation("UTC offset without time of day"));
            }
            if !(-12 * 60..=14 * 60).contains(&off) {
                return Err(violation("UTC offset out of range"));
            }
        }
        let positional: Vec<_> = self.modifiers.iter().filter(|m| m.is_positional()).collect();
        let relational: Vec<_> = self.modifiers.iter().filter(|m| !m.is_positional()).collect();
        if positional.len() > 1 || relational.len() > 1 {
            return Err(violation("at most one positional and one relational modifier"));
        }
        if self.modifiers.len() == 2 && !self.modifiers[0].is_positional() {
            return Err(violation("positional modifier must precede relational one"));
        }
        if let Some(&&m) = positional.first() {
            let cal = match self.date {
                Some(DateSpec::Calendar { year, month, day }) if self.time.is_none() => (year, month, day),
                _ => return Err(violation("positional modifier needs a calendar date")),
            };
            let ok = match m {
                Modifier::Eoy => cal.1.is_none() && cal.2.is_none(),
                Modifier::Eom => cal.1.is_some() && cal.2.is_none(),
                _ => cal.2.is_none() && (cal.0.is_some() || cal.1.is_some()),
            };
            if !ok {
                return Err(violation(format!("{} does not apply at this granularity", m.token())));
            }
        }
        Ok(())
    }
}

fn is_leap(y: i32) -> bool {
    (y % 4 == 0 && y % 100 != 0) || y % 400 == 0
}

pub(crate) fn days_in_month(y: i32, m: u32) -> u32 {
    match m {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        _ if is_leap(y) => 29,
        _ => 28,
    }
}

fn pad(v: Option<i64>, width: usize) -> String {
    match v {
        Some(v) => format!("{:0width$}", v, width = width),
        None => "X".repeat(width),
    }
}

impl fmt::Display for TimexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.date {
            Some(DateSpec::Calendar { year, month, day }) => {
                f.write_str(&pad(year.map(i64::from), 4))?;
                if month.is_some() || day.is_some() {
                    write!(f, "-{}", pad(month.map(i64::from), 2))?;
                }
                if let Some(d) = day {
                    write!(f, "-{d:02}")?;
                }
            }
            Some(DateSpec::Week { year, week, weekday }) => {
                write!(f, "{}-W{}", pad(year.map(i64::from), 4), pad(week.map(i64::from), 2))?;
                if let Some(d) = weekday {
                    write!(f, "-{d}")?;
                }
            }
            None => {}
        }
        if let Some(t) = self.time {
            write!(f, "T{:02}", t.hour)?;
            if let Some(m) = t.minute {
                write!(f, ":{m:02}")?;
            }
            if let Some(s) = t.second {
                write!(f, ":{s:02}")?;
            }
        }
        if let Some(off) = self.utc_offset_minutes {
            f.write_str(&format_offset(off))?;
        }
        for m in &self.modifiers {
            write!(f, "-{}", m.token())?;
        }
        Ok(())
    }
}

pub fn format_offset(minutes: i32) -> String {
    let sign = if minutes < 0 { '-' } else { '+' };
    let a = minutes.abs();
    format!("{sign}{:02}:{:02}", a / 60, a % 60)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RefKind {
    Present,
    Past,
    Future,
}

impl RefKind {
    pub fn token(self) -> &'static str {
        match self {
            RefKind::Present => "PRESENT_REF",
            RefKind::Past => "PAST_REF",
            RefKind::Future => "FUTURE_REF",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Earlier than the reference ("ago").
    Back,
    /// Later than the reference ("hence", "from now").
    Forward,
}

/// A deictic reference, optionally shifted by a duration:
/// `PRESENT_REF`, `PRESENT_REF-P1M`, `PRESENT_REF+PT3H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimexReference {
    pub kind: RefKind,
    pub shift: Option<(Direction, TimexDuration)>,
}

impl fmt::Display for TimexReference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.token())?;
        if let Some((dir, d)) = &self.shift {
            let sign = if *dir == Direction::Back { '-' } else { '+' };
            write!(f, "{sign}{d}")?;
        }
        Ok(())
    }
}

/// One endpoint of a range triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeElement {
    Point(TimexPoint),
    Reference(TimexReference),
}

impl fmt::Display for RangeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RangeElement::Point(p) => p.fmt(f),
            RangeElement::Reference(r) => r.fmt(f),
        }
    }
}

/// The start/end/length triple, rendered `(begin,end,duration)` with any
/// omitted element left empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TimexRange {
    pub begin: Option<RangeElement>,
    pub end: Option<RangeElement>,
    pub duration: Option<TimexDuration>,
}

/// A recurrence: `SET(base,period)` or `SET(base,period,since)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimexSet {
    pub base: Option<TimexPoint>,
    pub period: TimexDuration,
    pub since: Option<TimexPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolidayRef {
    pub name: String,
    pub year: Option<i32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimexKind {
    Point,
    Duration,
    Range,
    Set,
    Reference,
    Timezone,
    Holiday,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Timex {
    Point(TimexPoint),
    Duration(TimexDuration),
    Range(TimexRange),
    Set(TimexSet),
    Reference(TimexReference),
    /// A bare timezone, rendered `UTC±hh:mm`.
    Timezone(i32),
    Holiday(HolidayRef),
}

impl Timex {
    pub fn kind(&self) -> TimexKind {
        match self {
            Timex::Point(_) => TimexKind::Point,
            Timex::Duration(_) => TimexKind::Duration,
            Timex::Range(_) => TimexKind::Range,
            Timex::Set(_) => TimexKind::Set,
            Timex::Reference(_) => TimexKind::Reference,
            Timex::Timezone(_) => TimexKind::Timezone,
            Timex::Holiday(_) => TimexKind::Holiday,
        }
    }

    pub fn present() -> Timex {
        Timex::Reference(TimexReference { kind: RefKind::Present, shift: None })
    }

    pub fn validate(&self) -> Result<(), TimexError> {
        match self {
            Timex::Point(p) => p.validate(),
            Timex::Duration(d) => {
                if d.components.is_empty() {
                    return Err(violation("duration has no components"));
                }
                d.validate()
            }
            Timex::Reference(r) => match &r.shift {
                Some((_, d)) => d.validate(),
                None => Ok(()),
            },
            Timex::Range(r) => {
                for e in [&r.begin, &r.end].into_iter().flatten() {
                    match e {
                        RangeElement::Point(p) => p.validate()?,
                        RangeElement::Reference(x) => Timex::Reference(x.clone()).validate()?,
                    }
                }
                if let Some(d) = &r.duration {
                    d.validate()?;
                }
                let present =
                    r.begin.is_some() as u8 + r.end.is_some() as u8 + r.duration.is_some() as u8;
                if present >= 2 {
                    return Ok(());
                }
                let open_ok = match (&r.begin, &r.end) {
                    (Some(RangeElement::Point(p)), None) => p.relational() == Some(Modifier::After),
                    (None, Some(RangeElement::Point(p))) => p.relational() == Some(Modifier::Before),
                    _ => false,
                };
                if open_ok && r.duration.is_none() {
                    Ok(())
                } else {
                    Err(violation("range needs two of begin/end/duration"))
                }
            }
            Timex::Set(s) => {
                if s.period.is_zero() {
                    return Err(violation("set period must be non-zero"));
                }
                s.period.validate()?;
                if let Some(b) = &s.base {
                    b.validate()?;
                }
                if let Some(b) = &s.since {
                    b.validate()?;
                }
                Ok(())
            }
            Timex::Timezone(off) => {
                if (-12 * 60..=14 * 60).contains(off) {
                    Ok(())
                } else {
                    Err(violation("UTC offset out of range"))
                }
            }
            Timex::Holiday(h) => {
                if h.name.is_empty()
                    || !h.name.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '_')
                {
                    return Err(violation("holiday name must be [A-Z0-9_]+"));
                }
                if h.year.is_some_and(|y| !(0..=9999).contains(&y)) {
                    return Err(violation("year out of range"));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Timex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Timex::Point(p) => p.fmt(f),
            Timex::Duration(d) => d.fmt(f),
            Timex::Reference(r) => r.fmt(f),
            Timex::Range(r) => {
                f.write_str("(")?;
                if let Some(b) = &r.begin {
                    b.fmt(f)?;
                }
                f.write_str(",")?;
                if let Some(e) = &r.end {
                    e.fmt(f)?;
                }
                f.write_str(",")?;
                if let Some(d) = &r.duration {
                    d.fmt(f)?;
                }
                f.write_str(")")
            }
            Timex::Set(s) => {
                f.write_str("SET(")?;
                if let Some(b) = &s.base {
                    b.fmt(f)?;
                }
                write!(f, ",{}", s.period)?;
                if let Some(since) = &s.since {
                    write!(f, ",{since}")?;
                }
                f.write_str(")")
            }
            Timex::Timezone(off) => write!(f, "UTC{}", format_offset(*off)),
            Timex::Holiday(h) => match h.year {
                Some(y) => write!(f, "HOL({},{y:04})", h.name),
                None => write!(f, "HOL({})", h.name),
            },
        }
    }
}

/// Renders a validated value in canonical form.
pub fn format_timex(t: &Timex) -> Result<String, TimexError> {
    t.validate()?;
    Ok(t.to_string())
}

/// Parses a canonical timex string.
pub fn parse_timex(s: &str) -> Result<Timex, TimexError> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    let t = p.timex()?;
    if p.pos != s.len() {
        return Err(p.err("trailing input"));
    }
    t.validate().map_err(|e| match e {
        TimexError::InvariantViolation(reason) => TimexError::Malformed { position: 0, reason },
        other => other,
    })?;
    Ok(t)
}

impl FromStr for Timex {
    type Err = TimexError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_timex(s)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: &str) -> TimexError {
        TimexError::Malformed { position: self.pos, reason: reason.to_string() }
    }

    fn rest(&self) -> &'a [u8] {
        &self.s[self.pos..]
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<u8> {
        self.s.get(self.pos + k).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.rest().starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), TimexError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{lit}`")))
        }
    }

    fn timex(&mut self) -> Result<Timex, TimexError> {
        if self.peek() == Some(b'(') {
            return self.range().map(Timex::Range);
        }
        if self.eat("SET(") {
            return self.set().map(Timex::Set);
        }
        if self.eat("HOL(") {
            return self.holiday().map(Timex::Holiday);
        }
        if self.eat("UTC") {
            return self.offset().map(Timex::Timezone);
        }
        if let Some(r) = self.reference()? {
            return Ok(Timex::Reference(r));
        }
        if self.peek() == Some(b'P') {
            return self.duration().map(Timex::Duration);
        }
        self.point().map(Timex::Point)
    }

    fn reference(&mut self) -> Result<Option<TimexReference>, TimexError> {
        let kind = if self.eat("PRESENT_REF") {
            RefKind::Present
        } else if self.eat("PAST_REF") {
            RefKind::Past
        } else if self.eat("FUTURE_REF") {
            RefKind::Future
        } else {
            return Ok(None);
        };
        let shift = match self.peek() {
            Some(b'-') if self.peek_at(1) == Some(b'P') => {
                self.pos += 1;
                Some((Direction::Back, self.duration()?))
            }
            Some(b'+') => {
                self.pos += 1;
                Some((Direction::Forward, self.duration()?))
            }
            _ => None,
        };
        Ok(Some(TimexReference { kind, shift }))
    }

    fn range(&mut self) -> Result<TimexRange, TimexError> {
        self.expect("(")?;
        let begin = self.element()?;
        self.expect(",")?;
        let end = self.element()?;
        self.expect(",")?;
        let duration = if self.peek() == Some(b')') { None } else { Some(self.duration()?) };
        self.expect(")")?;
        Ok(TimexRange { begin, end, duration })
    }

    fn element(&mut self) -> Result<Option<RangeElement>, TimexError> {
        if matches!(self.peek(), Some(b',') | Some(b')')) {
            return Ok(None);
        }
        if let Some(r) = self.reference()? {
            return Ok(Some(RangeElement::Reference(r)));
        }
        Ok(Some(RangeElement::Point(self.point()?)))
    }

    fn set(&mut self) -> Result<TimexSet, TimexError> {
        let base = if self.peek() == Some(b',') { None } else { Some(self.point()?) };
        self.expect(",")?;
        let period = self.duration()?;
        let since = if self.eat(",") { Some(self.point()?) } else { None };
        self.expect(")")?;
        Ok(TimexSet { base, period, since })
    }

    fn holiday(&mut self) -> Result<HolidayRef, TimexError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_uppercase() || c.is_ascii_digit() || c == b'_') {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected holiday name"));
        }
        let name = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
        let year = if self.eat(",") { Some(self.digits(4)? as i32) } else { None };
        self.expect(")")?;
        Ok(HolidayRef { name, year })
    }

    fn digits(&mut self, n: usize) -> Result<u32, TimexError> {
        let chunk = self.rest().get(..n).ok_or_else(|| self.err("unexpected end"))?;
        if !chunk.iter().all(u8::is_ascii_digit) {
            return Err(self.err(&format!("expected {n} digits")));
        }
        self.pos += n;
        Ok(chunk.iter().fold(0, |acc, d| acc * 10 + (d - b'0') as u32))
    }

    /// `n` digits or `n` X's.
    fn component(&mut self, n: usize) -> Result<Option<u32>, TimexError> {
        if self.rest().len() >= n && self.rest()[..n].iter().all(|&c| c == b'X') {
            self.pos += n;
            return Ok(None);
        }
        self.digits(n).map(Some)
    }

    fn is_component_start(&self, n: usize) -> bool {
        let r = self.rest();
        r.len() >= n
            && (r[..n].iter().all(u8::is_ascii_digit) || r[..n].iter().all(|&c| c == b'X'))
            && !r.get(n).is_some_and(|&c| c != b'T' && c.is_ascii_alphanumeric())
    }

    fn offset(&mut self) -> Result<i32, TimexError> {
        let sign = match self.peek() {
            Some(b'+') => 1,
            Some(b'-') => -1,
            _ => return Err(self.err("expected offset sign")),
        };
        self.pos += 1;
        let h = self.digits(2)? as i32;
        self.expect(":")?;
        let m = self.digits(2)? as i32;
        if m > 59 {
            return Err(self.err("offset minutes out of range"));
        }
        Ok(sign * (h * 60 + m))
    }

    fn point(&mut self) -> Result<TimexPoint, TimexError> {
        let mut p = TimexPoint::default();
        if self.peek() != Some(b'T') {
            let year = self.component(4)?.map(|y| y as i32);
            if self.rest().starts_with(b"-W") {
                self.pos += 2;
                let week = self.component(2)?;
                let mut weekday = None;
                if self.peek() == Some(b'-') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                    weekday = Some(self.digits(1)?);
                }
                p.date = Some(DateSpec::Week { year, week, weekday });
            } else {
                let (mut month, mut day, mut has_month) = (None, None, false);
                if self.peek() == Some(b'-') {
                    self.pos += 1;
                    if self.is_component_start(2) {
                        month = self.component(2)?;
                        has_month = true;
                    } else {
                        self.pos -= 1;
                    }
                }
                if has_month && self.peek() == Some(b'-') {
                    self.pos += 1;
                    if self.is_component_start(2) {
                        day = self.component(2)?;
                        if day.is_none() {
                            return Err(self.err("unspecified day is never rendered"));
                        }
                    } else {
                        self.pos -= 1;
                    }
                }
                if has_month && month.is_none() && day.is_none() {
                    return Err(self.err("unspecified month without day is never rendered"));
                }
                p.date = Some(DateSpec::Calendar { year, month, day });
            }
        }
        if self.eat("T") {
            let hour = self.digits(2)?;
            let mut t = TimeOfDay { hour, minute: None, second: None };
            if self.eat(":") {
                t.minute = Some(self.digits(2)?);
                if self.eat(":") {
                    t.second = Some(self.digits(2)?);
                }
            }
            p.time = Some(t);
            if matches!(self.peek(), Some(b'+') | Some(b'-'))
                && self.peek_at(1).is_some_and(|c| c.is_ascii_digit())
            {
                p.utc_offset_minutes = Some(self.offset()?);
            }
        }
        while self.peek() == Some(b'-') && self.peek_at(1).is_some_and(|c| c.is_ascii_uppercase()) {
            self.pos += 1;
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_uppercase()) {
                self.pos += 1;
            }
            let tok = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
            let m = Modifier::from_token(tok).ok_or_else(|| {
                TimexError::Malformed { position: start, reason: format!("unknown modifier `{tok}`") }
            })?;
            p.modifiers.push(m);
        }
        Ok(p)
    }

    fn duration(&mut self) -> Result<TimexDuration, TimexError> {
        self.expect("P")?;
        let mut d = TimexDuration::new();
        let mut in_time = false;
        let mut last: Option<DurationUnit> = None;
        loop {
            if !in_time && self.eat("T") {
                in_time = true;
                continue;
            }
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit() || c == b'.') {
                self.pos += 1;
            }
            if self.pos == start {
                break;
            }
            let num = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
            let amount = parse_rational(num).ok_or_else(|| self.err("bad duration amount"))?;
            let unit = match (self.peek(), in_time) {
                (Some(b'Y'), false) => DurationUnit::Year,
                (Some(b'M'), false) => DurationUnit::Month,
                (Some(b'W'), false) => DurationUnit::Week,
                (Some(b'D'), false) => DurationUnit::Day,
                (Some(b'H'), true) => DurationUnit::Hour,
                (Some(b'M'), true) => DurationUnit::Minute,
                (Some(b'S'), true) => DurationUnit::Second,
                _ => return Err(self.err("expected duration unit designator")),
            };
            if last.is_some_and(|l| l >= unit) {
                return Err(self.err("duration units out of order"));
            }
            self.pos += 1;
            last = Some(unit);
            d.components.insert(unit, amount);
        }
        if d.components.is_empty() {
            return Err(self.err("duration has no components"));
        }
        if in_time && !d.components.keys().any(|u| u.is_time()) {
            return Err(self.err("`T` without time components"));
        }
        Ok(d)
    }
}
