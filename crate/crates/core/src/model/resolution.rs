use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use chrono::{NaiveDate, NaiveDateTime, NaiveTime, Timelike};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::timex::format_offset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Timeline {
    Value,
    Range,
    Duration,
    Set,
    Offset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    Past,
    Future,
    #[default]
    Unspecified,
}

/// A concrete calendar value at the granularity the mention specifies.
/// Renders as `2022-07-01`, `2022-07-01T15:00:00`, or `15:00:00`, with an
/// optional `±hh:mm` suffix on time-bearing values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CalendarValue {
    Date(NaiveDate),
    DateTime(NaiveDateTime, Option<i32>),
    Time(NaiveTime, Option<i32>),
}

impl CalendarValue {
    pub fn date(&self) -> Option<NaiveDate> {
        match self {
            CalendarValue::Date(d) => Some(*d),
            CalendarValue::DateTime(dt, _) => Some(dt.date()),
            CalendarValue::Time(..) => None,
        }
    }

    /// Compares `self` (a prediction) with `gold` at gold's granularity:
    /// a gold date accepts any time on that day.
    pub fn matches_at(&self, gold: &CalendarValue) -> bool {
        match (gold, self) {
            (CalendarValue::Date(g), p) => p.date() == Some(*g),
            _ => self == gold,
        }
    }

    /// Key for ordering values of the same kind.
    fn key(&self) -> (u8, i64) {
        match self {
            CalendarValue::Date(d) => (0, d.and_time(NaiveTime::MIN).and_utc().timestamp()),
            CalendarValue::DateTime(dt, off) => {
                (0, dt.and_utc().timestamp() - off.unwrap_or(0) as i64 * 60)
            }
            CalendarValue::Time(t, off) => {
                (1, t.num_seconds_from_midnight() as i64 - off.unwrap_or(0) as i64 * 60)
            }
        }
    }
}

impl PartialOrd for CalendarValue {
    /// Dates and datetimes share a timeline; bare times only order among
    /// themselves.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (a, b) = (self.key(), other.key());
        (a.0 == b.0).then(|| a.1.cmp(&b.1))
    }
}

impl fmt::Display for CalendarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (body, off) = match self {
            CalendarValue::Date(d) => (d.format("%Y-%m-%d").to_string(), None),
            CalendarValue::DateTime(dt, off) => (dt.format("%Y-%m-%dT%H:%M:%S").to_string(), *off),
            CalendarValue::Time(t, off) => (t.format("%H:%M:%S").to_string(), *off),
        };
        f.write_str(&body)?;
        if let Some(o) = off {
            f.write_str(&format_offset(o))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed calendar value `{0}`")]
pub struct BadCalendarValue(pub String);

/// Splits a trailing `±hh:mm` or `Z` offset off a time-bearing string.
pub(crate) fn split_offset(s: &str) -> Result<(&str, Option<i32>), BadCalendarValue> {
    let bad = || BadCalendarValue(s.to_string());
    if let Some(body) = s.strip_suffix('Z') {
        return Ok((body, Some(0)));
    }
    let t_pos = s.find('T').map(|p| p + 1).unwrap_or(0);
    let tail = &s[t_pos..];
    match tail.rfind(['+', '-']) {
        Some(i) if i > 0 || t_pos > 0 => {
            let (body, off) = s.split_at(t_pos + i);
            let sign = if off.starts_with('-') { -1 } else { 1 };
            let (h, m) = off[1..].split_once(':').ok_or_else(bad)?;
            if h.len() != 2 || m.len() != 2 {
                return Err(bad());
            }
            let h: i32 = h.parse().map_err(|_| bad())?;
            let m: i32 = m.parse().map_err(|_| bad())?;
            Ok((body, Some(sign * (h * 60 + m))))
        }
        _ => Ok((s, None)),
    }
}

impl FromStr for CalendarValue {
    type Err = BadCalendarValue;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BadCalendarValue(s.to_string());
        if s.len() == 10 && !s.contains(':') {
            return NaiveDate::parse_from_str(s, "%Y-%m-%d").map(CalendarValue::Date).map_err(|_| bad());
        }
        let (body, off) = split_offset(s)?;
        if body.contains('T') {
            NaiveDateTime::parse_from_str(body, "%Y-%m-%dT%H:%M:%S")
                .map(|dt| CalendarValue::DateTime(dt, off))
                .map_err(|_| bad())
        } else {
            NaiveTime::parse_from_str(body, "%H:%M:%S")
                .map(|t| CalendarValue::Time(t, off))
                .map_err(|_| bad())
        }
    }
}

impl Serialize for CalendarValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CalendarValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One concrete reading of a normalized temporal value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub timeline: Timeline,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<CalendarValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub begin: Option<CalendarValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<CalendarValue>,
    /// Duration length, or the UTC offset on the offset timeline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exemplars: Vec<CalendarValue>,
    #[serde(default)]
    pub modality: Modality,
}

impl Resolution {
    fn blank(timeline: Timeline) -> Self {
        Resolution {
            timeline,
            value: None,
            begin: None,
            end: None,
            seconds: None,
            exemplars: Vec::new(),
            modality: Modality::Unspecified,
        }
    }

    pub fn value(v: CalendarValue) -> Self {
        Resolution { value: Some(v), ..Self::blank(Timeline::Value) }
    }

    pub fn range(begin: Option<CalendarValue>, end: Option<CalendarValue>) -> Self {
        Resolution { begin, end, ..Self::blank(Timeline::Range) }
    }

    pub fn duration(seconds: i64) -> Self {
        Resolution { seconds: Some(seconds), ..Self::blank(Timeline::Duration) }
    }

    pub fn offset(minutes: i32) -> Self {
        Resolution { seconds: Some(minutes as i64 * 60), ..Self::blank(Timeline::Offset) }
    }

    pub fn set(exemplars: Vec<CalendarValue>) -> Self {
        Resolution { exemplars, ..Self::blank(Timeline::Set) }
    }

    pub fn with_modality(mut self, m: Modality) -> Self {
        self.modality = m;
        self
    }

    /// The point this resolution is ordered by against an anchor.
    pub fn key_value(&self) -> Option<CalendarValue> {
        self.value.or(self.begin).or(self.end).or_else(|| self.exemplars.first().copied())
    }

    /// Range sanity: begin ≤ end whenever both are present and comparable.
    pub fn is_ordered(&self) -> bool {
        match (&self.begin, &self.end) {
            (Some(b), Some(e)) => b.partial_cmp(e).is_none_or(|o| o != Ordering::Greater),
            _ => true,
        }
    }

    /// Scorer equality: same timeline and same concrete values at the
    /// gold's granularity. Set readings compare the first `k` exemplars.
    pub fn matches_gold(&self, gold: &Resolution, k: usize) -> bool {
        fn opt(p: &Option<CalendarValue>, g: &Option<CalendarValue>) -> bool {
            match (p, g) {
                (Some(p), Some(g)) => p.matches_at(g),
                (None, None) => true,
                _ => false,
            }
        }
        if self.timeline != gold.timeline {
            return false;
        }
        match gold.timeline {
            Timeline::Duration | Timeline::Offset => self.seconds == gold.seconds,
            Timeline::Set => {
                let n = gold.exemplars.len().min(k);
                self.exemplars.len() >= n
                    && self.exemplars[..n].iter().zip(&gold.exemplars[..n]).all(|(p, g)| p.matches_at(g))
            }
            _ => opt(&self.value, &gold.value) && opt(&self.begin, &gold.begin) && opt(&self.end, &gold.end),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calendar_value_strings() {
        for s in ["2022-07-01", "2022-07-01T15:00:00", "15:00:00", "08:24:00-06:00", "2022-07-01T08:24:00+05:30"] {
            let v: CalendarValue = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!("2022-13-01".parse::<CalendarValue>().is_err());
        assert!("tomorrow".parse::<CalendarValue>().is_err());
        let z: CalendarValue = "2022-07-01T15:00:00Z".parse().unwrap();
        assert_eq!(z.to_string(), "2022-07-01T15:00:00+00:00");
    }

    #[test]
    fn granularity_matching() {
        let gold: CalendarValue = "2022-07-01".parse().unwrap();
        let pred: CalendarValue = "2022-07-01T09:00:00".parse().unwrap();
        assert!(pred.matches_at(&gold));
        assert!(!gold.matches_at(&pred));
    }

    #[test]
    fn ordering_and_json() {
        let r = Resolution::range(Some("2012-02-01".parse().unwrap()), Some("2012-12-31".parse().unwrap()));
        assert!(r.is_ordered());
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"timeline":"range","begin":"2012-02-01","end":"2012-12-31","modality":"unspecified"}"#);
        let back: Resolution = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let rev = Resolution::range(r.end, r.begin);
        assert!(!rev.is_ordered());
    }

    #[test]
    fn set_compares_first_k() {
        let ex = |s: &[&str]| Resolution::set(s.iter().map(|x| x.parse().unwrap()).collect());
        let gold = ex(&["2022-07-05", "2022-07-12", "2022-07-19"]);
        let pred = ex(&["2022-07-05", "2022-07-12", "2022-07-19", "2022-07-26"]);
        assert!(pred.matches_gold(&gold, 3));
        assert!(!ex(&["2022-07-05"]).matches_gold(&gold, 3));
    }
}
