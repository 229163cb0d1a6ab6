use std::fmt;
use std::str::FromStr;

use chrono::{NaiveDate, NaiveDateTime, NaiveTime};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::numeric::NumericValue;
use super::resolution::{split_offset, Resolution};
use super::span::Span;
use super::subtype::EntitySubType;
use super::timex::{format_offset, Timex};

/// The normalized payload of a mention; temporal sub-types carry a timex,
/// all others a numeric value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    Timex(Timex),
    Numeric(NumericValue),
}

impl fmt::Display for Normalized {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Normalized::Timex(t) => t.fmt(f),
            Normalized::Numeric(n) => n.fmt(f),
        }
    }
}

impl Normalized {
    /// Parses a canonical string under the grammar `sub_type` selects.
    pub fn parse_for(sub_type: EntitySubType, s: &str) -> Result<Normalized, String> {
        if sub_type.is_temporal() {
            s.parse::<Timex>().map(Normalized::Timex).map_err(|e| e.to_string())
        } else {
            let v: NumericValue = s.parse().map_err(|e: super::numeric::NumericError| e.to_string())?;
            v.validate().map_err(|e| e.to_string())?;
            Ok(Normalized::Numeric(v))
        }
    }
}

/// A recognized mention: span, surface, sub-type, normalized form and any
/// resolutions against the anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityMention {
    pub span: Span,
    pub surface: String,
    pub sub_type: EntitySubType,
    pub normalized: Normalized,
    pub resolutions: Vec<Resolution>,
}

/// Wire form of a mention, shared with the dataset entity schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MentionRecord {
    pub start: usize,
    pub length: usize,
    pub text: String,
    #[serde(rename = "type")]
    pub sub_type: EntitySubType,
    pub value: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub resolutions: Vec<Resolution>,
}

impl From<&EntityMention> for MentionRecord {
    fn from(m: &EntityMention) -> Self {
        MentionRecord {
            start: m.span.start,
            length: m.span.length,
            text: m.surface.clone(),
            sub_type: m.sub_type,
            value: m.normalized.to_string(),
            resolutions: m.resolutions.clone(),
        }
    }
}

/// The reference datetime relative expressions resolve against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AnchorContext {
    pub date: NaiveDate,
    pub time: Option<NaiveTime>,
    pub utc_offset_minutes: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed anchor `{0}` (expected YYYY-MM-DD or YYYY-MM-DDThh:mm[:ss][±hh:mm])")]
pub struct BadAnchor(pub String);

impl AnchorContext {
    pub fn date(date: NaiveDate) -> Self {
        AnchorContext { date, time: None, utc_offset_minutes: None }
    }

    pub fn ymd(y: i32, m: u32, d: u32) -> Self {
        Self::date(NaiveDate::from_ymd_opt(y, m, d).expect("valid anchor date"))
    }

    pub fn datetime(&self) -> NaiveDateTime {
        self.date.and_time(self.time.unwrap_or(NaiveTime::MIN))
    }
}

impl FromStr for AnchorContext {
    type Err = BadAnchor;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BadAnchor(s.to_string());
        let s = s.trim();
        if !s.contains('T') {
            let date = NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|_| bad())?;
            return Ok(Self::date(date));
        }
        let (body, off) = split_offset(s).map_err(|_| bad())?;
        let dt = NaiveDateTime::parse_from_str(body, "%Y-%m-%dT%H:%M:%S")
            .or_else(|_| NaiveDateTime::parse_from_str(body, "%Y-%m-%dT%H:%M"))
            .map_err(|_| bad())?;
        Ok(AnchorContext { date: dt.date(), time: Some(dt.time()), utc_offset_minutes: off })
    }
}

impl fmt::Display for AnchorContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.date.format("%Y-%m-%d"))?;
        if let Some(t) = self.time {
            write!(f, "T{}", t.format("%H:%M:%S"))?;
        }
        if let Some(o) = self.utc_offset_minutes {
            f.write_str(&format_offset(o))?;
        }
        Ok(())
    }
}

impl Serialize for AnchorContext {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AnchorContext {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_forms() {
        for s in ["2022-07-01", "2022-07-01T10:30:00", "2022-07-01T10:30:00-06:00"] {
            assert_eq!(s.parse::<AnchorContext>().unwrap().to_string(), s);
        }
        assert_eq!("2022-07-01T10:30".parse::<AnchorContext>().unwrap().to_string(), "2022-07-01T10:30:00");
        for bad in ["2022-02-30", "yesterday", "2022-07-01T25:00", ""] {
            assert!(bad.parse::<AnchorContext>().is_err(), "{bad}");
        }
    }

    #[test]
    fn normalized_dispatch() {
        assert!(Normalized::parse_for(EntitySubType::Date, "XXXX-WXX-5").is_ok());
        assert!(Normalized::parse_for(EntitySubType::Date, "ORD(3)").is_err());
        assert!(Normalized::parse_for(EntitySubType::Ordinal, "ORD(3)").is_ok());
        assert!(Normalized::parse_for(EntitySubType::NumberRange, "[5,3]").is_err());
    }
}
