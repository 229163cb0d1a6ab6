use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitClass {
    Age,
    Currency,
    Dimension,
    Temperature,
}

impl UnitClass {
    pub const ALL: [UnitClass; 4] = [
        UnitClass::Age,
        UnitClass::Currency,
        UnitClass::Dimension,
        UnitClass::Temperature,
    ];

    fn tag(self) -> &'static str {
        match self {
            UnitClass::Age => "AGE",
            UnitClass::Currency => "CUR",
            UnitClass::Dimension => "DIM",
            UnitClass::Temperature => "TEMP",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            UnitClass::Age => "age",
            UnitClass::Currency => "currency",
            UnitClass::Dimension => "dimension",
            UnitClass::Temperature => "temperature",
        }
    }

    pub fn from_name(s: &str) -> Option<UnitClass> {
        UnitClass::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bound {
    pub value: Rational,
    pub inclusive: bool,
}

impl Bound {
    pub fn closed(value: Rational) -> Self {
        Bound { value, inclusive: true }
    }
    pub fn open(value: Rational) -> Self {
        Bound { value, inclusive: false }
    }
}

/// Normalized payload of a numeric mention. Percentages keep their face
/// value ("ten percent" is 10).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumericValue {
    Scalar(Rational),
    Ordinal(Rational),
    Percentage(Rational),
    /// An absent bound is unbounded.
    Interval { low: Option<Bound>, high: Option<Bound> },
    Quantity { value: Rational, unit: String, class: UnitClass },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("malformed numeric form `{0}`")]
    Malformed(String),
    #[error("invalid numeric value: {0}")]
    Invalid(&'static str),
}

impl NumericValue {
    pub fn validate(&self) -> Result<(), NumericError> {
        match self {
            NumericValue::Interval { low, high } => match (low, high) {
                (None, None) => Err(NumericError::Invalid("interval needs a bound")),
                (Some(l), Some(h)) if l.value > h.value => {
                    Err(NumericError::Invalid("interval low exceeds high"))
                }
                _ => Ok(()),
            },
            NumericValue::Quantity { unit, .. } if unit.is_empty() => {
                Err(NumericError::Invalid("quantity needs a unit"))
            }
            NumericValue::Ordinal(r) if *r.denom() != 1 || *r.numer() < 1 => {
                Err(NumericError::Invalid("ordinal rank must be a positive integer"))
            }
            _ => Ok(()),
        }
    }

    /// Canonical text form, e.g. `0.5`, `ORD(3)`, `10%`, `[30,)`, `CUR(5,USD)`.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for NumericValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericValue::Scalar(v) => f.write_str(&format_rational(v)),
            NumericValue::Ordinal(v) => write!(f, "ORD({})", format_rational(v)),
            NumericValue::Percentage(v) => write!(f, "{}%", format_rational(v)),
            NumericValue::Interval { low, high } => {
                let (lb, lv) = match low {
                    Some(b) => (if b.inclusive { '[' } else { '(' }, format_rational(&b.value)),
                    None => ('(', String::new()),
                };
                let (hb, hv) = match high {
                    Some(b) => (if b.inclusive { ']' } else { ')' }, format_rational(&b.value)),
                    None => (')', String::new()),
                };
                write!(f, "{lb}{lv},{hv}{hb}")
            }
            NumericValue::Quantity { value, unit, class } => {
                write!(f, "{}({},{})", class.tag(), format_rational(value), unit)
            }
        }
    }
}

impl FromStr for NumericValue {
    type Err = NumericError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || NumericError::Malformed(s.to_string());
        let value = if let Some(inner) = s.strip_prefix("ORD(").and_then(|r| r.strip_suffix(')')) {
            NumericValue::Ordinal(parse_rational(inner).ok_or_else(bad)?)
        } else if let Some(v) = s.strip_suffix('%') {
            NumericValue::Percentage(parse_rational(v).ok_or_else(bad)?)
        } else if s.starts_with('[') || s.starts_with('(') {
            let lb = s.chars().next().ok_or_else(bad)?;
            let hb = s.chars().last().ok_or_else(bad)?;
            if !matches!(hb, ']' | ')') || s.len() < 3 {
                return Err(bad());
            }
            let (lo, hi) = s[1..s.len() - 1].split_once(',').ok_or_else(bad)?;
            let bound = |text: &str, inclusive: bool| -> Result<Option<Bound>, NumericError> {
                if text.is_empty() {
                    if inclusive {
                        return Err(bad());
                    }
                    return Ok(None);
                }
                Ok(Some(Bound { value: parse_rational(text).ok_or_else(bad)?, inclusive }))
            };
            NumericValue::Interval { low: bound(lo, lb == '[')?, high: bound(hi, hb == ']')? }
        } else if let Some(open) = s.find('(') {
            let class = UnitClass::ALL
                .into_iter()
                .find(|c| c.tag() == &s[..open])
                .ok_or_else(bad)?;
            let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
            let (v, unit) = inner.split_once(',').ok_or_else(bad)?;
            if unit.is_empty() || unit.contains([',', '(', ')']) {
                return Err(bad());
            }
            NumericValue::Quantity {
                value: parse_rational(v).ok_or_else(bad)?,
                unit: unit.to_string(),
                class,
            }
        } else {
            NumericValue::Scalar(parse_rational(s).ok_or_else(bad)?)
        };
        value.validate()?;
        // Reject non-canonical spellings such as "05" or "1.50".
        if value.to_string() != s {
            return Err(bad());
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rational::{frac, int};

    #[test]
    fn canonical_forms() {
        let cases = [
            (NumericValue::Scalar(frac(1, 2)), "0.5"),
            (NumericValue::Ordinal(int(23)), "ORD(23)"),
            (NumericValue::Percentage(frac(7, 2)), "3.5%"),
            (NumericValue::Interval { low: Some(Bound::closed(int(30))), high: None }, "[30,)"),
            (NumericValue::Interval { low: Some(Bound::open(int(10))), high: None }, "(10,)"),
            (
                NumericValue::Interval { low: Some(Bound::closed(int(3))), high: Some(Bound::closed(int(5))) },
                "[3,5]",
            ),
            (
                NumericValue::Quantity { value: int(5), unit: "USD".into(), class: UnitClass::Currency },
                "CUR(5,USD)",
            ),
        ];
        for (v, s) in cases {
            assert_eq!(v.to_string(), s);
            assert_eq!(s.parse::<NumericValue>().unwrap(), v);
        }
    }

    #[test]
    fn rejects_bad_intervals_and_spellings() {
        assert!("[5,3]".parse::<NumericValue>().is_err());
        assert!("(,)".parse::<NumericValue>().is_err());
        assert!("[,3]".parse::<NumericValue>().is_err());
        assert!("05".parse::<NumericValue>().is_err());
        assert!("FOO(1,x)".parse::<NumericValue>().is_err());
        assert!("ORD(0)".parse::<NumericValue>().is_err());
    }
}
