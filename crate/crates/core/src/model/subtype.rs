use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubTypeGroup {
    Numeric,
    NumericWithUnit,
    Temporal,
}

/// The closed taxonomy of 18 entity sub-types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntitySubType {
    Cardinal,
    Ordinal,
    Percentage,
    NumberRange,
    Age,
    Currency,
    Dimension,
    Temperature,
    Date,
    Time,
    DateTime,
    DateRange,
    TimeRange,
    DateTimeRange,
    Duration,
    Holiday,
    Timezone,
    Set,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown sub-type `{0}`")]
pub struct UnknownSubType(pub String);

impl EntitySubType {
    pub const ALL: [EntitySubType; 18] = [
        EntitySubType::Cardinal,
        EntitySubType::Ordinal,
        EntitySubType::Percentage,
        EntitySubType::NumberRange,
        EntitySubType::Age,
        EntitySubType::Currency,
        EntitySubType::Dimension,
        EntitySubType::Temperature,
        EntitySubType::Date,
        EntitySubType::Time,
        EntitySubType::DateTime,
        EntitySubType::DateRange,
        EntitySubType::TimeRange,
        EntitySubType::DateTimeRange,
        EntitySubType::Duration,
        EntitySubType::Holiday,
        EntitySubType::Timezone,
        EntitySubType::Set,
    ];

    pub fn name(self) -> &'static str {
        use EntitySubType::*;
        match self {
            Cardinal => "cardinal",
            Ordinal => "ordinal",
            Percentage => "percentage",
            NumberRange => "numberrange",
            Age => "age",
            Currency => "currency",
            Dimension => "dimension",
            Temperature => "temperature",
            Date => "date",
            Time => "time",
            DateTime => "datetime",
            DateRange => "daterange",
            TimeRange => "timerange",
            DateTimeRange => "datetimerange",
            Duration => "duration",
            Holiday => "holiday",
            Timezone => "timezone",
            Set => "set",
        }
    }

    pub fn group(self) -> SubTypeGroup {
        use EntitySubType::*;
        match self {
            Cardinal | Ordinal | Percentage | NumberRange => SubTypeGroup::Numeric,
            Age | Currency | Dimension | Temperature => SubTypeGroup::NumericWithUnit,
            _ => SubTypeGroup::Temporal,
        }
    }

    pub fn is_temporal(self) -> bool {
        self.group() == SubTypeGroup::Temporal
    }

    /// Overlap arbitration rank; lower wins a length tie.
    pub fn arbitration_rank(self) -> u8 {
        use EntitySubType::*;
        match self {
            DateTimeRange => 0,
            DateRange => 1,
            TimeRange => 2,
            DateTime => 3,
            Date => 4,
            Time => 5,
            Duration => 6,
            Set => 7,
            Holiday => 8,
            Timezone => 9,
            Currency => 10,
            Dimension => 11,
            Temperature => 12,
            Age => 13,
            Percentage => 14,
            NumberRange => 15,
            Ordinal => 16,
            Cardinal => 17,
        }
    }
}

/// Case-insensitive lookup of a sub-type name.
pub fn subtype_of(name: &str) -> Result<EntitySubType, UnknownSubType> {
    EntitySubType::ALL
        .iter()
        .copied()
        .find(|t| t.name().eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| UnknownSubType(name.to_string()))
}

impl fmt::Display for EntitySubType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EntitySubType {
    type Err = UnknownSubType;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        subtype_of(s)
    }
}

impl Serialize for EntitySubType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for EntitySubType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        subtype_of(&s).map_err(serde::de::Error::custom)
    }
}
