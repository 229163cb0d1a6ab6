pub mod mention;
pub mod numeric;
pub mod rational;
pub mod resolution;
pub mod span;
pub mod subtype;
pub mod timex;

pub use mention::{AnchorContext, BadAnchor, EntityMention, MentionRecord, Normalized};
pub use numeric::{Bound, NumericError, NumericValue, UnitClass};
pub use rational::Rational;
pub use resolution::{CalendarValue, Modality, Resolution, Timeline};
pub use span::{CharIndex, Span};
pub use subtype::{subtype_of, EntitySubType, SubTypeGroup, UnknownSubType};
pub use timex::{format_timex, parse_timex, Timex, TimexError};
