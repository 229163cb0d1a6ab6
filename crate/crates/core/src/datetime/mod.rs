//! Temporal sub-types: calendar arithmetic, holiday and timezone tables,
//! normalization to timex values and resolution against an anchor.

pub mod calendar;
pub mod holiday;
pub mod timezone;
pub mod normalize;
pub mod resolve;

pub use normalize::{attach_timezone, normalize, UnparsableTimex};
pub use resolve::{resolve, resolve_duration_anchor, resolve_holiday, resolve_set, resolve_with, ResolveError};
