//! Proleptic Gregorian calendar helpers.

use chrono::{Datelike, Days, Months, NaiveDate, Weekday};

pub fn is_leap(y: i32) -> bool {
    NaiveDate::from_ymd_opt(y, 2, 29).is_some()
}

pub fn days_in_month(y: i32, m: u32) -> u32 {
    crate::model::timex::days_in_month(y, m)
}

pub fn ymd(y: i32, m: u32, d: u32) -> Option<NaiveDate> {
    NaiveDate::from_ymd_opt(y, m, d)
}

pub fn last_of_month(y: i32, m: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, days_in_month(y, m)).expect("valid month")
}

/// Shifts by whole months, clamping the day to the target month's length
/// (Mar 31 − 1 month = Feb 28/29).
pub fn add_months(d: NaiveDate, months: i64) -> Option<NaiveDate> {
    let n = Months::new(u32::try_from(months.unsigned_abs()).ok()?);
    if months >= 0 { d.checked_add_months(n) } else { d.checked_sub_months(n) }
}

pub fn add_days(d: NaiveDate, days: i64) -> Option<NaiveDate> {
    let n = Days::new(days.unsigned_abs());
    if days >= 0 { d.checked_add_days(n) } else { d.checked_sub_days(n) }
}

/// ISO weekday number, 1 = Monday.
pub fn iso_weekday(d: NaiveDate) -> u32 {
    d.weekday().number_from_monday()
}

pub fn weekday_from_iso(n: u32) -> Option<Weekday> {
    match n {
        1 => Some(Weekday::Mon),
        2 => Some(Weekday::Tue),
        3 => Some(Weekday::Wed),
        4 => Some(Weekday::Thu),
        5 => Some(Weekday::Fri),
        6 => Some(Weekday::Sat),
        7 => Some(Weekday::Sun),
        _ => None,
    }
}

/// The `n`th given weekday of a month; `n = -1` is the last one.
pub fn nth_weekday(year: i32, month: u32, weekday: u32, n: i32) -> Option<NaiveDate> {
    let wd = weekday_from_iso(weekday)?;
    if n > 0 {
        NaiveDate::from_weekday_of_month_opt(year, month, wd, u8::try_from(n).ok()?)
    } else if n == -1 {
        let last = last_of_month(year, month);
        let back = (iso_weekday(last) + 7 - weekday) % 7;
        add_days(last, -(back as i64))
    } else {
        None
    }
}

/// Gregorian Easter Sunday by Gauss's algorithm.
pub fn easter(year: i32) -> Option<NaiveDate> {
    if year < 1583 {
        return None;
    }
    let a = year % 19;
    let b = year % 4;
    let c = year % 7;
    let k = year / 100;
    let p = (13 + 8 * k) / 25;
    let q = k / 4;
    let m = (15 - p + k - q).rem_euclid(30);
    let n = (4 + k - q).rem_euclid(7);
    let d = (19 * a + m) % 30;
    let e = (2 * b + 4 * c + 6 * d + n) % 7;
    if d == 29 && e == 6 {
        return ymd(year, 4, 19);
    }
    if d == 28 && e == 6 && (11 * m + 11) % 30 < 19 {
        return ymd(year, 4, 18);
    }
    let day = 22 + d + e;
    if day <= 31 { ymd(year, 3, day as u32) } else { ymd(year, 4, (day - 31) as u32) }
}

/// Monday of ISO week `week` in ISO year `year`.
pub fn iso_week_start(year: i32, week: u32) -> Option<NaiveDate> {
    NaiveDate::from_isoywd_opt(year, week, Weekday::Mon)
}
