//! Exact rational numbers and their canonical text form.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type Rational = Ratio<i128>;

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

pub fn frac(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

/// Shortest exact decimal when the value terminates, `n/d` otherwise.
pub fn format_rational(r: &Rational) -> String {
    let (n, d) = (*r.numer(), *r.denom());
    if d == 1 {
        return n.to_string();
    }
    let mut rest = d;
    let (mut twos, mut fives) = (0u32, 0u32);
    while rest % 2 == 0 {
        rest /= 2;
        twos += 1;
    }
    while rest % 5 == 0 {
        rest /= 5;
        fives += 1;
    }
    if rest != 1 {
        return format!("{n}/{d}");
    }
    let places = twos.max(fives);
    let scaled = n.abs() * (10i128.pow(places) / d);
    let digits = format!("{:0>width$}", scaled, width = places as usize + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places as usize);
    let sign = if n < 0 { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

/// Parses `-12`, `12.50`, `.5` or `1/3`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.parse().ok()?;
        let d: i128 = d.parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(frac(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    if body.is_empty() {
        return None;
    }
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if !ip.chars().all(|c| c.is_ascii_digit()) || !fp.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    let digits = format!("{ip}{fp}");
    let n: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let d = 10i128.checked_pow(fp.len() as u32)?;
    let v = frac(n, d);
    Some(if neg { -v } else { v })
}

/// True when the canonical text of `r` is a plain decimal.
pub fn is_terminating(r: &Rational) -> bool {
    let mut d = *r.denom();
    for p in [2, 5] {
        while d.is_multiple_of(&p) {
            d /= p;
        }
    }
    d == 1
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative() && !r.is_zero()
}
