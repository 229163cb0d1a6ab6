//! Value parsing for the bare-number sub-types: cardinal, ordinal,
//! percentage and number range.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lang::lexicon::normalize_surface;
use crate::lang::LanguageConfig;
use crate::model::rational::{int, parse_rational};
use crate::model::{Bound, EntitySubType, NumericValue, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as a number")]
pub struct UnparsableNumber(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    DigitSequence,
    ScaleWord,
    UnitWord,
    TeenWord,
    TensWord,
    FractionWord,
    Connector,
    OrdinalSuffix,
}

/// One classified word of a number mention. `value` is `None` only for
/// connectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberToken {
    pub kind: TokenKind,
    pub value: Option<Rational>,
    pub text: String,
}

/// Parses a digit sequence written with the given separators. Groups must
/// be complete: `1,234` but not `12,34`.
pub fn parse_digits(s: &str, group: char, decimal: char) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = match body.split_once(decimal) {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let groups: Vec<&str> = int_part.split(group).collect();
    let digits_only = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
    if !groups.iter().all(|g| digits_only(g)) {
        return None;
    }
    if groups.len() > 1 && (groups[0].len() > 3 || groups[1..].iter().any(|g| g.len() != 3)) {
        return None;
    }
    if frac_part.is_some_and(|f| !digits_only(f)) {
        return None;
    }
    let mut plain = groups.concat();
    if let Some(f) = frac_part {
        plain.push('.');
        plain.push_str(f);
    }
    let v = parse_rational(&plain)?;
    Some(if neg { -v } else { v })
}

fn words_of(surface: &str) -> Vec<String> {
    surface
        .split(|c: char| c.is_whitespace() || c == '-' || c == ',')
        .filter(|w| !w.is_empty())
        .map(|w| w.to_lowercase())
        .collect()
}

fn lex_value(config: &LanguageConfig, cat: &str, w: &str) -> Option<Rational> {
    config.lexicon.value(cat, w).and_then(parse_rational)
}

/// Classifies the words of a number mention. `ordinal_last` reads the final
/// word as an ordinal.
pub fn tokenize(surface: &str, config: &LanguageConfig, ordinal_last: bool) -> Result<Vec<NumberToken>, UnparsableNumber> {
    let bad = || UnparsableNumber(surface.to_string());
    let mut pieces: Vec<String> = Vec::new();
    for (i, chunk) in surface.split_whitespace().enumerate() {
        // a digit sequence may only lead the mention
        if i == 0 && chunk.starts_with(|c: char| c.is_ascii_digit()) {
            pieces.push(chunk.to_string());
        } else {
            pieces.extend(words_of(chunk));
        }
    }
    let n = pieces.len();
    let mut out = Vec::with_capacity(n);
    for (i, w) in pieces.iter().enumerate() {
        let last = i + 1 == n;
        let tok = |kind, value| NumberToken { kind, value, text: w.clone() };
        if i == 0 && w.starts_with(|c: char| c.is_ascii_digit()) {
            let v = parse_digits(w, config.group_separator, config.decimal_separator).ok_or_else(bad)?;
            out.push(tok(TokenKind::DigitSequence, Some(v)));
        } else if ordinal_last && last {
            let v = lex_value(config, "ordinal", w).ok_or_else(bad)?;
            out.push(tok(TokenKind::OrdinalSuffix, Some(v)));
        } else if let Some(v) = lex_value(config, "num_unit", w).or_else(|| lex_value(config, "num_article", w)) {
            out.push(tok(TokenKind::UnitWord, Some(v)));
        } else if let Some(v) = lex_value(config, "num_teen", w) {
            out.push(tok(TokenKind::TeenWord, Some(v)));
        } else if let Some(v) = lex_value(config, "num_tens", w).or_else(|| lex_value(config, "num_hundreds", w)) {
            out.push(tok(TokenKind::TensWord, Some(v)));
        } else if let Some(v) = lex_value(config, "num_hundred", w).or_else(|| lex_value(config, "num_scale", w)) {
            out.push(tok(TokenKind::ScaleWord, Some(v)));
        } else if config.lexicon.contains("num_connector", w) {
            out.push(tok(TokenKind::Connector, None));
        } else if let Some(v) = lex_value(config, "fraction", w).filter(|_| last) {
            out.push(tok(TokenKind::FractionWord, Some(v)));
        } else {
            return Err(bad());
        }
    }
    Ok(out)
}

/// Additive word classes in the order they may follow one another inside
/// a group below one hundred (or one thousand for Spanish hundreds words).
fn level(config: &LanguageConfig, t: &NumberToken) -> u8 {
    let w = t.text.as_str();
    match t.kind {
        TokenKind::UnitWord => 1,
        TokenKind::TeenWord => 2,
        TokenKind::TensWord if config.lexicon.contains("num_hundreds", w) => 4,
        TokenKind::TensWord => 3,
        _ => 0,
    }
}

fn accumulate(surface: &str, tokens: &[NumberToken], config: &LanguageConfig) -> Result<Rational, UnparsableNumber> {
    let bad = || UnparsableNumber(surface.to_string());
    let n = tokens.len();
    let (mut total, mut current) = (Rational::zero(), Rational::zero());
    // the highest level the next additive word may have
    let mut slot = 5u8;
    let mut any = false;
    for (i, t) in tokens.iter().enumerate() {
        let next = tokens.get(i + 1);
        let v = t.value.unwrap_or_default();
        let mut kind = t.kind;
        if kind == TokenKind::OrdinalSuffix {
            kind = ordinal_class(&v);
        }
        match kind {
            TokenKind::DigitSequence => {
                current = v;
                slot = 0;
                any = true;
            }
            TokenKind::Connector => {
                if !any || next.is_none() {
                    return Err(bad());
                }
            }
            TokenKind::UnitWord | TokenKind::TeenWord | TokenKind::TensWord => {
                let is_article = config.lexicon.contains("num_article", &t.text);
                if is_article {
                    let ok = next.is_some_and(|nx| matches!(nx.kind, TokenKind::ScaleWord | TokenKind::FractionWord));
                    if !ok || slot != 5 {
                        return Err(bad());
                    }
                    current += v;
                    slot = 1;
                    any = true;
                    continue;
                }
                let l = if t.kind == TokenKind::OrdinalSuffix { ordinal_level(&v) } else { level(config, t) };
                if l >= slot || (v.is_zero() && n > 1) {
                    return Err(bad());
                }
                current += v;
                slot = match l {
                    3 => 2,
                    4 => 4,
                    _ => 1,
                };
                any = true;
            }
            TokenKind::ScaleWord => {
                let base = if current.is_zero() { Rational::one() } else { current };
                if v == int(100) {
                    if base >= int(100) {
                        return Err(bad());
                    }
                    current = base * v;
                    slot = 4;
                } else {
                    total += base * v;
                    current = Rational::zero();
                    slot = 5;
                }
                any = true;
            }
            TokenKind::FractionWord => {
                let base = if any { total + current } else { Rational::one() };
                return Ok(base * v);
            }
            TokenKind::OrdinalSuffix => unreachable!(),
        }
    }
    if !any {
        return Err(bad());
    }
    Ok(total + current)
}

fn ordinal_class(v: &Rational) -> TokenKind {
    if *v < int(10) {
        TokenKind::UnitWord
    } else if *v < int(20) {
        TokenKind::TeenWord
    } else if *v < int(100) {
        TokenKind::TensWord
    } else {
        TokenKind::ScaleWord
    }
}

fn ordinal_level(v: &Rational) -> u8 {
    match ordinal_class(v) {
        TokenKind::UnitWord => 1,
        TokenKind::TeenWord => 2,
        _ => 3,
    }
}

fn strip_negative<'a>(surface: &'a str, config: &LanguageConfig) -> (bool, &'a str) {
    let s = surface.trim();
    if let Some(rest) = s.strip_prefix('-') {
        return (true, rest.trim_start());
    }
    if let Some((first, rest)) = s.split_once(char::is_whitespace) {
        if config.lexicon.contains("negative", first) {
            return (true, rest.trim_start());
        }
    }
    (false, s)
}

/// The exact value of a cardinal mention: digits, number words, fractions
/// and mixed forms.
pub fn parse_number_value(surface: &str, config: &LanguageConfig) -> Result<Rational, UnparsableNumber> {
    let (neg, s) = strip_negative(surface, config);
    let v = positive_value(s, config).map_err(|_| UnparsableNumber(surface.to_string()))?;
    Ok(if neg { -v } else { v })
}

fn positive_value(s: &str, config: &LanguageConfig) -> Result<Rational, UnparsableNumber> {
    if let Some(v) = parse_digits(s, config.group_separator, config.decimal_separator) {
        return Ok(v);
    }
    if let Some((whole, part)) = config.overrides.fraction_connector()(s, &config.lexicon) {
        return Ok(positive_value(&whole, config)? + part);
    }
    let tokens = tokenize(s, config, false)?;
    accumulate(s, &tokens, config)
}

pub fn parse_cardinal(surface: &str, config: &LanguageConfig) -> Result<NumericValue, UnparsableNumber> {
    parse_number_value(surface, config).map(NumericValue::Scalar)
}

pub fn parse_ordinal(surface: &str, config: &LanguageConfig) -> Result<NumericValue, UnparsableNumber> {
    let bad = || UnparsableNumber(surface.to_string());
    let s = surface.trim();
    if let Some(n) = config.overrides.ordinal_suffix_parse()(s) {
        return Ok(NumericValue::Ordinal(int(n as i128)));
    }
    if s.starts_with(|c: char| c.is_ascii_digit()) {
        return Err(bad());
    }
    let tokens = tokenize(s, config, true)?;
    let v = accumulate(s, &tokens, config)?;
    if !v.is_integer() || !v.is_positive() {
        return Err(bad());
    }
    Ok(NumericValue::Ordinal(v))
}

/// Face value of a percentage: "10%" → 10.
pub fn parse_percentage(surface: &str, config: &LanguageConfig) -> Result<NumericValue, UnparsableNumber> {
    let norm = normalize_surface(surface);
    let mut words = config.lexicon.surfaces("percent", None);
    words.push("%");
    words.sort_by_key(|w| std::cmp::Reverse(w.len()));
    for w in words {
        if let Some(rest) = norm.strip_suffix(w) {
            return parse_number_value(rest.trim(), config)
                .map(NumericValue::Percentage)
                .map_err(|_| UnparsableNumber(surface.to_string()));
        }
    }
    Err(UnparsableNumber(surface.to_string()))
}

/// Splits `s` at every occurrence of `word` standing as its own token and
/// returns the first split whose halves both parse.
fn split_parse(s: &str, word: &str, config: &LanguageConfig) -> Option<(Rational, Rational)> {
    let lower = s.to_lowercase();
    let symbol = !word.chars().any(char::is_alphanumeric);
    let mut from = 0;
    while let Some(off) = lower[from..].find(word) {
        let at = from + off;
        let end = at + word.len();
        let spaced = lower[..at].ends_with(char::is_whitespace) && lower[end..].starts_with(char::is_whitespace);
        if (symbol || spaced) && at > 0 && end < s.len() {
            if let (Ok(a), Ok(b)) = (parse_number_value(s[..at].trim(), config), parse_number_value(s[end..].trim(), config)) {
                return Some((a, b));
            }
        }
        from = at + word.len().max(1);
        while !lower.is_char_boundary(from) {
            from += 1;
        }
    }
    None
}

/// "30+", "between 3 and 5", "more than 10", "5-10", "5 to 10".
pub fn parse_number_range(surface: &str, config: &LanguageConfig) -> Result<NumericValue, UnparsableNumber> {
    let bad = || UnparsableNumber(surface.to_string());
    let s = surface.trim();
    let rc = config.overrides.range_connectors();
    let value = if let Some(rest) = s.strip_suffix('+') {
        let low = parse_number_value(rest.trim(), config).map_err(|_| bad())?;
        NumericValue::Interval { low: Some(Bound::closed(low)), high: None }
    } else if let Some((op, rest)) = range_op(s, config) {
        let v = parse_number_value(rest, config).map_err(|_| bad())?;
        match op {
            "gt" => NumericValue::Interval { low: Some(Bound::open(v)), high: None },
            "ge" => NumericValue::Interval { low: Some(Bound::closed(v)), high: None },
            "lt" => NumericValue::Interval { low: None, high: Some(Bound::open(v)) },
            "le" => NumericValue::Interval { low: None, high: Some(Bound::closed(v)) },
            _ => return Err(bad()),
        }
    } else {
        let lower = s.to_lowercase();
        let between = rc
            .between
            .iter()
            .find_map(|w| lower.strip_prefix(w).filter(|r| r.starts_with(char::is_whitespace)).map(|r| s.len() - r.len()));
        let (a, b) = match between {
            Some(cut) => rc.and.iter().find_map(|w| split_parse(s[cut..].trim(), w, config)),
            None => rc.to.iter().chain(["through"].iter()).find_map(|w| split_parse(s, w, config)),
        }
        .ok_or_else(bad)?;
        NumericValue::Interval { low: Some(Bound::closed(a)), high: Some(Bound::closed(b)) }
    };
    value.validate().map_err(|_| bad())?;
    Ok(value)
}

fn range_op<'a>(s: &'a str, config: &LanguageConfig) -> Option<(&'static str, &'a str)> {
    let mut ops = config.lexicon.surfaces("range_op", None);
    ops.sort_by_key(|w| std::cmp::Reverse(w.len()));
    let words: Vec<&str> = s.split_whitespace().collect();
    for op in ops {
        let k = op.split(' ').count();
        if words.len() > k && normalize_surface(&words[..k].join(" ")) == op {
            let code = match config.lexicon.value("range_op", op)? {
                "gt" => "gt",
                "ge" => "ge",
                "lt" => "lt",
                "le" => "le",
                _ => return None,
            };
            // byte offset of the first word after the operator
            let mut rest = s;
            for _ in 0..k {
                rest = rest.trim_start();
                rest = &rest[rest.find(char::is_whitespace).unwrap_or(rest.len())..];
            }
            return Some((code, rest.trim()));
        }
    }
    None
}

/// Dispatches on the bare-number sub-type.
pub fn parse_numeric(sub_type: EntitySubType, surface: &str, config: &LanguageConfig) -> Result<NumericValue, UnparsableNumber> {
    match sub_type {
        EntitySubType::Cardinal => parse_cardinal(surface, config),
        EntitySubType::Ordinal => parse_ordinal(surface, config),
        EntitySubType::Percentage => parse_percentage(surface, config),
        EntitySubType::NumberRange => parse_number_range(surface, config),
        _ => Err(UnparsableNumber(surface.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::load_config;
    use crate::model::rational::frac;

    fn en() -> LanguageConfig {
        load_config("en").unwrap()
    }

    fn scalar(s: &str) -> Rational {
        match parse_cardinal(s, &en()).unwrap() {
            NumericValue::Scalar(v) => v,
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn spec_examples() {
        assert_eq!(scalar("half"), frac(1, 2));
        assert_eq!(scalar("twenty-three"), int(23));
        assert_eq!(scalar("1,234.5"), frac(2469, 2));
        assert_eq!(scalar("two and a half"), frac(5, 2));
        assert_eq!(scalar("three quarters"), frac(3, 4));
        assert_eq!(scalar("a half") + scalar("half"), int(1));
        assert_eq!(scalar("5 million"), int(5_000_000));
        assert_eq!(scalar("1.5 billion"), int(1_500_000_000));
        assert_eq!(scalar("a thousand"), int(1000));
        assert_eq!(scalar("minus five"), int(-5));
        assert_eq!(scalar("-12"), int(-12));
        assert_eq!(scalar("one million two hundred thousand and three"), int(1_200_003));
        assert_eq!(scalar("Twenty Three"), int(23));
    }

    #[test]
    fn rejects() {
        let c = en();
        for s in ["", "twenty twenty", "five three", "fifteen five", "and", "a", "12,34", "one and", "hundred hundred zero", "zero five"] {
            assert!(parse_cardinal(s, &c).is_err(), "{s}");
        }
    }

    #[test]
    fn ordinals_and_percentages() {
        let c = en();
        assert_eq!(parse_ordinal("first", &c).unwrap(), NumericValue::Ordinal(int(1)));
        assert_eq!(parse_ordinal("23rd", &c).unwrap(), NumericValue::Ordinal(int(23)));
        assert_eq!(parse_ordinal("twenty-third", &c).unwrap(), NumericValue::Ordinal(int(23)));
        assert_eq!(parse_ordinal("one hundred and first", &c).unwrap(), NumericValue::Ordinal(int(101)));
        assert!(parse_ordinal("23", &c).is_err());
        assert_eq!(parse_percentage("10%", &c).unwrap(), NumericValue::Percentage(int(10)));
        assert_eq!(parse_percentage("ten percent", &c).unwrap(), NumericValue::Percentage(int(10)));
        assert_eq!(parse_percentage("3.5 percent", &c).unwrap(), NumericValue::Percentage(frac(7, 2)));
        assert_eq!(parse_percentage("Ten Per Cent", &c).unwrap(), NumericValue::Percentage(int(10)));
    }

    #[test]
    fn ranges() {
        let c = en();
        let iv = |low: Option<Bound>, high: Option<Bound>| NumericValue::Interval { low, high };
        assert_eq!(parse_number_range("30+", &c).unwrap(), iv(Some(Bound::closed(int(30))), None));
        assert_eq!(
            parse_number_range("between 3 and 5", &c).unwrap(),
            iv(Some(Bound::closed(int(3))), Some(Bound::closed(int(5))))
        );
        assert_eq!(parse_number_range("more than 10", &c).unwrap(), iv(Some(Bound::open(int(10))), None));
        assert_eq!(parse_number_range("at least ten", &c).unwrap(), iv(Some(Bound::closed(int(10))), None));
        assert_eq!(parse_number_range("under 5", &c).unwrap(), iv(None, Some(Bound::open(int(5)))));
        assert_eq!(
            parse_number_range("5-10", &c).unwrap(),
            iv(Some(Bound::closed(int(5))), Some(Bound::closed(int(10))))
        );
        assert_eq!(
            parse_number_range("twenty-one to thirty", &c).unwrap(),
            iv(Some(Bound::closed(int(21))), Some(Bound::closed(int(30))))
        );
        assert!(parse_number_range("10 to 5", &c).is_err());
    }

    #[test]
    fn separators_follow_the_config() {
        let es = load_config("es").unwrap();
        assert_eq!(parse_number_value("1.234", &es).unwrap(), int(1234));
        assert_eq!(parse_number_value("3,5", &es).unwrap(), frac(7, 2));
        assert_eq!(parse_number_value("1.234", &en()).unwrap(), frac(617, 500));
        assert_eq!(parse_number_value("dos mil veintiuno", &es).unwrap(), int(2021));
        assert_eq!(parse_number_value("ciento cuarenta y dos", &es).unwrap(), int(142));
        assert_eq!(parse_number_value("dos y medio", &es).unwrap(), frac(5, 2));
        assert_eq!(parse_ordinal("tercero", &es).unwrap(), NumericValue::Ordinal(int(3)));
        assert_eq!(parse_ordinal("3º", &es).unwrap(), NumericValue::Ordinal(int(3)));
    }

    /// English words for 0–9999 built from spelling rules alone.
    pub(crate) fn oracle_words(n: u32, hyphen: bool, and: bool) -> String {
        const ONES: [&str; 20] = [
            "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
            "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
        ];
        const TENS: [&str; 10] = ["", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"];
        fn below_100(n: u32, hyphen: bool) -> String {
            if n < 20 {
                ONES[n as usize].to_string()
            } else if n % 10 == 0 {
                TENS[(n / 10) as usize].to_string()
            } else {
                format!("{}{}{}", TENS[(n / 10) as usize], if hyphen { "-" } else { " " }, ONES[(n % 10) as usize])
            }
        }
        if n == 0 {
            return "zero".into();
        }
        let mut parts = Vec::new();
        if n >= 1000 {
            parts.push(format!("{} thousand", below_100(n / 1000, hyphen)));
        }
        let h = (n % 1000) / 100;
        if h > 0 {
            parts.push(format!("{} hundred", ONES[h as usize]));
        }
        let r = n % 100;
        if r > 0 {
            if and && !parts.is_empty() {
                parts.push("and".into());
            }
            parts.push(below_100(r, hyphen));
        }
        parts.join(" ")
    }

    /// Turns the last word of a cardinal into its ordinal spelling.
    pub(crate) fn ordinalize(words: &str) -> String {
        let (head, last) = match words.rfind([' ', '-']) {
            Some(i) => (&words[..=i], &words[i + 1..]),
            None => ("", words),
        };
        let last = match last {
            "one" => "first".to_string(),
            "two" => "second".to_string(),
            "three" => "third".to_string(),
            "five" => "fifth".to_string(),
            "eight" => "eighth".to_string(),
            "nine" => "ninth".to_string(),
            "twelve" => "twelfth".to_string(),
            w if w.ends_with('y') => format!("{}ieth", &w[..w.len() - 1]),
            w => format!("{w}th"),
        };
        format!("{head}{last}")
    }

    #[test]
    fn word_oracle_full_range() {
        let c = en();
        for n in 0..10_000u32 {
            for (hyphen, and) in [(true, false), (false, true)] {
                let w = oracle_words(n, hyphen, and);
                assert_eq!(parse_number_value(&w, &c).unwrap(), int(n as i128), "{w}");
                if n > 0 {
                    let o = ordinalize(&w);
                    assert_eq!(parse_ordinal(&o, &c).unwrap(), NumericValue::Ordinal(int(n as i128)), "{o}");
                }
            }
        }
    }

    #[test]
    fn oracle_spot_checks() {
        assert_eq!(oracle_words(1234, true, false), "one thousand two hundred thirty-four");
        assert_eq!(oracle_words(405, false, true), "four hundred and five");
        assert_eq!(ordinalize("twenty-three"), "twenty-third");
        assert_eq!(ordinalize("one hundred"), "one hundredth");
        assert_eq!(ordinalize("forty"), "fortieth");
    }
}
