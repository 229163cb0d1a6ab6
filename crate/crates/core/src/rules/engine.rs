use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use super::{CaptureRule, CompositionRule, FilterKind, RawExtraction, RuleError, RuleSet};
use crate::lang::overrides::TokenBoundaryFn;
use crate::model::{CharIndex, Span};

/// Widest gap (in chars) a composition connector may span.
pub const MAX_GAP: usize = 24;

/// All matches of every rule, in rule order then match start. A match whose
/// mention span fails the boundary test is skipped and the search resumes
/// one character later, so a rejected match cannot hide a valid one.
pub fn run_capture(rules: &[CaptureRule], text: &str, boundary: TokenBoundaryFn) -> Vec<RawExtraction> {
    let idx = CharIndex::new(text);
    let mut out = Vec::new();
    for rule in rules {
        let names: Vec<&str> = rule.regex.capture_names().flatten().collect();
        let mut pos = 0;
        while pos <= text.len() {
            let Some(caps) = rule.regex.captures_at(text, pos) else { break };
            let whole = caps.get(0).expect("group 0");
            let m = caps.name("span").unwrap_or(whole);
            let next_pos = if whole.end() > whole.start() {
                whole.end()
            } else {
                whole.end() + text[whole.end()..].chars().next().map_or(1, char::len_utf8)
            };
            let prev = text[..m.start()].chars().next_back();
            let next = text[m.end()..].chars().next();
            if m.start() == m.end() || !boundary(prev, m.as_str(), next) {
                pos = whole.start() + text[whole.start()..].chars().next().map_or(1, char::len_utf8);
                continue;
            }
            let mut ex = RawExtraction::new(idx.span_of_bytes(m.start(), m.end()), rule.sub_type, &rule.id, rule.priority);
            for name in &names {
                if let Some(g) = caps.name(name) {
                    ex.capture_groups.insert(name.to_string(), g.as_str().to_string());
                }
            }
            out.push(ex);
            pos = next_pos;
        }
    }
    out
}

fn sort_key(e: &RawExtraction) -> (usize, std::cmp::Reverse<usize>, u8, i32) {
    (e.span.start, std::cmp::Reverse(e.span.length), e.sub_type.arbitration_rank(), e.priority)
}

fn state_hash(list: &[RawExtraction]) -> u64 {
    let mut h = DefaultHasher::new();
    for e in list {
        (e.span, e.sub_type, &e.rule_trail).hash(&mut h);
    }
    h.finish()
}

/// Merges adjacent extractions until no rule fires. Each round applies the
/// first rule (in table order) that has a matching pair, scanning left
/// parts left to right; `accept` may veto a merge, e.g. when the combined
/// value cannot be normalized.
pub fn run_composition(
    rules: &[CompositionRule],
    extractions: Vec<RawExtraction>,
    text: &str,
    accept: &dyn Fn(&RawExtraction) -> bool,
) -> Result<Vec<RawExtraction>, RuleError> {
    let idx = CharIndex::new(text);
    let mut list = extractions;
    list.sort_by_key(sort_key);
    let mut seen = HashSet::new();
    let mut merges = 0;
    loop {
        if !seen.insert(state_hash(&list)) {
            return Err(RuleError::CompositionCycle(merges));
        }
        match find_merge(rules, &list, text, &idx, accept) {
            Some((i, j, merged)) => {
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                list.remove(hi);
                list.remove(lo);
                list.push(merged);
                list.sort_by_key(sort_key);
                merges += 1;
            }
            None => return Ok(list),
        }
    }
}

fn find_merge(
    rules: &[CompositionRule],
    list: &[RawExtraction],
    text: &str,
    idx: &CharIndex,
    accept: &dyn Fn(&RawExtraction) -> bool,
) -> Option<(usize, usize, RawExtraction)> {
    for rule in rules {
        for (i, l) in list.iter().enumerate() {
            if !rule.left.contains(&l.sub_type) {
                continue;
            }
            for (j, r) in list.iter().enumerate() {
                if !rule.right.contains(&r.sub_type) || r.span.start < l.span.end() {
                    continue;
                }
                if r.span.start - l.span.end() > MAX_GAP {
                    continue;
                }
                let (g0, g1) = idx.bytes_of_span(Span::new(l.span.end(), r.span.start - l.span.end()));
                if !rule.connector.is_match(&text[g0..g1]) {
                    continue;
                }
                let mut start = l.span.start;
                if let Some(prefix) = &rule.prefix {
                    let (b0, _) = idx.bytes_of_span(l.span);
                    match prefix.find(&text[..b0]) {
                        Some(m) => start = idx.char_of(m.start()),
                        None => continue,
                    }
                }
                let span = Span::new(start, r.span.end() - start);
                let mut trail = l.rule_trail.clone();
                trail.extend(r.rule_trail.iter().cloned());
                trail.push(rule.id.clone());
                let merged = RawExtraction {
                    span,
                    sub_type: rule.sub_type,
                    rule_trail: trail,
                    capture_groups: Default::default(),
                    priority: l.priority.min(r.priority),
                    children: vec![l.clone(), r.clone()],
                    combiner: Some(rule.combiner),
                };
                if accept(&merged) {
                    return Some((i, j, merged));
                }
            }
        }
    }
    None
}

/// Kept extractions plus every dropped one with the id of the rule that
/// removed it.
#[derive(Debug, Clone, Default)]
pub struct FilterOutcome {
    pub kept: Vec<RawExtraction>,
    pub dropped: Vec<(RawExtraction, String)>,
}

pub fn run_filter(rules: &RuleSet, extractions: Vec<RawExtraction>, text: &str) -> Vec<RawExtraction> {
    run_filter_audited(rules, extractions, text).kept
}

/// Negative lookups and context guards first, then overlap arbitration:
/// longest span, then sub-type rank, then leftmost, then lowest rule
/// priority number. Output is non-overlapping and sorted by start.
pub fn run_filter_audited(rules: &RuleSet, extractions: Vec<RawExtraction>, text: &str) -> FilterOutcome {
    let idx = CharIndex::new(text);
    let mut out = FilterOutcome::default();
    let mut survivors = Vec::new();
    'next: for e in extractions {
        let (b0, b1) = idx.bytes_of_span(e.span);
        let surface = &text[b0..b1];
        for f in rules.filter.iter().filter(|f| f.kind != FilterKind::OverlapPolicy && f.applies_to(e.sub_type)) {
            let hit = f.surface.as_ref().is_none_or(|r| r.is_match(surface))
                && f.left.as_ref().is_none_or(|r| r.is_match(&text[..b0]))
                && f.right.as_ref().is_none_or(|r| r.is_match(&text[b1..]));
            if hit {
                out.dropped.push((e, f.id.clone()));
                continue 'next;
            }
        }
        survivors.push(e);
    }
    survivors.sort_by(|a, b| {
        b.span
            .length
            .cmp(&a.span.length)
            .then(a.sub_type.arbitration_rank().cmp(&b.sub_type.arbitration_rank()))
            .then(a.span.start.cmp(&b.span.start))
            .then(a.priority.cmp(&b.priority))
            .then(a.rule_trail.cmp(&b.rule_trail))
    });
    let overlap_id = rules.overlap_rule_id().to_string();
    for e in survivors {
        if out.kept.iter().any(|k: &RawExtraction| k.span.overlaps(&e.span)) {
            out.dropped.push((e, overlap_id.clone()));
        } else {
            out.kept.push(e);
        }
    }
    out.kept.sort_by_key(|e| e.span.start);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::overrides::Overrides;
    use crate::model::EntitySubType as T;
    use crate::rules::{Defs, RuleSet};

    const RULES: &str = r#"
[defs]
WORDNUM = 'twenty(?:-(?:one|two|three))?|one|two|three'
[[capture]]
id = "cardinal.words"
subtype = "cardinal"
pattern = '{WORDNUM}'
[[capture]]
id = "cardinal.digits"
subtype = "cardinal"
pattern = '\d+'
[[capture]]
id = "month"
subtype = "daterange"
pattern = 'february|may'
[[capture]]
id = "end-of"
subtype = "daterange"
pattern = 'the end of \d{4}'
[[capture]]
id = "date"
subtype = "date"
pattern = 'march \d{1,2}'
[[capture]]
id = "time"
subtype = "time"
pattern = '\d{1,2} p\.m\.'
[[composition]]
id = "compose.datetime"
left = ["date"]
right = ["time"]
connector = '\s*'
subtype = "datetime"
combiner = "datetime"
[[composition]]
id = "compose.range"
left = ["daterange"]
right = ["daterange"]
prefix = 'from\s+'
connector = '\s+to\s+'
subtype = "daterange"
combiner = "range"
[[filter]]
id = "guard.modal-may"
kind = "contextGuard"
subtypes = ["daterange"]
surface = 'may'
right = '\s+(?:i|we|you)\b'
"#;

    fn rules() -> RuleSet {
        RuleSet::load(RULES, &Defs::default()).unwrap()
    }

    fn boundary() -> TokenBoundaryFn {
        Overrides::empty().token_boundary()
    }

    fn surfaces(list: &[RawExtraction], text: &str) -> Vec<String> {
        list.iter().map(|e| e.surface(text).to_string()).collect()
    }

    #[test]
    fn capture_words() {
        let text = "I have twenty-three apples";
        let caps = run_capture(&rules().capture, text, boundary());
        let filtered = run_filter(&rules(), caps, text);
        assert_eq!(surfaces(&filtered, text), ["twenty-three"]);
        assert_eq!(filtered[0].sub_type, T::Cardinal);
        assert!(run_capture(&rules().capture, "", boundary()).is_empty());
    }

    #[test]
    fn capture_retries_after_boundary_rejection() {
        let text = "someone one";
        let caps = run_capture(&rules().capture, text, boundary());
        assert_eq!(surfaces(&caps, text), ["one"]);
        assert_eq!(caps[0].span, Span::new(8, 3));
    }

    #[test]
    fn composition_merges_adjacent() {
        let r = rules();
        let text = "March 12 3 p.m.";
        let caps = run_capture(&r.capture, text, boundary());
        let composed = run_composition(&r.composition, caps, text, &|_| true).unwrap();
        let kept = run_filter(&r, composed, text);
        assert_eq!(surfaces(&kept, text), ["March 12 3 p.m."]);
        assert_eq!(kept[0].sub_type, T::DateTime);
        assert_eq!(kept[0].children.len(), 2);
        assert_eq!(kept[0].rule_id(), "compose.datetime");
    }

    #[test]
    fn composition_with_prefix() {
        let r = rules();
        let text = "from February to the end of 2012";
        let caps = run_capture(&r.capture, text, boundary());
        let composed = run_composition(&r.composition, caps, text, &|_| true).unwrap();
        let kept = run_filter(&r, composed, text);
        assert_eq!(surfaces(&kept, text), [text]);
        assert_eq!(kept[0].sub_type, T::DateRange);
        let vetoed = run_composition(&r.composition, run_capture(&r.capture, text, boundary()), text, &|_| false).unwrap();
        assert!(vetoed.iter().all(|e| e.children.is_empty()));
    }

    #[test]
    fn single_extraction_is_a_fixed_point() {
        let r = rules();
        let text = "February";
        let caps = run_capture(&r.capture, text, boundary());
        let composed = run_composition(&r.composition, caps.clone(), text, &|_| true).unwrap();
        assert_eq!(composed, caps);
    }

    #[test]
    fn overlap_and_guards() {
        let r = rules();
        let text = "the end of 2012";
        let out = run_filter_audited(&r, run_capture(&r.capture, text, boundary()), text);
        assert_eq!(surfaces(&out.kept, text), [text]);
        assert_eq!(out.dropped.len(), 1);
        assert_eq!(out.dropped[0].1, "overlap");

        let text = "May I help you?";
        let out = run_filter_audited(&r, run_capture(&r.capture, text, boundary()), text);
        assert!(out.kept.is_empty());
        assert_eq!(out.dropped[0].1, "guard.modal-may");

        let text = "one and 2";
        let caps = run_capture(&r.capture, text, boundary());
        assert_eq!(run_filter(&r, caps.clone(), text), caps);
    }

    #[test]
    fn arbitration_tie_breaks() {
        let mk = |start, len, t, p| {
            let mut e = RawExtraction::new(Span::new(start, len), t, "r", p);
            e.priority = p;
            e
        };
        let r = RuleSet::default();
        let kept = run_filter(&r, vec![mk(0, 4, T::Cardinal, 0), mk(0, 4, T::Date, 0)], "2012");
        assert_eq!(kept[0].sub_type, T::Date);
        let kept = run_filter(&r, vec![mk(2, 4, T::Cardinal, 0), mk(0, 4, T::Cardinal, 0)], "abcdefgh");
        assert_eq!(kept[0].span.start, 0);
        let kept = run_filter(&r, vec![mk(0, 4, T::Cardinal, 5), mk(0, 4, T::Cardinal, 1)], "abcd");
        assert_eq!(kept[0].priority, 1);
    }
}
