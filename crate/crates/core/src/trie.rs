//! Prefix-tree dictionary tagging for currency, unit and timezone surfaces.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::Span;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DictEntry {
    pub surface: String,
    pub payload: String,
    pub case_sensitive: bool,
}

impl DictEntry {
    pub fn new(surface: &str, payload: &str) -> Self {
        DictEntry { surface: surface.to_string(), payload: payload.to_string(), case_sensitive: false }
    }

    pub fn cs(surface: &str, payload: &str) -> Self {
        DictEntry { case_sensitive: true, ..Self::new(surface, payload) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictMatch {
    pub span: Span,
    pub payload: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DictError {
    #[error("dictionary has no entries")]
    EmptyDictionary,
    #[error("surface `{0}` has conflicting payloads")]
    ConflictingEntry(String),
    #[error("empty surface")]
    EmptySurface,
}

/// Single-char lowercase fold; chars whose lowercase expands keep their
/// original form so offsets stay one-to-one.
pub fn fold(c: char) -> char {
    let mut it = c.to_lowercase();
    match (it.next(), it.next()) {
        (Some(l), None) => l,
        _ => c,
    }
}

/// Default neighbor test: letters, digits and `_` continue a word.
pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

#[derive(Debug, Clone, Default)]
struct Node {
    children: BTreeMap<char, usize>,
    terminal: Option<usize>,
}

#[derive(Debug, Clone)]
struct Trie {
    nodes: Vec<Node>,
}

impl Trie {
    fn new() -> Self {
        Trie { nodes: vec![Node::default()] }
    }

    fn insert(&mut self, key: impl Iterator<Item = char>, entry: usize) {
        let mut at = 0;
        for c in key {
            at = match self.nodes[at].children.get(&c) {
                Some(&n) => n,
                None => {
                    self.nodes.push(Node::default());
                    let n = self.nodes.len() - 1;
                    self.nodes[at].children.insert(c, n);
                    n
                }
            };
        }
        self.nodes[at].terminal = Some(entry);
    }

    /// Every (length, entry) that matches `chars` from its start.
    fn walk(&self, chars: &[char], folded: bool, out: &mut Vec<(usize, usize)>) {
        let mut at = 0;
        for (i, &c) in chars.iter().enumerate() {
            let c = if folded { fold(c) } else { c };
            match self.nodes[at].children.get(&c) {
                Some(&n) => at = n,
                None => return,
            }
            if let Some(e) = self.nodes[at].terminal {
                out.push((i + 1, e));
            }
        }
    }
}

/// Key identifying a surface: case-sensitive entries by exact text,
/// the rest by folded text.
fn key_of(e: &DictEntry) -> (bool, String) {
    if e.case_sensitive {
        (true, e.surface.clone())
    } else {
        (false, e.surface.chars().map(fold).collect())
    }
}

/// An immutable surface dictionary with longest-match-per-start lookup.
#[derive(Debug, Clone)]
pub struct Dictionary {
    entries: Vec<DictEntry>,
    exact: Trie,
    folded: Trie,
}

impl Dictionary {
    pub fn build(entries: Vec<DictEntry>) -> Result<Dictionary, DictError> {
        if entries.is_empty() {
            return Err(DictError::EmptyDictionary);
        }
        let mut seen: BTreeMap<(bool, String), DictEntry> = BTreeMap::new();
        for e in entries {
            if e.surface.is_empty() {
                return Err(DictError::EmptySurface);
            }
            match seen.get(&key_of(&e)) {
                Some(prev) if prev.payload != e.payload => {
                    return Err(DictError::ConflictingEntry(e.surface));
                }
                Some(_) => {}
                None => {
                    seen.insert(key_of(&e), e);
                }
            }
        }
        Ok(Self::from_map(seen))
    }

    fn from_map(map: BTreeMap<(bool, String), DictEntry>) -> Dictionary {
        let entries: Vec<DictEntry> = map.into_values().collect();
        let (mut exact, mut folded) = (Trie::new(), Trie::new());
        for (i, e) in entries.iter().enumerate() {
            if e.case_sensitive {
                exact.insert(e.surface.chars(), i);
            } else {
                folded.insert(e.surface.chars().map(fold), i);
            }
        }
        Dictionary { entries, exact, folded }
    }

    /// A new dictionary with `extra` added; an extra entry replaces a core
    /// entry with the same surface key.
    pub fn extend(&self, extra: Vec<DictEntry>) -> Dictionary {
        let mut map: BTreeMap<_, _> = self.entries.iter().map(|e| (key_of(e), e.clone())).collect();
        for e in extra.into_iter().filter(|e| !e.surface.is_empty()) {
            map.insert(key_of(&e), e);
        }
        Self::from_map(map)
    }

    pub fn entries(&self) -> &[DictEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Payload for a whole surface, honoring case sensitivity.
    pub fn lookup(&self, surface: &str) -> Option<&str> {
        let chars: Vec<char> = surface.chars().collect();
        let mut hits = Vec::new();
        self.exact.walk(&chars, false, &mut hits);
        self.folded.walk(&chars, true, &mut hits);
        hits.into_iter()
            .find(|&(len, _)| len == chars.len())
            .map(|(_, e)| self.entries[e].payload.as_str())
    }

    /// All matches under the default word-boundary rule.
    pub fn find_all(&self, text: &str) -> Vec<DictMatch> {
        self.find_all_by(text, is_word_char)
    }

    /// All matches, longest per start position, sorted by (start, -length).
    ///
    /// An edge of a surface that is alphanumeric must not be adjacent to a
    /// text character for which `joins` holds; symbol edges (`$`, `€`) are
    /// never boundary-checked.
    pub fn find_all_by(&self, text: &str, joins: impl Fn(char) -> bool) -> Vec<DictMatch> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let mut hits = Vec::new();
        for start in 0..chars.len() {
            hits.clear();
            self.exact.walk(&chars[start..], false, &mut hits);
            self.folded.walk(&chars[start..], true, &mut hits);
            let best = hits
                .iter()
                .filter(|&&(len, _)| {
                    let first = chars[start];
                    let last = chars[start + len - 1];
                    let left_ok = !(first.is_alphanumeric() && start > 0 && joins(chars[start - 1]));
                    let right_ok = !(last.is_alphanumeric()
                        && chars.get(start + len).is_some_and(|&c| joins(c)));
                    left_ok && right_ok
                })
                // exact-case entries win a length tie over folded ones
                .max_by_key(|&&(len, e)| (len, self.entries[e].case_sensitive));
            if let Some(&(len, e)) = best {
                out.push(DictMatch { span: Span::new(start, len), payload: self.entries[e].payload.clone() });
            }
        }
        out
    }
}
