//! Word lists keyed by category, loaded from `lexicon.tsv`.

use std::collections::BTreeMap;

/// Lowercases and collapses internal whitespace so lookups ignore layout.
pub fn normalize_surface(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    /// category → normalized surface → value
    entries: BTreeMap<String, BTreeMap<String, String>>,
}

impl Lexicon {
    /// Parses `surface<TAB>category<TAB>value` lines; `#` starts a comment.
    pub fn parse(src: &str) -> Result<Lexicon, String> {
        let mut lex = Lexicon::default();
        for (i, line) in src.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 || cols.iter().any(|c| c.trim().is_empty()) {
                return Err(format!("lexicon line {}: expected surface, category, value", i + 1));
            }
            lex.insert(cols[1].trim(), cols[0].trim(), cols[2].trim());
        }
        Ok(lex)
    }

    pub fn insert(&mut self, category: &str, surface: &str, value: &str) {
        self.entries
            .entry(category.to_string())
            .or_default()
            .insert(normalize_surface(surface), value.to_string());
    }

    pub fn value(&self, category: &str, surface: &str) -> Option<&str> {
        self.entries.get(category)?.get(&normalize_surface(surface)).map(String::as_str)
    }

    pub fn contains(&self, category: &str, surface: &str) -> bool {
        self.value(category, surface).is_some()
    }

    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Surfaces of a category, optionally restricted to the given values.
    pub fn surfaces(&self, category: &str, values: Option<&[&str]>) -> Vec<&str> {
        self.entries
            .get(category)
            .map(|m| {
                m.iter()
                    .filter(|(_, v)| values.is_none_or(|vs| vs.contains(&v.as_str())))
                    .map(|(s, _)| s.as_str())
                    .collect()
            })
            .unwrap_or_default()
    }

    /// A regex alternation over the surfaces, longest first, with inner
    /// whitespace matching any run of spaces.
    pub fn alternation(&self, category: &str, values: Option<&[&str]>) -> Option<String> {
        let mut surfaces = self.surfaces(category, values);
        if surfaces.is_empty() {
            return None;
        }
        surfaces.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));
        let alts: Vec<String> = surfaces
            .iter()
            .map(|s| s.split(' ').map(regex::escape).collect::<Vec<_>>().join(r"\s+"))
            .collect();
        Some(format!("(?:{})", alts.join("|")))
    }
}
