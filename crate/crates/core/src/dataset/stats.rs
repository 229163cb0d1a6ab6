//! Per-language dataset statistics: sentences per sub-type, sentence
//! length and entity counts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::Serialize;

use crate::model::{subtype_of, EntitySubType, SubTypeGroup};

use super::NtxDocument;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LanguageStats {
    /// All sentences, including those without entities.
    pub sentences: usize,
    pub distinct: usize,
    /// Sentence length in characters.
    pub avg_length: f64,
    pub stdev_length: f64,
    pub entities: usize,
    /// Entities per sentence over all sentences.
    pub entities_avg: f64,
    pub entities_stdev: f64,
    pub numex_sentences: usize,
    pub timex_sentences: usize,
    /// Sentences with at least one entity of any kind. The name follows a
    /// row label in published tables whose meaning is not spelled out.
    pub model_overall: usize,
    /// Sentences that are nothing but one mention ("tomorrow", "$5.").
    pub mention_only: usize,
    pub not_supported: usize,
    /// Sentences containing each sub-type, keyed by the annotated name.
    pub by_subtype: BTreeMap<String, usize>,
}

impl LanguageStats {
    pub fn mention_only_fraction(&self) -> f64 {
        if self.sentences == 0 { 0.0 } else { self.mention_only as f64 / self.sentences as f64 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DatasetStats {
    pub languages: BTreeMap<String, LanguageStats>,
}

/// Mean and population standard deviation from integer sums, so the result
/// does not depend on document order.
fn moments(n: usize, sum: u128, sum_sq: u128) -> (f64, f64) {
    if n == 0 {
        return (0.0, 0.0);
    }
    let n = n as u128;
    let var_num = n * sum_sq - sum * sum;
    ((sum as f64) / (n as f64), ((var_num as f64) / ((n * n) as f64)).sqrt())
}

fn is_mention_only(doc: &NtxDocument) -> bool {
    let body = doc.text.trim().trim_end_matches(['.', '!', '?']).trim_end();
    matches!(doc.entities.as_slice(), [e] if e.text == body)
}

pub fn stats(docs: &[NtxDocument]) -> DatasetStats {
    #[derive(Default)]
    struct Acc {
        texts: BTreeSet<String>,
        len: (u128, u128),
        ents: (u128, u128),
        s: LanguageStats,
    }
    let mut acc: BTreeMap<String, Acc> = BTreeMap::new();
    for doc in docs {
        let a = acc.entry(doc.lang.clone()).or_default();
        a.s.sentences += 1;
        a.texts.insert(doc.text.clone());
        let l = doc.text.chars().count() as u128;
        let k = doc.entities.len() as u128;
        a.len = (a.len.0 + l, a.len.1 + l * l);
        a.ents = (a.ents.0 + k, a.ents.1 + k * k);
        a.s.entities += doc.entities.len();
        a.s.not_supported += doc.entities.iter().filter(|e| e.not_supported).count();
        let types: BTreeSet<&str> = doc.entities.iter().map(|e| e.sub_type.as_str()).collect();
        for t in &types {
            *a.s.by_subtype.entry(t.to_string()).or_default() += 1;
        }
        let groups: BTreeSet<bool> = types
            .iter()
            .filter_map(|t| subtype_of(t).ok())
            .map(|t| t.group() == SubTypeGroup::Temporal)
            .collect();
        a.s.numex_sentences += groups.contains(&false) as usize;
        a.s.timex_sentences += groups.contains(&true) as usize;
        a.s.model_overall += !doc.entities.is_empty() as usize;
        a.s.mention_only += is_mention_only(doc) as usize;
    }
    let languages = acc
        .into_iter()
        .map(|(lang, a)| {
            let mut s = a.s;
            s.distinct = a.texts.len();
            (s.avg_length, s.stdev_length) = moments(s.sentences, a.len.0, a.len.1);
            (s.entities_avg, s.entities_stdev) = moments(s.sentences, a.ents.0, a.ents.1);
            (lang, s)
        })
        .collect();
    DatasetStats { languages }
}

fn f4(x: f64) -> String {
    format!("{x:.4}")
}

/// TOML form compared against a corpus manifest; fractional values are
/// fixed 4-decimal strings.
pub fn to_manifest(st: &DatasetStats) -> toml::Table {
    let mut root = toml::Table::new();
    for (lang, s) in &st.languages {
        let mut t = toml::Table::new();
        let int = |n: usize| toml::Value::Integer(n as i64);
        t.insert("sentences".into(), int(s.sentences));
        t.insert("distinct".into(), int(s.distinct));
        t.insert("avg_length".into(), f4(s.avg_length).into());
        t.insert("stdev_length".into(), f4(s.stdev_length).into());
        t.insert("entities".into(), int(s.entities));
        t.insert("entities_avg".into(), f4(s.entities_avg).into());
        t.insert("entities_stdev".into(), f4(s.entities_stdev).into());
        t.insert("numex_sentences".into(), int(s.numex_sentences));
        t.insert("timex_sentences".into(), int(s.timex_sentences));
        t.insert("model_overall".into(), int(s.model_overall));
        t.insert("mention_only".into(), int(s.mention_only));
        t.insert("mention_only_fraction".into(), f4(s.mention_only_fraction()).into());
        t.insert("not_supported".into(), int(s.not_supported));
        let by: toml::Table = s.by_subtype.iter().map(|(k, v)| (k.clone(), int(*v))).collect();
        t.insert("by_subtype".into(), by.into());
        root.insert(lang.clone(), t.into());
    }
    root
}

/// Sub-type rows per group, then group and overall rows, then length and
/// entity statistics; one column per language.
pub fn render_table(st: &DatasetStats) -> String {
    let langs: Vec<&String> = st.languages.keys().collect();
    let mut out = String::new();
    let row = |out: &mut String, label: &str, cells: Vec<String>| {
        let _ = write!(out, "{label:<22}");
        for c in cells {
            let _ = write!(out, "{c:>10}");
        }
        out.push('\n');
    };
    row(&mut out, "", langs.iter().map(|l| l.to_string()).collect());
    let count = |name: &str| langs.iter().map(|l| st.languages[*l].by_subtype.get(name).copied().unwrap_or(0).to_string()).collect();
    let col = |f: &dyn Fn(&LanguageStats) -> String| langs.iter().map(|l| f(&st.languages[*l])).collect::<Vec<_>>();
    for (group, title) in [(false, "Numex"), (true, "Timex")] {
        let _ = writeln!(out, "-- {title}");
        for t in EntitySubType::ALL.iter().filter(|t| (t.group() == SubTypeGroup::Temporal) == group) {
            row(&mut out, t.name(), count(t.name()));
        }
    }
    let known: BTreeSet<&str> = EntitySubType::ALL.iter().map(|t| t.name()).collect();
    let unknown: BTreeSet<&String> =
        st.languages.values().flat_map(|s| s.by_subtype.keys()).filter(|k| !known.contains(k.as_str())).collect();
    if !unknown.is_empty() {
        let _ = writeln!(out, "-- Unknown sub-types");
        for u in unknown {
            row(&mut out, u, count(u));
        }
    }
    let _ = writeln!(out, "-- Sentences");
    row(&mut out, "Numex", col(&|s| s.numex_sentences.to_string()));
    row(&mut out, "Timex", col(&|s| s.timex_sentences.to_string()));
    row(&mut out, "Model - Overall*", col(&|s| s.model_overall.to_string()));
    row(&mut out, "Overall", col(&|s| s.sentences.to_string()));
    row(&mut out, "Distinct", col(&|s| s.distinct.to_string()));
    row(&mut out, "Avg. Length", col(&|s| f4(s.avg_length)));
    row(&mut out, "Stdev", col(&|s| f4(s.stdev_length)));
    row(&mut out, "Mention-only", col(&|s| s.mention_only.to_string()));
    row(&mut out, "Mention-only frac.", col(&|s| f4(s.mention_only_fraction())));
    let _ = writeln!(out, "-- Entities");
    row(&mut out, "Total", col(&|s| s.entities.to_string()));
    row(&mut out, "Average", col(&|s| f4(s.entities_avg)));
    row(&mut out, "Stdev", col(&|s| f4(s.entities_stdev)));
    row(&mut out, "notSupported", col(&|s| s.not_supported.to_string()));
    out.push_str("* sentences with any entity; reconstructed meaning of the published row label\n");
    out
}
