//! Precision/recall/F1 at four nested levels: span, type, normalization and
//! resolution.

use std::collections::BTreeMap;
use std::fmt::{self, Write};

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::dataset::{GoldEntity, NtxDocument};
use crate::datetime::resolve::SET_EXEMPLARS;
use crate::lang::LanguageConfig;
use crate::model::{subtype_of, Normalized};
use crate::recognizer::{recognize, RecognizeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Span,
    Type,
    Normalization,
    Resolution,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Span, Level::Type, Level::Normalization, Level::Resolution];

    pub fn name(self) -> &'static str {
        match self {
            Level::Span => "span",
            Level::Type => "type",
            Level::Normalization => "normalization",
            Level::Resolution => "resolution",
        }
    }

    pub fn from_name(s: &str) -> Option<Level> {
        Level::ALL.into_iter().find(|l| l.name() == s)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{gold} gold documents but {predicted} prediction lists")]
    Alignment { gold: usize, predicted: usize },
    #[error("document {doc}: {source}")]
    Recognize { doc: usize, source: RecognizeError },
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ScoreOptions {
    /// Score gold entities flagged `notSupported` instead of skipping them.
    pub include_unsupported: bool,
}

fn four<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64((x * 1e4).round() / 1e4)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 { 0.0 } else { a as f64 / b as f64 }
}

impl Counts {
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) }
    }

    fn add(&mut self, o: Counts) {
        self.tp += o.tp;
        self.fp += o.fp;
        self.fn_ += o.fn_;
    }
}

/// One row of the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub lang: String,
    #[serde(rename = "subType")]
    pub sub_type: String,
    pub level: Level,
    #[serde(rename = "truePositives")]
    pub tp: usize,
    #[serde(rename = "falsePositives")]
    pub fp: usize,
    #[serde(rename = "falseNegatives")]
    pub fn_: usize,
    #[serde(serialize_with = "four")]
    pub precision: f64,
    #[serde(serialize_with = "four")]
    pub recall: f64,
    #[serde(serialize_with = "four")]
    pub f1: f64,
}

impl Cell {
    fn new(lang: &str, sub_type: &str, level: Level, c: Counts) -> Self {
        Cell {
            lang: lang.to_string(),
            sub_type: sub_type.to_string(),
            level,
            tp: c.tp,
            fp: c.fp,
            fn_: c.fn_,
            precision: c.precision(),
            recall: c.recall(),
            f1: c.f1(),
        }
    }

    pub fn counts(&self) -> Counts {
        Counts { tp: self.tp, fp: self.fp, fn_: self.fn_ }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rollup {
    pub level: Level,
    #[serde(rename = "truePositives")]
    pub tp: usize,
    #[serde(rename = "falsePositives")]
    pub fp: usize,
    #[serde(rename = "falseNegatives")]
    pub fn_: usize,
    #[serde(serialize_with = "four")]
    pub precision: f64,
    #[serde(serialize_with = "four")]
    pub recall: f64,
    #[serde(serialize_with = "four")]
    pub f1: f64,
    /// Unweighted mean F1 over the (language, sub-type) cells of the level.
    #[serde(rename = "macroF1", serialize_with = "four")]
    pub macro_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    pub version: u32,
    #[serde(rename = "includeUnsupported")]
    pub include_unsupported: bool,
    /// Gold entities left out because they are flagged `notSupported`.
    pub excluded: usize,
    pub cells: Vec<Cell>,
    pub micro: Vec<Rollup>,
}

pub const REPORT_VERSION: u32 = 1;

impl ScoreReport {
    pub fn rollup(&self, level: Level) -> &Rollup {
        &self.micro[level as usize]
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text table; `only` restricts it to one level.
    pub fn render_table(&self, only: Option<Level>) -> String {
        let mut out = String::new();
        let show = |l: Level| only.is_none_or(|o| o == l);
        let _ = writeln!(
            out,
            "{:<6}{:<16}{:<15}{:>6}{:>6}{:>6}{:>9}{:>9}{:>9}",
            "lang", "subType", "level", "TP", "FP", "FN", "P", "R", "F1"
        );
        for c in self.cells.iter().filter(|c| show(c.level)) {
            let _ = writeln!(
                out,
                "{:<6}{:<16}{:<15}{:>6}{:>6}{:>6}{:>9.4}{:>9.4}{:>9.4}",
                c.lang, c.sub_type, c.level.name(), c.tp, c.fp, c.fn_, c.precision, c.recall, c.f1
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<22}{:>6}{:>6}{:>6}{:>9}{:>9}{:>9}{:>9}",
            "micro", "TP", "FP", "FN", "P", "R", "F1", "macroF1"
        );
        for r in self.micro.iter().filter(|r| show(r.level)) {
            let _ = writeln!(
                out,
                "{:<22}{:>6}{:>6}{:>6}{:>9.4}{:>9.4}{:>9.4}{:>9.4}",
                r.level.name(),
                r.tp,
                r.fp,
                r.fn_,
                r.precision,
                r.recall,
                r.f1,
                r.macro_f1
            );
        }
        if self.excluded > 0 {
            let _ = writeln!(out, "{} notSupported gold entities excluded", self.excluded);
        }
        out
    }
}

fn canonical(e: &GoldEntity) -> String {
    subtype_of(&e.sub_type)
        .ok()
        .and_then(|t| Normalized::parse_for(t, &e.value).ok())
        .map(|n| n.to_string())
        .unwrap_or_else(|| e.value.clone())
}

/// How many levels a prediction reaches against a gold entity on the same
/// span: 1 = span only, up to 4 = resolution.
fn depth(p: &GoldEntity, g: &GoldEntity) -> usize {
    if p.sub_type != g.sub_type {
        return 1;
    }
    if canonical(p) != canonical(g) {
        return 2;
    }
    let resolved = g.resolutions.is_empty()
        || p.resolutions.iter().any(|pr| g.resolutions.iter().any(|gr| pr.matches_gold(gr, SET_EXEMPLARS)));
    if resolved { 4 } else { 3 }
}

type Key = (String, String, Level);

struct Tally<'a> {
    lang: &'a str,
    cells: BTreeMap<Key, Counts>,
}

impl Tally<'_> {
    fn at(&mut self, sub_type: &str, level: Level) -> &mut Counts {
        self.cells.entry((self.lang.to_string(), sub_type.to_string(), level)).or_default()
    }
}

fn score_doc(lang: &str, gold: &[GoldEntity], pred: &[GoldEntity], opts: ScoreOptions) -> (BTreeMap<Key, Counts>, usize) {
    let mut t = Tally { lang, cells: BTreeMap::new() };
    let excluded: Vec<&GoldEntity> = gold.iter().filter(|g| g.not_supported && !opts.include_unsupported).collect();
    let scored: Vec<&GoldEntity> = gold.iter().filter(|g| !g.not_supported || opts.include_unsupported).collect();
    let mut matched = vec![false; scored.len()];
    for p in pred {
        let same_span = |g: &GoldEntity| g.start == p.start && g.length == p.length;
        let best = scored
            .iter()
            .enumerate()
            .filter(|(i, g)| !matched[*i] && same_span(g))
            .map(|(i, g)| (depth(p, g), i))
            .max_by_key(|&(d, i)| (d, std::cmp::Reverse(i)));
        match best {
            Some((d, i)) => {
                matched[i] = true;
                for (n, level) in Level::ALL.into_iter().enumerate() {
                    if n < d {
                        t.at(&scored[i].sub_type, level).tp += 1;
                    } else {
                        // a level the pair misses counts against both sides
                        t.at(&p.sub_type, level).fp += 1;
                        t.at(&scored[i].sub_type, level).fn_ += 1;
                    }
                }
            }
            None if excluded.iter().any(|g| same_span(g)) => {}
            None => Level::ALL.into_iter().for_each(|l| t.at(&p.sub_type, l).fp += 1),
        }
    }
    for (i, g) in scored.iter().enumerate() {
        if !matched[i] {
            Level::ALL.into_iter().for_each(|l| t.at(&g.sub_type, l).fn_ += 1);
        }
    }
    (t.cells, excluded.len())
}

/// Scores predictions against gold, aligned by document index.
pub fn score(gold: &[NtxDocument], predicted: &[Vec<GoldEntity>], opts: ScoreOptions) -> Result<ScoreReport, EvalError> {
    if gold.len() != predicted.len() {
        return Err(EvalError::Alignment { gold: gold.len(), predicted: predicted.len() });
    }
    let mut all: BTreeMap<Key, Counts> = BTreeMap::new();
    let mut excluded = 0;
    for (doc, pred) in gold.iter().zip(predicted) {
        let (cells, ex) = score_doc(&doc.lang, &doc.entities, pred, opts);
        excluded += ex;
        for (k, c) in cells {
            all.entry(k).or_default().add(c);
        }
    }
    // Every (lang, sub-type) seen at any level appears at all four.
    let pairs: Vec<(String, String)> = {
        let mut v: Vec<_> = all.keys().map(|(l, t, _)| (l.clone(), t.clone())).collect();
        v.dedup();
        v
    };
    let mut cells = Vec::new();
    for (lang, t) in &pairs {
        for level in Level::ALL {
            let c = all.get(&(lang.clone(), t.clone(), level)).copied().unwrap_or_default();
            cells.push(Cell::new(lang, t, level, c));
        }
    }
    let micro = Level::ALL
        .into_iter()
        .map(|level| {
            let mut c = Counts::default();
            let at: Vec<&Cell> = cells.iter().filter(|x| x.level == level).collect();
            for x in &at {
                c.add(x.counts());
            }
            let macro_f1 = if at.is_empty() { 0.0 } else { at.iter().map(|x| x.f1).sum::<f64>() / at.len() as f64 };
            Rollup {
                level,
                tp: c.tp,
                fp: c.fp,
                fn_: c.fn_,
                precision: c.precision(),
                recall: c.recall(),
                f1: c.f1(),
                macro_f1,
            }
        })
        .collect();
    Ok(ScoreReport { version: REPORT_VERSION, include_unsupported: opts.include_unsupported, excluded, cells, micro })
}

/// Runs the recognizer on every document with the document's own anchor.
/// Output order follows `docs` whatever the thread count.
pub fn predict(config: &LanguageConfig, docs: &[NtxDocument]) -> Result<Vec<Vec<GoldEntity>>, EvalError> {
    docs.par_iter()
        .enumerate()
        .map(|(doc, d)| {
            recognize(config, &d.text, d.anchor.as_ref())
                .map(|ms| ms.iter().map(GoldEntity::from).collect())
                .map_err(|source| EvalError::Recognize { doc, source })
        })
        .collect()
}

pub fn run_and_score(config: &LanguageConfig, docs: &[NtxDocument], opts: ScoreOptions) -> Result<ScoreReport, EvalError> {
    let predicted = predict(config, docs)?;
    score(docs, &predicted, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::parse_dataset;
    use std::path::Path;

    fn ent(start: usize, length: usize, t: &str, v: &str) -> GoldEntity {
        GoldEntity {
            start,
            length,
            text: "x".repeat(length),
            sub_type: t.into(),
            value: v.into(),
            resolutions: vec![],
            not_supported: false,
            note: None,
            extra: Default::default(),
        }
    }

    fn doc(entities: Vec<GoldEntity>) -> NtxDocument {
        NtxDocument { text: "x".repeat(40), lang: "en".into(), anchor: None, entities, extra: Default::default() }
    }

    #[test]
    fn three_gold_two_predicted() {
        let gold = vec![doc(vec![ent(0, 3, "cardinal", "3"), ent(10, 5, "date", "XXXX-11"), ent(20, 2, "ordinal", "ORD(2)")])];
        let pred = vec![vec![ent(0, 3, "cardinal", "3"), ent(30, 4, "cardinal", "4")]];
        let r = score(&gold, &pred, ScoreOptions::default()).unwrap();
        let s = r.rollup(Level::Span);
        assert_eq!((s.tp, s.fp, s.fn_), (1, 1, 2));
        assert!((s.precision - 0.5).abs() < 1e-9);
        assert!((s.recall - 1.0 / 3.0).abs() < 1e-9);
        assert!((s.f1 - 0.4).abs() < 1e-9);
    }

    #[test]
    fn levels_nest() {
        let gold = vec![doc(vec![ent(0, 3, "cardinal", "3"), ent(5, 3, "cardinal", "4"), ent(10, 3, "date", "XXXX-11")])];
        let pred = vec![vec![ent(0, 3, "ordinal", "ORD(3)"), ent(5, 3, "cardinal", "5"), ent(10, 3, "date", "XXXX-11")]];
        let r = score(&gold, &pred, ScoreOptions::default()).unwrap();
        let tp: Vec<usize> = Level::ALL.iter().map(|l| r.rollup(*l).tp).collect();
        assert_eq!(tp, [3, 2, 1, 1]);
        for l in Level::ALL {
            let x = r.rollup(l);
            assert_eq!(x.tp + x.fp, 3);
            assert_eq!(x.tp + x.fn_, 3);
        }
        assert!(r.render_table(None).contains("macroF1"));
    }

    #[test]
    fn either_modality_counts() {
        let src = r#"[{"text": "Call me Friday", "lang": "en", "anchor": "2022-07-06",
          "entities": [{"start": 8, "length": 6, "text": "Friday", "type": "date", "value": "XXXX-WXX-5",
            "resolutions": [{"timeline": "value", "value": "2022-07-01", "modality": "past"},
                            {"timeline": "value", "value": "2022-07-08", "modality": "future"}]}]}]"#;
        let gold = parse_dataset(src, Path::new("t")).unwrap();
        let mut p = gold[0].entities[0].clone();
        p.resolutions.truncate(1);
        let r = score(&gold, &[vec![p.clone()]], ScoreOptions::default()).unwrap();
        assert_eq!(r.rollup(Level::Resolution).tp, 1);
        p.resolutions[0].value = Some("2022-07-15".parse().unwrap());
        let r = score(&gold, &[vec![p]], ScoreOptions::default()).unwrap();
        assert_eq!((r.rollup(Level::Normalization).tp, r.rollup(Level::Resolution).tp), (1, 0));
    }

    #[test]
    fn unsupported_and_alignment() {
        let mut g = ent(0, 3, "date", "XXXX-11");
        g.not_supported = true;
        let gold = vec![doc(vec![g])];
        let r = score(&gold, &[vec![]], ScoreOptions::default()).unwrap();
        assert_eq!((r.rollup(Level::Span).fn_, r.excluded), (0, 1));
        let r = score(&gold, &[vec![]], ScoreOptions { include_unsupported: true }).unwrap();
        assert_eq!(r.rollup(Level::Span).fn_, 1);
        assert!(matches!(score(&gold, &[], ScoreOptions::default()), Err(EvalError::Alignment { .. })));
        let empty = score(&[], &[], ScoreOptions::default()).unwrap();
        assert!(empty.cells.is_empty() && empty.micro.iter().all(|m| m.f1 == 0.0));
    }
}
