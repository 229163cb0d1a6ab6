use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ntx_core::dataset::{self, stats::render_table, stats::to_manifest, DatasetError, GoldEntity, NtxDocument};
use ntx_core::eval::{self, Level, ScoreOptions};
use ntx_core::lang::{load_config, ConfigError, LanguageConfig};
use ntx_core::model::{AnchorContext, MentionRecord};
use ntx_core::recognizer::recognize;
use serde_json::json;

const EXIT_CODES: &str = "\
Exit codes:
  0  success (evaluation scores are data, never a failure)
  1  other error (I/O, recognizer failure)
  2  unknown language
  3  malformed --anchor
  4  dataset schema error
  5  validation issues found
  6  stats differ from --manifest";

#[derive(Parser)]
#[command(name = "ntx", version, about = "Recognize numerical and temporal expressions", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the mentions found in TEXT as JSON.
    #[command(after_help = EXIT_CODES)]
    Recognize {
        #[arg(long, default_value = "en")]
        lang: String,
        /// YYYY-MM-DD, YYYY-MM-DDThh:mm[:ss][±hh:mm] or `now`. Without it
        /// mentions carry only their normalized form.
        #[arg(long)]
        anchor: Option<String>,
        /// Text to analyze; `-` reads standard input.
        #[arg(allow_hyphen_values = true)]
        text: String,
    },
    /// Score the recognizer against gold dataset files.
    #[command(after_help = EXIT_CODES)]
    Evaluate {
        /// Language configuration for every document; defaults to each
        /// document's own `lang`.
        #[arg(long)]
        lang: Option<String>,
        /// Show only this level: span, type, normalization or resolution.
        #[arg(long, value_parser = parse_level)]
        level: Option<Level>,
        /// Also score gold entities flagged notSupported.
        #[arg(long)]
        include_unsupported: bool,
        /// Directory for report.json and report.txt.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Check annotations for consistency.
    #[command(after_help = EXIT_CODES)]
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Per-language sentence and entity statistics.
    #[command(after_help = EXIT_CODES)]
    Stats {
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Compare against a counts manifest (TOML).
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

fn parse_level(s: &str) -> Result<Level, String> {
    Level::from_name(s).ok_or_else(|| format!("expected one of span, type, normalization, resolution; got `{s}`"))
}

struct Failure(u8, String);

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Self {
        match e {
            DatasetError::Schema { .. } => Failure(4, e.to_string()),
            DatasetError::Io { .. } => Failure(1, e.to_string()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::UnknownLanguage(_) => Failure(2, e.to_string()),
            _ => Failure(1, e.to_string()),
        }
    }
}

fn load_all(paths: &[PathBuf]) -> Result<Vec<NtxDocument>, Failure> {
    let mut docs = Vec::new();
    for p in paths {
        docs.extend(dataset::load_dataset(p)?);
    }
    Ok(docs)
}

fn run_recognize(lang: &str, anchor: Option<&str>, text: &str) -> Result<String, Failure> {
    let config = load_config(lang)?;
    let anchor = match anchor {
        Some("now") => {
            let now = chrono::Local::now().naive_local();
            Some(now.format("%Y-%m-%dT%H:%M:%S").to_string().parse::<AnchorContext>().expect("clock time is a valid anchor"))
        }
        Some(s) => Some(s.parse::<AnchorContext>().map_err(|e| Failure(3, e.to_string()))?),
        None => None,
    };
    let text = if text == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure(1, format!("stdin: {e}")))?;
        s
    } else {
        text.to_string()
    };
    let mentions = recognize(&config, &text, anchor.as_ref()).map_err(|e| Failure(1, e.to_string()))?;
    let records: Vec<MentionRecord> = mentions.iter().map(MentionRecord::from).collect();
    let out = json!({ "lang": lang, "anchor": anchor, "mentions": records });
    Ok(serde_json::to_string_pretty(&out).expect("mentions serialize") + "\n")
}

/// Predictions for every document, each run with its configuration and in
/// document order.
fn predict_all(docs: &[NtxDocument], lang: Option<&str>) -> Result<Vec<Vec<GoldEntity>>, Failure> {
    let mut configs: BTreeMap<&str, LanguageConfig> = BTreeMap::new();
    let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, d) in docs.iter().enumerate() {
        groups.entry(lang.unwrap_or(&d.lang)).or_default().push(i);
    }
    let mut out = vec![Vec::new(); docs.len()];
    for (l, idx) in groups {
        let config = match configs.get(l) {
            Some(c) => c,
            None => configs.entry(l).or_insert(load_config(l)?),
        };
        let subset: Vec<NtxDocument> = idx.iter().map(|&i| docs[i].clone()).collect();
        let pred = eval::predict(config, &subset).map_err(|e| Failure(1, e.to_string()))?;
        for (i, p) in idx.into_iter().zip(pred) {
            out[i] = p;
        }
    }
    Ok(out)
}

fn run_evaluate(lang: Option<&str>, level: Option<Level>, include_unsupported: bool, out: Option<&Path>, paths: &[PathBuf]) -> Result<String, Failure> {
    let docs = load_all(paths)?;
    let predicted = predict_all(&docs, lang)?;
    let report = eval::score(&docs, &predicted, ScoreOptions { include_unsupported }).map_err(|e| Failure(1, e.to_string()))?;
    let table = report.render_table(level);
    if let Some(dir) = out {
        let io = |e: std::io::Error| Failure(1, format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io)?;
        std::fs::write(dir.join("report.json"), report.to_json()).map_err(io)?;
        std::fs::write(dir.join("report.txt"), report.render_table(None)).map_err(io)?;
    }
    Ok(format!("{} documents\n{table}", docs.len()))
}

fn run_validate(paths: &[PathBuf]) -> Result<String, Failure> {
    let mut out = String::new();
    let mut total = 0;
    for p in paths {
        for file in dataset::dataset_files(p)? {
            let docs = dataset::load_dataset(&file)?;
            for issue in dataset::validate(&docs) {
                out.push_str(&format!("{}: {issue}\n", file.display()));
                total += 1;
            }
        }
    }
    out.push_str(&format!("{total} issues\n"));
    if total > 0 {
        return Err(Failure(5, out));
    }
    Ok(out)
}

fn run_stats(json: bool, manifest: Option<&Path>, paths: &[PathBuf]) -> Result<String, Failure> {
    let st = dataset::stats(&load_all(paths)?);
    let out = if json {
        serde_json::to_string_pretty(&st).expect("stats serialize") + "\n"
    } else {
        render_table(&st)
    };
    if let Some(m) = manifest {
        let src = std::fs::read_to_string(m).map_err(|e| Failure(1, format!("{}: {e}", m.display())))?;
        let expected: toml::Table = src.parse().map_err(|e| Failure(1, format!("{}: {e}", m.display())))?;
        let actual = to_manifest(&st);
        if actual != expected {
            return Err(Failure(6, format!("{out}stats differ from {}:\n{}", m.display(), toml::to_string(&actual).unwrap_or_default())));
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Recognize { lang, anchor, text } => run_recognize(lang, anchor.as_deref(), text),
        Command::Evaluate { lang, level, include_unsupported, out, paths } => {
            run_evaluate(lang.as_deref(), *level, *include_unsupported, out.as_deref(), paths)
        }
        Command::Validate { paths } => run_validate(paths),
        Command::Stats { json, manifest, paths } => run_stats(*json, manifest.as_deref(), paths),
    };
    match result {
        Ok(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(Failure(code, msg)) => {
            if code == 5 {
                print!("{msg}");
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
