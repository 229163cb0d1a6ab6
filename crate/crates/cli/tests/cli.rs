use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn ntx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ntx")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ntx-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn recognize_with_and_without_anchor() {
    let o = ntx(&["recognize", "--anchor", "2022-07-01", "now"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["anchor"], "2022-07-01");
    let m = &v["mentions"][0];
    assert_eq!((m["text"].as_str(), m["value"].as_str()), (Some("now"), Some("PRESENT_REF")));
    assert_eq!(m["resolutions"][0]["value"], "2022-07-01");

    let o = ntx(&["recognize", "now"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["anchor"].is_null());
    assert!(v["mentions"][0].get("resolutions").is_none());
}

#[test]
fn no_mentions_is_an_empty_list() {
    let o = ntx(&["recognize", "hello"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mentions"], serde_json::json!([]));
}

#[test]
fn recognize_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ntx"))
        .args(["recognize", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"She paid $5.").unwrap();
    let o = child.wait_with_output().unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mentions"][0]["type"], "currency");
}

#[test]
fn text_may_start_with_a_hyphen() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&ntx(&["recognize", "-4.25 degrees"]))).unwrap();
    assert_eq!(v["mentions"][0]["text"], "-4.25");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["recognize", "--anchor", "2022-07-01T10:00", "Friday, 3 p.m. PST and every Tuesday for $5"];
    assert_eq!(ntx(&args).stdout, ntx(&args).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(ntx(&["recognize", "--lang", "xx", "a"]).status.code(), Some(2));
    assert_eq!(ntx(&["recognize", "--anchor", "2022-13-01", "a"]).status.code(), Some(3));

    let bad = scratch_dir("schema").join("bad.json");
    std::fs::write(&bad, r#"[{"bad": 1}]"#).unwrap();
    let o = ntx(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("text"));
}

#[test]
fn validate_clean_and_seeded() {
    let f = fixtures();
    let o = ntx(&["validate", f.join("mini-en.json").to_str().unwrap(), f.join("mini-es.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("0 issues\n"));

    let o = ntx(&["validate", f.join("seeded-faults").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).ends_with("60 issues\n"));
}

#[test]
fn stats_against_manifest() {
    let f = fixtures();
    let (en, es) = (f.join("mini-en.json"), f.join("mini-es.json"));
    let o = ntx(&["stats", "--manifest", f.join("MANIFEST.toml").to_str().unwrap(), en.to_str().unwrap(), es.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    // Only half the corpus cannot match.
    let o = ntx(&["stats", "--manifest", f.join("MANIFEST.toml").to_str().unwrap(), en.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(6));

    let o = ntx(&["stats", "--json", es.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["languages"]["es"]["sentences"].as_u64().unwrap() > 0);
}

#[test]
fn evaluate_writes_reports() {
    let out = scratch_dir("eval");
    let en = fixtures().join("mini-en.json");
    let o = ntx(&["evaluate", "--level", "resolution", "--out", out.to_str().unwrap(), en.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let table = stdout(&o);
    assert!(table.lines().skip(2).all(|l| l.is_empty() || !l.contains(" span ")), "{table}");

    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["includeUnsupported"], false);
    assert!(report["excluded"].as_u64().unwrap() > 0);
    assert!(std::fs::read_to_string(out.join("report.txt")).unwrap().contains("span"));

    let o = ntx(&["evaluate", "--include-unsupported", "--out", out.to_str().unwrap(), en.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let with: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(with["includeUnsupported"], true);
    assert_eq!(with["excluded"], 0);
    let fns = |r: &serde_json::Value| r["micro"][0]["falseNegatives"].as_u64().unwrap();
    assert!(fns(&with) > fns(&report));
}

#[test]
fn help_lists_exit_codes() {
    let o = ntx(&["--help"]);
    let s = stdout(&o);
    assert!(s.contains("Exit codes:") && s.contains("6  stats differ"), "{s}");
    assert!(stdout(&ntx(&["evaluate", "--help"])).contains("Exit codes:"));
}
