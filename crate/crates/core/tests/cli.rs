use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn mdlseg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdlseg"))
        .args(args)
        .output()
        .expect("run mdlseg")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    assert_eq!(code(out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(code(&mdlseg(&["--help"])), 0);
    assert_eq!(code(&mdlseg(&["--version"])), 0);
    assert_eq!(code(&mdlseg(&["segment", "--help"])), 0);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&mdlseg(&[])), 1);
    assert_eq!(code(&mdlseg(&["segment", "--bogus"])), 1);
    let out = mdlseg(&[
        "segment",
        "--mode",
        "dist-phono",
        "--corpus",
        &data("kitty.txt"),
        "--inventory",
        &data("kitty.inv"),
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--rules"));
    let out = mdlseg(&[
        "segment",
        "--mode",
        "rand-free",
        "--corpus",
        &data("kitty.txt"),
        "--inventory",
        &data("kitty.inv"),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn parse_errors_exit_2_with_location() {
    let dir = TempDir::new().unwrap();
    let corpus = write(&dir, "bad.txt", "du ju\nsi ðə kɪtq\n");
    let out = mdlseg(&[
        "segment",
        "--mode",
        "dist-free",
        "--corpus",
        &corpus,
        "--inventory",
        &data("kitty.inv"),
    ]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.txt"), "{err}");
    assert!(err.contains('2'), "{err}");

    let missing = dir.path().join("missing.txt");
    let out = mdlseg(&[
        "segment",
        "--mode",
        "dist-free",
        "--corpus",
        missing.to_str().unwrap(),
        "--inventory",
        &data("kitty.inv"),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn brute_refuses_over_limit_with_exit_3() {
    let out = mdlseg(&[
        "brute",
        "--corpus",
        &data("kitty.txt"),
        "--inventory",
        &data("kitty.inv"),
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_small_corpora() {
    let dir = TempDir::new().unwrap();
    let inv = write(&dir, "ab.inv", "a V\nb C\n");
    let ab = write(&dir, "ab.txt", "ab\n");
    let v = json(&mdlseg(&[
        "verify",
        "--corpus",
        &ab,
        "--inventory",
        &inv,
        "--out",
        "json",
    ]));
    assert_eq!(v["hypotheses_enumerated"], 2);
    assert_eq!(v["verdict"], "equal");

    let line = write(&dir, "see.txt", "si ðə kɪti\n");
    let v = json(&mdlseg(&[
        "brute",
        "--corpus",
        &line,
        "--inventory",
        &data("kitty.inv"),
        "--out",
        "json",
    ]));
    assert_eq!(v["hypotheses_enumerated"], 128);
    let greedy = v["greedy"]["description_length"]["total_bits"]
        .as_f64()
        .unwrap();
    let minimum = v["brute_force"]["description_length"]["total_bits"]
        .as_f64()
        .unwrap();
    assert!(greedy >= minimum - 1e-9);
}

#[test]
fn extract_rules_reads_boundary_clusters() {
    let dir = TempDir::new().unwrap();
    let gold = write(&dir, "gold.txt", "kæts pɔz\n");
    let out = mdlseg(&[
        "extract-rules",
        "--corpus",
        &gold,
        "--inventory",
        &data("english.inv"),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let (initial, final_) = text.split_once("FINAL:").unwrap();
    let lines = |s: &str| -> Vec<String> {
        s.lines()
            .filter(|l| !l.starts_with('#') && !l.ends_with(':') && !l.is_empty())
            .map(String::from)
            .collect()
    };
    assert_eq!(lines(initial), ["-", "k", "p"]);
    assert_eq!(lines(final_), ["-", "ts", "z"]);
}

#[test]
fn segment_json_report_and_trace() {
    let dir = TempDir::new().unwrap();
    let rules = dir.path().join("kitty.rules");
    let out = mdlseg(&[
        "extract-rules",
        "--corpus",
        &data("kitty.txt"),
        "--inventory",
        &data("kitty.inv"),
        "--output",
        rules.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let trace = dir.path().join("trace.csv");
    let v = json(&mdlseg(&[
        "segment",
        "--mode",
        "dist-phono",
        "--corpus",
        &data("kitty.txt"),
        "--inventory",
        &data("kitty.inv"),
        "--rules",
        rules.to_str().unwrap(),
        "--out",
        "json",
        "--trace",
        trace.to_str().unwrap(),
    ]));
    assert_eq!(v["metadata"]["mode"], "dist-phono");
    assert_eq!(v["corpus"]["candidate_points"], 30);
    assert!(v["description_length"]["total_bits"].as_f64().unwrap() > 0.0);
    assert!(v["boundaries"]["recall"].is_number());
    assert!(v["types"]["hits"].is_number());
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("step,pointsAdded,committedDL,bestDL\n0,,"));
}

#[test]
fn baseline_reports_resolved_k_and_is_deterministic() {
    let args = [
        "baseline",
        "--mode",
        "rand-free",
        "--trials",
        "1000",
        "--seed",
        "42",
        "--corpus",
        &data("kitty.txt"),
        "--inventory",
        &data("kitty.inv"),
        "--out",
        "json",
    ];
    let a = mdlseg(&args);
    let b = mdlseg(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["metadata"]["k"], 10);
    assert_eq!(v["metadata"]["trials"], 1000);
    assert_eq!(v["metadata"]["seed"], 42);
}

#[test]
fn table_output_uses_one_decimal() {
    let out = mdlseg(&[
        "baseline",
        "--mode",
        "rand-free",
        "--trials",
        "50",
        "--corpus",
        &data("kitty.txt"),
        "--inventory",
        &data("kitty.inv"),
    ]);
    let text = stdout(&out);
    let recall = text.lines().find(|l| l.starts_with("% recall")).unwrap();
    let value = recall.split_whitespace().last().unwrap();
    assert_eq!(value.split_once('.').unwrap().1.len(), 1, "{recall}");
}

#[test]
fn score_gold_against_itself() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("score.json");
    let out = mdlseg(&[
        "score",
        "--corpus",
        &data("kitty.txt"),
        "--hypothesis",
        &data("kitty.txt"),
        "--inventory",
        &data("kitty.inv"),
        "--out",
        "json",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["boundaries"]["recall"], 100.0);
    assert_eq!(v["types"]["accuracy"], 100.0);

    let other = write(&dir, "other.txt", "du ju si\n");
    let out = mdlseg(&[
        "score",
        "--corpus",
        &data("kitty.txt"),
        "--hypothesis",
        &other,
        "--inventory",
        &data("kitty.inv"),
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn inputs_are_left_untouched() {
    let dir = TempDir::new().unwrap();
    let corpus = write(
        &dir,
        "kitty.txt",
        &std::fs::read_to_string(data("kitty.txt")).unwrap(),
    );
    let before = std::fs::read(&corpus).unwrap();
    let out = mdlseg(&[
        "segment",
        "--mode",
        "dist-free",
        "--corpus",
        &corpus,
        "--inventory",
        &data("kitty.inv"),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read(Path::new(&corpus)).unwrap(), before);
}
