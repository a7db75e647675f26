use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_evalogic"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn sketch_path() -> String {
    fixture("big_bench_mistake.json").to_string_lossy().into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn alarm_exit_codes_follow_the_verdict() {
    let s = sketch_path();
    let o = run(&["alarm", &s, "--pair", "mistral", "gpt4"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    assert!(stdout(&o).contains("TRIGGERED"));

    let o = run(&["alarm", &s, "--pair", "claude", "mistral"]);
    assert_eq!(code(&o), 0);
    let o = run(&["alarm", &s, "--pair", "claude", "gpt4", "--pair", "mistral", "gpt4"]);
    assert_eq!(code(&o), 2);
    let o = run(&["alarm", &s, "--ensemble"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn alarm_trace_verdict_matches_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let s = sketch_path();
    for pair in [["claude", "mistral"], ["claude", "gpt4"], ["mistral", "gpt4"]] {
        let trace = dir.path().join("t.json");
        let o = run(&["alarm", &s, "--pair", pair[0], pair[1], "--trace", p(&trace)]);
        let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
        let triggered = doc["verdict"] == "triggered";
        assert_eq!(code(&o) == 2, triggered, "{pair:?}");
    }
}

#[test]
fn alarm_writes_traces_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let plot = dir.path().join("plot.svg");
    let o = run(&[
        "alarm",
        &sketch_path(),
        "--pair",
        "claude",
        "mistral",
        "--pair",
        "claude",
        "gpt4",
        "--pair",
        "mistral",
        "gpt4",
        "--trace",
        p(&trace),
        "--plot",
        p(&plot),
    ]);
    assert_eq!(code(&o), 2);
    let csv = fs::read_to_string(dir.path().join("trace.mistral-gpt4.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 283);
    assert!(lines[0].starts_with("q_a,mistral_lo_a,mistral_hi_a,mistral_lo_b,mistral_hi_b,gpt4_lo_a"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",0")));
    assert!(dir.path().join("trace.claude-mistral.csv").exists());
    let svg = fs::read_to_string(&plot).unwrap();
    assert_eq!(svg.matches(r#"class="series""#).count(), 3);
    assert_eq!(svg.matches(r#"data-triggered="true""#).count(), 1);
}

#[test]
fn alarm_range_and_spec_flags() {
    let s = sketch_path();
    // claude + gpt4 is only safe for Q_a >= 188
    let o = run(&["alarm", &s, "--pair", "claude", "gpt4", "--qa-range", "0", "100"]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
    let o = run(&["alarm", &s, "--pair", "claude", "gpt4", "--qa-range", "150", "281"]);
    assert_eq!(code(&o), 0);
    let o = run(&["alarm", &s, "--pair", "claude", "gpt4", "--qa-range", "10", "5"]);
    assert_eq!(code(&o), 1);

    let o = run(&["alarm", &s, "--pair", "mistral", "gpt4", "--spec-per-label", "0", "--no-strict"]);
    assert_eq!(code(&o), 0);
    let o = run(&["alarm", &s, "--spec-overall", "1/2", "--refine-pairs"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("74 of 282 slices safe, safe Q_a in [94, 167]"), "{}", stdout(&o));
    let o = run(&["alarm", &s, "--spec-per-label", "3/2"]);
    assert_eq!(code(&o), 1);
    let o = run(&["alarm", &s, "--pair", "claude", "nobody"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("nobody"));
}

#[test]
fn enumerate_counts() {
    let o = run(&["enumerate", "--q", "2", "--count-only"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "10");
    let o = run(&["enumerate", "--q", "1"]);
    assert_eq!(stdout(&o), "q_a,r_aia,r_bib\n0,0,0\n0,0,1\n1,0,0\n1,1,0\n");
}

#[test]
fn usage_errors() {
    let o = run(&["bogus"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("Usage"));
    assert!(stdout(&o).is_empty());
    let o = run(&[]);
    assert_eq!(code(&o), 1);
    let o = run(&["--help"]);
    assert_eq!(code(&o), 0);
    let o = run(&["sketch", "/no/such/file.json"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn verify_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"classifiers":["x","y"],"q":10,"counts":{"aa":3,"bb":4}}"#).unwrap();
    let o = run(&["verify", p(&bad)]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("do not sum to Q"), "{}", stdout(&o));

    let o = run(&["verify", &sketch_path()]);
    assert_eq!(code(&o), 0);

    let claims = dir.path().join("claims.json");
    fs::write(&claims, r#"{"marginals":{"claude":100}}"#).unwrap();
    let o = run(&["verify", &sketch_path(), "--claims", p(&claims)]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("claude"));

    fs::write(&claims, r#"{"marginals":{"claude":146,"gpt4":234}}"#).unwrap();
    let o = run(&["verify", &sketch_path(), "--claims", p(&claims)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("budget"));
}

#[test]
fn ingest_is_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let csv = fixture("big_bench_mistake_decisions.csv");
    let o = run(&["ingest", p(&csv), "--map", "incorrect=a", "--map", "correct=b", "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("281 items kept, 19 dropped"));
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        fs::read_to_string(fixture("big_bench_mistake.json")).unwrap()
    );

    let o = run(&["ingest", p(&csv)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("incorrect"));

    let o = run(&["ingest", p(&csv), "--map", "incorrect=a", "--map", "correct=b", "--classifiers", "claude,llama"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("llama"));
}

#[test]
fn ingest_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("d.jsonl");
    fs::write(
        &input,
        "{\"item_id\":\"2\",\"responses\":{\"x\":\"yes\",\"y\":\"no\"}}\n{\"item_id\":\"1\",\"responses\":{\"x\":\"no\",\"y\":\"no\"}}\n",
    )
    .unwrap();
    let o = run(&["ingest", p(&input), "--map", "yes=a", "--map", "no=b"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["q"], 2);
    assert_eq!(doc["counts"]["ab"], 1);
    assert_eq!(doc["counts"]["bb"], 1);
}

#[test]
fn flip_twice_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let once = dir.path().join("once.json");
    let twice = dir.path().join("twice.json");
    for mode in ["global", "true-a", "true-b"] {
        assert_eq!(code(&run(&["flip", &sketch_path(), "--classifier", "gpt4", "--mode", mode, "--out", p(&once)])), 0);
        assert_eq!(code(&run(&["flip", p(&once), "--classifier", "gpt4", "--mode", mode, "--out", p(&twice)])), 0);
        assert_eq!(
            fs::read_to_string(&twice).unwrap(),
            fs::read_to_string(fixture("big_bench_mistake.json")).unwrap()
        );
    }
    let o = run(&["flip", &sketch_path(), "--classifier", "gpt4", "--mode", "sideways"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn generate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let params = dir.path().join("params.json");
    fs::write(
        &params,
        r#"{"p_a":"1/2","classifiers":[{"id":"x","pi_a":"3/4","pi_b":"3/4"},{"id":"y","pi_a":"2/3","pi_b":"4/5"}]}"#,
    )
    .unwrap();
    let a = run(&["generate", "--seed", "9", "--params", p(&params), "--q", "50"]);
    let b = run(&["generate", "--seed", "9", "--params", p(&params), "--q", "50"]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 51);
    assert!(stdout(&a).starts_with("item_id,x,y,truth\n"));

    let out = dir.path().join("s.json");
    let o = run(&["generate", "--seed", "9", "--params", p(&params), "--q", "50", "--sketch", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&run(&["verify", p(&out)])), 0);

    fs::write(&params, r#"{"p_a":"2","classifiers":[{"id":"x","pi_a":"1","pi_b":"1"}]}"#).unwrap();
    assert_eq!(code(&run(&["generate", "--seed", "1", "--params", p(&params), "--q", "5"])), 1);
}

#[test]
fn solve_independent_on_exact_frequencies() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.json");
    // P_a = 1/2 and every accuracy 3/4, scaled to 32 items
    fs::write(
        &s,
        r#"{"classifiers":["x","y","z"],"q":32,"counts":{"aaa":7,"aab":3,"aba":3,"abb":3,"baa":3,"bab":3,"bba":3,"bbb":7}}"#,
    )
    .unwrap();
    let o = run(&["solve-independent", p(&s)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["status"], "two-points");
    assert_eq!(doc["primary"]["p_a"], "1/2");
    assert_eq!(doc["primary"]["classifiers"][0]["pi_a"], "3/4");
    assert_eq!(doc["mirror"]["classifiers"][2]["pi_b"], "1/4");
    assert_eq!(doc["majority_vote_prevalence"], "1/2");

    let o = run(&["solve-independent", &sketch_path()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("inconsistent"));
}

#[test]
fn sketch_summary() {
    let o = run(&["sketch", &sketch_path()]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("Q = 281"));
    assert!(text.contains("true Q_a = 237"));
    let o = run(&["sketch", &sketch_path(), "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["marginals"]["mistral"], serde_json::json!([27, 254]));
    assert_eq!(doc["label_statistics"]["p_a"], "237/281");
}
