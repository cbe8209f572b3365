use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn synthetic_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/synthetic")
}

fn codetopics(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codetopics"))
        .args(args)
        .env_remove("CODETOPICS_CONFIG")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = codetopics(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

/// Tokenizes the synthetic corpus, builds a count matrix and fits NMF.
fn fitted(dir: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let tokens = dir.join("tokens.jsonl");
    let matrix = dir.join("matrix");
    let model = dir.join("model.txt");
    ok(&["tokenize", "--corpus", s(&synthetic_dir()), "--out", s(&tokens)]);
    ok(&["matrix", "--tokens", s(&tokens), "--out", s(&matrix)]);
    ok(&[
        "fit",
        "--matrix",
        s(&matrix),
        "--method",
        "nmf",
        "--k",
        "3",
        "--out",
        s(&model),
    ]);
    (tokens, matrix, model)
}

#[test]
fn stages_chain_into_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let (_, matrix, model) = fitted(dir.path());
    let report = dir.path().join("report");
    ok(&[
        "report",
        "--model",
        s(&model),
        "--matrix",
        s(&matrix),
        "--min-docs",
        "1",
        "--merge",
        "1,2",
        "--out",
        s(&report),
    ]);
    let json = read_json(&report.join("report.json"));
    assert_eq!(json["assignments"].as_array().unwrap().len(), 40);
    assert_eq!(json["selection"]["merged"], serde_json::json!([[1, 2]]));
    for file in [
        "assignments.csv",
        "topic_terms.csv",
        "topic_map.csv",
        "intruder_tasks.json",
    ] {
        assert!(report.join(file).exists(), "{file} missing");
    }
}

#[test]
fn fitting_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (_, matrix, model) = fitted(dir.path());
    let again = dir.path().join("again.txt");
    ok(&[
        "fit",
        "--matrix",
        s(&matrix),
        "--method",
        "nmf",
        "--k",
        "3",
        "--out",
        s(&again),
    ]);
    assert_eq!(std::fs::read(&model).unwrap(), std::fs::read(&again).unwrap());
    let lda_a = dir.path().join("lda_a.txt");
    let lda_b = dir.path().join("lda_b.txt");
    for out in [&lda_a, &lda_b] {
        ok(&[
            "fit",
            "--matrix",
            s(&matrix),
            "--method",
            "lda",
            "--k",
            "2",
            "--seed",
            "5",
            "--out",
            s(out),
        ]);
    }
    assert_eq!(std::fs::read(&lda_a).unwrap(), std::fs::read(&lda_b).unwrap());
}

#[test]
fn grid_size_follows_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let (tokens, _, _) = fitted(dir.path());
    let config = dir.path().join("config.toml");
    std::fs::write(
        &config,
        "[grid]\nmin_df = [0.05, 0.1]\nbinary = [false, true]\nvectorizer = [\"count\", \"tfidf\"]\n\
         method = [\"nmf\"]\nk = [2, 3]\n",
    )
    .unwrap();
    let out = dir.path().join("grid");
    ok(&[
        "--config",
        s(&config),
        "grid",
        "--tokens",
        s(&tokens),
        "--repeats",
        "2",
        "--top-k",
        "3",
        "--out",
        s(&out),
    ]);
    let grid = std::fs::read_to_string(out.join("grid.csv")).unwrap();
    assert_eq!(grid.lines().count(), 1 + 16);
    assert_eq!(
        std::fs::read_to_string(out.join("runs.jsonl")).unwrap().lines().count(),
        16 * 2
    );
    assert_eq!(read_json(&out.join("best.json")).as_array().unwrap().len(), 3);
}

#[test]
fn comparing_identical_samples_gives_p_one() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    std::fs::write(&a, "[0.1, 0.4, 0.2, 0.7, 0.3]").unwrap();
    let out = ok(&["evaluate", "compare", "--a", s(&a), "--b", s(&a)]);
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((json["p_two_sided"].as_f64().unwrap() - 1.0).abs() < 1e-9, "{json}");
    assert_eq!(json["exact"], Value::Bool(true));
}

#[test]
fn missing_input_reports_json_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = codetopics(&[
        "fit",
        "--matrix",
        s(&dir.path().join("nope")),
        "--method",
        "nmf",
        "--k",
        "2",
        "--out",
        s(&dir.path().join("m.txt")),
    ]);
    assert!(!out.status.success());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], Value::String("MissingInput".into()));
    assert!(err["message"].as_str().unwrap().contains("nope"));
}

#[test]
fn intruder_tasks_score_perfect_raters_on_the_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let (_, _, model) = fitted(dir.path());
    let tasks_dir = dir.path().join("intruder");
    ok(&[
        "intruder",
        "make",
        "--model",
        s(&model),
        "--min-docs",
        "3",
        "--seed",
        "1",
        "--out",
        s(&tasks_dir),
    ]);
    let public = read_json(&tasks_dir.join("intruder_tasks.json"));
    let key = read_json(&tasks_dir.join("intruder_key.json"));
    let public = public.as_array().unwrap();
    assert!(!public.is_empty());
    assert!(public
        .iter()
        .all(|t| t.get("answer").is_none() && t["docs"].as_array().unwrap().len() == 4));

    let answers: Vec<Value> = key
        .as_array()
        .unwrap()
        .iter()
        .map(|t| serde_json::json!({"task_id": t["task_id"], "choice": t["answer"]}))
        .collect();
    let answers_path = dir.path().join("answers.json");
    std::fs::write(&answers_path, serde_json::to_string(&answers).unwrap()).unwrap();
    let out = ok(&[
        "intruder",
        "score",
        "--key",
        s(&tasks_dir.join("intruder_key.json")),
        "--answers",
        s(&answers_path),
    ]);
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    for (i, row) in json["confusion"].as_array().unwrap().iter().enumerate() {
        for (j, v) in row.as_array().unwrap().iter().enumerate() {
            let v = v.as_f64().unwrap();
            assert!(v == 0.0 || (i == j && v == 1.0), "confusion[{i}][{j}] = {v}");
        }
    }
}

#[test]
fn run_reads_config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        format!(
            "[corpus]\ndir = {:?}\n[grid]\nmin_df = [0.05]\nbinary = [false]\nvectorizer = [\"count\"]\n\
             method = [\"nmf\"]\nk = [2]\n[evaluation]\nrepeats = 2\n[topics]\nmin_docs = 1\n",
            s(&synthetic_dir())
        ),
    )
    .unwrap();
    let out = dir.path().join("run");
    let status = Command::new(env!("CARGO_BIN_EXE_codetopics"))
        .args(["run", "--workers", "1", "--out", s(&out)])
        .env("CODETOPICS_CONFIG", &config)
        .status()
        .unwrap();
    assert!(status.success());
    let manifest = read_json(&out.join("manifest.json"));
    assert_eq!(manifest["seeds"]["repeats"], 2);
    assert!(out.join("report/report.json").exists());
}
