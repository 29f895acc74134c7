//! End-to-end exercises of the command-line interface through the real
//! binary: piping conventions, exit codes, artifact manifests, and the
//! encode/decode composition contract.

use std::fs;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bengalibpe"))
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    use std::io::Write;
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(output: &Output) -> String {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).unwrap()
}

/// A small training corpus with enough repetition to learn merges.
fn write_corpus(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("corpus.txt");
    let output = bin()
        .args(["synth", "--sentences", "300", "--seed", "5", "--out", "-"])
        .output()
        .unwrap();
    fs::write(&path, stdout(&output)).unwrap();
    path
}

#[test]
fn normalize_reads_stdin_and_writes_stdout() {
    let out = run_with_stdin(
        &["normalize", "--in", "-", "--out", "-"],
        "<b>বাংলা</b>   ভাষা ১২৩ hello www.example.com 😀!\n",
    );
    assert_eq!(stdout(&out), "বাংলা ভাষা !\n");
}

#[test]
fn normalize_keep_numerals_flag_is_honored() {
    let out = run_with_stdin(
        &["normalize", "--in", "-", "--out", "-", "--keep-numerals"],
        "বছর ২০২৪\n",
    );
    assert_eq!(stdout(&out), "বছর ২০২৪\n");
}

#[test]
fn graphemes_prints_cluster_per_line() {
    let out = run_with_stdin(&["graphemes", "--in", "-"], "গর্বিত\n");
    assert_eq!(stdout(&out), "গ র্বি ত\n");
}

#[test]
fn unknown_flag_is_a_usage_error_exit_2() {
    let out = bin().args(["train", "--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_input_file_is_a_data_error_exit_1() {
    let out = bin()
        .args(["normalize", "--in", "/nonexistent/x.txt", "--out", "-"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/x.txt"));
}

#[test]
fn train_writes_model_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path());
    let model = dir.path().join("m.model");
    let out = bin()
        .args([
            "train",
            "--corpus",
            corpus.to_str().unwrap(),
            "--vocab-size",
            "2000",
            "--mode",
            "bengali",
            "--out",
            model.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&model).unwrap();
    assert!(text.starts_with("format_version:"));
    assert!(text.contains("[merges]"));
    let manifest: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(format!("{}.manifest.json", model.display())).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["subcommand"], "train");
    assert_eq!(manifest["config"]["vocab_size"], 2000);
}

#[test]
fn encode_then_decode_reproduces_normalized_text() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path());
    let model = dir.path().join("m.model");
    let out = bin()
        .args([
            "train",
            "--corpus",
            corpus.to_str().unwrap(),
            "--vocab-size",
            "2000",
            "--out",
            model.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let input = "বাংলা ভাষাভাষীরা গর্বিত। নতুন খবর আজ।\nখেলাগুলোর ফলাফল ভালো।\n";
    let normalized = stdout(&run_with_stdin(&["normalize", "--in", "-", "--out", "-"], input));

    let model_arg = model.to_str().unwrap();
    let encoded = stdout(&run_with_stdin(
        &["encode", "--model", model_arg, "--in", "-", "--out", "-"],
        input,
    ));
    // Multi-token words carry the continuation marker.
    assert!(encoded.contains("@@ "), "no subword splits in {encoded:?}");
    let decoded = stdout(&run_with_stdin(
        &["decode", "--model", model_arg, "--in", "-", "--out", "-"],
        &encoded,
    ));
    assert_eq!(decoded, normalized);
}

#[test]
fn encode_ids_prints_numeric_lines() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path());
    let model = dir.path().join("m.model");
    assert!(bin()
        .args([
            "train",
            "--corpus",
            corpus.to_str().unwrap(),
            "--vocab-size",
            "1500",
            "--out",
            model.to_str().unwrap(),
        ])
        .status()
        .unwrap()
        .success());
    let encoded = stdout(&run_with_stdin(
        &["encode", "--model", model.to_str().unwrap(), "--in", "-", "--out", "-", "--ids"],
        "বাংলা ভাষা\n",
    ));
    for piece in encoded.split_whitespace() {
        piece.parse::<u32>().unwrap_or_else(|_| panic!("non-numeric id {piece:?}"));
    }
}

#[test]
fn encode_with_mismatched_normalization_flags_fails() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path());
    let model = dir.path().join("m.model");
    assert!(bin()
        .args([
            "train",
            "--corpus",
            corpus.to_str().unwrap(),
            "--vocab-size",
            "1500",
            "--out",
            model.to_str().unwrap(),
        ])
        .status()
        .unwrap()
        .success());
    let out = run_with_stdin(
        &[
            "encode",
            "--model",
            model.to_str().unwrap(),
            "--in",
            "-",
            "--out",
            "-",
            "--keep-numerals",
        ],
        "ক\n",
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("normalization"));
}

#[test]
fn split_writes_three_csv_files_with_stable_assignment() {
    let dir = tempfile::tempdir().unwrap();
    let labeled = dir.path().join("labeled.csv");
    let csv = stdout(
        &bin()
            .args(["synth", "--per-class", "10", "--seed", "3", "--out", "-"])
            .output()
            .unwrap(),
    );
    fs::write(&labeled, &csv).unwrap();

    for out_dir in ["a", "b"] {
        let out = bin()
            .args([
                "split",
                "--in",
                labeled.to_str().unwrap(),
                "--seed",
                "42",
                "--out-dir",
                dir.path().join(out_dir).to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["train.csv", "val.csv", "test.csv"] {
        let a = fs::read(dir.path().join("a").join(name)).unwrap();
        let b = fs::read(dir.path().join("b").join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} differs between identical runs");
    }
    // 8 classes x 10 docs → 56/8/16 overall.
    let train = fs::read_to_string(dir.path().join("a/train.csv")).unwrap();
    assert_eq!(train.lines().count(), 57); // header + 56 rows
}

#[test]
fn eval_writes_a_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let labeled = dir.path().join("labeled.csv");
    let csv = stdout(
        &bin()
            .args(["synth", "--per-class", "15", "--seed", "9", "--out", "-"])
            .output()
            .unwrap(),
    );
    fs::write(&labeled, &csv).unwrap();
    let report_path = dir.path().join("eval.json");
    let out = bin()
        .args([
            "eval",
            "--corpus",
            labeled.to_str().unwrap(),
            "--tokenizer",
            "whitespace",
            "--report",
            report_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["tokenizer"], "whitespace");
    assert!(report["macro_f1"].as_f64().unwrap() >= 0.0);
    assert!(report["selected_c"].as_f64().is_some());
}

#[test]
fn bench_reports_one_row_per_tokenizer() {
    let dir = tempfile::tempdir().unwrap();
    let labeled = dir.path().join("labeled.csv");
    let csv = stdout(
        &bin()
            .args(["synth", "--per-class", "12", "--seed", "4", "--out", "-"])
            .output()
            .unwrap(),
    );
    fs::write(&labeled, &csv).unwrap();

    let corpus = write_corpus(dir.path());
    let model = dir.path().join("m.model");
    assert!(bin()
        .args([
            "train",
            "--corpus",
            corpus.to_str().unwrap(),
            "--vocab-size",
            "2000",
            "--out",
            model.to_str().unwrap(),
        ])
        .status()
        .unwrap()
        .success());

    let report_path = dir.path().join("bench.json");
    let out = bin()
        .args([
            "bench",
            "--corpus",
            labeled.to_str().unwrap(),
            "--tokenizers",
            "whitespace,bengali",
            "--models",
            model.to_str().unwrap(),
            "--warmup",
            "10",
            "--report",
            report_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    let rows = report["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["kind"], "whitespace");
    assert_eq!(rows[1]["kind"], "bengali");
    assert_eq!(report["thread_count"], 1);
    assert!(report["corpus_fingerprint"].as_str().unwrap().len() == 64);
}

#[test]
fn bench_missing_model_for_bpe_tokenizer_fails_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let labeled = dir.path().join("labeled.csv");
    let csv = stdout(
        &bin()
            .args(["synth", "--per-class", "5", "--seed", "4", "--out", "-"])
            .output()
            .unwrap(),
    );
    fs::write(&labeled, &csv).unwrap();
    let out = bin()
        .args([
            "bench",
            "--corpus",
            labeled.to_str().unwrap(),
            "--tokenizers",
            "bengali",
            "--report",
            dir.path().join("r.json").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--models"));
}

#[test]
fn synth_is_deterministic_across_invocations() {
    let a = stdout(
        &bin()
            .args(["synth", "--sentences", "50", "--seed", "6", "--out", "-"])
            .output()
            .unwrap(),
    );
    let b = stdout(
        &bin()
            .args(["synth", "--sentences", "50", "--seed", "6", "--out", "-"])
            .output()
            .unwrap(),
    );
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 50);
}
