//! End-to-end tests of the boxsweep binary: formats, exit codes, and
//! cross-command contracts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_boxsweep"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const DIAGONAL: &str = "1 1 1\n2 2 1\n3 3 -5\n4 4 1\n";

#[test]
fn solve_reports_the_two_box_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "diag.txt", DIAGONAL);
    let out = dir.path().join("result.json");
    let output = run(&[
        "solve",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "symdiff",
        "--k",
        "2",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert_eq!(stdout(&output).trim(), "objective 3");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["objective"], 3.0);
    assert_eq!(doc["mode"], "symdiff");
    assert_eq!(doc["k"], 2);
    assert_eq!(doc["boxes"].as_array().unwrap().len(), 2);
}

#[test]
fn solve_single_on_all_negative_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "neg.txt", "0 1 -3\n1 0 -1\n");
    let output = run(&[
        "solve",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "single",
    ]);
    assert!(output.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(doc["objective"], 0.0);
}

#[test]
fn solve_then_verify_round_trips_and_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "diag.txt", DIAGONAL);
    let out = dir.path().join("result.json");
    for mode in ["symdiff", "union", "single", "cross", "annulus"] {
        let output = run(&[
            "solve",
            "--input",
            input.to_str().unwrap(),
            "--mode",
            mode,
            "--output",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "solve --mode {mode}");
        let verify = run(&[
            "verify",
            "--input",
            input.to_str().unwrap(),
            "--result",
            out.to_str().unwrap(),
        ]);
        assert!(verify.status.success(), "verify --mode {mode}");
    }

    // Corrupt the objective: verify must fail with exit 1.
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    doc["objective"] = serde_json::json!(99.0);
    std::fs::write(&out, serde_json::to_string(&doc).unwrap()).unwrap();
    let verify = run(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--result",
        out.to_str().unwrap(),
    ]);
    assert_eq!(verify.status.code(), Some(1));
}

#[test]
fn matrix_file_matches_builtin_cross() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "diag.txt", DIAGONAL);
    let matrix = write(dir.path(), "cross.txt", "0 1 0\n1 1 1\n0 1 0\n");
    let from_matrix = run(&[
        "solve",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "matrix",
        "--matrix-file",
        matrix.to_str().unwrap(),
    ]);
    let from_shape = run(&[
        "solve",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "cross",
    ]);
    assert!(from_matrix.status.success() && from_shape.status.success());
    let a: serde_json::Value = serde_json::from_str(&stdout(&from_matrix)).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout(&from_shape)).unwrap();
    assert_eq!(a["objective"], b["objective"]);
    assert_eq!(a["matrix"], b["matrix"]);
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["gen", "--n", "5", "--seed", "1"]);
    let b = run(&["gen", "--n", "5", "--seed", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed, byte-identical output");

    let empty = run(&["gen", "--n", "0"]);
    assert!(empty.status.success());

    let file = write(dir.path(), "gen.txt", &stdout(&a));
    let solved = run(&[
        "solve",
        "--input",
        file.to_str().unwrap(),
        "--mode",
        "single",
    ]);
    assert!(solved.status.success(), "generated instances validate");
}

#[test]
fn gen_then_check_agrees_with_oracle() {
    let output = run(&[
        "check", "--trials", "40", "--n-max", "7", "--k", "2", "--mode", "symdiff", "--seed", "7",
    ]);
    assert!(output.status.success());
    let single = run(&[
        "check", "--trials", "40", "--n-max", "20", "--mode", "single", "--seed", "5",
    ]);
    assert!(single.status.success());
    let empty = run(&["check", "--trials", "1", "--n-max", "0"]);
    assert!(empty.status.success(), "empty instances trivially agree");
}

#[test]
fn oracle_guard_trips_on_large_instances() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run(&[
        "gen",
        "--n",
        "50",
        "--seed",
        "2",
        "--output",
        dir.path().join("big.txt").to_str().unwrap(),
    ]);
    assert!(gen.status.success());
    let oracle = run(&[
        "oracle",
        "--input",
        dir.path().join("big.txt").to_str().unwrap(),
        "--mode",
        "symdiff",
        "--k",
        "2",
    ]);
    assert_eq!(oracle.status.code(), Some(4));
}

#[test]
fn oracle_on_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "one.txt", "0 0 7\n");
    let output = run(&[
        "oracle",
        "--input",
        input.to_str().unwrap(),
        "--mode",
        "single",
    ]);
    assert!(output.status.success());
    assert_eq!(stdout(&output).trim(), "objective 7");
}

#[test]
fn cases_listing_counts() {
    let two = run(&["cases", "--k", "2", "--mode", "symdiff", "--verify"]);
    assert!(two.status.success());
    let text = stdout(&two);
    assert_eq!(text.matches("case sd2-").count(), 18);
    assert!(text.contains("18 cases (18 raw configurations"));
    assert!(text.contains("verify ok"));

    let three = run(&["cases", "--k", "3", "--mode", "symdiff", "--verify"]);
    assert!(three.status.success());
    assert!(stdout(&three).contains("1350 raw configurations"));

    let one = run(&["cases", "--k", "1"]);
    assert!(one.status.success());
    assert!(stdout(&one).contains("1 cases (1 raw configurations"));

    let four = run(&["cases", "--k", "4"]);
    assert_eq!(four.status.code(), Some(3));
}

#[test]
fn bad_inputs_exit_2_bad_config_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "1 2\n");
    let parse = run(&["solve", "--input", bad.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(2));

    let dup = write(dir.path(), "dup.txt", "1 1 1\n1 2 1\n");
    let dup_out = run(&["solve", "--input", dup.to_str().unwrap()]);
    assert_eq!(dup_out.status.code(), Some(2));

    let good = write(dir.path(), "good.txt", DIAGONAL);
    let large_k = run(&["solve", "--input", good.to_str().unwrap(), "--k", "4"]);
    assert_eq!(large_k.status.code(), Some(3));

    let missing_matrix = run(&[
        "solve",
        "--input",
        good.to_str().unwrap(),
        "--mode",
        "matrix",
    ]);
    assert_eq!(missing_matrix.status.code(), Some(3));

    // clap usage errors also exit 2
    let usage = run(&["solve"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn jitter_recovers_degenerate_instances() {
    let dir = tempfile::tempdir().unwrap();
    let dup = write(dir.path(), "dup.txt", "1 1 1\n1 2 1\n2 3 1\n");
    let plain = run(&[
        "solve",
        "--input",
        dup.to_str().unwrap(),
        "--mode",
        "single",
    ]);
    assert_eq!(plain.status.code(), Some(2));
    let jittered = run(&[
        "solve",
        "--input",
        dup.to_str().unwrap(),
        "--mode",
        "single",
        "--jitter",
        "1e-6",
        "--seed",
        "11",
    ]);
    assert!(jittered.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&jittered)).unwrap();
    assert_eq!(doc["objective"], 3.0);
}

#[test]
fn worker_counts_produce_identical_documents() {
    let dir = tempfile::tempdir().unwrap();
    let gen_path = dir.path().join("inst.txt");
    assert!(run(&[
        "gen",
        "--n",
        "12",
        "--seed",
        "9",
        "--output",
        gen_path.to_str().unwrap()
    ])
    .status
    .success());
    let one = run(&[
        "solve",
        "--input",
        gen_path.to_str().unwrap(),
        "--mode",
        "union",
        "--workers",
        "1",
    ]);
    let four = run(&[
        "solve",
        "--input",
        gen_path.to_str().unwrap(),
        "--mode",
        "union",
        "--workers",
        "4",
    ]);
    assert!(one.status.success() && four.status.success());
    let mut a: serde_json::Value = serde_json::from_str(&stdout(&one)).unwrap();
    let mut b: serde_json::Value = serde_json::from_str(&stdout(&four)).unwrap();
    // wall-clock timing is the only field allowed to differ
    a["timing_seconds"] = serde_json::json!(0);
    b["timing_seconds"] = serde_json::json!(0);
    assert_eq!(a, b);
}

#[test]
fn svg_output_counts_elements_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "diag.txt", DIAGONAL);
    let svg_a = dir.path().join("a.svg");
    let svg_b = dir.path().join("b.svg");
    for path in [&svg_a, &svg_b] {
        let output = run(&[
            "solve",
            "--input",
            input.to_str().unwrap(),
            "--mode",
            "symdiff",
            "--output",
            dir.path().join("r.json").to_str().unwrap(),
            "--svg",
            path.to_str().unwrap(),
        ]);
        assert!(output.status.success());
    }
    let a = std::fs::read_to_string(&svg_a).unwrap();
    let b = std::fs::read_to_string(&svg_b).unwrap();
    assert_eq!(a, b, "same inputs, byte-identical SVG");
    assert_eq!(a.matches("<rect").count(), 2);
    assert_eq!(a.matches("<circle").count(), 4);
}

#[test]
fn bench_prints_a_row_per_size_and_agrees_across_workers() {
    let one = run(&["bench", "--sizes", "10,14", "--seed", "4", "--workers", "1"]);
    assert!(one.status.success());
    let text = stdout(&one);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit()))
        .collect();
    assert_eq!(rows.len(), 2);

    let four = run(&["bench", "--sizes", "10,14", "--seed", "4", "--workers", "4"]);
    assert!(four.status.success());
    let objective = |s: &str| -> Vec<String> {
        s.lines()
            .filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit()))
            .map(|l| l.split_whitespace().nth(4).unwrap().to_string())
            .collect()
    };
    assert_eq!(objective(&text), objective(&stdout(&four)));
}

#[test]
fn solve_verify_round_trip_across_modes_and_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let modes = ["symdiff", "union", "single", "cross", "annulus"];
    for seed in 0..100u64 {
        let n = (seed % 11).to_string();
        let input = dir.path().join(format!("inst-{seed}.txt"));
        let result = dir.path().join(format!("res-{seed}.json"));
        assert!(run(&[
            "gen",
            "--n",
            &n,
            "--seed",
            &seed.to_string(),
            "--output",
            input.to_str().unwrap(),
        ])
        .status
        .success());
        let mode = modes[(seed as usize) % modes.len()];
        let solve = run(&[
            "solve",
            "--input",
            input.to_str().unwrap(),
            "--mode",
            mode,
            "--output",
            result.to_str().unwrap(),
        ]);
        assert!(solve.status.success(), "seed {seed} mode {mode}");
        let verify = run(&[
            "verify",
            "--input",
            input.to_str().unwrap(),
            "--result",
            result.to_str().unwrap(),
        ]);
        assert!(verify.status.success(), "seed {seed} mode {mode} verify");
    }
}
