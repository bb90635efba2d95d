use std::path::Path;
use std::process::{Command, Output};

use hiding::states::{diagonal_state, random_gue_operator};
use hiding::{BipartiteOperator, QuantumXorGame, RngSeed};
use hiding_cli::files::{parse_operator_file, write_game_file, write_operator_file, OperatorFile};
use serde_json::Value;
use tempfile::TempDir;

fn hiding(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hiding")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_json(dir: &TempDir, name: &str, value: &Value) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn identity_json(n_a: usize, n_b: usize) -> Value {
    let n = n_a * n_b;
    let re: Vec<f64> = (0..n * n).map(|k| if k % (n + 1) == 0 { 1.0 } else { 0.0 }).collect();
    serde_json::json!({ "n_a": n_a, "n_b": n_b, "re": re, "im": vec![0.0; n * n] })
}

#[test]
fn operator_file_round_trip_is_exact() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("z.json");
    let z = random_gue_operator(2, 3, &mut RngSeed(5).rng()).unwrap();
    write_operator_file(&path, &z).unwrap();
    let back = parse_operator_file(&path).unwrap();
    let diff = (back.operator.matrix() - z.matrix()).iter().map(|c| c.norm()).fold(0.0, f64::max);
    assert!(diff <= 1e-15, "round trip drift {diff}");
    assert_eq!((back.operator.n_a(), back.operator.n_b()), (2, 3));
    assert_eq!(OperatorFile::from_operator(&back.operator), OperatorFile::from_operator(&z));
}

#[test]
fn missing_file_is_a_validation_error() {
    let out = hiding(&["ratio", "--input", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("file not found"));
}

#[test]
fn schema_and_length_errors_name_the_problem() {
    let dir = TempDir::new().unwrap();
    let bad = write_json(&dir, "bad.json", &serde_json::json!({ "n_a": 2, "re": [] }));
    let out = hiding(&["ratio", "--input", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("schema violation"), "{}", stderr(&out));

    let mut doc = identity_json(2, 2);
    doc["im"].as_array_mut().unwrap().pop();
    let short = write_json(&dir, "short.json", &doc);
    let out = hiding(&["ratio", "--input", &short]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("field `im`"), "{}", stderr(&out));
}

#[test]
fn asymmetry_warns_or_rejects() {
    let dir = TempDir::new().unwrap();
    let mut doc = identity_json(2, 2);
    doc["re"][1] = 1e-9.into();
    let slight = write_json(&dir, "slight.json", &doc);
    let out = hiding(&["ratio", "--input", &slight]);
    let report = stdout_json(&out);
    assert!(stderr(&out).contains("warning"), "{}", stderr(&out));
    assert!(report["warning"].is_string());

    doc["re"][1] = 0.1.into();
    let skewed = write_json(&dir, "skewed.json", &doc);
    let out = hiding(&["ratio", "--input", &skewed]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not Hermitian"));
}

#[test]
fn zero_operator_is_degenerate() {
    let dir = TempDir::new().unwrap();
    let zero = serde_json::json!({ "n_a": 2, "n_b": 2, "re": vec![0.0; 16], "im": vec![0.0; 16] });
    let path = write_json(&dir, "zero.json", &zero);
    let out = hiding(&["ratio", "--input", &path]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("degenerate"));
}

#[test]
fn density_matrix_has_unit_ratio() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("rho.json");
    let rho = diagonal_state(&[0.4, 0.3, 0.2, 0.1, 0.0, 0.0]).unwrap();
    write_operator_file(&path, &BipartiteOperator::hermitian(2, 3, rho).unwrap()).unwrap();
    let report = stdout_json(&hiding(&["ratio", "--input", path.to_str().unwrap()]));
    assert!((report["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((report["trace_norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn werner_agrees_between_xor_and_ratio() {
    let game = stdout_json(&hiding(&["xor", "--werner", "3", "--seed", "4"]));
    let ratio = stdout_json(&hiding(&["ratio", "--generator", "werner", "--d", "3", "--seed", "4"]));
    for (g, r) in [("beta_all", "trace_norm"), ("beta_product", "eps_estimate"), ("ratio", "ratio")] {
        let (a, b) = (game[g].as_f64().unwrap(), ratio[r].as_f64().unwrap());
        assert!((a - b).abs() < 1e-12, "{g} {a} vs {r} {b}");
    }
    assert!((ratio["eps_estimate"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
}

fn single_state_game(dir: &TempDir) -> std::path::PathBuf {
    let rho = diagonal_state(&[0.5, 0.25, 0.25, 0.0]).unwrap();
    let game = QuantumXorGame::new(2, 2, vec![rho], vec![1], vec![1.0]).unwrap();
    let path = dir.path().join("game.json");
    write_game_file(&path, &game).unwrap();
    path
}

#[test]
fn single_state_game_has_unit_ratio() {
    let dir = TempDir::new().unwrap();
    let path = single_state_game(&dir);
    let report = stdout_json(&hiding(&["xor", "--game", path.to_str().unwrap()]));
    assert!((report["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(report["satisfied"], Value::Bool(true));
}

#[test]
fn game_probabilities_must_sum_to_one() {
    let dir = TempDir::new().unwrap();
    let path = single_state_game(&dir);
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["probs"][0] = 0.9.into();
    let bad = write_json(&dir, "bad_game.json", &doc);
    let out = hiding(&["xor", "--game", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("deviation"), "{}", stderr(&out));
}

#[test]
fn darwinism_row_and_sweep() {
    let out = hiding(&["darwinism", "--da-min", "2", "--da-max", "2", "--dr-min", "5", "--dr-max", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let row = rows.records().next().unwrap().unwrap();
    assert_eq!(&row[0], "2");
    assert_eq!(&row[2], "4.0");
    assert!((row[5].parse::<f64>().unwrap() - 0.94193).abs() < 1e-5);

    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("sweep.csv");
    let out = hiding(&[
        "darwinism",
        "--da-min",
        "3",
        "--da-max",
        "50",
        "--dr-min",
        "1",
        "--dr-max",
        "60",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_path(&out_path).unwrap();
    let mut count = 0;
    for rec in reader.records() {
        let rec = rec.unwrap();
        assert!(rec[4].parse::<f64>().unwrap() >= 1.0, "{rec:?}");
        count += 1;
    }
    assert_eq!(count, 48 * 60);
}

#[test]
fn scaling_csv_has_header_and_rows() {
    let out = hiding(&["scaling", "--generator", "induced", "--min-dim", "2", "--max-dim", "3", "--samples", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "seed,n_a,n_b,generator,trace_norm,eps_estimate,restarts,converged,ratio,bound,margin"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn verify_is_reproducible_and_passes() {
    let a = hiding(&["verify", "--seed", "9"]);
    let b = hiding(&["verify", "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["passed"], Value::Bool(true));
}

#[test]
fn conflicting_sources_are_rejected() {
    let out = hiding(&["ratio"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hiding(&["ratio", "--generator", "gue"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hiding(&["xor"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("r.json");
    let out = hiding(&["ratio", "--generator", "gue", "--d", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&path)).unwrap()).unwrap();
    assert_eq!(v["satisfied"], Value::Bool(true));
}
