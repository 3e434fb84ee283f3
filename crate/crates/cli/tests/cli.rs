use std::path::Path;
use std::process::{Command, Output};

use nabla_fc::commands::difference_rows;
use nabla_fc::args::{DefinitionArg, DiffArgs};
use nabla_fc::csvio::write_signal;
use nabla_fc_core::operators::{nabla_difference, DefinitionKind};
use nabla_fc_core::SampledSignal;
use tempfile::TempDir;

fn nabla_fc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nabla-fc")).args(args).env_remove("NABLA_FC_SEED").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(text: &str, index: usize) -> Vec<f64> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').nth(index).unwrap().parse().unwrap())
        .collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn weights_rows() {
    let out = nabla_fc(&["weights", "--alpha", "0.5", "--count", "4", "--kind", "diff"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "j,weight\n0,1\n1,-0.5\n2,-0.125\n3,-0.0625\n");
    let out = nabla_fc(&["weights", "--alpha", "1", "--count", "3", "--kind", "diff"]);
    assert_eq!(column(&stdout(&out), 1), vec![1.0, -1.0, 0.0]);
    assert_eq!(stdout(&out), "j,weight\n0,1\n1,-1\n2,0\n");
    let out = nabla_fc(&["weights", "--alpha", "0.5", "--count", "4", "--kind", "sum"]);
    assert_eq!(column(&stdout(&out), 1), vec![1.0, 0.5, 0.375, 0.3125]);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&nabla_fc(&["weights", "--alpha", "0.5", "--count", "0"])), 2);
    assert_eq!(code(&nabla_fc(&["weights", "--alpha", "half", "--count", "3"])), 2);
    assert_eq!(code(&nabla_fc(&["simulate", "--system", "lorenz", "--x0", "1"])), 2);
    assert_eq!(code(&nabla_fc(&["simulate", "--system", "linear", "--x0", "1"])), 2);
    assert_eq!(code(&nabla_fc(&["simulate", "--system", "example1", "--x0", "1,2,3"])), 2);
    assert_eq!(code(&nabla_fc(&["simulate", "--system", "linear", "--matrix", "1,2,3", "--x0", "1"])), 2);
    assert_eq!(code(&nabla_fc(&["optimize", "--rho", "0"])), 2);
    assert_eq!(code(&nabla_fc(&["example", "4"])), 2);
    assert_eq!(code(&nabla_fc(&["verify", "--trials", "0"])), 2);
}

#[test]
fn diff_examples() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("x.csv");
    std::fs::write(&input, "k,x\n-1,1\n0,2\n1,3\n").unwrap();
    let run = |def: &str| {
        let out = nabla_fc(&["diff", "--input", path_str(&input), "--alpha", "0.5", "--def", def]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        stdout(&out)
    };
    assert_eq!(run("caputo"), "k,value\n0,1\n1,1.5\n");
    let rl = column(&run("rl"), 1);
    assert_eq!(rl[1], 1.5 + 0.5);
    assert_eq!(column(&run("gl"), 1)[0], 2.0);
    assert_eq!(run("gl-mod"), "k,value\n1,3\n");

    std::fs::write(&input, "k,x\n4,1.25\n5,1.25\n6,1.25\n7,1.25\n").unwrap();
    assert!(column(&run("caputo"), 1).iter().all(|&v| v == 0.0));
}

#[test]
fn diff_data_errors() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("x.csv");
    std::fs::write(&input, "k,x\n-1,1\n0,2\n").unwrap();
    let out = nabla_fc(&["diff", "--input", path_str(&input), "--alpha", "0.5", "--def", "caputo", "--base", "-1"]);
    assert_eq!(code(&out), 3);
    std::fs::write(&input, "k,x\n-1,1\n1,2\n").unwrap();
    assert_eq!(code(&nabla_fc(&["diff", "--input", path_str(&input), "--alpha", "0.5"])), 2);
    std::fs::write(&input, "k,x\n-1,1\n0,two\n").unwrap();
    assert_eq!(code(&nabla_fc(&["diff", "--input", path_str(&input), "--alpha", "0.5"])), 2);
    std::fs::write(&input, "k,x\n-1,1\n0,NaN\n").unwrap();
    assert_eq!(code(&nabla_fc(&["diff", "--input", path_str(&input), "--alpha", "0.5"])), 3);
}

#[test]
fn diff_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("x.csv");
    let output = dir.path().join("d.csv");
    let values: Vec<f64> = (0..40).map(|i| ((i * 37 % 11) as f64 - 5.0) / 3.0 + 1e-7 * i as f64).collect();
    let signal = SampledSignal::new(2, 1, 1, values).unwrap();
    write_signal(std::fs::File::create(&input).unwrap(), &signal).unwrap();
    for (def, kind) in [("gl", DefinitionKind::GrunwaldLetnikov), ("rl", DefinitionKind::RiemannLiouville), ("caputo", DefinitionKind::Caputo)] {
        let out = nabla_fc(&["diff", "--input", path_str(&input), "--alpha", "0.37", "--def", def, "--out", path_str(&output)]);
        assert_eq!(code(&out), 0);
        let text = std::fs::read_to_string(&output).unwrap();
        let parsed = column(&text, 1);
        for (i, k) in (2..=signal.last_index()).enumerate() {
            assert_eq!(parsed[i].to_bits(), nabla_difference(&signal, 0.37, k, kind).unwrap()[0].to_bits());
        }
    }
    let args = DiffArgs { input, alpha: 0.37, definition: DefinitionArg::Caputo, memory: Some(3), base: None, out: None };
    let rows = difference_rows(&signal, &args).unwrap();
    assert_eq!(rows.len(), 39);
}

#[test]
fn verify_reports() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.json");
    let out = nabla_fc(&["verify", "--trials", "1", "--seed", "7", "--out", path_str(&report)]);
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let pairs = json["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 18);
    for key in ["kind", "definition", "trials", "maxGap", "violations"] {
        assert!(pairs[0].get(key).is_some(), "{key}");
    }
    assert_eq!(json["config"]["seed"], 7);

    let out = nabla_fc(&["verify", "--trials", "3", "--tolerance", "-1", "--out", path_str(&report)]);
    assert_eq!(code(&out), 1);
    assert!(report.exists());
}

#[test]
fn verify_full_suite_is_clean() {
    let out = nabla_fc(&["verify", "--trials", "200", "--seed", "42"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn seed_from_environment() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.json");
    let out = Command::new(env!("CARGO_BIN_EXE_nabla-fc"))
        .args(["verify", "--trials", "2", "--seed", "42", "--out", path_str(&report)])
        .env("NABLA_FC_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["config"]["seed"], 9);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 9);
}

#[test]
fn simulate_hand_steps() {
    let out = nabla_fc(&["simulate", "--system", "linear", "--matrix", "-1,0,0,-1", "--alpha", "0.5", "--x0", "1,1", "--steps", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "k,x1,x2,iters");
    assert_eq!(column(&text, 1), vec![1.0, 0.5, 0.375]);
    assert_eq!(column(&text, 2), vec![1.0, 0.5, 0.375]);
    assert_eq!(column(&text, 3)[0], 0.0);
}

#[test]
fn simulate_builtin_examples() {
    let out = nabla_fc(&["simulate", "--system", "example1", "--alpha", "0.8", "--x0", "2,-1", "--steps", "200"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let (x1, x2) = (column(&text, 1), column(&text, 2));
    assert_eq!(x1.len(), 201);
    assert!(x1[200].hypot(x2[200]) < 0.0117);

    let out = nabla_fc(&["simulate", "--system", "example2", "--alpha", "0.8", "--x0", "2,-1", "--steps", "200"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(column(&text, 1)[200].abs() < 1e-6 && column(&text, 2)[200].abs() < 1e-4);
}

#[test]
fn solver_failure_keeps_partial_output() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("t.csv");
    let out = nabla_fc(&[
        "simulate", "--system", "example1", "--x0", "2,-1", "--steps", "5", "--max-iterations", "1", "--out", path_str(&csv),
    ]);
    assert_eq!(code(&out), 4);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("k,x1,x2,iters\n-1,2,-1,0\n"));
    assert!(text.lines().last().unwrap().starts_with("# FAILED at k=0"));
}

#[test]
fn optimize_runs() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("run.csv");
    let out = nabla_fc(&["optimize", "--alpha", "0.8", "--rho", "2", "--x0", "2,-1", "--steps", "500", "--out", path_str(&csv)]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!((column(&text, 1)[500] - 1.0).abs() < 0.1 && (column(&text, 2)[500] - 1.0).abs() < 0.1);
    let values = std::fs::read_to_string(dir.path().join("run.objective.csv")).unwrap();
    assert!(values.starts_with("k,f_value\n-1,51\n"));

    let out = nabla_fc(&["optimize", "--x0", "1,1", "--steps", "4"]);
    let text = stdout(&out);
    assert!(column(&text, 1).iter().chain(&column(&text, 2)).all(|&v| v == 1.0));
}

#[test]
fn examples_write_artifacts_and_replay() {
    let dir = TempDir::new().unwrap();
    for n in ["1", "2", "3"] {
        let out = nabla_fc(&["example", n, "--out-dir", path_str(dir.path())]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let svg = std::fs::read_to_string(dir.path().join(format!("example{n}.svg"))).unwrap();
        assert!(svg.contains("<polyline"));
        let manifest_path = dir.path().join(format!("example{n}.manifest.json"));
        let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
        assert_eq!(manifest["command"], "example");
        let outputs: Vec<String> =
            manifest["outputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap().to_string()).collect();
        let before: Vec<Vec<u8>> = outputs.iter().map(|p| std::fs::read(p).unwrap()).collect();
        for p in &outputs {
            std::fs::remove_file(p).unwrap();
        }
        assert_eq!(code(&nabla_fc(&["replay", path_str(&manifest_path)])), 0);
        let after: Vec<Vec<u8>> = outputs.iter().map(|p| std::fs::read(p).unwrap()).collect();
        assert_eq!(before, after);
    }
    let rows = std::fs::read_to_string(dir.path().join("example3.csv")).unwrap().lines().count();
    assert_eq!(rows, 502);
}

#[test]
fn replay_simulate_manifest() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("lin.csv");
    let args = ["simulate", "--system", "linear", "--matrix", "-2,1,0,-1", "--alpha", "0.3", "--x0", "1,-1", "--steps", "40", "--out", path_str(&csv)];
    assert_eq!(code(&nabla_fc(&args)), 0);
    let first = std::fs::read(&csv).unwrap();
    std::fs::remove_file(&csv).unwrap();
    assert_eq!(code(&nabla_fc(&["replay", path_str(&dir.path().join("lin.manifest.json"))])), 0);
    assert_eq!(std::fs::read(&csv).unwrap(), first);
}
