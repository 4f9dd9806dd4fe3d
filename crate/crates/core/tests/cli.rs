//! The `hems` binary: exit codes, output files and byte-level determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hems_core::io::synth::{COOLING_FILE, HISTORY_FILE};

const SMALL_GA: &str = r#"{"ga": {"pop_size": 20, "generations": 10}}"#;
const SMALL_FORECAST: &str =
    r#"{"forecast": {"forest": {"n_trees": 20}, "gbm": {"n_trees": 20}, "mlp": {"max_iter": 40}}}"#;

fn hems(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hems"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&hems(&["--help"])), 0);
    assert_eq!(code(&hems(&["bogus"])), 1);
    assert_eq!(
        code(&hems(&["run-case", "--case", "e", "--config", "x", "--out", "y"])),
        1
    );
}

#[test]
fn empty_config_runs_the_bundled_household() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", "{}");
    let out = dir.path().join("a");
    let o = hems(&["run-case", "--case", "a", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let summary = json(&out.join("summary.json"));
    assert_eq!(summary["config"]["horizon"], 12);
    assert_eq!(summary["config"]["uncertainty"]["deviation_fraction"], 0.1);
    assert_eq!(summary["result"]["case"], "a");
    assert!(out.join("schedule.csv").exists());
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    for (name, body) in [
        ("zero.json", r#"{"horizon": 0}"#),
        ("unknown.json", r#"{"horizn": 12}"#),
        (
            "budget.json",
            r#"{"uncertainty": {"budgets": {"demand": 13.0, "occupancy": 1.0}}}"#,
        ),
        (
            "tariff.json",
            r#"{"tariff": {"rates": {"file": "missing.csv", "column": "rate"}}}"#,
        ),
        ("broken.json", "{"),
    ] {
        let cfg = write_config(dir.path(), name, body);
        let o = hems(&["run-case", "--case", "b", "--config", s(&cfg), "--out", s(&out)]);
        assert_eq!(code(&o), 1, "{name}: {}", stderr(&o));
        assert!(stderr(&o).starts_with("error: "), "{name}");
    }
    let o = hems(&[
        "run-case",
        "--case",
        "a",
        "--config",
        s(&dir.path().join("absent.json")),
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 1);
    let tariff = hems(&[
        "run-case",
        "--case",
        "a",
        "--config",
        s(&dir.path().join("tariff.json")),
        "--out",
        s(&out),
    ]);
    assert!(stderr(&tariff).contains("missing.csv"), "{}", stderr(&tariff));
}

#[test]
fn synthetic_data_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    for (out, seed) in [(&a, "3"), (&b, "3"), (&c, "4")] {
        let o = hems(&["synth-data", "--seed", seed, "--days", "7", "--out", s(out)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    for f in [HISTORY_FILE, COOLING_FILE] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
        assert_ne!(fs::read(a.join(f)).unwrap(), fs::read(c.join(f)).unwrap(), "{f}");
    }
    let text = fs::read_to_string(a.join(HISTORY_FILE)).unwrap();
    assert_eq!(text.lines().count(), 7 * 24 + 1);
}

#[test]
fn fit_arx_recovers_the_generator() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    assert_eq!(code(&hems(&["synth-data", "--seed", "2", "--out", s(&data)])), 0);
    let out = dir.path().join("arx");
    let o = hems(&["fit-arx", "--input", s(&data.join(COOLING_FILE)), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let model = json(&out.join("arx.json"));
    let text = model.to_string();
    assert!(text.contains("alpha"), "{text}");

    // A fitted model plugs straight back into a run configuration.
    let cfg = write_config(
        dir.path(),
        "c.json",
        &format!(r#"{{"arx": {{"file": "{}"}}}}"#, out.join("arx.json").display()),
    );
    let o = hems(&[
        "run-case",
        "--case",
        "a",
        "--config",
        s(&cfg),
        "--out",
        s(&dir.path().join("run")),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn constant_setpoint_history_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("timestamp,ac_kw,outdoor_temp_c,occupancy,setpoint_c\n");
    for h in 0..48 {
        let (d, hh) = (3 + h / 24, h % 24);
        body.push_str(&format!(
            "2023-07-{d:02}T{hh:02}:00:00,{},{},{},24\n",
            1.0 + (h % 5) as f64 * 0.1,
            30.0 + (h % 7) as f64,
            h % 4
        ));
    }
    let input = write_config(dir.path(), "cool.csv", &body);
    let o = hems(&["fit-arx", "--input", s(&input), "--out", s(&dir.path().join("o"))]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn tiny_forecast_input_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("timestamp,demand_kw,occupancy\n");
    for h in 0..6 {
        body.push_str(&format!("2023-07-03T{h:02}:00:00,{},{}\n", 1.0 + h as f64, h % 3));
    }
    let input = write_config(dir.path(), "h.csv", &body);
    let o = hems(&["forecast", "--input", s(&input), "--out", s(&dir.path().join("o"))]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
}

#[test]
fn duplicate_timestamp_is_reported_with_its_row() {
    let dir = tempfile::tempdir().unwrap();
    let body =
        "timestamp,demand_kw,occupancy\n2023-07-03T00:00:00,1,0\n2023-07-03T01:00:00,1,1\n2023-07-03T01:00:00,2,1\n";
    let input = write_config(dir.path(), "h.csv", body);
    let o = hems(&["forecast", "--input", s(&input), "--out", s(&dir.path().join("o"))]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("row 3"), "{}", stderr(&o));
}

#[test]
fn forecast_writes_predictions_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    assert_eq!(
        code(&hems(&["synth-data", "--seed", "5", "--days", "10", "--out", s(&data)])),
        0
    );
    let cfg = write_config(dir.path(), "c.json", SMALL_FORECAST);
    let out = dir.path().join("fc");
    let o = hems(&[
        "forecast",
        "--input",
        s(&data.join(HISTORY_FILE)),
        "--config",
        s(&cfg),
        "--seed",
        "9",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let header = fs::read_to_string(out.join("forecast.csv")).unwrap();
    let first = header.lines().next().unwrap();
    assert!(first.starts_with("timestamp,actual"), "{first}");
    // timestamp, actual, one column per model, then the normalised best.
    assert_eq!(first.split(',').collect::<Vec<_>>()[5], "normalized");
    let report = json(&out.join("forecast_report.json"));
    assert_eq!(report["seed"], 9);
    assert!(report["report"]["best"].is_string(), "{report}");

    let single = dir.path().join("rf");
    let o = hems(&[
        "forecast",
        "--input",
        s(&data.join(HISTORY_FILE)),
        "--config",
        s(&cfg),
        "--model",
        "rf",
        "--out",
        s(&single),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let first = fs::read_to_string(single.join("forecast.csv")).unwrap();
    assert_eq!(first.lines().next(), Some("timestamp,actual,rf,normalized"));
}

#[test]
fn sweep_budgets_writes_the_cost_curve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", "{}");
    let out = dir.path().join("sweep");
    let o = hems(&["sweep-budgets", "--case", "b", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gamma,cost"));
    let costs: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(costs.len(), 13);
    assert!(costs.windows(2).all(|w| w[1] >= w[0]));
    assert_eq!(json(&out.join("summary.json"))["monotone"], true);
}

fn compare_run(dir: &Path, name: &str, cfg: &Path) -> PathBuf {
    let out = dir.join(name);
    let o = hems(&["compare", "--config", s(cfg), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    out
}

#[test]
fn compare_outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", SMALL_GA);
    let a = compare_run(dir.path(), "a", &cfg);
    let b = compare_run(dir.path(), "b", &cfg);
    let files = [
        "setpoints.csv",
        "transfers.csv",
        "summary.json",
        "case_c/convergence.csv",
        "case_c/front.csv",
        "case_d/convergence.csv",
        "case_d/setpoints.csv",
        "case_a/schedule.csv",
    ];
    for f in files {
        let (x, y) = (fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
        assert!(x == y, "{f} differs");
    }
    let setpoints = fs::read_to_string(a.join("setpoints.csv")).unwrap();
    assert_eq!(setpoints.lines().next(), Some("hour,setpoint_c,setpoint_d"));
    assert_eq!(setpoints.lines().count(), 13);
    let conv = fs::read_to_string(a.join("case_c/convergence.csv")).unwrap();
    assert_eq!(conv.lines().count(), 12);
    let summary = json(&a.join("summary.json"));
    assert!(summary["config"]["ga"]["pop_size"] == 20, "{summary}");
}

#[test]
fn run_case_with_explicit_budget() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", SMALL_GA);
    let out = dir.path().join("d");
    let o = hems(&[
        "run-case",
        "--case",
        "d",
        "--config",
        s(&cfg),
        "--gamma",
        "3.5",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let summary = json(&out.join("summary.json"));
    assert_eq!(summary["result"]["budgets"]["demand"], 3.5);
    assert_eq!(summary["result"]["ac_feasible"], true);
    for f in [
        "convergence.csv",
        "front.csv",
        "setpoints.csv",
        "transfers.csv",
        "schedule.csv",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    let bad = hems(&[
        "run-case",
        "--case",
        "d",
        "--config",
        s(&cfg),
        "--gamma",
        "12.5",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&bad), 1);
}
