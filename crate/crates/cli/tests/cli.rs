use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn telebench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_telebench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn bundled_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/measured_device.json")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn noiseless_bench_reports_unit_fidelities() {
    let o = telebench(&["bench", "--noise=off", "--shots=0", "--restarts=4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    for row in ["state fidelity |0>", "Fp 11", "mean F_avg"] {
        let line = text.lines().find(|l| l.starts_with(row)).unwrap();
        assert!(line.contains("1.0000"), "{line}");
    }
}

#[test]
fn noisy_bench_shows_reference_column() {
    let cfg = bundled_config();
    let o = telebench(&[
        "bench",
        "--config",
        cfg.to_str().unwrap(),
        "--shots=0",
        "--noise=on",
        "--restarts=4",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().contains("reference"));
    let line = text.lines().find(|l| l.starts_with("mean F_avg")).unwrap();
    let cols: Vec<&str> = line.split_whitespace().collect();
    let simulated: f64 = cols[2].parse().unwrap();
    assert_eq!(cols[3], "0.8800");
    assert!(simulated > 2.0 / 3.0 && simulated < 1.0);
}

#[test]
fn missing_config_is_a_usage_error() {
    let o = telebench(&["bench", "--config", "/nonexistent/device.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/device.json"));
}

#[test]
fn unknown_config_field_names_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"shots\": 0,\n  \"nosie\": true\n}\n").unwrap();
    let o = telebench(&["bench", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("nosie") && err.contains("line 3"), "{err}");
}

#[test]
fn malformed_json_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"shots\": }").unwrap();
    let o = telebench(&["bench", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"));
}

#[test]
fn unphysical_device_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dev.json");
    std::fs::write(&path, r#"{"device": {"t2_star": [5e-6, 0.6e-6, 0.65e-6]}}"#).unwrap();
    let o = telebench(&["bench", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sampled_run_without_seed_is_rejected() {
    let o = telebench(&["bench", "--shots=100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("seed"));
}

#[test]
fn unknown_state_label_is_rejected() {
    let o = telebench(&["state", "ghz"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_flag_value_is_rejected() {
    assert_eq!(
        telebench(&["bench", "--noise=maybe"]).status.code(),
        Some(2)
    );
    assert_eq!(telebench(&["bench", "--format=xml"]).status.code(), Some(2));
}

#[test]
fn empty_config_runs_noiseless_analytic_benchmark() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    std::fs::write(&path, "").unwrap();
    let out = dir.path().join("out");
    let o = telebench(&[
        "bench",
        "--config",
        path.to_str().unwrap(),
        "--restarts=2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["schema"], 1);
    assert_eq!(report["metadata"]["noise"], false);
    assert_eq!(report["metadata"]["shots"], 0);
    assert_eq!(report["mean_output_fidelity"], 1.0);
    assert!(report["metadata"]["generated_at"].is_string());
}

#[test]
fn state_minus_noiseless_matches_ideal_pauli_set() {
    let o = telebench(&[
        "state",
        "minus",
        "--noise=off",
        "--shots=0",
        "--no-timestamp",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s = &v["state"];
    assert_eq!(s["input"], "minus");
    assert_eq!(s["state_fidelity"], 1.0);
    let measured = s["pauli_set"]["values"].as_array().unwrap();
    let ideal = s["ideal_pauli_values"].as_array().unwrap();
    assert_eq!(measured.len(), 63);
    for (m, i) in measured.iter().zip(ideal) {
        assert!((m.as_f64().unwrap() - i.as_f64().unwrap()).abs() < 1e-9);
    }
    assert_eq!(s["density_matrix"]["re"].as_array().unwrap().len(), 8);
    assert_eq!(s["witness"]["expectation"], -0.5);
}

#[test]
fn state_minus_noisy_reports_witness() {
    let o = telebench(&["state", "minus", "--noise=on", "--shots=0", "--restarts=4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let f = v["state"]["state_fidelity"].as_f64().unwrap();
    assert!(f < 1.0 && f > 0.5);
    assert!(v["state"]["witness"]["expectation"].as_f64().unwrap() < 0.0);
    assert!(v["state"]["tangle_upper_bound"].is_number());
    assert_eq!(v["reference"]["state_fidelity"], 0.78);
}

#[test]
fn state_zero_has_no_witness() {
    let o = telebench(&["state", "0", "--no-timestamp"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["state"]["witness"].is_null());
}

#[test]
fn identical_runs_give_identical_json() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let mut args = vec![
            "bench",
            "--noise=on",
            "--shots=2000",
            "--seed=11",
            "--restarts=8",
            "--out",
            out.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        let o = telebench(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read_to_string(out.join("report.json")).unwrap()
    };
    let a = run("a", &["--no-timestamp"]);
    let b = run("b", &["--no-timestamp"]);
    assert_eq!(a, b);

    let strip = |text: String| {
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v["metadata"]
            .as_object_mut()
            .unwrap()
            .remove("generated_at");
        serde_json::to_string(&v).unwrap()
    };
    let c = strip(run("c", &[]));
    assert_eq!(c, strip(a.clone()));

    let other = dir.path().join("d");
    let o = telebench(&[
        "bench",
        "--noise=on",
        "--shots=2000",
        "--seed=12",
        "--restarts=8",
        "--no-timestamp",
        "--out",
        other.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_ne!(
        std::fs::read_to_string(other.join("report.json")).unwrap(),
        a
    );
}

#[test]
fn csv_matches_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("both");
    let o = telebench(&[
        "bench",
        "--noise=on",
        "--restarts=4",
        "--format=both",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json = read_json(&out.join("report.json"));
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("input,outcome,metric,value"));
    let inputs = ["0", "1", "minus", "plus"];
    let outcomes = ["00", "01", "10", "11"];
    let mut checked = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let value: f64 = f[3].parse().unwrap();
        let expected = match (f[0], f[1], f[2]) {
            (i, "", "state_fidelity") => {
                let k = inputs.iter().position(|x| *x == i).unwrap();
                &json["states"][k]["state_fidelity"]
            }
            (i, o, "probability") => {
                let k = inputs.iter().position(|x| *x == i).unwrap();
                let j = outcomes.iter().position(|x| *x == o).unwrap();
                &json["states"][k]["outcomes"][j]["probability"]
            }
            ("", o, "average_output_fidelity") => {
                let j = outcomes.iter().position(|x| *x == o).unwrap();
                &json["processes"][j]["average_output_fidelity"]
            }
            ("", "", "mean_process_fidelity") => &json["mean_process_fidelity"],
            _ => continue,
        };
        assert_eq!(Some(value), expected.as_f64(), "{line}");
        checked += 1;
    }
    assert_eq!(checked, 4 + 16 + 4 + 1);
}

#[test]
fn state_writes_into_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let o = telebench(&["state", "plus", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let v = read_json(&dir.path().join("state_plus.json"));
    assert_eq!(v["state"]["input"], "plus");
}
