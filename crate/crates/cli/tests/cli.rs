use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn admtool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_admtool"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run_config(command: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        command,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    admtool(&args)
}

fn summary(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap()
}

fn check<'a>(summary: &'a Value, name: &str) -> &'a Value {
    summary["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["functional"] == name)
        .unwrap_or_else(|| panic!("no {name} in summary"))
}

fn limits(check: &Value) -> Vec<f64> {
    match &check["fitted_limit"] {
        Value::Array(v) => v.iter().map(|x| x.as_f64().unwrap()).collect(),
        v => vec![v.as_f64().unwrap()],
    }
}

const FLAT: &str = r#"{
  "metric": { "dim": 3, "kind": { "type": "flat" } },
  "functionals": ["adm_mass", "intrinsic_mass", "identity_residuals", "scalar_moments", "decay_checks"],
  "schedule": { "radii": [10, 20, 40, 80] }
}"#;

const SHIFTED: &str = r#"{
  "metric": { "dim": 3, "kind": { "type": "schwarzschild", "mass": 1.0, "center": [1, 2, 3] } },
  "functionals": ["adm_mass", "intrinsic_mass", "cs_center", "intrinsic_center",
                  "identity_residuals", "scalar_moments", "decay_checks"]
}"#;

#[test]
fn flat_metric_without_centers_passes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "flat.json", FLAT);
    let out = dir.path().join("out");
    let result = run_config("sweep", &config, &out, &[]);
    assert_eq!(
        result.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&result.stderr)
    );
    let s = summary(&out);
    assert_eq!(s["passed"], true);
    for name in [
        "adm_mass",
        "intrinsic_mass",
        "mass_difference",
        "scalar_moments",
    ] {
        assert!(limits(check(&s, name)).iter().all(|v| *v == 0.0), "{name}");
    }
    for file in [
        "adm_mass.csv",
        "identity_residuals.csv",
        "scalar_moments.csv",
        "decay_checks.csv",
        "fits.csv",
    ] {
        assert!(out.join(file).exists(), "{file}");
    }
}

#[test]
fn flat_metric_centers_are_undefined() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "flat.json", FLAT);
    let result = run_config("center", &config, &dir.path().join("out"), &[]);
    assert_eq!(result.status.code(), Some(3));
    let err = String::from_utf8_lossy(&result.stderr);
    assert!(err.contains("cs_center"), "{err}");
}

#[test]
fn shifted_schwarzschild_full_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "s.json", SHIFTED);
    let out = dir.path().join("out");
    let result = run_config("sweep", &config, &out, &[]);
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert_eq!(result.status.code(), Some(0), "{stdout}");
    let s = summary(&out);
    for name in ["adm_mass", "intrinsic_mass"] {
        let m = limits(check(&s, name));
        assert!((m[0] - 1.0).abs() < 1e-4, "{name}: {m:?}");
    }
    for name in ["cs_center", "intrinsic_center"] {
        let c = limits(check(&s, name));
        for (got, want) in c.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-3, "{name}: {c:?}");
        }
    }
    assert!(limits(check(&s, "center_difference"))
        .iter()
        .all(|v| v.abs() < 1e-3));
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 10);
}

#[test]
fn every_summary_number_is_in_the_fit_table() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "s.json", SHIFTED);
    let out = dir.path().join("out");
    run_config("mass", &config, &out, &["--radii", "10,20,40,80,160"]);
    let s = summary(&out);
    let mut reader = csv::Reader::from_path(out.join("fits.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    for c in s["checks"].as_array().unwrap() {
        let name = c["functional"].as_str().unwrap();
        let mine: Vec<&csv::StringRecord> = rows.iter().filter(|r| &r[0] == name).collect();
        for (k, limit) in limits(c).iter().enumerate() {
            let row = mine[k];
            assert_eq!(row[2].parse::<f64>().unwrap(), *limit);
            if let Some(rate) = c["fitted_rate"].as_f64() {
                assert_eq!(row[3].parse::<f64>().unwrap(), rate);
            }
            assert_eq!(
                row[5].parse::<bool>().unwrap(),
                c["verdict"].as_bool().unwrap()
            );
            assert_eq!(
                row[6].parse::<f64>().unwrap(),
                c["tolerance"].as_f64().unwrap()
            );
        }
    }
}

#[test]
fn output_is_byte_for_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "s.json", SHIFTED);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        // a short schedule does not certify; the verdict is irrelevant here
        let r = run_config(
            "compare",
            &config,
            out,
            &["--radii", "10,20,40,80,160", "--order", "16"],
        );
        assert!(matches!(r.status.code(), Some(0) | Some(1)));
    }
    let mut names: Vec<_> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 5);
    for name in names {
        assert_eq!(
            fs::read(a.join(&name)).unwrap(),
            fs::read(b.join(&name)).unwrap(),
            "{name:?}"
        );
    }
}

#[test]
fn json_format_writes_json_tables() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "flat.json", FLAT);
    let out = dir.path().join("out");
    let r = run_config("identities", &config, &out, &["--format", "json"]);
    assert_eq!(r.status.code(), Some(0));
    let table: Value =
        serde_json::from_str(&fs::read_to_string(out.join("identity_residuals.json")).unwrap())
            .unwrap();
    assert_eq!(table["columns"][0], "r");
    assert_eq!(table["rows"].as_array().unwrap().len(), 4);
    assert!(out.join("fits.json").exists());
}

#[test]
fn ellipsoid_schedule_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "e.json",
        r#"{
          "metric": { "dim": 3, "kind": { "type": "schwarzschild", "mass": 1.0 } },
          "functionals": ["adm_mass"],
          "schedule": { "ellipsoid": { "scales": [2, 1, 1], "radii": [10, 20, 40, 80, 160, 320, 640] } },
          "tolerances": { "certification": 1e-3 }
        }"#,
    );
    let out = dir.path().join("out");
    let r = run_config("mass", &config, &out, &[]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stdout)
    );
    assert!(limits(check(&summary(&out), "mass_difference"))[0].abs() < 1e-3);
}

#[test]
fn parity_violator_reports_but_fails_centers() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "rt.json",
        r#"{
          "metric": { "dim": 3, "kind": { "type": "rt_violator", "amplitude": 0.2 } },
          "functionals": ["adm_mass", "intrinsic_mass", "decay_checks"],
          "center_mass": 1.0
        }"#,
    );
    let out = dir.path().join("out");
    let r = run_config("sweep", &config, &out, &[]);
    assert_eq!(r.status.code(), Some(1));
    let s = summary(&out);
    assert_eq!(check(&s, "mass_difference")["verdict"], true);
    assert_eq!(check(&s, "decay_all")["verdict"], true);
    assert_eq!(check(&s, "decay_odd")["verdict"], false);
    // centers are reported even though the hypothesis fails
    let r = run_config("compare", &config, &dir.path().join("c"), &[]);
    assert!(matches!(r.status.code(), Some(0) | Some(1)));
    assert!(dir.path().join("c").join("center_difference.csv").exists());
}

#[test]
fn negative_order_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "bad.json",
        r#"{
  "metric": { "dim": 3, "kind": { "type": "flat" } },
  "functionals": ["adm_mass"],
  "order": -4
}"#,
    );
    let r = run_config("mass", &config, &dir.path().join("out"), &[]);
    assert_eq!(r.status.code(), Some(2));
    let err = String::from_utf8_lossy(&r.stderr);
    assert!(err.contains("line 4"), "{err}");

    let good = write_config(dir.path(), "flat.json", FLAT);
    let r = run_config("mass", &good, &dir.path().join("out"), &["--order", "-3"]);
    assert_eq!(r.status.code(), Some(2));
    let r = run_config("mass", &good, &dir.path().join("out"), &["--order", "0"]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn invalid_configs_exit_with_usage_status() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{ "metric": { "dim": 3, "kind": { "type": "flat" } }, "functionals": [] }"#,
        r#"{ "metric": { "dim": 3, "kind": { "type": "flat" } }, "functionals": ["momentum"] }"#,
        r#"{ "metric": { "dim": 3, "kind": { "type": "flat" } }, "functionals": ["adm_mass"], "extra": 1 }"#,
        r#"{ "metric": { "dim": 3, "kind": { "type": "schwarzschild", "mass": 1 } },
             "functionals": ["adm_mass"], "schedule": { "radii": [0.5, 2, 4, 8] } }"#,
        r#"{ "metric": { "dim": 3, "kind": { "type": "flat" } }, "functionals": ["adm_mass"],
             "schedule": { "radii": [10, 20, 40] } }"#,
        r#"{ "metric": { "dim": 3, "kind": { "type": "rt_violator", "amplitude": 0.9 } },
             "functionals": ["adm_mass"] }"#,
        "not json",
    ];
    for (k, text) in cases.iter().enumerate() {
        let config = write_config(dir.path(), &format!("c{k}.json"), text);
        let r = run_config("sweep", &config, &dir.path().join("out"), &[]);
        assert_eq!(
            r.status.code(),
            Some(2),
            "case {k}: {}",
            String::from_utf8_lossy(&r.stderr)
        );
    }
    let r = admtool(&["mass", "--config", "/nonexistent/config.json"]);
    assert_eq!(r.status.code(), Some(2));
}
