//! Tables and summary on disk.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use crate::config::Format;
use crate::error::RunError;
use crate::run::{Check, Outcome, Table};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |e| RunError::Output(format!("{}: {e}", path.display()))
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> RunError + '_ {
    move |e| RunError::Output(format!("{}: {e}", path.display()))
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), RunError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.write_record(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn write_json(path: &Path, value: &Value) -> Result<(), RunError> {
    let mut text = serde_json::to_string_pretty(value).expect("json values always serialize");
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

/// Shortest round-trip text, written exactly as in the JSON files.
fn num(v: f64) -> String {
    if v.is_finite() {
        serde_json::to_string(&v).expect("finite floats serialize")
    } else {
        v.to_string()
    }
}

fn scalar_or_vector(values: &[f64]) -> Value {
    if values.len() == 1 {
        json!(values[0])
    } else {
        json!(values)
    }
}

fn table_header(table: &Table) -> Vec<String> {
    std::iter::once("r".to_string())
        .chain(table.columns.iter().cloned())
        .collect()
}

fn write_table(dir: &Path, table: &Table, format: Format) -> Result<(), RunError> {
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|(r, v)| std::iter::once(r).chain(v).map(|x| num(*x)).collect())
                .collect();
            write_csv(
                &dir.join(format!("{}.csv", table.name)),
                &table_header(table),
                &rows,
            )
        }
        Format::Json => {
            let rows: Vec<Vec<f64>> = table
                .rows
                .iter()
                .map(|(r, v)| std::iter::once(*r).chain(v.iter().copied()).collect())
                .collect();
            let value = json!({ "columns": table_header(table), "rows": rows });
            write_json(&dir.join(format!("{}.json", table.name)), &value)
        }
    }
}

const FIT_COLUMNS: [&str; 7] = [
    "functional",
    "component",
    "fitted_limit",
    "fitted_rate",
    "residual",
    "verdict",
    "tolerance",
];

fn fit_rows(checks: &[Check]) -> Vec<Vec<String>> {
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    let mut rows = Vec::new();
    for c in checks {
        for (k, limit) in c.fitted_limit.iter().enumerate() {
            rows.push(vec![
                c.functional.clone(),
                (k + 1).to_string(),
                num(*limit),
                opt(c.fitted_rate),
                opt(c.residual),
                c.verdict.to_string(),
                num(c.tolerance),
            ]);
        }
    }
    rows
}

/// Writes every table, a fit table holding every summary number, and
/// `summary.json`.
pub fn write_outcome(dir: &Path, outcome: &Outcome, format: Format) -> Result<(), RunError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for table in &outcome.tables {
        write_table(dir, table, format)?;
    }
    match format {
        Format::Csv => {
            let header: Vec<String> = FIT_COLUMNS.iter().map(|s| s.to_string()).collect();
            write_csv(&dir.join("fits.csv"), &header, &fit_rows(&outcome.checks))?;
        }
        Format::Json => {
            let rows: Vec<Value> = outcome
                .checks
                .iter()
                .flat_map(|c| {
                    c.fitted_limit.iter().enumerate().map(move |(k, limit)| {
                        json!({
                            "functional": c.functional,
                            "component": k + 1,
                            "fitted_limit": limit,
                            "fitted_rate": c.fitted_rate,
                            "residual": c.residual,
                            "verdict": c.verdict,
                            "tolerance": c.tolerance,
                        })
                    })
                })
                .collect();
            write_json(&dir.join("fits.json"), &Value::Array(rows))?;
        }
    }
    let checks: Vec<Value> = outcome
        .checks
        .iter()
        .map(|c| {
            json!({
                "functional": c.functional,
                "fitted_limit": scalar_or_vector(&c.fitted_limit),
                "fitted_rate": c.fitted_rate,
                "verdict": c.verdict,
                "tolerance": c.tolerance,
            })
        })
        .collect();
    write_json(
        &dir.join("summary.json"),
        &json!({ "passed": outcome.passed(), "checks": checks }),
    )
}

/// One line per check for the terminal.
pub fn describe(check: &Check) -> String {
    let tag = if check.verdict { "PASS" } else { "FAIL" };
    let limit: Vec<String> = check
        .fitted_limit
        .iter()
        .map(|v| format!("{v:.6e}"))
        .collect();
    let rate = check
        .fitted_rate
        .map(|r| format!(", rate {r:.4}"))
        .unwrap_or_default();
    format!(
        "{tag} {}: limit [{}]{rate}, tolerance {:e}",
        check.functional,
        limit.join(", "),
        check.tolerance
    )
}
