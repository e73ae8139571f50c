//! Batch runner: one JSON object per manifest line,
//! `{"task": "...", "inputs": {...}, "expect": <value>}`, with relative
//! paths taken from the manifest's directory. Prints one JSON record per task
//! in manifest order.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::tasks::{Task, TaskError, EXIT_EXHAUSTED, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK};

#[derive(Deserialize)]
struct Entry {
    #[serde(flatten)]
    task: Task,
    #[serde(default)]
    expect: Option<Value>,
}

/// Record and exit code for one manifest line.
pub fn run_line(line: &str, base: &Path) -> (Value, i32) {
    let raw: Value = match serde_json::from_str(line) {
        Ok(v) => v,
        Err(e) => return (json!({ "task": null, "inputs": null, "status": "ERROR", "error": format!("bad manifest line: {e}") }), EXIT_INPUT),
    };
    let task_name = raw.get("task").cloned().unwrap_or(Value::Null);
    let inputs = raw.get("inputs").cloned().unwrap_or(Value::Null);
    let mut entry: Entry = match serde_json::from_value(raw) {
        Ok(e) => e,
        Err(e) => {
            return (json!({ "task": task_name, "inputs": inputs, "status": "ERROR", "error": format!("bad task: {e}") }), EXIT_INPUT)
        }
    };
    entry.task.rebase(base);
    let start = Instant::now();
    let outcome = entry.task.execute();
    let elapsed = start.elapsed().as_secs_f64();
    match outcome {
        Ok(out) => {
            let value = out.result.get("value").cloned().unwrap_or(Value::Null);
            let (status, code) = match (&entry.expect, out.code) {
                (_, EXIT_EXHAUSTED) => ("EXHAUSTED", EXIT_EXHAUSTED),
                (Some(want), _) if *want != value => ("FAIL", EXIT_MISMATCH),
                (_, EXIT_OK) => ("PASS", EXIT_OK),
                (_, c) => ("FAIL", c),
            };
            let mut rec = json!({ "task": task_name, "inputs": inputs, "result": out.result, "elapsed": elapsed, "status": status });
            if let Some(want) = entry.expect {
                rec["expect"] = want;
            }
            (rec, code)
        }
        Err(e) => {
            let code = match e {
                TaskError::Compute(cubicsym::Error::Exhausted) => EXIT_EXHAUSTED,
                _ => EXIT_INPUT,
            };
            (json!({ "task": task_name, "inputs": inputs, "result": null, "elapsed": elapsed, "status": "ERROR", "error": e.to_string() }), code)
        }
    }
}

/// Worst exit code wins: input errors, then mismatches, then exhaustion.
fn combine(codes: impl Iterator<Item = i32>) -> i32 {
    let rank = |c: i32| match c {
        EXIT_INPUT => 3,
        EXIT_MISMATCH => 2,
        EXIT_EXHAUSTED => 1,
        _ => 0,
    };
    codes.max_by_key(|&c| rank(c)).unwrap_or(EXIT_OK)
}

pub fn run_manifest(path: &Path) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_INPUT;
        }
    };
    let base = path.parent().unwrap_or(Path::new("."));
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    let results: Vec<(Value, i32)> = lines.par_iter().map(|l| run_line(l, base)).collect();
    let mut stdout = std::io::stdout().lock();
    for (rec, _) in &results {
        if writeln!(stdout, "{rec}").is_err() {
            break;
        }
    }
    combine(results.iter().map(|r| r.1))
}
