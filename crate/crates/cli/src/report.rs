//! Text, JSON and CSV renderings of a run.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value as Json};

use crate::run::{RunReport, TaskOutcome};

pub const SCHEMA: &str = "ramlab-report/1";

fn task_json(t: &TaskOutcome) -> Json {
    let mut m = Map::new();
    m.insert("index".into(), Json::String(t.index.to_string()));
    m.insert("kind".into(), Json::String(t.kind.name().into()));
    match &t.result {
        Ok(r) => {
            m.insert("status".into(), "ok".into());
            m.insert("result".into(), Json::Object(r.clone()));
        }
        Err(e) => {
            m.insert("status".into(), "error".into());
            m.insert("error".into(), json!({ "code": e.code, "message": e.message }));
        }
    }
    Json::Object(m)
}

/// Deterministic: keys are sorted, numbers are decimal strings, no timings.
pub fn to_json(r: &RunReport) -> String {
    let v = json!({
        "schema": SCHEMA,
        "p": r.p.to_string(),
        "tasks": r.tasks.iter().map(task_json).collect::<Vec<_>>(),
        "status": if r.any_error() { "error" } else { "ok" },
    });
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

fn flat(v: &Json) -> String {
    match v {
        Json::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn to_text(r: &RunReport) -> String {
    let mut out = String::new();
    writeln!(out, "ramlab report (p = {})", r.p).unwrap();
    for t in &r.tasks {
        writeln!(out, "\n[{}] {}  ({:.3} s)", t.index, t.kind.name(), t.elapsed.as_secs_f64()).unwrap();
        match &t.result {
            Err(e) => writeln!(out, "  error {}: {}", e.code, e.message).unwrap(),
            Ok(m) => {
                for (k, v) in m {
                    match v {
                        Json::Array(items) if items.iter().any(Json::is_object) => {
                            writeln!(out, "  {k}:").unwrap();
                            for it in items {
                                let fields: Vec<String> = it
                                    .as_object()
                                    .map(|o| o.iter().map(|(a, b)| format!("{a}={}", flat(b))).collect())
                                    .unwrap_or_else(|| vec![flat(it)]);
                                writeln!(out, "    {}", fields.join("  ")).unwrap();
                            }
                        }
                        _ => writeln!(out, "  {k} = {}", flat(v)).unwrap(),
                    }
                }
            }
        }
    }
    let failed = r.tasks.iter().filter(|t| t.result.is_err()).count();
    writeln!(out, "\n{} task(s), {} failed", r.tasks.len(), failed).unwrap();
    out
}

/// CSV tables of tasks that produce one, keyed by file name.
pub fn to_csv(r: &RunReport) -> Vec<(String, String)> {
    r.tasks
        .iter()
        .filter_map(|t| {
            let table = t.table.as_ref()?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in table {
                w.write_record(row).expect("in-memory write");
            }
            let bytes = w.into_inner().expect("in-memory flush");
            Some((format!("task-{}-{}.csv", t.index, t.kind.name()), String::from_utf8(bytes).expect("utf-8")))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
    All,
}

/// Writes the requested renderings into `dir`; returns the paths written.
pub fn write_outputs(r: &RunReport, dir: &Path, format: Format) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, body: &str| -> io::Result<()> {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    if matches!(format, Format::Text | Format::All) {
        put("report.txt", &to_text(r))?;
    }
    if matches!(format, Format::Json | Format::All) {
        put("report.json", &to_json(r))?;
    }
    if matches!(format, Format::Csv | Format::All) {
        for (name, body) in to_csv(r) {
            put(&name, &body)?;
        }
    }
    Ok(written)
}
