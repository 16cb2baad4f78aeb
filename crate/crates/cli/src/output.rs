//! Report rendering. JSON is the canonical form; CSV and text are flattened views of `results`.

use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use floer_core::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Pretty JSON with a trailing newline. Field order is fixed by the types and maps are sorted,
/// so equal reports render to equal bytes.
pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn to_csv(report: &Report) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["criterion", "check", "pass", "witness", "data"])?;
    for e in &report.results {
        w.write_record([
            e.criterion.to_string(),
            e.check.clone(),
            e.pass.to_string(),
            e.witness.clone().unwrap_or_default(),
            e.data.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

fn to_text(report: &Report) -> String {
    let mut s = String::new();
    for e in &report.results {
        let tag = if e.pass { "PASS" } else { "FAIL" };
        s.push_str(&format!("{tag}  {}\n", e.check));
        if let Some(w) = &e.witness {
            s.push_str(&format!("      witness: {w}\n"));
        }
        // Direct commands carry the computed object; suites only summarize.
        if e.criterion == 0 && !e.data.is_null() {
            s.push_str(&format!("      {}\n", e.data));
        }
    }
    let m = &report.summary;
    s.push_str(&format!("{}: {}/{} passed\n", report.command, m.passed, m.total));
    if let Some(t) = &report.timing {
        s.push_str(&format!("{} ms\n", t.total_ms));
    }
    s
}

pub fn write(report: &Report, format: Format, path: Option<&Path>) -> io::Result<()> {
    let body = match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report)?,
        Format::Text => to_text(report),
    };
    match path {
        Some(p) => std::fs::write(p, body),
        None => io::stdout().lock().write_all(body.as_bytes()),
    }
}
