//! Output formats.

use serde::Serialize;
use serde_json::Value;

use crate::corpus::CorpusReport;
use crate::run::Report;

pub fn json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn compact(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn rows(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                rows(&key, v, out);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_array() || v.is_object()) => {
            for (i, v) in items.iter().enumerate() {
                rows(&format!("{prefix}.{i}"), v, out);
            }
        }
        Value::Array(items) if items.iter().all(Value::is_string) => {
            let words: Vec<&str> = items.iter().filter_map(Value::as_str).collect();
            out.push((
                prefix.to_string(),
                if words.is_empty() { "-".into() } else { words.join(", ") },
            ));
        }
        other => out.push((prefix.to_string(), compact(other))),
    }
}

pub fn table(report: &Report) -> String {
    let c = &report.certification;
    let mut out = format!(
        "{} {}: field {}, dim {}, bracket {}\n",
        report.command,
        report.spec.name,
        report.spec.field,
        report.spec.dim,
        report.spec.bracket.kind()
    );
    out.push_str(&format!(
        "certification: N = {}, H = {}{}, margin {}, factorial budget {}, max stages {}\n",
        c.truncation,
        c.headroom,
        c.headroom_used
            .map(|h| format!(" (certified at {h})"))
            .unwrap_or_default(),
        c.validity_margin,
        c.factorial_budget,
        c.max_stages
    ));
    let mut lines = Vec::new();
    rows("", &report.result, &mut lines);
    let width = lines.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in lines {
        out.push_str(&format!("  {k:<width$}  {v}\n"));
    }
    out
}

pub fn corpus_table(report: &CorpusReport) -> String {
    let mut out = String::new();
    for e in &report.entries {
        let status = if e.error.is_some() {
            "ERROR"
        } else if e.violations.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        out.push_str(&format!("{status:<5} {} {}\n", e.name, e.command));
        for v in &e.violations {
            out.push_str(&format!("      {v}\n"));
        }
        if let Some(err) = &e.error {
            out.push_str(&format!("      {err}\n"));
        }
    }
    out.push_str(&format!("{} passed, {} failed\n", report.passed, report.failed));
    out
}
