//! Report rendering: JSON (schema-versioned), CSV (flat projection), text.

use clap::ValueEnum;
use mgonal::{Cell, Verdict, VerificationReport};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    claim: &'a str,
    label: &'a str,
    verdict: &'static str,
    target: Option<u64>,
    detail: &'a str,
    witness: String,
}

fn verdict_parts(v: &Verdict) -> (&'static str, &str) {
    match v {
        Verdict::Pass => ("pass", ""),
        Verdict::Fail { reason } => ("fail", reason),
        Verdict::Skipped { reason } => ("skipped", reason),
        Verdict::Info { note } => ("info", note),
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn csv_rows(claim: &str, cells: &[Cell]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for c in cells {
        let (verdict, detail) = verdict_parts(&c.verdict);
        w.serialize(CsvRow {
            claim,
            label: &c.label,
            verdict,
            target: c.target,
            detail,
            witness: c
                .witness
                .as_deref()
                .map(|w| join(w, ";"))
                .unwrap_or_default(),
        })
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
}

pub fn render_report(r: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => csv_rows(&r.claim, &r.cells),
        Format::Text => {
            let s = &r.stats;
            let mut out = format!(
                "{}: {} ({} cells: {} pass, {} fail, {} skipped, {} info",
                r.claim,
                if r.pass { "PASS" } else { "FAIL" },
                s.cells,
                s.passed,
                s.failed,
                s.skipped,
                s.informational
            );
            if s.nodes > 0 {
                out += &format!(", {} nodes", s.nodes);
            }
            if let Some(seed) = r.seed {
                out += &format!(", seed {seed}");
            }
            out += ")\n";
            for c in &r.failures {
                let (_, detail) = verdict_parts(&c.verdict);
                out += &format!("  FAIL {}: {detail}\n", c.label);
            }
            out
        }
    }
}

/// Single-record output for the non-sweep commands. `text` is the human line.
pub fn render_value<T: Serialize>(value: &T, text: &str, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let serde_json::Value::Object(map) =
                serde_json::to_value(value).expect("values serialize")
            else {
                panic!("single-record output must be a struct");
            };
            let cell = |v: &serde_json::Value| match v {
                serde_json::Value::Null => String::new(),
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Array(xs) => join(xs, ";"),
                other => other.to_string(),
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(map.keys()).expect("writing to memory");
            w.write_record(map.values().map(cell))
                .expect("writing to memory");
            String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8")
        }
        Format::Text => format!("{text}\n"),
    }
}

/// Coefficient tuples, one per line.
pub fn render_tuples(rows: &[Vec<u64>], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string(rows).expect("tuples serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let width = rows.iter().map(Vec::len).max().unwrap_or(0);
            let mut out = join(
                &(1..=width).map(|i| format!("a{i}")).collect::<Vec<_>>(),
                ",",
            );
            out.push('\n');
            for r in rows {
                out += &join(r, ",");
                out.push('\n');
            }
            out
        }
        Format::Text => rows
            .iter()
            .map(|r| format!("({})\n", join(r, ",")))
            .collect(),
    }
}
