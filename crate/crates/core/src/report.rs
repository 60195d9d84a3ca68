//! The JSON envelope every command emits, and its plain-text rendering.
//!
//! The JSON form is validated by `schema/report.schema.json`.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

/// Path of the schema file, relative to the crate root.
pub const SCHEMA_PATH: &str = "schema/report.schema.json";

pub const SCHEMA_ID: &str = "hyperfell-report/1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Envelope {
    pub schema: &'static str,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub status: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub report: Value,
}

impl Envelope {
    pub fn new(command: &str, status: &str, exit_code: i32, report: Value, stamp: bool) -> Self {
        Envelope {
            schema: SCHEMA_ID,
            tool: "hyperfell",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            status: status.into(),
            exit_code,
            timestamp: stamp.then(unix_seconds),
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "hyperfell {}: {} (exit {})\n",
            self.command, self.status, self.exit_code
        );
        if let Some(t) = self.timestamp {
            let _ = writeln!(out, "timestamp: {t}");
        }
        render(&self.report, 0, &mut out);
        out
    }
}

fn unix_seconds() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| scalar(i).is_some() && !i.is_array()) => Some(
            format!(
                "[{}]",
                items
                    .iter()
                    .filter_map(scalar)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        ),
        Value::Array(items) if items.iter().all(|i| i.is_array() && scalar(i).is_some()) => Some(
            format!(
                "[{}]",
                items
                    .iter()
                    .filter_map(scalar)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        ),
        _ => None,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render(item, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render(item, indent + 1, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}
