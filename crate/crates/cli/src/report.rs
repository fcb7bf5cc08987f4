//! Versioned, machine-readable run reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Tool {
            name: "hbarcon",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

/// One run: the deterministic `comparable` section plus wall-clock timings.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: Tool,
    pub command: String,
    pub config: RunConfig,
    /// Canonical expression strings and verdicts only; byte-identical for a
    /// fixed config.
    pub comparable: Value,
    /// Milliseconds per step.
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Report {
            schema: SCHEMA,
            tool: Tool::default(),
            command: command.to_string(),
            config: config.clone(),
            comparable: Value::Null,
            timings: BTreeMap::new(),
        }
    }

    pub fn comparable_json(&self) -> String {
        serde_json::to_string_pretty(&self.comparable).expect("values serialise")
    }

    /// The report without timings, for golden files.
    pub fn stable_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serialises");
        if let Value::Object(map) = &mut v {
            map.remove("timings");
        }
        let mut s = serde_json::to_string_pretty(&v).expect("values serialise");
        s.push('\n');
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} ({})\n", self.tool.name, self.command, self.tool.version);
        render_text(&self.comparable, 0, &mut out);
        for (step, ms) in &self.timings {
            let _ = writeln!(out, "time {step}: {ms:.3} ms");
        }
        out
    }

    /// Flatten the comparable section into `path,value` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("path,value\n");
        render_csv(&self.comparable, "", &mut out);
        out
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        _ => None,
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match scalar_text(val) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_text(val, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar_text(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render_text(item, indent + 1, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other).unwrap_or_default());
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(v: &Value, path: &str, out: &mut String) {
    let join = |k: &str| if path.is_empty() { k.to_string() } else { format!("{path}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                render_csv(val, &join(k), out);
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                render_csv(item, &join(&i.to_string()), out);
            }
        }
        other => {
            let _ = writeln!(out, "{},{}", csv_field(path), csv_field(&scalar_text(other).unwrap_or_default()));
        }
    }
}
