#![allow(dead_code)]

use std::path::{Path, PathBuf};

use hbarcon_cli::{run, Command, Outcome, RunConfig};
use serde::Deserialize;

/// One golden configuration: a command, its arguments and a run config.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub command: String,
    #[serde(default)]
    pub args: Vec<String>,
    pub exit: i32,
    /// Floating-point output: only checks and verdicts are compared.
    #[serde(default)]
    pub numeric: bool,
    pub config: RunConfig,
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// All `*.case.json` files by stem, sorted.
pub fn cases() -> Vec<(String, Case)> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(golden_dir()).expect("golden dir") {
        let path = entry.expect("entry").path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if let Some(stem) = name.strip_suffix(".case.json") {
            let text = std::fs::read_to_string(&path).expect("readable case");
            let case: Case = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            out.push((stem.to_string(), case));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

pub fn run_case(case: &Case) -> Outcome {
    let cmd = Command::from_parts(&case.command, &case.args).expect("valid command");
    run(&cmd, &case.config).expect("case runs")
}

/// The part of a report compared against the golden file.
pub fn golden_text(case: &Case, outcome: &Outcome) -> String {
    if !case.numeric {
        return outcome.report.stable_json();
    }
    let c = &outcome.report.comparable;
    let kept = serde_json::json!({ "checks": c["checks"], "verdict": c["verdict"] });
    let mut s = serde_json::to_string_pretty(&kept).unwrap();
    s.push('\n');
    s
}
