//! Reports for the configs in `tests/golden` against the stored outputs.
//! Set `HBARCON_UPDATE_GOLDEN=1` to rewrite them.

mod common;

use common::{cases, golden_dir, golden_text, run_case};

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("HBARCON_UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for (name, case) in cases() {
        let outcome = run_case(&case);
        assert_eq!(outcome.exit.code(), case.exit, "{name}: exit code");
        let actual = golden_text(&case, &outcome);
        let path = golden_dir().join(format!("{name}.expected.json"));
        if update {
            std::fs::write(&path, &actual).unwrap();
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(expected) if expected == actual => {}
            Ok(_) => failures.push(format!("{name}: report differs from {}", path.display())),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
