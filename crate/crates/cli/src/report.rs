//! Text summary and JSON files for a run.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::json;

use crate::config::SuiteConfig;
use crate::suites::Outcome;
use crate::CliError;

pub fn summary(outcomes: &[Outcome]) -> String {
    let w_suite = outcomes.iter().map(|o| o.suite.len()).max().unwrap_or(5).max(5);
    let w_check = outcomes.iter().map(|o| o.check.len()).max().unwrap_or(5).max(5);
    let mut s = String::new();
    let _ = writeln!(s, "{:<w_suite$}  {:<w_check$}  {:>8}  {:>8}  status  params", "suite", "check", "cases", "failures");
    for o in outcomes {
        let status = if o.passed { "pass" } else { "FAIL" };
        let _ = writeln!(s, "{:<w_suite$}  {:<w_check$}  {:>8}  {:>8}  {status:<6}  {}", o.suite, o.check, o.cases, o.failures, o.params);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let _ = writeln!(s, "{} checks, {failed} failed", outcomes.len());
    s
}

pub fn counterexamples(outcomes: &[Outcome]) -> Vec<serde_json::Value> {
    outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| json!({ "suite": o.suite, "check": o.check, "params": o.params, "counterexample": o.counterexample }))
        .collect()
}

fn io(path: &Path, e: std::io::Error) -> CliError {
    CliError::Config(format!("cannot write {}: {e}", path.display()))
}

pub fn write(dir: &Path, cfg: &SuiteConfig, outcomes: &[Outcome]) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let doc = json!({
        "schema": 1,
        "config": cfg,
        "results": outcomes.iter().map(|o| json!({
            "suite": o.suite,
            "check": o.check,
            "passed": o.passed,
            "certificate": o.certificate,
        })).collect::<Vec<_>>(),
    });
    let path = dir.join("certificates.json");
    fs::write(&path, serde_json::to_string_pretty(&doc).expect("serialisable") + "\n").map_err(|e| io(&path, e))?;
    let path = dir.join("summary.txt");
    fs::write(&path, summary(outcomes)).map_err(|e| io(&path, e))?;
    let cx = counterexamples(outcomes);
    let path = dir.join("counterexamples.json");
    if cx.is_empty() {
        let _ = fs::remove_file(&path);
    } else {
        fs::write(&path, serde_json::to_string_pretty(&cx).expect("serialisable") + "\n").map_err(|e| io(&path, e))?;
    }
    Ok(())
}
