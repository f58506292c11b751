use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// Outcome of one check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    /// Stable identifier of the estimate or theorem under test.
    pub id: String,
    pub claim: String,
    pub passed: bool,
    pub metric: String,
    pub value: f64,
    pub threshold: String,
    pub seconds: f64,
    /// Fitted constants, per-point values and grid metadata.
    pub details: serde_json::Value,
}

impl CheckRow {
    pub fn line(&self) -> String {
        format!(
            "{}: {} ({} = {:.6e}, need {}, {:.1} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.metric,
            self.value,
            self.threshold,
            self.seconds
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub all_passed: bool,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckRow>,
}

impl Summary {
    pub fn new(checks: Vec<CheckRow>) -> Self {
        let passed = checks.iter().filter(|c| c.passed).count();
        Self {
            all_passed: passed == checks.len(),
            passed,
            failed: checks.len() - passed,
            checks,
        }
    }

    pub fn markdown(&self) -> String {
        let mut s = String::from("# Summary\n\n");
        let _ = writeln!(s, "{} passed, {} failed.\n", self.passed, self.failed);
        if self.checks.is_empty() {
            s.push_str("No checks were run.\n");
            return s;
        }
        s.push_str("| check | result | metric | value | threshold | seconds |\n");
        s.push_str("|---|---|---|---|---|---|\n");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {:.6e} | {} | {:.1} |",
                c.id,
                if c.passed { "pass" } else { "FAIL" },
                c.metric,
                c.value,
                c.threshold,
                c.seconds
            );
        }
        s.push('\n');
        for c in &self.checks {
            let _ = writeln!(s, "- `{}`: {}", c.id, c.claim);
        }
        s
    }
}

/// Writes `summary.json` and `summary.md` into `out_dir`.
pub fn emit_summary(checks: Vec<CheckRow>, out_dir: &Path) -> Result<Summary> {
    std::fs::create_dir_all(out_dir)?;
    let summary = Summary::new(checks);
    std::fs::write(out_dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    std::fs::write(out_dir.join("summary.md"), summary.markdown())?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(passed: bool) -> CheckRow {
        CheckRow {
            id: "x".into(),
            claim: "c".into(),
            passed,
            metric: "m".into(),
            value: 1.0,
            threshold: "<= 2".into(),
            seconds: 0.0,
            details: serde_json::Value::Null,
        }
    }

    #[test]
    fn empty_summary_is_valid() {
        let dir = tempfile::tempdir().unwrap();
        let s = emit_summary(Vec::new(), dir.path()).unwrap();
        assert!(s.all_passed);
        let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
        assert_eq!(json["checks"].as_array().unwrap().len(), 0);
        assert!(dir.path().join("summary.md").exists());
    }

    #[test]
    fn one_failure_fails_the_summary() {
        let s = Summary::new(vec![row(true), row(false)]);
        assert!(!s.all_passed);
        assert_eq!((s.passed, s.failed), (1, 1));
        assert!(s.markdown().contains("FAIL"));
    }
}
