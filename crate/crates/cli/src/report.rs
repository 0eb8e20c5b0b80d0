use serde::Serialize;
use serde_json::Value;
use std::fmt::Write as _;

/// One named comparison inside a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Human-readable target, e.g. `">= 0.98"`.
    pub expected: String,
    pub actual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `actual >= bound`.
    pub fn at_least(name: impl Into<String>, actual: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            expected: format!(">= {bound}"),
            actual,
            tolerance: 0.0,
            pass: actual >= bound,
        }
    }

    /// `actual <= bound`.
    pub fn at_most(name: impl Into<String>, actual: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            expected: format!("<= {bound}"),
            actual,
            tolerance: 0.0,
            pass: actual <= bound,
        }
    }

    /// `|actual - target| <= tolerance`.
    pub fn close(name: impl Into<String>, actual: f64, target: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            expected: format!("{target}"),
            actual,
            tolerance,
            pass: (actual - target).abs() <= tolerance,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool, expected: &str) -> Self {
        Self {
            name: name.into(),
            expected: expected.to_string(),
            actual: if ok { 1.0 } else { 0.0 },
            tolerance: 0.0,
            pass: ok,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    /// 0 iff every check passes.
    pub exit_status: i32,
}

impl RunReport {
    pub fn new(command: &str, config: Value) -> Self {
        Self {
            command: command.to_string(),
            config,
            results: Value::Null,
            checks: Vec::new(),
            exit_status: 0,
        }
    }

    pub fn push(&mut self, check: Check) {
        if !check.pass {
            self.exit_status = 1;
        }
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.exit_status == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Plain-text table of all checks.
    pub fn render(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        let _ = writeln!(out, "{}: {} checks", self.command, self.checks.len());
        for c in &self.checks {
            let tol = if c.tolerance > 0.0 { format!(" ± {}", c.tolerance) } else { String::new() };
            let _ = writeln!(
                out,
                "  [{}] {:<width$}  actual {:<14} expected {}{}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                format!("{:.6}", c.actual),
                c.expected,
                tol,
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} passed, {} failed", self.checks.len() - failed, failed);
        out
    }
}
