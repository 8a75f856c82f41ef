use std::fmt::Write as _;
use std::time::Duration;

use clap::ValueEnum;
use serde::Serialize;

use crate::limit::CaseReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// One verdict. A failed check's detail is its counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(id: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            id: id.into(),
            passed,
            detail: detail.into(),
        }
    }

    pub fn from_case(prefix: &str, case: &CaseReport) -> Check {
        let id = format!("{prefix}{}", case.case);
        match &case.failure {
            Some(w) => Check::new(id, false, w.clone()),
            None => Check::new(id, true, format!("{} instances", case.checked)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub instance: String,
    pub horizon: Option<usize>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl RunReport {
    pub fn new(command: &str, instance: &str, horizon: Option<usize>) -> RunReport {
        RunReport {
            schema: 1,
            command: command.to_string(),
            instance: instance.to_string(),
            horizon,
            checks: Vec::new(),
            notes: Vec::new(),
            elapsed: None,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// Orders checks by id, keeping the order of equal ids.
    pub fn finish(&mut self) {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let horizon = self.horizon.map(|k| format!(" (K={k})")).unwrap_or_default();
        let _ = writeln!(s, "{} {}{horizon}", self.command, self.instance);
        let width = self.checks.iter().map(|c| c.id.chars().count()).max().unwrap_or(0);
        for c in &self.checks {
            let pad = width - c.id.chars().count();
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "  {mark}  {}{}  {}", c.id, " ".repeat(pad), c.detail);
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        let time = self
            .elapsed
            .map(|d| format!(" in {:.3}s", d.as_secs_f64()))
            .unwrap_or_default();
        let _ = writeln!(s, "{} checks, {} failed{time}", self.checks.len(), self.failures());
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }
}
