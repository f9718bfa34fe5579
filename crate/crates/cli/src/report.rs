//! The JSON run report written by `analyze`, `convert` and `lint`.

use std::path::Path;

use modulizer_core::{Diagnostic, DiagnosticCode, Severity};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeverityCounts {
    pub warning: usize,
    pub error: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub path: String,
    pub line: Option<usize>,
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub message: String,
}

impl Finding {
    pub fn new(path: &str, d: &Diagnostic) -> Self {
        Self { path: path.to_owned(), line: d.line, severity: d.severity, code: d.code, message: d.message.clone() }
    }
}

impl std::fmt::Display for Finding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{l}: {}[{}]: {}", self.path, self.severity, self.code, self.message),
            None => write!(f, "{}: {}[{}]: {}", self.path, self.severity, self.code, self.message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub files_scanned: usize,
    pub headers_converted: usize,
    pub sources_converted: usize,
    pub diagnostics: SeverityCounts,
    pub partitions_emitted: usize,
    pub cycles_found: usize,
    pub exit_code: i32,
    /// Each cycle as a closed walk, e.g. `["a.h", "b.h", "a.h"]`.
    pub cycles: Vec<Vec<String>>,
    pub findings: Vec<Finding>,
    /// Conversion errors, one message each.
    pub errors: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_owned(), ..Self::default() }
    }

    /// Adds findings in (path, line, code) order and updates the counts.
    pub fn add_findings(&mut self, findings: impl IntoIterator<Item = Finding>) {
        for f in findings {
            match f.severity {
                Severity::Warning => self.diagnostics.warning += 1,
                Severity::Error => self.diagnostics.error += 1,
            }
            self.findings.push(f);
        }
        self.findings.sort_by(|a, b| (&a.path, a.line, a.code).cmp(&(&b.path, b.line, b.code)));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn read(path: &Path) -> Option<Self> {
        serde_json::from_str(&std::fs::read_to_string(path).ok()?).ok()
    }

    /// Human-readable summary for stdout.
    pub fn summary(&self) -> String {
        let mut lines = Vec::new();
        for f in &self.findings {
            lines.push(f.to_string());
        }
        for c in &self.cycles {
            lines.push(format!("cycle: {}", c.join(" -> ")));
        }
        for e in &self.errors {
            lines.push(format!("error: {e}"));
        }
        let mut counts = format!("{}: {} files scanned", self.command, self.files_scanned);
        if self.command == "convert" {
            counts.push_str(&format!(
                ", {} headers and {} sources converted, {} partitions",
                self.headers_converted, self.sources_converted, self.partitions_emitted
            ));
        }
        counts.push_str(&format!(
            ", {} warnings, {} errors, {} cycles",
            self.diagnostics.warning, self.diagnostics.error, self.cycles_found
        ));
        lines.push(counts);
        lines.join("\n")
    }
}
