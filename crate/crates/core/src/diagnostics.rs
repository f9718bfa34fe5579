use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DiagnosticCode {
    QuoteFormInclude,
    MacroDefinitionInHeader,
    StaticAtNamespaceScope,
    MarkerInsideConditional,
    UnbalancedConditional,
    MissingMarkers,
    /// `#ifndef`/`#define` pair that does not form a removable guard.
    AmbiguousIncludeGuard,
    /// More than one namespace marker pair; the export span covers all of them.
    MultipleMarkerPairs,
    /// Intra-project include that names no project file.
    DanglingInclude,
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    /// 1-based; absent only for whole-file findings such as `MissingMarkers`.
    pub line: Option<usize>,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: DiagnosticCode, line: Option<usize>, severity: Severity, message: impl Into<String>) -> Self {
        Self { code, line, severity, message: message.into() }
    }

    pub fn warning(code: DiagnosticCode, line: usize, message: impl Into<String>) -> Self {
        Self::new(code, Some(line), Severity::Warning, message)
    }

    pub fn error(code: DiagnosticCode, line: usize, message: impl Into<String>) -> Self {
        Self::new(code, Some(line), Severity::Error, message)
    }
}
