//! Module-readiness checks over a scanned file.

use crate::config::ProjectConfig;
use crate::diagnostics::{Diagnostic, DiagnosticCode, Severity};
use crate::model::{IncludeClass, IncludeForm};
use crate::naming::classify_include;
use crate::scanner::{EventKind, GuardSpan, SourceScan};

/// Runs every check. `is_header` selects the header-only checks.
pub fn lint_module_readiness(
    scan: &SourceScan,
    guard: &GuardSpan,
    is_header: bool,
    config: &ProjectConfig,
) -> Vec<Diagnostic> {
    let mut out = scan.diagnostics.clone();

    for (target, form, line) in scan.includes() {
        if form == IncludeForm::Quote && classify_include(target, config) == IncludeClass::Intra {
            out.push(Diagnostic::warning(
                DiagnosticCode::QuoteFormInclude,
                line,
                format!("project header `{target}` is included with quotes; use <{target}>"),
            ));
        }
    }

    if is_header {
        for event in &scan.events {
            if let EventKind::Define { name } = &event.kind {
                if !guard.contains(event.line) {
                    out.push(Diagnostic::warning(
                        DiagnosticCode::MacroDefinitionInHeader,
                        event.line,
                        format!("macro `{name}` is not visible to importers of a module"),
                    ));
                }
            }
        }
        out.extend(static_at_namespace_scope(scan));
    }

    out.extend(markers_inside_conditionals(scan, guard, is_header));

    let has_markers = scan.events.iter().any(|e| e.kind.is_marker());
    if is_header && !has_markers {
        out.push(Diagnostic::new(
            DiagnosticCode::MissingMarkers,
            None,
            Severity::Error,
            "header has neither namespace markers nor export markers",
        ));
    }

    out.sort_by_key(|d| (d.line, d.code));
    out
}

pub(crate) fn markers_inside_conditionals(scan: &SourceScan, guard: &GuardSpan, is_header: bool) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut open: Vec<usize> = Vec::new();
    for event in &scan.events {
        match &event.kind {
            EventKind::IfStart { .. } => open.push(event.line),
            EventKind::IfEnd => {
                open.pop();
            }
            kind if kind.is_marker() => {
                let enclosing = open.iter().rev().find(|&&l| guard.condition_line != Some(l));
                if let Some(&cond_line) = enclosing {
                    let severity = if is_header { Severity::Error } else { Severity::Warning };
                    out.push(Diagnostic::new(
                        DiagnosticCode::MarkerInsideConditional,
                        Some(event.line),
                        severity,
                        format!("marker is inside the conditional opened on line {cond_line}"),
                    ));
                }
            }
            _ => {}
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Brace {
    Namespace,
    Other,
}

/// Heuristic: a line starting with `static` while every enclosing brace is a
/// namespace (or a namespace marker) is at namespace scope.
fn static_at_namespace_scope(scan: &SourceScan) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut stack: Vec<Brace> = Vec::new();
    let mut statement = String::new();
    let mut events = scan.events.iter().filter(|e| e.kind.is_marker()).peekable();

    for (idx, info) in scan.lines.iter().enumerate() {
        let line = idx + 1;
        while let Some(e) = events.next_if(|e| e.line == line) {
            match e.kind {
                EventKind::NamespaceOpen => stack.push(Brace::Namespace),
                EventKind::NamespaceClose => {
                    stack.pop();
                }
                _ => {}
            }
        }
        if info.directive || !info.code {
            continue;
        }
        let text = info.masked.trim();
        if starts_with_keyword(text, "static") && stack.iter().all(|b| *b == Brace::Namespace) {
            out.push(Diagnostic::warning(
                DiagnosticCode::StaticAtNamespaceScope,
                line,
                "`static` at namespace scope cannot appear in a module interface (approximate check)",
            ));
        }
        for c in info.masked.chars() {
            match c {
                '{' => {
                    stack.push(if opens_namespace(&statement) { Brace::Namespace } else { Brace::Other });
                    statement.clear();
                }
                '}' => {
                    stack.pop();
                    statement.clear();
                }
                ';' => statement.clear(),
                c => statement.push(c),
            }
        }
        statement.push(' ');
    }
    out
}

fn starts_with_keyword(text: &str, keyword: &str) -> bool {
    text.strip_prefix(keyword).is_some_and(|rest| !rest.starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_'))
}

/// `namespace`, `namespace a::b`, `inline namespace x`, `extern "C"`.
fn opens_namespace(statement: &str) -> bool {
    let s = statement.trim();
    let s = s.strip_prefix("inline").map_or(s, str::trim_start);
    if starts_with_keyword(s, "namespace") {
        return true;
    }
    s.strip_prefix("extern").is_some_and(|rest| rest.trim_start().starts_with('"'))
}
