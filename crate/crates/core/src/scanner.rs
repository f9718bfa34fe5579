//! Line-oriented preprocessor scanner.
//!
//! Physical lines are first spliced at backslash-newline, then each logical
//! line is masked: comments are removed and the contents of string, character
//! and raw string literals are blanked, with the comment/literal state carried
//! across lines. Directives and marker tokens are recognized on the masked
//! text only, so nothing inside a comment or a literal is ever reported.

use crate::config::ProjectConfig;
use crate::diagnostics::{Diagnostic, DiagnosticCode, Severity};
use crate::model::{is_identifier, IncludeForm};

/// Marker tokens the scanner reports as events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Markers {
    pub namespace_open: String,
    pub namespace_close: String,
    pub export_begin: Option<String>,
    pub export_end: Option<String>,
}

impl Markers {
    pub fn from_config(config: &ProjectConfig) -> Self {
        Self {
            namespace_open: config.namespace_open_marker.clone(),
            namespace_close: config.namespace_close_marker.clone(),
            export_begin: config.export_begin_marker.clone(),
            export_end: config.export_end_marker.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionalKind {
    If,
    Ifdef,
    Ifndef,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    Include {
        target: String,
        form: IncludeForm,
    },
    Define {
        name: String,
    },
    IfStart {
        kind: ConditionalKind,
        condition: String,
    },
    /// `#else`, `#elif`, `#elifdef`, `#elifndef`
    IfElse,
    IfEnd,
    PragmaOnce,
    /// Any other directive, including `#include MACRO`.
    OtherDirective {
        name: String,
    },
    NamespaceOpen,
    NamespaceClose,
    ExportBegin,
    ExportEnd,
}

impl EventKind {
    pub fn is_directive(&self) -> bool {
        !matches!(
            self,
            EventKind::NamespaceOpen | EventKind::NamespaceClose | EventKind::ExportBegin | EventKind::ExportEnd
        )
    }

    pub fn is_marker(&self) -> bool {
        !self.is_directive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEvent {
    pub kind: EventKind,
    /// First physical line (1-based).
    pub line: usize,
    /// Last physical line; differs from `line` for continued directives.
    pub end_line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct LineInfo {
    /// Masked text of the logical line starting here; empty on continuation lines.
    pub masked: String,
    pub directive: bool,
    /// Line carries non-directive code.
    pub code: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceScan {
    pub events: Vec<LexEvent>,
    pub diagnostics: Vec<Diagnostic>,
    pub line_count: usize,
    pub(crate) lines: Vec<LineInfo>,
}

impl SourceScan {
    pub fn includes(&self) -> impl Iterator<Item = (&str, IncludeForm, usize)> {
        self.events.iter().filter_map(|e| match &e.kind {
            EventKind::Include { target, form } => Some((target.as_str(), *form, e.line)),
            _ => None,
        })
    }

    /// First line holding non-directive code, if any.
    pub fn first_code_line(&self) -> Option<usize> {
        self.lines.iter().position(|l| l.code).map(|i| i + 1)
    }

    pub fn last_code_line(&self) -> Option<usize> {
        self.lines.iter().rposition(|l| l.code).map(|i| i + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum State {
    Normal,
    BlockComment,
    RawString(String),
}

#[derive(Debug, Clone)]
pub struct Scanner {
    markers: Option<Markers>,
}

impl Scanner {
    pub fn new(markers: Markers) -> Self {
        Self { markers: Some(markers) }
    }

    /// Reports directives only, never marker events.
    pub fn without_markers() -> Self {
        Self { markers: None }
    }

    pub fn scan(&self, text: &str) -> SourceScan {
        let physical = physical_lines(text);
        let mut lines = vec![LineInfo::default(); physical.len()];
        let mut events = Vec::new();
        let mut diagnostics = Vec::new();
        let mut state = State::Normal;
        let mut open_conditionals: Vec<usize> = Vec::new();

        for logical in logical_lines(&physical) {
            let starts_normal = state == State::Normal;
            let (masked, directive) = mask_line(&logical.text, &mut state);
            let first = logical.first;
            let line = first + 1;
            let end_line = logical.last + 1;

            let (kind, code) = if directive {
                (parse_directive(&masked), false)
            } else {
                let token = masked.trim();
                let kind = self.marker_event(token, physical[first].trim(), starts_normal);
                (kind, !token.is_empty())
            };
            lines[first] = LineInfo { masked, directive, code };
            // continuation lines belong to the same construct
            for l in &mut lines[first + 1..=logical.last] {
                l.directive = directive;
                l.code = code;
            }

            let Some(kind) = kind else { continue };
            match &kind {
                EventKind::IfStart { .. } => open_conditionals.push(line),
                EventKind::IfElse if open_conditionals.is_empty() => {
                    diagnostics.push(Diagnostic::error(
                        DiagnosticCode::UnbalancedConditional,
                        line,
                        "conditional branch without a matching `#if`",
                    ));
                    continue;
                }
                EventKind::IfEnd if open_conditionals.pop().is_none() => {
                    diagnostics.push(Diagnostic::error(
                        DiagnosticCode::UnbalancedConditional,
                        line,
                        "`#endif` without a matching `#if`",
                    ));
                    continue;
                }
                _ => {}
            }
            events.push(LexEvent { kind, line, end_line });
        }

        for line in open_conditionals {
            diagnostics.push(Diagnostic::new(
                DiagnosticCode::UnbalancedConditional,
                Some(line),
                Severity::Error,
                "conditional is never closed",
            ));
        }

        SourceScan { events, diagnostics, line_count: physical.len(), lines }
    }

    fn marker_event(&self, token: &str, raw: &str, starts_normal: bool) -> Option<EventKind> {
        let markers = self.markers.as_ref()?;
        if !token.is_empty() {
            if token == markers.namespace_open {
                return Some(EventKind::NamespaceOpen);
            }
            if token == markers.namespace_close {
                return Some(EventKind::NamespaceClose);
            }
        }
        // Export markers are usually comments, so they are matched on the raw
        // line, but never from inside a block comment or raw string.
        if starts_normal {
            if markers.export_begin.as_deref().is_some_and(|m| m.trim() == raw) {
                return Some(EventKind::ExportBegin);
            }
            if markers.export_end.as_deref().is_some_and(|m| m.trim() == raw) {
                return Some(EventKind::ExportEnd);
            }
        }
        None
    }
}

/// Physical lines with their terminators removed.
pub(crate) fn physical_lines(text: &str) -> Vec<&str> {
    text.split_inclusive('\n')
        .map(|l| {
            let l = l.strip_suffix('\n').unwrap_or(l);
            l.strip_suffix('\r').unwrap_or(l)
        })
        .collect()
}

struct LogicalLine {
    text: String,
    first: usize,
    last: usize,
}

fn logical_lines(physical: &[&str]) -> Vec<LogicalLine> {
    let mut out = Vec::with_capacity(physical.len());
    let mut i = 0;
    while i < physical.len() {
        let first = i;
        let mut text = physical[i].to_owned();
        while text.ends_with('\\') && i + 1 < physical.len() {
            text.pop();
            i += 1;
            text.push_str(physical[i]);
        }
        out.push(LogicalLine { text, first, last: i });
        i += 1;
    }
    out
}

fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

/// Identifier-ish token immediately preceding the end of `out`.
fn trailing_token<'a>(out: &'a [u8], extra: &[u8]) -> &'a [u8] {
    let start = out.iter().rposition(|&b| !(is_ident_byte(b) || extra.contains(&b))).map_or(0, |p| p + 1);
    &out[start..]
}

/// `# include` / `# include_next` with nothing after the directive name yet.
fn in_include_header_name(out: &[u8]) -> bool {
    let s = String::from_utf8_lossy(out);
    let Some(rest) = s.trim_start().strip_prefix('#') else {
        return false;
    };
    let rest = rest.trim_start();
    let name_len = rest.bytes().take_while(|&b| is_ident_byte(b)).count();
    matches!(&rest[..name_len], "include" | "include_next") && rest[name_len..].trim().is_empty()
}

fn raw_string_delimiter(b: &[u8], open_quote: usize) -> Option<(String, usize)> {
    let mut j = open_quote + 1;
    while j < b.len() && j - open_quote <= 17 {
        match b[j] {
            b'(' => return Some((String::from_utf8_lossy(&b[open_quote + 1..j]).into_owned(), j + 1)),
            b' ' | b')' | b'\\' | b'\t' | b'\x0b' | b'\x0c' | b'"' => return None,
            _ => j += 1,
        }
    }
    None
}

/// Masks one logical line, returning the masked text and whether the line is
/// a preprocessor directive.
fn mask_line(src: &str, state: &mut State) -> (String, bool) {
    let b = src.as_bytes();
    let mut out: Vec<u8> = Vec::with_capacity(b.len());
    let mut only_space_so_far = *state == State::Normal;
    let mut directive = false;
    let mut i = 0;

    while i < b.len() {
        match state {
            State::BlockComment => {
                if b[i..].starts_with(b"*/") {
                    *state = State::Normal;
                    out.push(b' ');
                    i += 2;
                } else {
                    i += 1;
                }
            }
            State::RawString(delim) => {
                let close = b[i] == b')'
                    && b[i + 1..].starts_with(delim.as_bytes())
                    && b.get(i + 1 + delim.len()) == Some(&b'"');
                if close {
                    i += delim.len() + 2;
                    out.push(b'"');
                    *state = State::Normal;
                } else {
                    out.push(b' ');
                    i += 1;
                }
            }
            State::Normal => {
                let c = b[i];
                match c {
                    b'/' if b.get(i + 1) == Some(&b'*') => {
                        *state = State::BlockComment;
                        out.push(b' ');
                        i += 2;
                    }
                    b'/' if b.get(i + 1) == Some(&b'/') => break,
                    b' ' | b'\t' | b'\x0b' | b'\x0c' | b'\r' => {
                        out.push(c);
                        i += 1;
                    }
                    b'#' if only_space_so_far => {
                        directive = true;
                        only_space_so_far = false;
                        out.push(c);
                        i += 1;
                    }
                    b'<' | b'"' if directive && in_include_header_name(&out) => {
                        let close = if c == b'<' { b'>' } else { b'"' };
                        let end = b[i + 1..].iter().position(|&x| x == close).map_or(b.len(), |p| i + p + 2);
                        out.extend_from_slice(&b[i..end]);
                        i = end;
                    }
                    b'"' => {
                        only_space_so_far = false;
                        let prefix = trailing_token(&out, &[]);
                        let raw = matches!(prefix, b"R" | b"LR" | b"uR" | b"UR" | b"u8R");
                        match raw.then(|| raw_string_delimiter(b, i)).flatten() {
                            Some((delim, content_start)) => {
                                out.push(b'"');
                                out.extend(std::iter::repeat_n(b' ', content_start - i - 1));
                                i = content_start;
                                *state = State::RawString(delim);
                            }
                            None => i = mask_quoted(b, i, b'"', &mut out),
                        }
                    }
                    b'\'' => {
                        only_space_so_far = false;
                        let token = trailing_token(&out, b"'.");
                        if token.first().is_some_and(u8::is_ascii_digit) {
                            // digit separator, as in 1'000'000
                            out.push(c);
                            i += 1;
                        } else {
                            i = mask_quoted(b, i, b'\'', &mut out);
                        }
                    }
                    _ => {
                        only_space_so_far = false;
                        out.push(c);
                        i += 1;
                    }
                }
            }
        }
    }

    (String::from_utf8_lossy(&out).into_owned(), directive)
}

/// Blanks an ordinary quoted literal starting at `open`; returns the index
/// after the closing quote (or the end of the line if unterminated).
fn mask_quoted(b: &[u8], open: usize, quote: u8, out: &mut Vec<u8>) -> usize {
    out.push(quote);
    let mut i = open + 1;
    while i < b.len() {
        match b[i] {
            b'\\' => {
                let n = 2.min(b.len() - i);
                out.extend(std::iter::repeat_n(b' ', n));
                i += n;
            }
            c if c == quote => {
                out.push(quote);
                return i + 1;
            }
            _ => {
                out.push(b' ');
                i += 1;
            }
        }
    }
    i
}

fn parse_directive(masked: &str) -> Option<EventKind> {
    let rest = masked.trim_start().strip_prefix('#')?.trim_start();
    let name_len = rest.bytes().take_while(|&b| is_ident_byte(b)).count();
    let (name, rest) = rest.split_at(name_len);
    let rest = rest.trim();
    let kind = match name {
        "" => return None,
        "include" | "include_next" => {
            parse_include(rest).unwrap_or_else(|| EventKind::OtherDirective { name: name.to_owned() })
        }
        "define" => {
            let macro_len = rest.bytes().take_while(|&b| is_ident_byte(b)).count();
            EventKind::Define { name: rest[..macro_len].to_owned() }
        }
        "if" => EventKind::IfStart { kind: ConditionalKind::If, condition: rest.to_owned() },
        "ifdef" => EventKind::IfStart { kind: ConditionalKind::Ifdef, condition: rest.to_owned() },
        "ifndef" => EventKind::IfStart { kind: ConditionalKind::Ifndef, condition: rest.to_owned() },
        "else" | "elif" | "elifdef" | "elifndef" => EventKind::IfElse,
        "endif" => EventKind::IfEnd,
        "pragma" if rest == "once" => EventKind::PragmaOnce,
        _ => EventKind::OtherDirective { name: name.to_owned() },
    };
    Some(kind)
}

fn parse_include(rest: &str) -> Option<EventKind> {
    let (form, close) = match rest.as_bytes().first()? {
        b'<' => (IncludeForm::Angle, '>'),
        b'"' => (IncludeForm::Quote, '"'),
        _ => return None,
    };
    let end = rest[1..].find(close)?;
    let target = &rest[1..1 + end];
    if target.is_empty() || target.chars().any(char::is_whitespace) {
        return None;
    }
    Some(EventKind::Include { target: target.to_owned(), form })
}

/// Include-guard lines a conversion deletes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardStyle {
    IfndefGuard,
    PragmaOnce,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardSpan {
    pub style: GuardStyle,
    pub open_lines: Vec<usize>,
    pub close_lines: Vec<usize>,
    /// Line of the guarding `#ifndef`, for [`GuardStyle::IfndefGuard`].
    pub condition_line: Option<usize>,
}

impl GuardSpan {
    pub fn none() -> Self {
        Self { style: GuardStyle::None, open_lines: Vec::new(), close_lines: Vec::new(), condition_line: None }
    }

    pub fn contains(&self, line: usize) -> bool {
        self.open_lines.contains(&line) || self.close_lines.contains(&line)
    }
}

fn span_lines(event: &LexEvent) -> impl Iterator<Item = usize> {
    event.line..=event.end_line
}

/// Macro name guarded by `#ifndef X` or `#if !defined(X)` / `#if !defined X`.
fn guarded_name(kind: &EventKind) -> Option<&str> {
    let EventKind::IfStart { kind, condition } = kind else {
        return None;
    };
    let name = match kind {
        ConditionalKind::Ifndef => condition.as_str(),
        ConditionalKind::If => {
            let rest = condition.strip_prefix('!')?.trim_start().strip_prefix("defined")?.trim();
            rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).map_or(rest, str::trim)
        }
        ConditionalKind::Ifdef => return None,
    };
    is_identifier(name).then_some(name)
}

/// Recognizes `#pragma once` before the first line of code, and the classic
/// `#ifndef X` / `#define X` ... `#endif` wrapper spanning the whole file.
pub fn detect_include_guard(scan: &SourceScan) -> (GuardSpan, Option<Diagnostic>) {
    let first_code = scan.first_code_line().unwrap_or(usize::MAX);
    let last_code = scan.last_code_line().unwrap_or(0);
    let directives: Vec<&LexEvent> = scan.events.iter().filter(|e| e.kind.is_directive()).collect();

    let pragma = directives.iter().find(|e| e.kind == EventKind::PragmaOnce && e.line < first_code).copied();
    let rest: Vec<&LexEvent> = directives.iter().copied().filter(|e| Some(*e) != pragma).collect();

    let mut span = GuardSpan::none();
    if let Some(p) = pragma {
        span.style = GuardStyle::PragmaOnce;
        span.open_lines.extend(span_lines(p));
    }

    let ambiguous =
        |message: String, line: usize| Some(Diagnostic::warning(DiagnosticCode::AmbiguousIncludeGuard, line, message));

    let (Some(open), Some(define)) = (rest.first(), rest.get(1)) else {
        return (span, None);
    };
    let Some(guard) = guarded_name(&open.kind) else {
        return (span, None);
    };
    let EventKind::Define { name } = &define.kind else {
        return (span, ambiguous(format!("`{guard}` is tested but not defined by the next directive"), open.line));
    };
    if name != guard {
        return (span, ambiguous(format!("`#ifndef {guard}` is followed by `#define {name}`"), open.line));
    }

    // The #endif matching the guard must be the last directive, with no
    // #else branch of the guard in between.
    let mut depth = 0usize;
    let mut close = None;
    for (idx, e) in rest.iter().enumerate() {
        match e.kind {
            EventKind::IfStart { .. } => depth += 1,
            EventKind::IfElse if depth == 1 => {
                return (span, ambiguous(format!("guard `{guard}` has an #else branch"), e.line));
            }
            EventKind::IfEnd => {
                depth -= 1;
                if depth == 0 {
                    close = Some(idx);
                    break;
                }
            }
            _ => {}
        }
    }
    let Some(close_idx) = close else {
        return (span, ambiguous(format!("guard `{guard}` is never closed"), open.line));
    };
    if close_idx + 1 != rest.len() {
        return (span, ambiguous(format!("guard `{guard}` closes before the end of the file"), rest[close_idx].line));
    }
    let close = rest[close_idx];
    if first_code < open.line || (last_code > close.end_line && last_code != 0) {
        return (span, ambiguous(format!("code outside of guard `{guard}`"), open.line));
    }

    span.style = GuardStyle::IfndefGuard;
    span.condition_line = Some(open.line);
    span.open_lines.extend(span_lines(open));
    span.open_lines.extend(span_lines(define));
    span.close_lines.extend(span_lines(close));
    span.open_lines.sort_unstable();
    (span, None)
}

/// A module-related statement found by [`module_statements`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuleStatement {
    /// `module;`
    GlobalFragment,
    /// `[export] module name[ :partition];`
    Declaration { exported: bool, module: String, partition: Option<String> },
    /// `[export] import :partition;` or `[export] import name;`
    Import { exported: bool, partition: Option<String>, module: Option<String> },
}

/// Finds module declarations and imports in generated unit text, skipping
/// anything inside comments and literals.
pub fn module_statements(text: &str) -> Vec<ModuleStatement> {
    let physical = physical_lines(text);
    let mut state = State::Normal;
    let mut out = Vec::new();
    for logical in logical_lines(&physical) {
        let (masked, directive) = mask_line(&logical.text, &mut state);
        if directive {
            continue;
        }
        if let Some(stmt) = parse_module_statement(&masked) {
            out.push(stmt);
        }
    }
    out
}

fn module_tokens(line: &str) -> Vec<&str> {
    let mut tokens = Vec::new();
    let b = line.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if is_ident_byte(c) {
            let start = i;
            while i < b.len() && (is_ident_byte(b[i]) || b[i] == b'.') {
                i += 1;
            }
            tokens.push(&line[start..i]);
        } else {
            let len = line[i..].chars().next().map_or(1, char::len_utf8);
            tokens.push(&line[i..i + len]);
            i += len;
        }
    }
    tokens
}

fn parse_module_statement(masked: &str) -> Option<ModuleStatement> {
    let tokens = module_tokens(masked);
    let (exported, rest) = match tokens.split_first() {
        Some((&"export", rest)) => (true, rest),
        _ => (false, &tokens[..]),
    };
    match rest {
        ["module", ";"] if !exported => Some(ModuleStatement::GlobalFragment),
        ["module", name, ";"] if is_module_ident(name) => {
            Some(ModuleStatement::Declaration { exported, module: (*name).to_owned(), partition: None })
        }
        ["module", name, ":", part, ";"] if is_module_ident(name) && is_identifier(part) => {
            Some(ModuleStatement::Declaration {
                exported,
                module: (*name).to_owned(),
                partition: Some((*part).to_owned()),
            })
        }
        ["import", ":", part, ";"] if is_identifier(part) => {
            Some(ModuleStatement::Import { exported, partition: Some((*part).to_owned()), module: None })
        }
        ["import", name, ";"] if is_module_ident(name) => {
            Some(ModuleStatement::Import { exported, partition: None, module: Some((*name).to_owned()) })
        }
        _ => None,
    }
}

fn is_module_ident(s: &str) -> bool {
    crate::config::is_module_name(s)
}
