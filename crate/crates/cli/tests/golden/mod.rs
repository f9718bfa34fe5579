//! Token-level comparison of generated text against hand-written listings
//! that elide parts with `[...]`, `...text...`, `{...}` or, in CMake,
//! `${_list_variable}`.

#![allow(dead_code)]

use std::sync::LazyLock;

use regex::Regex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Syntax {
    Cpp,
    Cmake,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Token(String),
    Gap,
}

/// Where the listing has to sit in the generated text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Whole,
    Start,
    Within,
}

const GAP: char = '\u{1}';

/// Drops comments, keeping string literals and newlines.
pub fn strip_comments(text: &str, syntax: Syntax) -> String {
    let c: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    let mut i = 0;
    while i < c.len() {
        let next = c.get(i + 1).copied();
        match (syntax, c[i], next) {
            (Syntax::Cpp, '/', Some('/')) | (Syntax::Cmake, '#', _) => {
                while i < c.len() && c[i] != '\n' {
                    i += 1;
                }
            }
            (Syntax::Cpp, '/', Some('*')) => {
                i += 2;
                while i < c.len() && !(c[i] == '*' && c.get(i + 1) == Some(&'/')) {
                    if c[i] == '\n' {
                        out.push('\n');
                    }
                    i += 1;
                }
                i += 2;
                out.push(' ');
            }
            (_, '"', _) => {
                out.push('"');
                i += 1;
                while i < c.len() && c[i] != '"' && c[i] != '\n' {
                    if c[i] == '\\' && i + 1 < c.len() {
                        out.push(c[i]);
                        i += 1;
                    }
                    out.push(c[i]);
                    i += 1;
                }
                if i < c.len() && c[i] == '"' {
                    out.push('"');
                    i += 1;
                }
            }
            (_, ch, _) => {
                out.push(ch);
                i += 1;
            }
        }
    }
    out
}

fn elide(text: &str, syntax: Syntax) -> String {
    static BRACKETED: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\[[^\]\n]*\.\.\.[^\]\n]*\]").unwrap());
    static BRACED: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\{\s*\.\.\.\s*\}").unwrap());
    static DOTTED: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\.\.\.[^.\n]*\.\.\.").unwrap());
    static CMAKE_LIST: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\$\{_\w+\}").unwrap());
    let gap = GAP.to_string();
    let mut t = BRACKETED.replace_all(text, gap.as_str()).into_owned();
    t = BRACED.replace_all(&t, format!("{{{gap}}}").as_str()).into_owned();
    t = DOTTED.replace_all(&t, gap.as_str()).into_owned();
    if syntax == Syntax::Cmake {
        t = CMAKE_LIST.replace_all(&t, gap.as_str()).into_owned();
    }
    t
}

/// Identifiers and numbers, whole string literals, and single punctuation
/// characters. Whitespace only separates.
pub fn tokenize(text: &str) -> Vec<String> {
    let c: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < c.len() {
        let ch = c[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_alphanumeric() || ch == '_' {
            let start = i;
            while i < c.len() && (c[i].is_ascii_alphanumeric() || c[i] == '_') {
                i += 1;
            }
            out.push(c[start..i].iter().collect());
        } else if ch == '"' {
            let start = i;
            i += 1;
            while i < c.len() && c[i] != '"' && c[i] != '\n' {
                if c[i] == '\\' {
                    i += 1;
                }
                i += 1;
            }
            i = (i + 1).min(c.len());
            out.push(c[start..i].iter().collect());
        } else {
            out.push(ch.to_string());
            i += 1;
        }
    }
    out
}

pub fn generated_tokens(text: &str, syntax: Syntax) -> Vec<String> {
    tokenize(&strip_comments(text, syntax))
}

pub fn listing_pattern(listing: &str, syntax: Syntax) -> Vec<Pattern> {
    let mut out: Vec<Pattern> = Vec::new();
    for t in tokenize(&elide(&strip_comments(listing, syntax), syntax)) {
        if t == GAP.to_string() {
            if out.last() != Some(&Pattern::Gap) {
                out.push(Pattern::Gap);
            }
        } else {
            out.push(Pattern::Token(t));
        }
    }
    out
}

pub fn anchored(mut pattern: Vec<Pattern>, anchor: Anchor) -> Vec<Pattern> {
    if anchor == Anchor::Within && pattern.first() != Some(&Pattern::Gap) {
        pattern.insert(0, Pattern::Gap);
    }
    if anchor != Anchor::Whole && pattern.last() != Some(&Pattern::Gap) {
        pattern.push(Pattern::Gap);
    }
    pattern
}

/// Wildcard match where a gap covers any run of tokens, including none.
pub fn matches(pattern: &[Pattern], tokens: &[String]) -> bool {
    // row[j]: pattern[..i] matches tokens[..j]
    let mut row = vec![false; tokens.len() + 1];
    row[0] = true;
    for p in pattern {
        let mut next = vec![false; tokens.len() + 1];
        match p {
            Pattern::Gap => {
                let mut any = false;
                for j in 0..=tokens.len() {
                    any |= row[j];
                    next[j] = any;
                }
            }
            Pattern::Token(t) => {
                for j in 1..=tokens.len() {
                    next[j] = row[j - 1] && tokens[j - 1] == *t;
                }
            }
        }
        row = next;
    }
    row[tokens.len()]
}

/// Rewrites `export { ... }` blocks and export markers into plain
/// declarations and drops declaration-level `export` keywords, so a unit
/// exporting one block compares equal to a listing exporting each
/// declaration.
pub fn without_declaration_exports(tokens: &[String], markers: &[&str]) -> Vec<String> {
    let mut kept: Vec<Option<&String>> = tokens.iter().map(Some).collect();
    let mut i = 0;
    while i + 1 < tokens.len() {
        if tokens[i] == "export" && tokens[i + 1] == "{" {
            let mut depth = 0usize;
            let close = (i + 1..tokens.len()).find(|&j| {
                match tokens[j].as_str() {
                    "{" => depth += 1,
                    "}" => depth -= 1,
                    _ => {}
                }
                depth == 0
            });
            if let Some(close) = close {
                kept[i] = None;
                kept[i + 1] = None;
                kept[close] = None;
            }
        }
        i += 1;
    }
    let kept: Vec<&String> = kept.into_iter().flatten().filter(|t| !markers.contains(&t.as_str())).collect();
    kept.iter()
        .enumerate()
        .filter(|(i, t)| {
            t.as_str() != "export" || kept.get(i + 1).is_some_and(|n| n.as_str() == "module" || n.as_str() == "import")
        })
        .map(|(_, t)| (*t).clone())
        .collect()
}

/// Same normalisation applied to a listing pattern.
pub fn pattern_without_declaration_exports(pattern: &[Pattern]) -> Vec<Pattern> {
    pattern
        .iter()
        .enumerate()
        .filter(|(i, p)| match p {
            Pattern::Token(t) if t == "export" => matches!(
                pattern.get(i + 1),
                Some(Pattern::Token(n)) if n == "module" || n == "import"
            ),
            _ => true,
        })
        .map(|(_, p)| p.clone())
        .collect()
}
