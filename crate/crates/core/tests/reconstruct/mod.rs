//! Undoing a conversion: used to check that converted units keep the
//! original text.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::LazyLock;

use modulizer_core::convert::ConversionPlan;
use modulizer_core::scanner::{module_statements, ModuleStatement};
use modulizer_core::UnitKind;
use regex::Regex;

/// Rebuilds the original from the output: drops generated lines, then
/// interleaves the removed original lines at their old positions.
pub fn reconstruct(original: &str, plan: &ConversionPlan, output: &str) -> String {
    static DECLARATION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(export )?module [\w.]+ :\w+;$").unwrap());
    static IMPORT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(export )?import :\w+;$").unwrap());
    let (declaration, import) = (&*DECLARATION, &*IMPORT);
    let out: Vec<&str> = output.split_inclusive('\n').collect();
    let orig: Vec<&str> = original.split_inclusive('\n').collect();
    let bare = |l: &str| l.trim_end_matches('\n').to_owned();

    assert_eq!(bare(out[0]), "module;");
    let mut i = 1 + plan.forced_include_lines.len();
    let mut body: Vec<&str> = Vec::new();
    while !declaration.is_match(&bare(out[i])) {
        body.push(out[i]);
        i += 1;
    }
    i += 1;
    while i < out.len() && import.is_match(&bare(out[i])) {
        i += 1;
    }
    let rest = &out[i..];
    let rest: Vec<&str> = match plan.export_span.filter(|_| plan.unit_kind == UnitKind::Interface) {
        Some((first, last)) => {
            assert_eq!(bare(rest[0]), "export {");
            let inside = (first..=last).filter(|l| !plan.removed_lines.contains(l)).count();
            assert_eq!(bare(rest[1 + inside]), "}");
            rest[1..1 + inside].iter().chain(&rest[2 + inside..]).copied().collect()
        }
        None => rest.to_vec(),
    };
    body.extend(rest);

    let mut kept = body.into_iter();
    let mut rebuilt = String::new();
    for (idx, line) in orig.iter().enumerate() {
        if plan.removed_lines.contains(&(idx + 1)) {
            rebuilt.push_str(line);
        } else {
            let l = kept.next().expect("output ran out of original lines");
            // A generated line may have terminated an unterminated original.
            if !line.ends_with('\n') {
                rebuilt.push_str(l.trim_end_matches('\n'));
            } else {
                rebuilt.push_str(l);
            }
        }
    }
    assert!(kept.next().is_none(), "output has extra lines");
    rebuilt
}

/// Partitions named by exported declarations and exported imports.
pub fn declared_partitions(text: &str) -> BTreeSet<String> {
    module_statements(text)
        .into_iter()
        .filter_map(|s| match s {
            ModuleStatement::Declaration { partition: Some(p), exported: true, .. } => Some(p),
            ModuleStatement::Import { partition: Some(p), exported: true, .. } => Some(p),
            _ => None,
        })
        .collect()
}
