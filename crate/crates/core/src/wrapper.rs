//! Wrapper modules for external dependencies.
//!
//! A [`SymbolManifest`] lists the names a project uses from one dependency.
//! Each entry is re-exported according to its category:
//!
//! - `Exportable`: a `using` declaration inside `export { namespace ... { } }`
//! - `InternalLinkage`: a reference alias in the project namespace
//! - `PreprocessorVariable`: value captured under an internal alias, the macro
//!   `#undef`ed, then exported as a reference under its old name
//! - `FunctionLikeMacro`: cannot be exported at all; its definition is copied
//!   into a macro-only header instead

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::config::is_module_name;
use crate::error::{Error, Result};
use crate::model::{is_identifier, ModuleUnitKind, ModuleUnitText};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymbolCategory {
    Exportable,
    InternalLinkage,
    PreprocessorVariable,
    FunctionLikeMacro,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolEntry {
    /// Plain (`int16_t`) or qualified (`::Kokkos::ALL`) name. Qualified names
    /// are emitted as written.
    pub name: String,
    #[serde(default)]
    pub namespace_path: Vec<String>,
    pub category: SymbolCategory,
    /// Raw `#if` condition, e.g. `DEAL_II_KOKKOS_VERSION_GTE(4, 0, 0)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version_guard: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub macro_body: Option<String>,
}

impl SymbolEntry {
    pub fn new(name: impl Into<String>, namespace_path: &[&str], category: SymbolCategory) -> Self {
        Self {
            name: name.into(),
            namespace_path: namespace_path.iter().map(|s| (*s).to_owned()).collect(),
            category,
            version_guard: None,
            macro_body: None,
        }
    }

    /// Last `::` segment of the name.
    pub fn base_name(&self) -> &str {
        self.name.rsplit("::").next().unwrap_or(&self.name)
    }

    fn qualified_source(&self) -> String {
        if self.name.contains("::") {
            if self.name.starts_with("::") {
                self.name.clone()
            } else {
                format!("::{}", self.name)
            }
        } else if self.namespace_path.is_empty() {
            format!("::{}", self.name)
        } else {
            format!("::{}::{}", self.namespace_path.join("::"), self.name)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolManifest {
    pub dependency_name: String,
    pub wrapper_module_name: String,
    /// Headers included in the global module fragment: `algorithm`,
    /// `<algorithm>` or `"local.h"`.
    #[serde(default)]
    pub textual_includes: Vec<String>,
    pub project_namespace: String,
    pub entries: Vec<SymbolEntry>,
}

impl SymbolManifest {
    pub fn from_json(text: &str) -> Result<Self> {
        let manifest: Self = serde_json::from_str(text)
            .map_err(|e| Error::Manifest { dependency: "<unparsed>".into(), message: e.to_string() })?;
        manifest.validate()?;
        Ok(manifest)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Manifest { dependency: self.dependency_name.clone(), message: message.into() }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_identifier(&self.dependency_name) {
            return Err(self.error("dependency_name must be an identifier"));
        }
        if !is_module_name(&self.wrapper_module_name) {
            return Err(self.error("wrapper_module_name must be dot-separated identifiers"));
        }
        if !is_identifier(&self.project_namespace) {
            return Err(self.error("project_namespace must be an identifier"));
        }
        if self.entries.is_empty() {
            return Err(self.error("entries must not be empty"));
        }
        for inc in &self.textual_includes {
            if include_line(inc).is_none() {
                return Err(self.error(format!("textual_includes: `{inc}` is not an include target")));
            }
        }

        let mut seen = BTreeSet::new();
        let mut project_names = BTreeSet::new();
        let mut aliases = BTreeSet::new();
        for (i, e) in self.entries.iter().enumerate() {
            let at = |msg: String| self.error(format!("entries[{i}] (`{}`): {msg}", e.name));
            let qualified_ok =
                e.category == SymbolCategory::Exportable || e.category == SymbolCategory::InternalLinkage;
            let name_ok = if qualified_ok && e.name.contains("::") {
                e.name.trim_start_matches("::").split("::").all(is_identifier)
            } else {
                is_identifier(&e.name)
            };
            if !name_ok {
                return Err(at("name is not a valid identifier".into()));
            }
            if let Some(bad) = e.namespace_path.iter().find(|s| !is_identifier(s)) {
                return Err(at(format!("namespace_path segment `{bad}` is not an identifier")));
            }
            let is_macro = e.category == SymbolCategory::FunctionLikeMacro;
            match (&e.macro_body, is_macro) {
                (None, true) => return Err(at("macro_body is required for FunctionLikeMacro".into())),
                (Some(_), false) => return Err(at("macro_body is only allowed for FunctionLikeMacro".into())),
                (Some(body), true) if defined_macro(body) != Some(e.name.as_str()) => {
                    return Err(at("macro_body must start with `#define <name>`".into()))
                }
                _ => {}
            }
            if is_macro && e.version_guard.is_some() {
                return Err(at("version_guard is not allowed for FunctionLikeMacro".into()));
            }
            if e.version_guard.as_deref().is_some_and(|g| g.trim().is_empty() || g.contains('\n')) {
                return Err(at("version_guard must be a single non-empty line".into()));
            }
            let is_macro_like = is_macro || e.category == SymbolCategory::PreprocessorVariable;
            if is_macro_like && !e.namespace_path.is_empty() {
                return Err(at("preprocessor names have no namespace_path".into()));
            }
            if !seen.insert((e.namespace_path.clone(), e.base_name().to_owned())) {
                return Err(at("duplicate (namespace_path, name) pair".into()));
            }
            if matches!(e.category, SymbolCategory::InternalLinkage | SymbolCategory::PreprocessorVariable)
                && !project_names.insert(e.base_name().to_owned())
            {
                return Err(at(format!("`{}::{}` is wrapped twice", self.project_namespace, e.base_name())));
            }
            if e.category == SymbolCategory::PreprocessorVariable && !aliases.insert(self.alias(e)) {
                return Err(at(format!("internal alias `{}` is not unique", self.alias(e))));
            }
        }
        Ok(())
    }

    /// `<dependency>_<lowercased name>`, e.g. `petsc_mataij`.
    fn alias(&self, entry: &SymbolEntry) -> String {
        format!("{}_{}", self.dependency_name, entry.name.to_lowercase())
    }

    pub fn count(&self, category: SymbolCategory) -> usize {
        self.entries.iter().filter(|e| e.category == category).count()
    }
}

/// `#include` line for a manifest include entry.
fn include_line(entry: &str) -> Option<String> {
    let e = entry.trim();
    let target = match e.as_bytes().first()? {
        b'<' => e.strip_prefix('<')?.strip_suffix('>')?,
        b'"' => e.strip_prefix('"')?.strip_suffix('"')?,
        _ => e,
    };
    if target.is_empty() || target.chars().any(char::is_whitespace) {
        return None;
    }
    Some(if e.starts_with('<') || e.starts_with('"') { format!("#include {e}") } else { format!("#include <{e}>") })
}

/// Name of the macro a `#define` body defines.
fn defined_macro(body: &str) -> Option<&str> {
    let rest = body.trim_start().strip_prefix('#')?.trim_start().strip_prefix("define")?;
    if !rest.starts_with([' ', '\t']) {
        return None;
    }
    let rest = rest.trim_start();
    let len = rest.bytes().take_while(|b| b.is_ascii_alphanumeric() || *b == b'_').count();
    Some(&rest[..len])
}

fn guarded(out: &mut String, guard: Option<&str>, body: &str) {
    match guard {
        Some(g) => {
            let _ = writeln!(out, "#if {}", g.trim());
            out.push_str(body);
            out.push_str("#endif\n");
        }
        None => out.push_str(body),
    }
}

pub fn render_wrapper_unit(manifest: &SymbolManifest) -> Result<ModuleUnitText> {
    manifest.validate()?;
    let mut out = String::from("module;\n");
    if !manifest.textual_includes.is_empty() {
        out.push('\n');
        for inc in &manifest.textual_includes {
            out.push_str(&include_line(inc).expect("validated"));
            out.push('\n');
        }
    }
    let _ = writeln!(out, "\nexport module {};", manifest.wrapper_module_name);

    // Exportable names, one block per namespace path in first-seen order.
    let mut groups: Vec<(&[String], Vec<&SymbolEntry>)> = Vec::new();
    for e in manifest.entries.iter().filter(|e| e.category == SymbolCategory::Exportable) {
        match groups.iter_mut().find(|(path, _)| *path == e.namespace_path.as_slice()) {
            Some((_, list)) => list.push(e),
            None => groups.push((&e.namespace_path, vec![e])),
        }
    }
    if !groups.is_empty() {
        out.push_str("\nexport\n{\n");
        for (path, entries) in &groups {
            let (indent, qualifier) = if path.is_empty() {
                ("  ", String::new())
            } else {
                let ns = path.join("::");
                let _ = writeln!(out, "  namespace {ns}\n  {{");
                ("    ", ns)
            };
            for e in entries {
                let target = if e.name.contains("::") {
                    e.name.clone()
                } else if qualifier.is_empty() {
                    format!("::{}", e.name)
                } else {
                    format!("{qualifier}::{}", e.name)
                };
                guarded(&mut out, e.version_guard.as_deref(), &format!("{indent}using {target};\n"));
            }
            if !path.is_empty() {
                out.push_str("  }\n");
            }
        }
        out.push_str("}\n");
    }

    let ns = &manifest.project_namespace;
    let internal: Vec<_> = manifest.entries.iter().filter(|e| e.category == SymbolCategory::InternalLinkage).collect();
    if !internal.is_empty() {
        let _ = write!(out, "\nnamespace {ns}\n{{\n");
        for e in internal {
            let line = format!("  export const auto &{} = {};\n", e.base_name(), e.qualified_source());
            guarded(&mut out, e.version_guard.as_deref(), &line);
        }
        out.push_str("}\n");
    }

    let variables: Vec<_> =
        manifest.entries.iter().filter(|e| e.category == SymbolCategory::PreprocessorVariable).collect();
    if !variables.is_empty() {
        let _ = write!(out, "\nnamespace {ns}\n{{\n");
        for e in variables {
            let alias = manifest.alias(e);
            let name = &e.name;
            let block = format!(
                "  namespace internal\n  {{\n    const auto {alias} = {name};\n  }}\n#undef {name}\n  export const auto &{name} = internal::{alias};\n"
            );
            guarded(&mut out, e.version_guard.as_deref(), &block);
        }
        out.push_str("}\n");
    }

    Ok(ModuleUnitText {
        kind: ModuleUnitKind::Wrapper,
        partition: None,
        text: out,
        output_path: PathBuf::from(format!("{}.ccm", manifest.wrapper_module_name)),
    })
}

pub const MACRO_HEADER_GUARD: &str = "MODULIZER_EXTERNAL_MACROS_H";
pub const MACRO_HEADER_FILE: &str = "external_macros.h";

/// Plain header holding every function-like macro, in manifest order then
/// entry order, inside a classic include guard.
pub fn render_macro_header(manifests: &[SymbolManifest]) -> String {
    let mut out = format!("#ifndef {MACRO_HEADER_GUARD}\n#define {MACRO_HEADER_GUARD}\n");
    for m in manifests {
        for e in m.entries.iter().filter(|e| e.category == SymbolCategory::FunctionLikeMacro) {
            if let Some(body) = &e.macro_body {
                out.push('\n');
                out.push_str(body);
                if !body.ends_with('\n') {
                    out.push('\n');
                }
            }
        }
    }
    out.push_str("\n#endif\n");
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StatsRow {
    pub dependency: String,
    pub exported_count: usize,
    pub wrapped_count: usize,
    pub duplicated_macro_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WrapperStats {
    /// Sorted by dependency name.
    pub rows: Vec<StatsRow>,
    pub total: StatsRow,
}

pub fn wrapper_stats(manifests: &[SymbolManifest]) -> WrapperStats {
    let mut rows: BTreeMap<&str, StatsRow> = BTreeMap::new();
    for m in manifests {
        let row = rows
            .entry(&m.dependency_name)
            .or_insert_with(|| StatsRow { dependency: m.dependency_name.clone(), ..StatsRow::default() });
        row.exported_count += m.count(SymbolCategory::Exportable);
        row.wrapped_count += m.count(SymbolCategory::InternalLinkage) + m.count(SymbolCategory::PreprocessorVariable);
        row.duplicated_macro_count += m.count(SymbolCategory::FunctionLikeMacro);
    }
    let rows: Vec<StatsRow> = rows.into_values().collect();
    let total = rows.iter().fold(StatsRow { dependency: "Total".into(), ..StatsRow::default() }, |mut acc, r| {
        acc.exported_count += r.exported_count;
        acc.wrapped_count += r.wrapped_count;
        acc.duplicated_macro_count += r.duplicated_macro_count;
        acc
    });
    WrapperStats { rows, total }
}

pub const STATS_HEADER: [&str; 4] =
    ["Dependency", "# of exported names", "# of wrapped names", "# of duplicated macros"];

impl WrapperStats {
    pub fn to_tsv(&self) -> String {
        let mut out = STATS_HEADER.join("\t");
        out.push('\n');
        for r in self.rows.iter().chain(std::iter::once(&self.total)) {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                r.dependency, r.exported_count, r.wrapped_count, r.duplicated_macro_count
            );
        }
        out
    }
}
