//! Header → interface partition unit, source → implementation partition unit.
//!
//! Both layouts are
//!
//! ```text
//! module;
//! <forced textual includes>
//! <original lines before the export span, minus guard and project includes>
//! [export] module <name> :<partition>;
//! [export] import :<partition>;          (one per project include)
//! export {                                (interface units only)
//! <original lines of the export span>
//! }                                       (interface units only)
//! <remaining original lines, minus guard and project includes>
//! ```
//!
//! Every original line that is kept is copied byte for byte.

use std::collections::BTreeSet;
use std::path::PathBuf;

use crate::config::{matching_suffix, ProjectConfig};
use crate::diagnostics::{Diagnostic, DiagnosticCode, Severity};
use crate::error::{Error, Result};
use crate::lint::markers_inside_conditionals;
use crate::model::{IncludeClass, ModuleUnitKind, ModuleUnitText, PartitionName, SourceUnit, UnitKind};
use crate::naming::{classify_include, derive_partition_name, naming_path};
use crate::scanner::{detect_include_guard, EventKind, GuardSpan, SourceScan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionPlan {
    pub unit_kind: UnitKind,
    pub partition: PartitionName,
    /// Forced textual include targets, first occurrence order, deduplicated.
    pub forced_includes: Vec<String>,
    /// Original text of the first line of each forced include, parallel to
    /// `forced_includes`; emitted right after `module;`.
    pub forced_include_lines: Vec<String>,
    /// External include lines; they stay where they are.
    pub extern_includes: Vec<String>,
    pub imports: Vec<PartitionName>,
    /// First and last line (inclusive) of the exported region.
    pub export_span: Option<(usize, usize)>,
    pub guard: GuardSpan,
    /// Original lines that do not appear in the output: guard lines, project
    /// includes and forced includes.
    pub removed_lines: BTreeSet<usize>,
    /// Number of leading original lines placed before the module declaration.
    pub lines_before_declaration: usize,
    /// Non-fatal findings made while planning.
    pub warnings: Vec<Diagnostic>,
}

fn conversion_error(unit: &SourceUnit, message: impl Into<String>) -> Error {
    Error::Conversion { path: unit.relative_path.clone(), message: message.into() }
}

pub fn unit_kind(relative_path: &str, config: &ProjectConfig) -> Option<UnitKind> {
    if config.is_header(relative_path) {
        Some(UnitKind::Interface)
    } else if config.is_source(relative_path) {
        Some(UnitKind::Implementation)
    } else {
        None
    }
}

pub fn plan_conversion(unit: &SourceUnit, scan: &SourceScan, config: &ProjectConfig) -> Result<ConversionPlan> {
    let kind = unit_kind(&unit.relative_path, config)
        .ok_or_else(|| conversion_error(unit, "neither a header nor a source suffix"))?;
    let partition = derive_partition_name(naming_path(&unit.relative_path, config), kind, config)?;

    if let Some(d) = scan.diagnostics.iter().find(|d| d.severity == Severity::Error) {
        return Err(conversion_error(unit, format!("line {}: {}", d.line.unwrap_or(0), d.message)));
    }

    let mut warnings = Vec::new();
    let guard = match kind {
        UnitKind::Interface => {
            let (guard, warning) = detect_include_guard(scan);
            warnings.extend(warning);
            guard
        }
        UnitKind::Implementation => GuardSpan::none(),
    };

    let mut removed_lines: BTreeSet<usize> = guard.open_lines.iter().chain(&guard.close_lines).copied().collect();
    let mut forced_includes = Vec::new();
    let mut forced_include_lines = Vec::new();
    let mut extern_includes = Vec::new();
    let mut imports: Vec<PartitionName> = Vec::new();
    let physical = crate::scanner::physical_lines(&unit.text);

    for event in &scan.events {
        let EventKind::Include { target, .. } = &event.kind else {
            continue;
        };
        let raw = || physical[event.line - 1..event.end_line].join("\n");
        match classify_include(target, config) {
            IncludeClass::Intra => {
                let name = derive_partition_name(naming_path(target, config), UnitKind::Interface, config)
                    .map_err(|e| conversion_error(unit, format!("line {}: {e}", event.line)))?;
                if !imports.contains(&name) {
                    imports.push(name);
                }
                removed_lines.extend(event.line..=event.end_line);
            }
            IncludeClass::ForcedTextual => {
                if !forced_includes.contains(target) {
                    forced_includes.push(target.clone());
                    forced_include_lines.push(raw());
                }
                removed_lines.extend(event.line..=event.end_line);
            }
            IncludeClass::Extern => extern_includes.push(raw()),
        }
    }

    let export_span = export_span(unit, scan, &mut warnings)?;
    if kind == UnitKind::Interface {
        if export_span.is_none() {
            return Err(conversion_error(unit, "header has neither namespace markers nor export markers"));
        }
        if let Some(d) = markers_inside_conditionals(scan, &guard, true).first() {
            return Err(conversion_error(
                unit,
                format!("line {}: {}; module statements cannot be conditional", d.line.unwrap_or(0), d.message),
            ));
        }
    }
    if let Some((first, last)) = export_span {
        if let Some(line) = removed_lines.iter().find(|&&l| guard.contains(l) && (first..=last).contains(&l)) {
            return Err(conversion_error(unit, format!("include guard line {line} lies inside the export span")));
        }
    }

    if let Some((first, _)) = export_span {
        if brace_depth_before(scan, first) != 0 {
            return Err(conversion_error(
                unit,
                format!("line {first}: the opening marker is inside braces; module declarations must be at file scope"),
            ));
        }
    }

    let lines_before_declaration = match export_span {
        Some((first, _)) => first - 1,
        None => declaration_point(scan),
    };

    Ok(ConversionPlan {
        unit_kind: kind,
        partition,
        forced_includes,
        forced_include_lines,
        extern_includes,
        imports,
        export_span,
        guard,
        removed_lines,
        lines_before_declaration,
        warnings,
    })
}

/// From the first opening marker through the last closing marker.
fn export_span(unit: &SourceUnit, scan: &SourceScan, warnings: &mut Vec<Diagnostic>) -> Result<Option<(usize, usize)>> {
    let mut opens = Vec::new();
    let mut closes = Vec::new();
    for e in &scan.events {
        match e.kind {
            EventKind::NamespaceOpen | EventKind::ExportBegin => opens.push(e.line),
            EventKind::NamespaceClose | EventKind::ExportEnd => closes.push(e.line),
            _ => {}
        }
    }
    match (opens.first(), closes.last()) {
        (None, None) => Ok(None),
        (Some(&first), Some(&last)) if first < last => {
            if opens.len() > 1 || closes.len() > 1 {
                warnings.push(Diagnostic::warning(
                    DiagnosticCode::MultipleMarkerPairs,
                    first,
                    format!(
                        "{} opening and {} closing markers; exporting lines {first} to {last}",
                        opens.len(),
                        closes.len()
                    ),
                ));
            }
            Ok(Some((first, last)))
        }
        _ => Err(conversion_error(unit, "opening and closing markers do not pair up")),
    }
}

/// Net `{` minus `}` over code lines before `line`.
fn brace_depth_before(scan: &SourceScan, line: usize) -> i64 {
    scan.lines[..line - 1]
        .iter()
        .filter(|l| !l.directive)
        .flat_map(|l| l.masked.bytes())
        .map(|b| match b {
            b'{' => 1,
            b'}' => -1,
            _ => 0,
        })
        .sum()
}

/// For files without markers: just after the last include, or after the
/// outermost conditional enclosing it, so the declaration is never
/// conditional.
fn declaration_point(scan: &SourceScan) -> usize {
    let mut open: Vec<usize> = Vec::new();
    let mut outermost_with_include: Option<usize> = None;
    let mut point = 0;
    for e in &scan.events {
        match e.kind {
            EventKind::IfStart { .. } => open.push(e.line),
            EventKind::IfEnd => {
                open.pop();
                if open.is_empty() && outermost_with_include.take().is_some() {
                    point = point.max(e.end_line);
                }
            }
            EventKind::Include { .. } => {
                point = point.max(e.end_line);
                if !open.is_empty() {
                    outermost_with_include = Some(open[0]);
                }
            }
            _ => {}
        }
    }
    point
}

struct Emitter {
    out: String,
}

impl Emitter {
    fn generated(&mut self, line: &str) {
        self.terminate();
        self.out.push_str(line);
        self.out.push('\n');
    }

    fn original(&mut self, line: &str) {
        self.terminate();
        self.out.push_str(line);
    }

    /// An original last line may lack its newline; anything appended after
    /// it needs one.
    fn terminate(&mut self) {
        if !self.out.is_empty() && !self.out.ends_with('\n') {
            self.out.push('\n');
        }
    }
}

fn output_path(relative_path: &str, kind: UnitKind, config: &ProjectConfig) -> PathBuf {
    let (suffixes, new_suffix) = match kind {
        UnitKind::Interface => (&config.header_suffixes, &config.interface_output_suffix),
        UnitKind::Implementation => (&config.source_suffixes, &config.implementation_output_suffix),
    };
    let stem = matching_suffix(relative_path, suffixes)
        .map_or(relative_path, |s| &relative_path[..relative_path.len() - s.len()]);
    PathBuf::from(format!("{stem}{new_suffix}"))
}

fn render(plan: &ConversionPlan, unit: &SourceUnit, config: &ProjectConfig) -> ModuleUnitText {
    let lines: Vec<&str> = unit.text.split_inclusive('\n').collect();
    let mut e = Emitter { out: String::with_capacity(unit.text.len() + 256) };
    let kept = |idx: usize| !plan.removed_lines.contains(&(idx + 1));

    e.generated("module;");
    for line in &plan.forced_include_lines {
        e.generated(line);
    }
    for (idx, line) in lines.iter().enumerate().take(plan.lines_before_declaration) {
        if kept(idx) {
            e.original(line);
        }
    }

    let interface = plan.unit_kind == UnitKind::Interface;
    let (export_kw, import_kw) = match (interface, config.reexport_imports) {
        (true, true) => ("export ", "export import"),
        (true, false) => ("export ", "import"),
        (false, _) => ("", "import"),
    };
    e.generated(&format!("{export_kw}module {} :{};", config.module_name, plan.partition));
    for import in &plan.imports {
        e.generated(&format!("{import_kw} :{import};"));
    }

    let rest = lines.iter().enumerate().skip(plan.lines_before_declaration);
    match (interface, plan.export_span) {
        (true, Some((_, last))) => {
            e.generated("export {");
            for (idx, line) in rest.clone().take_while(|(idx, _)| *idx < last) {
                if kept(idx) {
                    e.original(line);
                }
            }
            e.generated("}");
            for (idx, line) in rest.skip_while(|(idx, _)| *idx < last) {
                if kept(idx) {
                    e.original(line);
                }
            }
        }
        _ => {
            for (idx, line) in rest {
                if kept(idx) {
                    e.original(line);
                }
            }
        }
    }

    let kind = match plan.unit_kind {
        UnitKind::Interface => ModuleUnitKind::Interface,
        UnitKind::Implementation => ModuleUnitKind::Implementation,
    };
    ModuleUnitText {
        kind,
        partition: Some(plan.partition.clone()),
        text: e.out,
        output_path: output_path(&unit.relative_path, plan.unit_kind, config),
    }
}

pub fn render_interface_unit(
    plan: &ConversionPlan,
    unit: &SourceUnit,
    config: &ProjectConfig,
) -> Result<ModuleUnitText> {
    if plan.unit_kind != UnitKind::Interface {
        return Err(conversion_error(unit, "not an interface plan"));
    }
    Ok(render(plan, unit, config))
}

pub fn render_implementation_unit(
    plan: &ConversionPlan,
    unit: &SourceUnit,
    config: &ProjectConfig,
) -> Result<ModuleUnitText> {
    if plan.unit_kind != UnitKind::Implementation {
        return Err(conversion_error(unit, "not an implementation plan"));
    }
    Ok(render(plan, unit, config))
}

/// Plans and renders one file.
pub fn convert_unit(
    unit: &SourceUnit,
    scan: &SourceScan,
    config: &ProjectConfig,
) -> Result<(ConversionPlan, ModuleUnitText)> {
    let plan = plan_conversion(unit, scan, config)?;
    let text = match plan.unit_kind {
        UnitKind::Interface => render_interface_unit(&plan, unit, config)?,
        UnitKind::Implementation => render_implementation_unit(&plan, unit, config)?,
    };
    Ok((plan, text))
}
