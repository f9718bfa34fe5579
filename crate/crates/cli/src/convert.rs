//! `convert`: every header and source becomes a partition unit, plus the
//! primary unit. Nothing is written unless the whole project converts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use modulizer_core::convert::convert_unit;
use modulizer_core::graph::{build_graph, detect_cycles};
use modulizer_core::naming::{naming_path, PartitionNamer};
use modulizer_core::primary::{collect_interface_partitions, render_primary_unit, PrimaryUnitSpec};
use modulizer_core::{IncludeClass, ModuleUnitKind, ModuleUnitText, UnitKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::output::Staging;
use crate::project::{load_project, write_file};
use crate::report::{Finding, RunReport};
use crate::{require_out, CliResult, Common, EXIT_CONVERSION, EXIT_CYCLES, EXIT_OK};

pub(crate) const REPORT_FILE: &str = "run_report.json";
pub(crate) const UNITS_FILE: &str = "units.json";

/// One generated unit, as listed in `units.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitRecord {
    pub kind: ModuleUnitKind,
    pub partition: Option<String>,
    /// Project file the unit was generated from.
    pub source: Option<String>,
    /// Relative to the output directory.
    pub output_path: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitListing {
    pub module_name: String,
    pub units: Vec<UnitRecord>,
}

fn path_text(p: &Path) -> String {
    p.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect::<Vec<_>>().join("/")
}

pub(crate) fn run(common: &Common) -> CliResult<i32> {
    let out = require_out(common)?;
    let project = load_project(common, None)?;
    let config = &project.config;
    let mut report = RunReport::new("convert");
    report.files_scanned = project.files.len();

    let (graph, dangling) = build_graph(project.files.iter().map(|f| (f.unit.relative_path.as_str(), &f.scan)), config);
    report.add_findings(dangling.iter().map(|(p, d)| Finding::new(p, d)));
    let cycles = detect_cycles(&graph);
    if !cycles.is_empty() {
        report.cycles_found = cycles.len();
        report.cycles = cycles.into_iter().map(|c| c.witness).collect();
        report.exit_code = EXIT_CYCLES;
        println!("{}", report.summary());
        return Ok(EXIT_CYCLES);
    }

    // Forced textual headers stay headers.
    let convertible: Vec<_> = project
        .files
        .iter()
        .filter(|f| {
            modulizer_core::naming::classify_include(&f.unit.relative_path, config) != IncludeClass::ForcedTextual
        })
        .collect();
    let results: Vec<_> =
        convertible.par_iter().map(|f| convert_unit(&f.unit, &f.scan, config).map(|r| (f, r))).collect();

    let mut converted = Vec::new();
    for r in results {
        match r {
            Ok((file, (plan, unit))) => {
                report.add_findings(plan.warnings.iter().map(|d| Finding::new(&file.unit.relative_path, d)));
                converted.push((file.unit.relative_path.as_str(), plan, unit));
            }
            Err(e) => report.errors.push(e.to_string()),
        }
    }

    let mut namer = PartitionNamer::new();
    let mut outputs: BTreeMap<PathBuf, &str> = BTreeMap::new();
    for (path, plan, unit) in &converted {
        if let Err(e) = namer.assign(naming_path(path, config), plan.unit_kind, config) {
            report.errors.push(e.to_string());
        }
        if let Err(e) = unit.validate() {
            report.errors.push(e.to_string());
        }
        if let Some(first) = outputs.insert(unit.output_path.clone(), path) {
            report
                .errors
                .push(format!("`{first}` and `{path}` would both be written to `{}`", unit.output_path.display()));
        }
    }

    let interfaces: Vec<ModuleUnitText> = converted
        .iter()
        .filter(|(_, plan, _)| plan.unit_kind == UnitKind::Interface)
        .map(|(.., u)| u.clone())
        .collect();
    let primary = match collect_interface_partitions(&interfaces)
        .and_then(|parts| PrimaryUnitSpec::new(config.module_name.clone(), parts))
    {
        Ok(spec) => Some(render_primary_unit(&spec)),
        Err(e) => {
            report.errors.push(e.to_string());
            None
        }
    };
    if let Some(p) = &primary {
        if let Some(first) = outputs.get(&p.output_path) {
            report.errors.push(format!(
                "the primary unit `{}` collides with the unit generated from `{first}`",
                p.output_path.display()
            ));
        }
    }

    if common.fail_on_warning && report.diagnostics.warning > 0 {
        report.errors.push(format!("{} warnings with --fail-on-warning", report.diagnostics.warning));
    }
    if !report.errors.is_empty() {
        report.exit_code = EXIT_CONVERSION;
        println!("{}", report.summary());
        return Ok(EXIT_CONVERSION);
    }
    let primary = primary.expect("no errors");

    report.headers_converted = interfaces.len();
    report.sources_converted = converted.len() - interfaces.len();
    report.partitions_emitted = converted.len();
    report.exit_code = if report.diagnostics.error > 0 { EXIT_CONVERSION } else { EXIT_OK };

    let mut listing = UnitListing { module_name: config.module_name.clone(), units: Vec::new() };
    let staging = Staging::new(out, REPORT_FILE)?;
    for (path, _, unit) in &converted {
        write_file(staging.path(), &unit.output_path, &unit.text)?;
        listing.units.push(UnitRecord {
            kind: unit.kind,
            partition: unit.partition.as_ref().map(|p| p.to_string()),
            source: Some((*path).to_owned()),
            output_path: path_text(&unit.output_path),
        });
    }
    write_file(staging.path(), &primary.output_path, &primary.text)?;
    listing.units.push(UnitRecord {
        kind: ModuleUnitKind::Primary,
        partition: None,
        source: None,
        output_path: path_text(&primary.output_path),
    });
    listing.units.sort_by(|a, b| (a.kind, &a.output_path).cmp(&(b.kind, &b.output_path)));
    let mut json = serde_json::to_string_pretty(&listing).expect("listing serializes");
    json.push('\n');
    write_file(staging.path(), Path::new(UNITS_FILE), &json)?;
    write_file(staging.path(), Path::new(REPORT_FILE), &report.to_json())?;
    staging.commit()?;

    println!("{}", report.summary());
    Ok(report.exit_code)
}
