//! `lint`: module-readiness diagnostics and include cycles. With `--out`,
//! the report is also written as `run_report.json`.

use std::path::Path;

use modulizer_core::graph::{build_graph, detect_cycles};
use modulizer_core::lint::lint_module_readiness;
use modulizer_core::{detect_include_guard, GuardSpan, Severity};
use rayon::prelude::*;

use crate::convert::REPORT_FILE;
use crate::project::{load_project, write_file};
use crate::report::{Finding, RunReport};
use crate::{CliResult, Common, EXIT_LINT, EXIT_OK};

pub(crate) fn run(common: &Common) -> CliResult<i32> {
    let project = load_project(common, None)?;
    let config = &project.config;

    let per_file: Vec<Vec<Finding>> = project
        .files
        .par_iter()
        .map(|f| {
            let path = &f.unit.relative_path;
            let header = config.is_header(path);
            let (guard, guard_warning) = if header { detect_include_guard(&f.scan) } else { (GuardSpan::none(), None) };
            guard_warning
                .iter()
                .chain(&lint_module_readiness(&f.scan, &guard, header, config))
                .map(|d| Finding::new(path, d))
                .collect()
        })
        .collect();

    let (graph, dangling) = build_graph(project.files.iter().map(|f| (f.unit.relative_path.as_str(), &f.scan)), config);
    let cycles = detect_cycles(&graph);

    let mut report = RunReport::new("lint");
    report.files_scanned = project.files.len();
    report.add_findings(per_file.into_iter().flatten());
    report.add_findings(dangling.iter().map(|(p, d)| Finding::new(p, d)));
    report.cycles_found = cycles.len();
    report.cycles = cycles.into_iter().map(|c| c.witness).collect();

    let failed = report.findings.iter().any(|f| f.severity == Severity::Error)
        || report.cycles_found > 0
        || (common.fail_on_warning && report.diagnostics.warning > 0);
    report.exit_code = if failed { EXIT_LINT } else { EXIT_OK };
    if let Some(out) = &common.out {
        write_file(out, Path::new(REPORT_FILE), &report.to_json())?;
    }
    println!("{}", report.summary());
    Ok(report.exit_code)
}
