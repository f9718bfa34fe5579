//! `analyze`: include-graph statistics. Never writes module units and
//! always succeeds once the project loads, cycles or not.

use std::path::Path;

use modulizer_core::graph::{build_graph, detect_cycles, histogram, transitive_counts_csv};

use crate::convert::REPORT_FILE;
use crate::project::{load_project, write_file, PathFilter};
use crate::report::{Finding, RunReport};
use crate::{require_out, AnalyzeArgs, CliResult, Common, EXIT_OK};

pub(crate) const HISTOGRAM_FILE: &str = "histogram.tsv";
pub(crate) const COUNTS_FILE: &str = "transitive_counts.csv";

pub(crate) fn run(common: &Common, args: &AnalyzeArgs) -> CliResult<i32> {
    let out = require_out(common)?;
    let filter = PathFilter::new(&args.include, &args.exclude)?;
    let project = load_project(common, Some(&filter))?;

    let (graph, dangling) =
        build_graph(project.files.iter().map(|f| (f.unit.relative_path.as_str(), &f.scan)), &project.config);
    let hist = histogram(&graph, &args.buckets)?;
    let cycles = detect_cycles(&graph);

    let mut report = RunReport::new("analyze");
    report.files_scanned = project.files.len();
    report.add_findings(dangling.iter().map(|(p, d)| Finding::new(p, d)));
    report.cycles_found = cycles.len();
    report.cycles = cycles.into_iter().map(|c| c.witness).collect();
    report.exit_code = EXIT_OK;

    write_file(out, Path::new(HISTOGRAM_FILE), &hist.to_tsv())?;
    write_file(out, Path::new(COUNTS_FILE), &transitive_counts_csv(&graph))?;
    write_file(out, Path::new(REPORT_FILE), &report.to_json())?;

    println!("{}", report.summary());
    if let Some((max, path)) = &hist.max_value {
        println!("largest transitive count: {max} ({path})");
    }
    Ok(EXIT_OK)
}
