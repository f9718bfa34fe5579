//! `wrap` and `stats`: wrapper modules and the per-dependency summary table.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use modulizer_core::wrapper::{
    render_macro_header, render_wrapper_unit, wrapper_stats, SymbolManifest, MACRO_HEADER_FILE,
};
use serde::{Deserialize, Serialize};

use crate::project::write_file;
use crate::{require_out, CliError, CliResult, Common, ManifestArgs, EXIT_OK};

pub(crate) const STATS_FILE: &str = "wrapper_stats.tsv";
pub(crate) const WRAPPER_UNITS_FILE: &str = "wrapper_units.json";

/// `wrapper_units.json`: what `emit-build` adds to the public file set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WrapperListing {
    pub wrapper_units: Vec<String>,
    pub macro_header: String,
}

fn load_manifests(paths: &[PathBuf]) -> CliResult<Vec<SymbolManifest>> {
    let mut manifests = Vec::new();
    let mut modules: BTreeMap<String, &Path> = BTreeMap::new();
    for path in paths {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let m = SymbolManifest::from_json(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        if let Some(first) = modules.insert(m.wrapper_module_name.clone(), path) {
            return Err(CliError::usage(format!(
                "wrapper module `{}` is defined by both {} and {}",
                m.wrapper_module_name,
                first.display(),
                path.display()
            )));
        }
        manifests.push(m);
    }
    Ok(manifests)
}

pub(crate) fn run_wrap(common: &Common, args: &ManifestArgs) -> CliResult<i32> {
    let out = require_out(common)?;
    let manifests = load_manifests(&args.manifests)?;
    let mut listing = WrapperListing { wrapper_units: Vec::new(), macro_header: MACRO_HEADER_FILE.to_owned() };
    for m in &manifests {
        let unit = render_wrapper_unit(m)?;
        write_file(out, &unit.output_path, &unit.text)?;
        listing.wrapper_units.push(unit.output_path.to_string_lossy().into_owned());
        println!("{}: {}", m.wrapper_module_name, unit.output_path.display());
    }
    listing.wrapper_units.sort();
    write_file(out, Path::new(MACRO_HEADER_FILE), &render_macro_header(&manifests))?;
    let stats = wrapper_stats(&manifests);
    write_file(out, Path::new(STATS_FILE), &stats.to_tsv())?;
    let mut json = serde_json::to_string_pretty(&listing).expect("listing serializes");
    json.push('\n');
    write_file(out, Path::new(WRAPPER_UNITS_FILE), &json)?;
    Ok(EXIT_OK)
}

pub(crate) fn run_stats(common: &Common, args: &ManifestArgs) -> CliResult<i32> {
    let manifests = load_manifests(&args.manifests)?;
    let tsv = wrapper_stats(&manifests).to_tsv();
    print!("{tsv}");
    if let Some(out) = &common.out {
        write_file(out, Path::new(STATS_FILE), &tsv)?;
    }
    Ok(EXIT_OK)
}
