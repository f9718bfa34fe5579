//! Loading the configuration and the project files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use globset::{Glob, GlobSet, GlobSetBuilder};
use modulizer_core::{Markers, ProjectConfig, Scanner, SourceScan, SourceUnit};
use rayon::prelude::*;
use walkdir::WalkDir;

use crate::{CliError, CliResult, Common};

/// Prefix of the scratch directories `convert` creates next to its output.
pub(crate) const SCRATCH_PREFIX: &str = ".modulizer-";

pub(crate) struct ProjectFile {
    pub unit: SourceUnit,
    pub scan: SourceScan,
}

pub(crate) struct Project {
    pub config: ProjectConfig,
    /// Sorted by relative path.
    pub files: Vec<ProjectFile>,
}

pub(crate) fn load_config(common: &Common) -> CliResult<(ProjectConfig, PathBuf)> {
    let text = fs::read_to_string(&common.config).map_err(|e| CliError::io(&common.config, e))?;
    let mut config =
        ProjectConfig::from_json(&text).map_err(|e| CliError::usage(format!("{}: {e}", common.config.display())))?;
    config.reexport_imports |= common.reexport;
    let base = common
        .config
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map_or_else(|| PathBuf::from("."), Path::to_path_buf);
    Ok((config, base))
}

/// Include/exclude globs over relative paths.
pub(crate) struct PathFilter {
    include: Option<GlobSet>,
    exclude: GlobSet,
}

impl PathFilter {
    pub fn new(include: &[String], exclude: &[String]) -> CliResult<Self> {
        let build = |patterns: &[String]| -> CliResult<GlobSet> {
            let mut b = GlobSetBuilder::new();
            for p in patterns {
                b.add(Glob::new(p).map_err(|e| CliError::usage(format!("bad glob `{p}`: {e}")))?);
            }
            b.build().map_err(|e| CliError::usage(e.to_string()))
        };
        Ok(Self { include: if include.is_empty() { None } else { Some(build(include)?) }, exclude: build(exclude)? })
    }

    pub fn accepts(&self, path: &str) -> bool {
        self.include.as_ref().is_none_or(|s| s.is_match(path)) && !self.exclude.is_match(path)
    }
}

/// Reads every header and source below the source roots and scans it.
/// `skip` is a directory to leave out (the output directory).
pub(crate) fn load_project(common: &Common, filter: Option<&PathFilter>) -> CliResult<Project> {
    let (config, base) = load_config(common)?;
    let skip = common.out.as_deref().and_then(|o| fs::canonicalize(o).ok());
    let mut found: BTreeMap<String, PathBuf> = BTreeMap::new();

    for root in &config.source_roots {
        let dir = base.join(root);
        if !dir.is_dir() {
            return Err(CliError::usage(format!("source root `{}` is not a directory", dir.display())));
        }
        let walker = WalkDir::new(&dir).sort_by_file_name().into_iter().filter_entry(|e| {
            let scratch = e.depth() > 0 && e.file_name().to_string_lossy().starts_with(SCRATCH_PREFIX);
            let is_out = skip.is_some() && e.file_type().is_dir() && fs::canonicalize(e.path()).ok() == skip;
            !scratch && !is_out
        });
        for entry in walker {
            let entry = entry.map_err(|e| CliError::usage(e.to_string()))?;
            if !entry.file_type().is_file() {
                continue;
            }
            let rel = entry.path().strip_prefix(&dir).expect("walk stays below its root");
            let rel = rel
                .components()
                .map(|c| c.as_os_str().to_str())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| CliError::usage(format!("{}: path is not UTF-8", entry.path().display())))?
                .join("/");
            if !(config.is_header(&rel) || config.is_source(&rel)) {
                continue;
            }
            if filter.is_some_and(|f| !f.accepts(&rel)) {
                continue;
            }
            if let Some(previous) = found.insert(rel.clone(), entry.path().to_path_buf()) {
                return Err(CliError::usage(format!(
                    "`{rel}` exists under two source roots: {} and {}",
                    previous.display(),
                    entry.path().display()
                )));
            }
        }
    }

    let scanner = Scanner::new(Markers::from_config(&config));
    let files = found
        .into_par_iter()
        .map(|(rel, path)| {
            let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let scan = scanner.scan(&text);
            Ok(ProjectFile { unit: SourceUnit::new(rel, text), scan })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Project { config, files })
}

/// Writes `contents` to `dir/rel`, creating parent directories.
pub(crate) fn write_file(dir: &Path, rel: &Path, contents: &str) -> CliResult<()> {
    let path = dir.join(rel);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}
