//! `emit-build`: `<target>.cmake` from the unit listings.

use std::fs;
use std::path::{Path, PathBuf};

use modulizer_core::cmake::{default_destination_root, emit_build_rules, emit_install_rules, BuildTargetSpec};
use modulizer_core::ModuleUnitKind;

use crate::convert::{UnitListing, UNITS_FILE};
use crate::project::{load_config, write_file};
use crate::wrap::{WrapperListing, WRAPPER_UNITS_FILE};
use crate::{require_out, CliError, CliResult, Common, EmitArgs, EXIT_OK};

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// `path` (relative to `dir`) expressed relative to `out`, with `/`.
fn relative_to(out: &Path, dir: &Path, path: &str) -> CliResult<String> {
    let absolute = |p: &Path| std::path::absolute(p).map_err(|e| CliError::io(p, e));
    let target = absolute(&dir.join(path))?;
    let base = absolute(out)?;
    let rel = pathdiff::diff_paths(&target, &base).unwrap_or(target);
    Ok(rel.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect::<Vec<_>>().join("/"))
}

pub(crate) fn run(common: &Common, args: &EmitArgs) -> CliResult<i32> {
    let out = require_out(common)?;
    let (config, _) = load_config(common)?;
    let units_dir: PathBuf = args.units.clone().unwrap_or_else(|| out.to_path_buf());
    let listing: UnitListing = read_json(&units_dir.join(UNITS_FILE))?;
    if listing.module_name != config.module_name {
        return Err(CliError::usage(format!(
            "{} lists module `{}`, but the configuration names `{}`",
            units_dir.join(UNITS_FILE).display(),
            listing.module_name,
            config.module_name
        )));
    }

    let target = args.target.clone().unwrap_or_else(|| format!("{}_module", config.module_name.replace('.', "_")));
    let mut spec = BuildTargetSpec::new(target.clone());
    spec.install_bmi = common.install_bmi;
    spec.install_miu = common.install_miu;
    spec.install_destination_root = args.install_root.clone().unwrap_or_else(|| default_destination_root(&target));
    for unit in &listing.units {
        let rel = relative_to(out, &units_dir, &unit.output_path)?;
        match unit.kind {
            ModuleUnitKind::Implementation => spec.private_units.push(rel),
            _ => spec.public_units.push(rel),
        }
    }
    let wrappers_dir = args.wrappers.clone().unwrap_or_else(|| units_dir.clone());
    let wrapper_file = wrappers_dir.join(WRAPPER_UNITS_FILE);
    if args.wrappers.is_some() || wrapper_file.is_file() {
        let wrappers: WrapperListing = read_json(&wrapper_file)?;
        for w in &wrappers.wrapper_units {
            spec.public_units.push(relative_to(out, &wrappers_dir, w)?);
        }
    }

    let mut text = emit_build_rules(&spec)?;
    if spec.install_bmi || spec.install_miu {
        text.push('\n');
        text.push_str(&emit_install_rules(&spec)?);
    }
    let file = format!("{target}.cmake");
    write_file(out, Path::new(&file), &text)?;
    println!("{}", out.join(&file).display());
    Ok(EXIT_OK)
}
