//! CMake rule text for building and installing the generated module.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildTargetSpec {
    pub target_name: String,
    /// Interface, wrapper and primary units, relative to the rules file.
    pub public_units: Vec<String>,
    /// Implementation units, relative to the rules file.
    pub private_units: Vec<String>,
    pub install_miu: bool,
    pub install_bmi: bool,
    pub install_destination_root: String,
}

impl BuildTargetSpec {
    pub fn new(target_name: impl Into<String>) -> Self {
        let target_name = target_name.into();
        Self {
            install_destination_root: default_destination_root(&target_name),
            target_name,
            public_units: Vec::new(),
            private_units: Vec::new(),
            install_miu: false,
            install_bmi: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let name_ok = !self.target_name.is_empty()
            && self.target_name.bytes().all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'+' | b'-'));
        if !name_ok {
            return Err(Error::Emit(format!("`{}` is not a valid target name", self.target_name)));
        }
        if self.public_units.is_empty() {
            return Err(Error::Emit("a module needs at least one public unit".into()));
        }
        let mut seen = BTreeSet::new();
        for path in self.public_units.iter().chain(&self.private_units) {
            if path.is_empty() {
                return Err(Error::Emit("empty unit path".into()));
            }
            if !seen.insert(path) {
                return Err(Error::Emit(format!("`{path}` is listed more than once")));
            }
        }
        Ok(())
    }
}

/// `${CMAKE_INSTALL_LIBDIR}/cmake/<target>`.
pub fn default_destination_root(target_name: &str) -> String {
    format!("${{CMAKE_INSTALL_LIBDIR}}/cmake/{target_name}")
}

/// Quotes arguments CMake would otherwise split or interpret.
fn cmake_argument(path: &str) -> String {
    if path.is_empty() || path.contains(|c: char| c.is_whitespace() || "()#\"\\;".contains(c)) {
        format!("\"{}\"", path.replace('\\', "\\\\").replace('"', "\\\""))
    } else {
        path.to_owned()
    }
}

fn file_set(out: &mut String, target: &str, visibility: &str, set: &str, files: &[String]) {
    let mut sorted: Vec<&String> = files.iter().collect();
    sorted.sort();
    let _ = writeln!(out, "target_sources({target}");
    let _ = writeln!(out, "               {visibility}");
    let _ = writeln!(out, "                 FILE_SET {target}_{set}");
    out.push_str("                   TYPE CXX_MODULES\n");
    out.push_str("                   FILES");
    for f in sorted {
        let _ = write!(out, "\n                     {}", cmake_argument(f));
    }
    out.push_str(")\n");
}

/// `add_library(<t> SHARED)`, a PUBLIC `CXX_MODULES` file set with the
/// public units and, when there are any, a PRIVATE one with the rest.
pub fn emit_build_rules(spec: &BuildTargetSpec) -> Result<String> {
    spec.validate()?;
    let t = &spec.target_name;
    let mut out = format!("add_library({t} SHARED)\n");
    file_set(&mut out, t, "PUBLIC", "public_sources", &spec.public_units);
    if !spec.private_units.is_empty() {
        file_set(&mut out, t, "PRIVATE", "private_sources", &spec.private_units);
    }
    Ok(out)
}

/// BMI block first, then the MIU block, for whichever is enabled.
pub fn emit_install_rules(spec: &BuildTargetSpec) -> Result<String> {
    spec.validate()?;
    if !spec.install_bmi && !spec.install_miu {
        return Err(Error::Emit("neither BMI nor MIU installation was requested".into()));
    }
    let t = &spec.target_name;
    let root = spec.install_destination_root.trim_end_matches('/');
    let mut out = String::new();
    let mut block = |what: String, leaf: &str| {
        if !out.is_empty() {
            out.push('\n');
        }
        let _ = writeln!(out, "install(TARGETS {t}");
        let _ = writeln!(out, "        EXPORT  {t}_MIU");
        let _ = writeln!(out, "        {what}");
        let _ = writeln!(out, "          DESTINATION {}", cmake_argument_always_quoted(&format!("{root}/{leaf}")));
        out.push_str("       )\n");
    };
    if spec.install_bmi {
        block("CXX_MODULES_BMI".into(), "bmi");
    }
    if spec.install_miu {
        block(format!("FILE_SET {t}_public_sources"), "miu");
    }
    Ok(out)
}

fn cmake_argument_always_quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
