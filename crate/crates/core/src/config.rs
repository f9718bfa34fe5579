//! Project configuration, read from a JSON file whose keys are exactly the
//! field names of [`ProjectConfig`]. Unknown keys are rejected.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::is_identifier;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    /// Name used in `export module <name>` / `module <name> :<partition>`.
    pub module_name: String,
    /// Path prefixes that identify intra-project includes, e.g. `"deal.II/"`.
    pub include_prefixes: Vec<String>,
    /// Directories (relative to the config file) whose contents are the
    /// project files. A file's path relative to its root is the path other
    /// files use to include it.
    pub source_roots: Vec<PathBuf>,
    pub namespace_open_marker: String,
    pub namespace_close_marker: String,
    #[serde(default)]
    pub export_begin_marker: Option<String>,
    #[serde(default)]
    pub export_end_marker: Option<String>,
    /// Includes that stay textual and are hoisted right after `module;`.
    #[serde(default)]
    pub forced_textual_includes: Vec<String>,
    #[serde(default = "default_header_suffixes")]
    pub header_suffixes: Vec<String>,
    #[serde(default = "default_source_suffixes")]
    pub source_suffixes: Vec<String>,
    #[serde(default = "default_interface_prefix")]
    pub interface_prefix: String,
    #[serde(default = "default_implementation_prefix")]
    pub implementation_prefix: String,
    #[serde(default)]
    pub reexport_imports: bool,
    #[serde(default = "default_interface_output_suffix")]
    pub interface_output_suffix: String,
    #[serde(default = "default_implementation_output_suffix")]
    pub implementation_output_suffix: String,
}

fn default_header_suffixes() -> Vec<String> {
    vec![".h".to_owned()]
}

fn default_source_suffixes() -> Vec<String> {
    vec![".cc".to_owned()]
}

fn default_interface_prefix() -> String {
    "interface_partition_".to_owned()
}

fn default_implementation_prefix() -> String {
    "implementation_partition_".to_owned()
}

fn default_interface_output_suffix() -> String {
    ".ccm".to_owned()
}

fn default_implementation_output_suffix() -> String {
    ".cc".to_owned()
}

impl ProjectConfig {
    /// A configuration with every optional field at its default.
    pub fn new(
        module_name: impl Into<String>,
        include_prefixes: Vec<String>,
        namespace_open_marker: impl Into<String>,
        namespace_close_marker: impl Into<String>,
    ) -> Self {
        Self {
            module_name: module_name.into(),
            include_prefixes,
            source_roots: vec![PathBuf::from(".")],
            namespace_open_marker: namespace_open_marker.into(),
            namespace_close_marker: namespace_close_marker.into(),
            export_begin_marker: None,
            export_end_marker: None,
            forced_textual_includes: Vec::new(),
            header_suffixes: default_header_suffixes(),
            source_suffixes: default_source_suffixes(),
            interface_prefix: default_interface_prefix(),
            implementation_prefix: default_implementation_prefix(),
            reexport_imports: false,
            interface_output_suffix: default_interface_output_suffix(),
            implementation_output_suffix: default_implementation_output_suffix(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));

        if !is_module_name(&self.module_name) {
            return fail(format!("module_name `{}` is not a valid module name", self.module_name));
        }
        if self.include_prefixes.is_empty() {
            return fail("include_prefixes must not be empty".into());
        }
        for (i, prefix) in self.include_prefixes.iter().enumerate() {
            if prefix.is_empty() {
                return fail("include_prefixes entries must be non-empty".into());
            }
            if self.include_prefixes[..i].contains(prefix) {
                return fail(format!("include prefix `{prefix}` is listed twice"));
            }
        }
        if self.source_roots.is_empty() {
            return fail("source_roots must not be empty".into());
        }
        for (field, marker) in [
            ("namespace_open_marker", &self.namespace_open_marker),
            ("namespace_close_marker", &self.namespace_close_marker),
        ] {
            if marker.trim().is_empty() || marker.trim() != marker {
                return fail(format!("{field} must be a non-empty token without surrounding whitespace"));
            }
        }
        if self.namespace_open_marker == self.namespace_close_marker {
            return fail("namespace markers must differ".into());
        }
        match (&self.export_begin_marker, &self.export_end_marker) {
            (None, None) => {}
            (Some(begin), Some(end)) => {
                if begin.trim().is_empty() || end.trim().is_empty() || begin == end {
                    return fail("export markers must be non-empty and distinct".into());
                }
            }
            _ => return fail("export_begin_marker and export_end_marker must be given together".into()),
        }
        for (field, prefix) in
            [("interface_prefix", &self.interface_prefix), ("implementation_prefix", &self.implementation_prefix)]
        {
            let valid_start = prefix.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
            if !valid_start || !prefix.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return fail(format!("{field} `{prefix}` is not a valid identifier prefix"));
            }
        }
        if self.interface_prefix == self.implementation_prefix {
            return fail("interface_prefix and implementation_prefix must differ".into());
        }
        for (field, suffixes) in
            [("header_suffixes", &self.header_suffixes), ("source_suffixes", &self.source_suffixes)]
        {
            if suffixes.is_empty() || suffixes.iter().any(|s| !s.starts_with('.') || s.len() < 2) {
                return fail(format!("{field} must be a non-empty list of `.ext` suffixes"));
            }
        }
        if let Some(s) = self.header_suffixes.iter().find(|s| self.source_suffixes.contains(s)) {
            return fail(format!("suffix `{s}` is both a header and a source suffix"));
        }
        for (field, suffix) in [
            ("interface_output_suffix", &self.interface_output_suffix),
            ("implementation_output_suffix", &self.implementation_output_suffix),
        ] {
            if !suffix.starts_with('.') || suffix.len() < 2 {
                return fail(format!("{field} must look like `.ext`"));
            }
        }
        if self.forced_textual_includes.iter().any(|f| f.is_empty()) {
            return fail("forced_textual_includes entries must be non-empty".into());
        }
        Ok(())
    }

    pub fn is_header(&self, path: &str) -> bool {
        matching_suffix(path, &self.header_suffixes).is_some()
    }

    pub fn is_source(&self, path: &str) -> bool {
        matching_suffix(path, &self.source_suffixes).is_some()
    }
}

/// Longest suffix from `suffixes` that `path` ends with (and that is not the
/// whole file name).
pub(crate) fn matching_suffix<'a>(path: &str, suffixes: &'a [String]) -> Option<&'a str> {
    let file_name = path.rsplit('/').next().unwrap_or(path);
    suffixes
        .iter()
        .filter(|s| file_name.len() > s.len() && file_name.ends_with(s.as_str()))
        .max_by_key(|s| s.len())
        .map(String::as_str)
}

/// Dotted sequence of identifiers, e.g. `dealii` or `dealii.external.std`.
pub fn is_module_name(name: &str) -> bool {
    !name.is_empty() && name.split('.').all(is_identifier)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> ProjectConfig {
        ProjectConfig::new("dealii", vec!["deal.II/".into()], "DEAL_II_NAMESPACE_OPEN", "DEAL_II_NAMESPACE_CLOSE")
    }

    #[test]
    fn defaults_fill_in_optional_fields() {
        let json = r#"{
            "module_name": "dealii",
            "include_prefixes": ["deal.II/"],
            "source_roots": ["include", "source"],
            "namespace_open_marker": "DEAL_II_NAMESPACE_OPEN",
            "namespace_close_marker": "DEAL_II_NAMESPACE_CLOSE"
        }"#;
        let c = ProjectConfig::from_json(json).unwrap();
        assert_eq!(c.header_suffixes, vec![".h"]);
        assert_eq!(c.interface_prefix, "interface_partition_");
        assert_eq!(c.implementation_prefix, "implementation_partition_");
        assert_eq!(c.interface_output_suffix, ".ccm");
        assert_eq!(c.implementation_output_suffix, ".cc");
        assert!(!c.reexport_imports);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let json = r#"{
            "module_name": "dealii",
            "include_prefix": ["deal.II/"],
            "source_roots": ["."],
            "namespace_open_marker": "A",
            "namespace_close_marker": "B"
        }"#;
        let err = ProjectConfig::from_json(json).unwrap_err();
        assert!(err.to_string().contains("include_prefix"), "{err}");
    }

    #[test]
    fn invariants_are_enforced() {
        let mut c = config();
        c.module_name.clear();
        assert!(c.validate().is_err());

        let mut c = config();
        c.include_prefixes = vec!["a/".into(), "a/".into()];
        assert!(c.validate().is_err());

        let mut c = config();
        c.implementation_prefix = c.interface_prefix.clone();
        assert!(c.validate().is_err());

        let mut c = config();
        c.export_begin_marker = Some("// begin".into());
        assert!(c.validate().is_err());

        let mut c = config();
        c.interface_prefix = "9bad_".into();
        assert!(c.validate().is_err());

        assert!(config().validate().is_ok());
    }

    #[test]
    fn suffix_matching_prefers_longest() {
        let suffixes = vec![".h".to_owned(), ".inst.h".to_owned()];
        assert_eq!(matching_suffix("a/b.inst.h", &suffixes), Some(".inst.h"));
        assert_eq!(matching_suffix("a/b.h", &suffixes), Some(".h"));
        assert_eq!(matching_suffix("a/.h", &suffixes), None);
        assert_eq!(matching_suffix("a/b.hpp", &suffixes), None);
    }

    #[test]
    fn dotted_module_names() {
        assert!(is_module_name("dealii.external.std"));
        assert!(!is_module_name("dealii..std"));
        assert!(!is_module_name("1abc"));
    }
}
