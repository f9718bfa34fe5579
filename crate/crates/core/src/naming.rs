//! Partition naming and include classification.

use std::collections::BTreeMap;

use crate::config::{matching_suffix, ProjectConfig};
use crate::error::{Error, Result};
use crate::model::{IncludeClass, PartitionName, UnitKind};

/// Classifies an include target. Forced textual includes take precedence over
/// the prefix match.
pub fn classify_include(target: &str, config: &ProjectConfig) -> IncludeClass {
    if config.forced_textual_includes.iter().any(|f| f == target) {
        IncludeClass::ForcedTextual
    } else if intra_prefix(target, config).is_some() {
        IncludeClass::Intra
    } else {
        IncludeClass::Extern
    }
}

fn intra_prefix<'a>(target: &str, config: &'a ProjectConfig) -> Option<&'a str> {
    config
        .include_prefixes
        .iter()
        .filter(|p| target.starts_with(p.as_str()))
        .max_by_key(|p| p.len())
        .map(String::as_str)
}

/// The path a partition name is derived from: the include path with its
/// project prefix removed (`deal.II/base/types.h` -> `base/types.h`). Paths
/// that carry no project prefix, such as source files, are returned as is.
pub fn naming_path<'a>(include_path: &'a str, config: &ProjectConfig) -> &'a str {
    match intra_prefix(include_path, config) {
        Some(prefix) if include_path.len() > prefix.len() => include_path[prefix.len()..].trim_start_matches('/'),
        _ => include_path,
    }
}

/// `interface_prefix`/`implementation_prefix` followed by the path with its
/// suffix removed, `/` replaced by `_`, and any other ASCII punctuation
/// replaced by `_`.
pub fn derive_partition_name(relative_path: &str, kind: UnitKind, config: &ProjectConfig) -> Result<PartitionName> {
    let fail = |reason: &str| Err(Error::Naming { path: relative_path.to_owned(), reason: reason.to_owned() });

    let (prefix, suffixes) = match kind {
        UnitKind::Interface => (&config.interface_prefix, &config.header_suffixes),
        UnitKind::Implementation => (&config.implementation_prefix, &config.source_suffixes),
    };
    let Some(suffix) = matching_suffix(relative_path, suffixes) else {
        return fail("no recognized file suffix");
    };
    let stem = &relative_path[..relative_path.len() - suffix.len()];
    if stem.starts_with('/') {
        return fail("path is absolute");
    }
    if stem.split('/').any(|seg| seg.is_empty() || seg == "." || seg == "..") {
        return fail("path has an empty, `.` or `..` segment");
    }

    let mut name = String::with_capacity(prefix.len() + stem.len());
    name.push_str(prefix);
    for c in stem.chars() {
        match c {
            c if c.is_ascii_alphanumeric() || c == '_' => name.push(c),
            c if c.is_ascii_punctuation() => name.push('_'),
            _ => return fail(&format!("character {c:?} cannot appear in an identifier")),
        }
    }
    PartitionName::new(name).or_else(|_| fail("result is not an identifier"))
}

/// Derives names for a whole run and refuses to hand out the same name for
/// two different paths.
#[derive(Debug, Default)]
pub struct PartitionNamer {
    assigned: BTreeMap<PartitionName, String>,
}

impl PartitionNamer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn assign(&mut self, relative_path: &str, kind: UnitKind, config: &ProjectConfig) -> Result<PartitionName> {
        let name = derive_partition_name(relative_path, kind, config)?;
        match self.assigned.get(&name) {
            Some(first) if first != relative_path => {
                Err(Error::Collision { name: name.to_string(), first: first.clone(), second: relative_path.to_owned() })
            }
            Some(_) => Ok(name),
            None => {
                self.assigned.insert(name.clone(), relative_path.to_owned());
                Ok(name)
            }
        }
    }
}
