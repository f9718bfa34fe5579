use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scanner::{module_statements, ModuleStatement};

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PartitionName(String);

impl PartitionName {
    pub fn new(value: impl Into<String>) -> Result<Self> {
        let value = value.into();
        if is_identifier(&value) {
            Ok(Self(value))
        } else {
            Err(Error::Naming { reason: format!("`{value}` is not an identifier"), path: value })
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for PartitionName {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Self::new(value)
    }
}

impl From<PartitionName> for String {
    fn from(name: PartitionName) -> Self {
        name.0
    }
}

impl fmt::Display for PartitionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A project file: its path relative to its source root (the path other
/// files include it by) and its text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub relative_path: String,
    pub text: String,
}

impl SourceUnit {
    pub fn new(relative_path: impl Into<String>, text: impl Into<String>) -> Self {
        Self { relative_path: relative_path.into(), text: text.into() }
    }
}

/// Which kind of partition a project file becomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnitKind {
    Interface,
    Implementation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IncludeForm {
    Angle,
    Quote,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IncludeClass {
    Intra,
    Extern,
    ForcedTextual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncludeDirective {
    pub target: String,
    pub form: IncludeForm,
    pub line: usize,
    pub classification: IncludeClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModuleUnitKind {
    Interface,
    Implementation,
    Primary,
    Wrapper,
}

/// A generated module unit: its text and where it goes below the output root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleUnitText {
    pub kind: ModuleUnitKind,
    pub partition: Option<PartitionName>,
    pub text: String,
    pub output_path: PathBuf,
}

impl ModuleUnitText {
    /// Re-scans the text and checks the structural invariants every
    /// generated unit must satisfy.
    pub fn validate(&self) -> Result<()> {
        let fail = |message: String| Err(Error::MalformedUnit { path: self.output_path.clone(), message });
        if !self.text.starts_with("module;\n") && self.text != "module;" {
            return fail("text does not begin with `module;`".into());
        }
        let statements = module_statements(&self.text);
        let exported: Vec<_> =
            statements.iter().filter(|s| matches!(s, ModuleStatement::Declaration { exported: true, .. })).collect();
        let plain: Vec<_> =
            statements.iter().filter(|s| matches!(s, ModuleStatement::Declaration { exported: false, .. })).collect();

        match self.kind {
            ModuleUnitKind::Interface | ModuleUnitKind::Primary | ModuleUnitKind::Wrapper => {
                if exported.len() != 1 || !plain.is_empty() {
                    return fail(format!("expected exactly one `export module` line, found {}", exported.len()));
                }
            }
            ModuleUnitKind::Implementation => {
                if plain.len() != 1 || !exported.is_empty() {
                    return fail(format!(
                        "expected exactly one `module` declaration and no `export module`, found {} and {}",
                        plain.len(),
                        exported.len()
                    ));
                }
            }
        }

        let declared = exported.iter().chain(&plain).find_map(|s| match s {
            ModuleStatement::Declaration { partition, .. } => Some(partition.clone()),
            _ => None,
        });
        let declared = declared.flatten();
        match self.kind {
            ModuleUnitKind::Interface | ModuleUnitKind::Implementation => {
                let Some(expected) = &self.partition else {
                    return fail("partition unit without a partition name".into());
                };
                if declared.as_deref() != Some(expected.as_str()) {
                    return fail(format!("declared partition {declared:?} differs from `{expected}`"));
                }
            }
            ModuleUnitKind::Primary | ModuleUnitKind::Wrapper => {
                if declared.is_some() {
                    return fail("primary and wrapper units must not declare a partition".into());
                }
            }
        }
        Ok(())
    }
}
