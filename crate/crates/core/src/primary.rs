//! The primary module interface unit: `export module <name>;` followed by an
//! `export import` of every interface partition.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::config::is_module_name;
use crate::error::{Error, Result};
use crate::model::{ModuleUnitKind, ModuleUnitText, PartitionName};
use crate::scanner::{module_statements, ModuleStatement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryUnitSpec {
    module_name: String,
    partitions: Vec<PartitionName>,
}

impl PrimaryUnitSpec {
    /// Sorts the partitions; duplicates are a collision.
    pub fn new(module_name: impl Into<String>, mut partitions: Vec<PartitionName>) -> Result<Self> {
        let module_name = module_name.into();
        if !is_module_name(&module_name) {
            return Err(Error::Config(format!("`{module_name}` is not a valid module name")));
        }
        partitions.sort();
        if let Some(w) = partitions.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Collision { name: w[0].to_string(), first: w[0].to_string(), second: w[1].to_string() });
        }
        Ok(Self { module_name, partitions })
    }

    pub fn module_name(&self) -> &str {
        &self.module_name
    }

    pub fn partitions(&self) -> &[PartitionName] {
        &self.partitions
    }
}

/// The partition each interface unit declares, read back from its text.
pub fn collect_interface_partitions(units: &[ModuleUnitText]) -> Result<Vec<PartitionName>> {
    let mut seen: BTreeMap<PartitionName, PathBuf> = BTreeMap::new();
    let mut out = Vec::with_capacity(units.len());
    for unit in units {
        let malformed = |message: String| Error::MalformedUnit { path: unit.output_path.clone(), message };
        let declared: Vec<_> = module_statements(&unit.text)
            .into_iter()
            .filter_map(|s| match s {
                ModuleStatement::Declaration { exported: true, partition, .. } => Some(partition),
                _ => None,
            })
            .collect();
        let partition = match declared.as_slice() {
            [Some(p)] => PartitionName::new(p.clone())?,
            [None] => return Err(malformed("`export module` line has no partition".into())),
            other => return Err(malformed(format!("expected one `export module` line, found {}", other.len()))),
        };
        if let Some(first) = seen.get(&partition) {
            return Err(Error::Collision {
                name: partition.to_string(),
                first: first.display().to_string(),
                second: unit.output_path.display().to_string(),
            });
        }
        seen.insert(partition.clone(), unit.output_path.clone());
        out.push(partition);
    }
    Ok(out)
}

pub fn render_primary_unit(spec: &PrimaryUnitSpec) -> ModuleUnitText {
    let mut text = format!("module;\nexport module {};\n", spec.module_name);
    for p in &spec.partitions {
        text.push_str("export import :");
        text.push_str(p.as_str());
        text.push_str(";\n");
    }
    ModuleUnitText {
        kind: ModuleUnitKind::Primary,
        partition: None,
        text,
        output_path: PathBuf::from(format!("{}.ccm", spec.module_name)),
    }
}
