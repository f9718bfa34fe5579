//! Conversion of header-based C++ projects into C++20 module units.
//!
//! The pieces, roughly in pipeline order:
//!
//! - [`scanner`]: comment- and literal-aware directive scanning, include guards
//! - [`lint`]: module-readiness diagnostics
//! - [`naming`]: partition names and include classification
//! - [`convert`]: header → interface partition, source → implementation partition
//! - [`primary`]: the primary module interface unit
//! - [`wrapper`]: wrapper modules for external dependencies
//! - [`graph`]: include graph, transitive closure, cycles, histograms
//! - [`cmake`]: `FILE_SET CXX_MODULES` build and install rules

pub mod cmake;
pub mod config;
pub mod convert;
pub mod diagnostics;
pub mod error;
pub mod graph;
pub mod lint;
pub mod model;
pub mod naming;
pub mod primary;
pub mod scanner;
pub mod wrapper;

pub use config::ProjectConfig;
pub use diagnostics::{Diagnostic, DiagnosticCode, Severity};
pub use error::{Error, Result};
pub use model::{
    IncludeClass, IncludeDirective, IncludeForm, ModuleUnitKind, ModuleUnitText, PartitionName, SourceUnit, UnitKind,
};
pub use scanner::{detect_include_guard, GuardSpan, LexEvent, Markers, Scanner, SourceScan};
