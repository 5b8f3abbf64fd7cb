//! The generated frameworks: service manifests with handler slots, driver
//! interfaces with factory keys, text scaffolds, evolution diffs and line
//! metrics.

mod evolution;
mod manifest;
mod metrics;
mod scaffold;
pub mod template;

use std::path::PathBuf;

use thiserror::Error;

pub use evolution::{diff_frameworks, EvolutionReport};
pub use manifest::{
    event_structure, factory_key, generate_architecture_framework, generate_vocabulary_framework, hook_name,
    interface_name, AbstractHook, ConcreteOp, DriverInterface, DriverManifest, DriverMethod, FrameworkManifest,
    MethodMode, ServiceFramework,
};
pub use metrics::{count_files, count_generated_vs_handwritten, count_lines, MetricsFiles, MetricsInput, MetricsRow};
pub use scaffold::{render_scaffolds, resource_context, service_context, template_set, Scaffold, TemplateSet, NEUTRAL};

#[derive(Debug, Error)]
pub enum CodegenError {
    #[error("E-TEMPLATE-MISSING: no template set named `{0}`")]
    TemplateMissing(String),
    #[error(transparent)]
    Template(template::TemplateError),
    #[error("E-MISSING-FILE: {}: {source}", path.display())]
    MissingFile { path: PathBuf, source: std::io::Error },
}

/// File name of the architecture manifest in a generate output directory.
pub const FRAMEWORK_FILE: &str = "framework.json";
/// File name of the vocabulary manifest.
pub const DRIVERS_FILE: &str = "drivers.json";
