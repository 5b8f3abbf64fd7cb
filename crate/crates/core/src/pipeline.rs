//! The stages chained together, for callers that start from text.

use thiserror::Error;

use crate::codegen::{generate_architecture_framework, generate_vocabulary_framework, DriverManifest, FrameworkManifest};
use crate::linker::{link, LinkError};
use crate::mapper::{map_services, MappingError};
use crate::model::{Architecture, Deployment, MappingOutput, Vocabulary};
use crate::package::DevicePackage;
use crate::syntax::{parse_architecture_named, parse_deployment_named, parse_vocabulary_named, ParseError};
use crate::validate::{check_all, has_errors, render_diagnostics, Diagnostic, FileNames};

/// A named source text.
#[derive(Debug, Clone, Copy)]
pub struct SourceText<'a> {
    pub name: &'a str,
    pub text: &'a str,
}

#[derive(Debug, Clone, Copy)]
pub struct Sources<'a> {
    pub vocabulary: SourceText<'a>,
    pub architecture: SourceText<'a>,
    pub deployment: SourceText<'a>,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{}", render_diagnostics(.0).trim_end())]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Map(#[from] MappingError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

#[derive(Debug, Clone)]
pub struct Checked {
    pub vocabulary: Vocabulary,
    pub architecture: Architecture,
    pub deployment: Deployment,
    /// Warnings only; errors end the pipeline.
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub checked: Checked,
    pub mapping: MappingOutput,
    pub frameworks: FrameworkManifest,
    pub drivers: DriverManifest,
    pub packages: Vec<DevicePackage>,
}

pub fn check(src: &Sources<'_>) -> Result<Checked, PipelineError> {
    let vocabulary = parse_vocabulary_named(src.vocabulary.name, src.vocabulary.text)?;
    let architecture = parse_architecture_named(src.architecture.name, src.architecture.text)?;
    let deployment = parse_deployment_named(src.deployment.name, src.deployment.text)?;
    let files = FileNames {
        vocabulary: src.vocabulary.name,
        architecture: src.architecture.name,
        deployment: src.deployment.name,
    };
    let diagnostics = check_all(&architecture, &deployment, &vocabulary, &files);
    if has_errors(&diagnostics) {
        return Err(PipelineError::Invalid(diagnostics));
    }
    Ok(Checked { vocabulary, architecture, deployment, diagnostics })
}

/// Check, map with `seed`, generate and link.
pub fn compile(src: &Sources<'_>, seed: u64) -> Result<Compiled, PipelineError> {
    let checked = check(src)?;
    let mapping = map_services(&checked.architecture, &checked.deployment, seed)?;
    let frameworks = generate_architecture_framework(&checked.architecture, &checked.vocabulary);
    let drivers = generate_vocabulary_framework(&checked.vocabulary);
    let packages = link(
        &checked.architecture,
        &checked.deployment,
        &checked.vocabulary,
        &mapping,
        &frameworks,
        &drivers,
    )?;
    Ok(Compiled { checked, mapping, frameworks, drivers, packages })
}
