use iotc_core::codegen::{
    count_generated_vs_handwritten, generate_architecture_framework, generate_vocabulary_framework, render_scaffolds,
    CodegenError, MetricsInput, MetricsRow,
};
use iotc_core::json::to_canonical_json;
use iotc_core::linker::{link, LinkError};
use iotc_core::mapper::{map_services, MappingError};
use iotc_core::syntax::{parse_architecture, parse_deployment, parse_vocabulary, print_deployment, ParseError};

use crate::{generate_scaled_deployment, Bundle};

#[derive(Debug)]
pub enum MetricsError {
    Parse(ParseError),
    Map(MappingError),
    Codegen(CodegenError),
    Link(LinkError),
}

impl std::fmt::Display for MetricsError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricsError::Parse(e) => e.fmt(f),
            MetricsError::Map(e) => e.fmt(f),
            MetricsError::Codegen(e) => e.fmt(f),
            MetricsError::Link(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for MetricsError {}

/// Line counts for `bundle` on a generated `devices`-device deployment,
/// or on its shipped deployment when `devices` is `None`. Packages come
/// from a seed-0 mapping; scaffolds from the neutral templates.
pub fn bundle_metrics(bundle: &Bundle, devices: Option<usize>) -> Result<MetricsRow, MetricsError> {
    let vocab = parse_vocabulary(bundle.vocabulary.text).map_err(MetricsError::Parse)?;
    let arch = parse_architecture(bundle.architecture.text).map_err(MetricsError::Parse)?;
    let shipped = parse_deployment(bundle.deployment.text).map_err(MetricsError::Parse)?;
    let dep = match devices {
        Some(n) => generate_scaled_deployment(&shipped, n, 0),
        None => shipped,
    };
    let frameworks = generate_architecture_framework(&arch, &vocab);
    let drivers = generate_vocabulary_framework(&vocab);
    let scaffolds = render_scaffolds(&frameworks, &drivers, "neutral").map_err(MetricsError::Codegen)?;
    let mapping = map_services(&arch, &dep, 0).map_err(MetricsError::Map)?;
    let packages = link(&arch, &dep, &vocab, &mapping, &frameworks, &drivers).map_err(MetricsError::Link)?;

    let input = MetricsInput {
        vocabulary: vec![bundle.vocabulary.text.to_string()],
        architecture: vec![bundle.architecture.text.to_string()],
        deployment: vec![print_deployment(&dep)],
        handlers: bundle.handler_sources.iter().map(|s| s.text.to_string()).collect(),
        manifests: vec![
            to_canonical_json(&frameworks).expect("plain data"),
            to_canonical_json(&drivers).expect("plain data"),
        ],
        scaffolds: scaffolds.into_iter().map(|s| s.text).collect(),
        packages: packages.iter().map(|p| to_canonical_json(p).expect("plain data")).collect(),
    };
    Ok(count_generated_vs_handwritten(&input))
}

