use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CodegenError;

/// Counted lines: not blank and not starting with `//` once trimmed.
pub fn count_lines(text: &str) -> usize {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with("//"))
        .count()
}

fn total<S: AsRef<str>>(texts: &[S]) -> usize {
    texts.iter().map(|t| count_lines(t.as_ref())).sum()
}

/// Texts to count, by category.
#[derive(Debug, Clone, Default)]
pub struct MetricsInput {
    pub vocabulary: Vec<String>,
    pub architecture: Vec<String>,
    pub deployment: Vec<String>,
    pub handlers: Vec<String>,
    pub manifests: Vec<String>,
    pub scaffolds: Vec<String>,
    pub packages: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub vocabulary: usize,
    pub architecture: usize,
    pub deployment: usize,
    pub handlers: usize,
    pub manifests: usize,
    pub scaffolds: usize,
    pub packages: usize,
    pub handwritten: usize,
    pub generated: usize,
    /// generated / (generated + handwritten); 0 when nothing is generated.
    pub ratio: f64,
}

pub fn count_generated_vs_handwritten(input: &MetricsInput) -> MetricsRow {
    let vocabulary = total(&input.vocabulary);
    let architecture = total(&input.architecture);
    let deployment = total(&input.deployment);
    let handlers = total(&input.handlers);
    let manifests = total(&input.manifests);
    let scaffolds = total(&input.scaffolds);
    let packages = total(&input.packages);
    let handwritten = vocabulary + architecture + deployment + handlers;
    let generated = manifests + scaffolds + packages;
    let ratio = if generated == 0 { 0.0 } else { generated as f64 / (generated + handwritten) as f64 };
    MetricsRow {
        vocabulary,
        architecture,
        deployment,
        handlers,
        manifests,
        scaffolds,
        packages,
        handwritten,
        generated,
        ratio,
    }
}

/// Paths to count, by category. Spec files are sorted into the
/// vocabulary, architecture and deployment columns by extension.
#[derive(Debug, Clone, Default)]
pub struct MetricsFiles {
    pub spec_files: Vec<PathBuf>,
    pub handler_sources: Vec<PathBuf>,
    pub manifests: Vec<PathBuf>,
    pub scaffolds: Vec<PathBuf>,
    pub packages: Vec<PathBuf>,
}

fn read_all(paths: &[PathBuf]) -> Result<Vec<String>, CodegenError> {
    paths.iter().map(|p| read(p)).collect()
}

fn read(p: &Path) -> Result<String, CodegenError> {
    std::fs::read_to_string(p).map_err(|e| CodegenError::MissingFile { path: p.to_path_buf(), source: e })
}

pub fn count_files(files: &MetricsFiles) -> Result<MetricsRow, CodegenError> {
    let mut input = MetricsInput::default();
    for p in &files.spec_files {
        let text = read(p)?;
        match p.extension().and_then(|e| e.to_str()) {
            Some("svl") => input.vocabulary.push(text),
            Some("sal") => input.architecture.push(text),
            _ => input.deployment.push(text),
        }
    }
    input.handlers = read_all(&files.handler_sources)?;
    input.manifests = read_all(&files.manifests)?;
    input.scaffolds = read_all(&files.scaffolds)?;
    input.packages = read_all(&files.packages)?;
    Ok(count_generated_vs_handwritten(&input))
}
