//! Cross-file reference checks.
//!
//! Parsing only checks what a single file can know. These passes resolve
//! names against the vocabulary and, for [`validate_system`], against the
//! devices that actually exist.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::model::{Architecture, Deployment, Loc, Vocabulary};
use crate::region::{derive_instances, region_distance};
use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    /// Empty until [`in_file`] assigns one.
    pub file: String,
    pub span: SourceSpan,
    pub message: String,
}

impl Diagnostic {
    fn new(severity: Severity, code: &'static str, loc: Loc, message: String) -> Self {
        Self {
            severity,
            code,
            file: String::new(),
            span: loc.span().unwrap_or(SourceSpan::point(1, 1)),
            message,
        }
    }

    fn error(code: &'static str, loc: Loc, message: String) -> Self {
        Self::new(Severity::Error, code, loc, message)
    }

    fn warning(code: &'static str, loc: Loc, message: String) -> Self {
        Self::new(Severity::Warning, code, loc, message)
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}[{}] {}",
            self.file, self.span.start_line, self.span.start_col, self.severity, self.code, self.message
        )
    }
}

/// Sets the file name of every diagnostic.
pub fn in_file(mut diags: Vec<Diagnostic>, file: &str) -> Vec<Diagnostic> {
    for d in &mut diags {
        d.file = file.to_string();
    }
    diags
}

pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        (&a.file, a.span, a.code, &a.message).cmp(&(&b.file, b.span, b.code, &b.message))
    });
}

/// One diagnostic per line, sorted.
pub fn render_diagnostics(diags: &[Diagnostic]) -> String {
    let mut sorted = diags.to_vec();
    sort_diagnostics(&mut sorted);
    sorted.iter().map(|d| format!("{d}\n")).collect()
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

pub fn validate_architecture(arch: &Architecture, vocab: &Vocabulary) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if arch.vocabulary_name != vocab.name {
        out.push(Diagnostic::error(
            "E-VOCAB-MISMATCH",
            arch.loc,
            format!("architecture uses `{}` but the vocabulary is `{}`", arch.vocabulary_name, vocab.name),
        ));
    }

    let mut produced: HashSet<&str> =
        vocab.resources.sensors.iter().flat_map(|s| s.generates.iter().map(|g| g.name.as_str())).collect();
    for svc in &arch.services {
        for g in &svc.generates {
            if !produced.insert(&g.event) {
                out.push(Diagnostic::error(
                    "E-GENERATE-DUPLICATE",
                    g.loc,
                    format!("event `{}` is already produced elsewhere", g.event),
                ));
            }
            if vocab.structure(&g.structure).is_none() {
                out.push(Diagnostic::error(
                    "E-STRUCT-UNKNOWN",
                    g.loc,
                    format!("struct `{}` is not declared in the vocabulary", g.structure),
                ));
            }
        }
    }

    for svc in &arch.services {
        let home = vocab.region(&svc.in_region);
        if home.is_none() {
            out.push(Diagnostic::error(
                "E-SCOPE-LABEL",
                svc.in_region_loc,
                format!("in-region label `{}` is not a region of the vocabulary", svc.in_region),
            ));
        }
        let scope_check = |label: &str, loc: Loc, what: &str, out: &mut Vec<Diagnostic>| {
            match (vocab.region(label), home) {
                (None, _) => out.push(Diagnostic::error(
                    "E-SCOPE-LABEL",
                    loc,
                    format!("scope label `{label}` of {what} is not a region of the vocabulary"),
                )),
                (Some(l), Some(h)) if l.depth > h.depth => out.push(Diagnostic::error(
                    "E-SCOPE-DEPTH",
                    loc,
                    format!(
                        "scope label `{label}` of {what} is finer than the service partition `{}`",
                        h.name
                    ),
                )),
                _ => {}
            }
        };

        for c in &svc.consumes {
            if !produced.contains(c.event.as_str()) {
                out.push(Diagnostic::error(
                    "E-CONSUME-UNRESOLVED",
                    c.loc,
                    format!("`{}` consumes `{}`, which no sensor or service generates", svc.name, c.event),
                ));
            }
            scope_check(&c.scope.label, c.loc, &format!("consume `{}`", c.event), &mut out);
        }
        for r in &svc.requests {
            if vocab.responders(&r.retrieval).next().is_none() {
                out.push(Diagnostic::error(
                    "E-REQUEST-UNRESOLVED",
                    r.loc,
                    format!("`{}` requests `{}`, which no storage or user interface provides", svc.name, r.retrieval),
                ));
            }
        }
        for c in &svc.commands {
            match vocab.action_targets(&c.action).next() {
                None => out.push(Diagnostic::error(
                    "E-COMMAND-UNRESOLVED",
                    c.loc,
                    format!("`{}` commands `{}`, which no actuator or user interface declares", svc.name, c.action),
                )),
                Some((_, decl)) if decl.params.len() != c.args.len() => out.push(Diagnostic::error(
                    "E-COMMAND-ARITY",
                    c.loc,
                    format!(
                        "command `{}` passes {} argument(s), the action takes {}",
                        c.action,
                        c.args.len(),
                        decl.params.len()
                    ),
                )),
                Some(_) => {}
            }
            scope_check(&c.scope.label, c.loc, &format!("command `{}`", c.action), &mut out);
        }
    }
    out.sort_by(|a, b| (a.span, a.code).cmp(&(b.span, b.code)));
    out
}

pub fn validate_deployment(dep: &Deployment, vocab: &Vocabulary) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if dep.vocabulary_name != vocab.name {
        out.push(Diagnostic::error(
            "E-VOCAB-MISMATCH",
            dep.loc,
            format!("deployment uses `{}` but the vocabulary is `{}`", dep.vocabulary_name, vocab.name),
        ));
    }
    for dev in &dep.devices {
        for r in &dev.resources {
            if vocab.resource(&r.name).is_none() {
                out.push(Diagnostic::error(
                    "E-RESOURCE-UNKNOWN",
                    r.loc,
                    format!("device `{}` hosts `{}`, which the vocabulary does not declare", dev.name, r.name),
                ));
            }
        }

        let mut depths = Vec::new();
        for e in dev.region.entries() {
            match vocab.region(&e.label) {
                Some(l) => depths.push(l.depth),
                None => out.push(Diagnostic::error(
                    "E-REGION-LABEL",
                    dev.region_loc,
                    format!("device `{}` uses region label `{}`, which is not declared", dev.name, e.label),
                )),
            }
        }
        if depths.len() != dev.region.len() {
            continue;
        }
        if depths.windows(2).any(|w| w[0] >= w[1]) {
            out.push(Diagnostic::error(
                "E-REGION-ORDER",
                dev.region_loc,
                format!("region entries of device `{}` are not in hierarchy order", dev.name),
            ));
        } else if depths.len() != vocab.regions.len() {
            let names: Vec<&str> = vocab.regions.iter().map(|r| r.name.as_str()).collect();
            out.push(Diagnostic::error(
                "E-REGION-DEPTH",
                dev.region_loc,
                format!("device `{}` must give a full region path ({})", dev.name, names.join(", ")),
            ));
        }
    }
    out.sort_by(|a, b| (a.span, a.code).cmp(&(b.span, b.code)));
    out
}

/// Whole-program checks. Assumes the architecture and deployment are each
/// free of errors; locations point into the architecture.
pub fn validate_system(arch: &Architecture, dep: &Deployment, vocab: &Vocabulary) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let hosted = |resource: &str| dep.devices.iter().any(|d| d.hosts(resource));
    let instances = derive_instances(arch, dep);

    for svc in &arch.services {
        for c in &svc.consumes {
            if let Some((sensor, _)) = vocab.sensor_event(&c.event) {
                if !hosted(&sensor.name) {
                    out.push(Diagnostic::warning(
                        "W-NO-PRODUCER",
                        c.loc,
                        format!("no device hosts `{}`, the producer of `{}`", sensor.name, c.event),
                    ));
                }
            }
        }

        for r in &svc.requests {
            if !vocab.responders(&r.retrieval).any(|(res, _)| hosted(res.name())) {
                out.push(Diagnostic::error(
                    "E-NO-RESPONDER",
                    r.loc,
                    format!("no device hosts a responder for `{}` requested by `{}`", r.retrieval, svc.name),
                ));
            }
        }

        for c in &svc.commands {
            let targets: Vec<&str> = vocab.action_targets(&c.action).map(|(r, _)| r.name()).collect();
            let uncovered = instances
                .iter()
                .filter(|i| i.service == svc.name)
                .filter(|i| {
                    !dep.devices.iter().any(|d| {
                        targets.iter().any(|t| d.hosts(t))
                            && region_distance(&d.region, &i.partition, &c.scope).unwrap_or(false)
                    })
                })
                .count();
            if uncovered > 0 {
                out.push(Diagnostic::warning(
                    "W-NO-ACTUATOR",
                    c.loc,
                    format!(
                        "`{}` commands `{}` but {} partition(s) have no target within {}",
                        svc.name, c.action, uncovered, c.scope
                    ),
                ));
            }
        }
    }
    out.sort_by(|a, b| (a.span, a.code).cmp(&(b.span, b.code)));
    out
}

/// Names of the three input files, used to label diagnostics.
#[derive(Debug, Clone)]
pub struct FileNames<'a> {
    pub vocabulary: &'a str,
    pub architecture: &'a str,
    pub deployment: &'a str,
}

/// Runs every pass. The system pass only runs when the per-file passes
/// found no errors.
pub fn check_all(
    arch: &Architecture,
    dep: &Deployment,
    vocab: &Vocabulary,
    files: &FileNames<'_>,
) -> Vec<Diagnostic> {
    let mut out = in_file(validate_architecture(arch, vocab), files.architecture);
    out.extend(in_file(validate_deployment(dep, vocab), files.deployment));
    if !has_errors(&out) {
        out.extend(in_file(validate_system(arch, dep, vocab), files.architecture));
    }
    sort_diagnostics(&mut out);
    out
}

/// Diagnostic codes grouped by count, handy in tests.
pub fn code_counts(diags: &[Diagnostic]) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for d in diags {
        *m.entry(d.code).or_insert(0) += 1;
    }
    m
}
