//! `iotc`: check, map, generate, link, simulate and measure region-scoped
//! IoT applications.
//!
//! Exit status: 0 success, 1 diagnostics with errors or a failed stage,
//! 2 usage error, 3 internal error.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use iotc_apps::{bundle_by_name, metrics::bundle_metrics, BUNDLES};
use iotc_core::codegen::{
    diff_frameworks, generate_architecture_framework, generate_vocabulary_framework, render_scaffolds,
    FrameworkManifest, DRIVERS_FILE, FRAMEWORK_FILE,
};
use iotc_core::json::to_canonical_json;
use iotc_core::linker::{link, read_packages, write_packages};
use iotc_core::mapper::{explain_mapping, map_services};
use iotc_core::pipeline::{check, Checked, PipelineError, SourceText, Sources};
use iotc_core::syntax::{parse_architecture_named, parse_vocabulary_named};
use iotc_core::validate::{has_errors, in_file, render_diagnostics, validate_architecture};
use iotc_core::MappingOutput;
use iotc_sim::{parse_scenario, Simulator};

#[derive(Parser)]
#[command(name = "iotc", version, about = "Toolchain for region-scoped IoT applications")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Specs {
    /// Vocabulary (.svl)
    vocabulary: PathBuf,
    /// Architecture (.sal)
    architecture: PathBuf,
    /// Deployment (.sdl)
    deployment: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a vocabulary, architecture and deployment.
    Check(Specs),
    /// Assign every service instance to a device.
    Map {
        #[command(flatten)]
        specs: Specs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Mapping JSON; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print the assignment table.
        #[arg(long)]
        explain: bool,
    },
    /// Write framework manifests and scaffolds.
    Generate {
        vocabulary: PathBuf,
        architecture: PathBuf,
        #[arg(long, default_value = "neutral")]
        templates: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write one package per device.
    Link {
        #[command(flatten)]
        specs: Specs,
        /// Mapping JSON written by `map`.
        mapping: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a scenario against linked packages.
    Simulate {
        #[arg(long)]
        packages: PathBuf,
        /// Bundle providing handlers and drivers.
        #[arg(long)]
        app: String,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Count handwritten and generated lines.
    Metrics {
        #[arg(long)]
        bundle: String,
        /// Size of a generated deployment; the shipped one when omitted.
        #[arg(long)]
        devices: Option<usize>,
    },
}

/// A failure with its exit status.
enum Failure {
    /// Diagnostics or a failed stage; already formatted.
    Reported(String),
    Usage(String),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Internal(e)
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn display_name(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn stage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Reported(e.to_string())
}

struct Loaded {
    names: [String; 3],
    texts: [String; 3],
}

impl Loaded {
    fn read(specs: &Specs) -> Result<Self, Failure> {
        let paths = [&specs.vocabulary, &specs.architecture, &specs.deployment];
        Ok(Loaded {
            names: paths.map(|p| display_name(p)),
            texts: [read(paths[0])?, read(paths[1])?, read(paths[2])?],
        })
    }

    fn sources(&self) -> Sources<'_> {
        let s = |i: usize| SourceText { name: &self.names[i], text: &self.texts[i] };
        Sources { vocabulary: s(0), architecture: s(1), deployment: s(2) }
    }

    /// Checked specs; warnings go to stderr.
    fn checked(&self) -> Result<Checked, Failure> {
        let c = check(&self.sources()).map_err(pipeline_failure)?;
        eprint!("{}", render_diagnostics(&c.diagnostics));
        Ok(c)
    }
}

fn pipeline_failure(e: PipelineError) -> Failure {
    Failure::Reported(e.to_string())
}

fn cmd_check(specs: &Specs) -> Outcome {
    let loaded = Loaded::read(specs)?;
    match check(&loaded.sources()) {
        Ok(c) => {
            print!("{}", render_diagnostics(&c.diagnostics));
            Ok(())
        }
        Err(e) => Err(pipeline_failure(e)),
    }
}

fn cmd_map(specs: &Specs, seed: u64, out: Option<&Path>, explain: bool) -> Outcome {
    let c = Loaded::read(specs)?.checked()?;
    let mapping = map_services(&c.architecture, &c.deployment, seed).map_err(stage)?;
    let json = to_canonical_json(&mapping).context("serializing mapping")?;
    match out {
        Some(p) => write(p, &json)?,
        None => print!("{json}"),
    }
    if explain {
        print!("{}", explain_mapping(&mapping));
    }
    Ok(())
}

fn cmd_generate(vocab: &Path, arch: &Path, templates: &str, out: &Path) -> Outcome {
    let (vname, aname) = (display_name(vocab), display_name(arch));
    let v = parse_vocabulary_named(&vname, &read(vocab)?).map_err(stage)?;
    let a = parse_architecture_named(&aname, &read(arch)?).map_err(stage)?;
    let diags = in_file(validate_architecture(&a, &v), &aname);
    if has_errors(&diags) {
        return Err(Failure::Reported(render_diagnostics(&diags).trim_end().to_string()));
    }
    let frameworks = generate_architecture_framework(&a, &v);
    let drivers = generate_vocabulary_framework(&v);
    let scaffolds = render_scaffolds(&frameworks, &drivers, templates).map_err(|e| Failure::Usage(e.to_string()))?;

    let previous_path = out.join(FRAMEWORK_FILE);
    let previous: Option<FrameworkManifest> = match fs::read_to_string(&previous_path) {
        Ok(text) => Some(
            serde_json::from_str(&text).with_context(|| format!("reading previous {}", previous_path.display()))?,
        ),
        Err(_) => None,
    };

    write(&previous_path, &to_canonical_json(&frameworks).context("serializing framework")?)?;
    write(&out.join(DRIVERS_FILE), &to_canonical_json(&drivers).context("serializing drivers")?)?;
    for s in &scaffolds {
        write(&out.join(&s.path), &s.text)?;
    }
    if let Some(old) = previous {
        print!("{}", diff_frameworks(&old, &frameworks, &BTreeSet::new()).render());
    }
    Ok(())
}

fn cmd_link(specs: &Specs, mapping: &Path, out: &Path) -> Outcome {
    let c = Loaded::read(specs)?.checked()?;
    let mapping: MappingOutput = serde_json::from_str(&read(mapping)?)
        .map_err(|e| Failure::Reported(format!("{}: {e}", mapping.display())))?;
    let frameworks = generate_architecture_framework(&c.architecture, &c.vocabulary);
    let drivers = generate_vocabulary_framework(&c.vocabulary);
    let packages =
        link(&c.architecture, &c.deployment, &c.vocabulary, &mapping, &frameworks, &drivers).map_err(stage)?;
    write_packages(&packages, out).map_err(|e| Failure::Internal(e.into()))?;
    Ok(())
}

fn cmd_simulate(packages: &Path, app: &str, scenario: &Path, trace: &Path, seed: u64) -> Outcome {
    let bundle = bundle_by_name(app).ok_or_else(|| {
        let known: Vec<&str> = BUNDLES.iter().map(|b| b.name).collect();
        Failure::Usage(format!("unknown bundle `{app}` (known: {})", known.join(", ")))
    })?;
    if !packages.is_dir() {
        return Err(Failure::Usage(format!("{} is not a directory", packages.display())));
    }
    let pkgs = read_packages(packages).map_err(stage)?;
    let scn = parse_scenario(&read(scenario)?).map_err(|e| Failure::Reported(format!("{}: {e}", scenario.display())))?;
    let mut sim = Simulator::load(pkgs, &bundle.registry()).map_err(stage)?;
    let t = sim.run_scenario(&scn, seed).map_err(stage)?;
    write(trace, &t.render())?;
    Ok(())
}

fn cmd_metrics(bundle: &str, devices: Option<usize>) -> Outcome {
    let b = bundle_by_name(bundle).ok_or_else(|| Failure::Usage(format!("unknown bundle `{bundle}`")))?;
    if devices == Some(0) {
        return Err(Failure::Usage("--devices must be at least 1".into()));
    }
    let row = bundle_metrics(&b, devices).map_err(stage)?;
    let n = devices.map_or_else(|| "shipped".to_string(), |n| n.to_string());
    let header = [
        "bundle", "devices", "vocabulary", "architecture", "deployment", "handlers", "manifests", "scaffolds",
        "packages", "handwritten", "generated", "ratio",
    ];
    let cells = [
        b.name.to_string(),
        n,
        row.vocabulary.to_string(),
        row.architecture.to_string(),
        row.deployment.to_string(),
        row.handlers.to_string(),
        row.manifests.to_string(),
        row.scaffolds.to_string(),
        row.packages.to_string(),
        row.handwritten.to_string(),
        row.generated.to_string(),
        format!("{:.2}%", row.ratio * 100.0),
    ];
    let mut text = String::new();
    let widths: Vec<usize> = header.iter().zip(&cells).map(|(h, c)| h.len().max(c.len())).collect();
    let line = |cols: Vec<&str>| {
        cols.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
    };
    let _ = writeln!(text, "{}", line(header.to_vec()));
    let _ = writeln!(text, "{}", line(cells.iter().map(String::as_str).collect()));
    print!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Check(specs) => cmd_check(specs),
        Command::Map { specs, seed, out, explain } => cmd_map(specs, *seed, out.as_deref(), *explain),
        Command::Generate { vocabulary, architecture, templates, out } => {
            cmd_generate(vocabulary, architecture, templates, out)
        }
        Command::Link { specs, mapping, out } => cmd_link(specs, mapping, out),
        Command::Simulate { packages, app, scenario, trace, seed } => {
            cmd_simulate(packages, app, scenario, trace, *seed)
        }
        Command::Metrics { bundle, devices } => cmd_metrics(bundle, *devices),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Reported(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("iotc: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("iotc: internal error: {e:#}");
            ExitCode::from(3)
        }
    }
}
