//! The two example applications, smart building and fire detection, with
//! their specifications, handler logic, simulated drivers and scenarios.

pub mod fire_detection;
pub mod logic;
pub mod metrics;
mod scaled;
pub mod smart_building;

use std::path::PathBuf;

use iotc_core::pipeline::{SourceText, Sources};
use iotc_sim::HandlerRegistry;

pub use scaled::{generate_scaled_deployment, GRID};

#[derive(Debug, Clone, Copy)]
pub struct SourceFile {
    pub name: &'static str,
    pub text: &'static str,
}

impl SourceFile {
    pub fn as_source(&self) -> SourceText<'static> {
        SourceText { name: self.name, text: self.text }
    }
}

macro_rules! file {
    ($dir:literal, $name:literal) => {
        SourceFile { name: $name, text: include_str!(concat!("../bundles/", $dir, "/", $name)) }
    };
}

macro_rules! source {
    ($name:literal) => {
        SourceFile { name: concat!("src/", $name), text: include_str!($name) }
    };
}

#[derive(Debug, Clone, Copy)]
pub struct Bundle {
    pub name: &'static str,
    /// Directory under `bundles/`.
    pub dir: &'static str,
    pub vocabulary: SourceFile,
    pub architecture: SourceFile,
    pub deployment: SourceFile,
    /// Handwritten handler code, counted by the metrics.
    pub handler_sources: &'static [SourceFile],
    pub scenarios: &'static [SourceFile],
    registry: fn() -> HandlerRegistry,
}

impl Bundle {
    pub fn sources(&self) -> Sources<'static> {
        Sources {
            vocabulary: self.vocabulary.as_source(),
            architecture: self.architecture.as_source(),
            deployment: self.deployment.as_source(),
        }
    }

    pub fn registry(&self) -> HandlerRegistry {
        (self.registry)()
    }

    pub fn scenario(&self, name: &str) -> Option<&SourceFile> {
        self.scenarios.iter().find(|s| s.name == name || s.name.strip_suffix(".scn") == Some(name))
    }

    /// Where the golden trace for `scenario` lives in the source tree.
    pub fn golden_path(&self, scenario: &str) -> PathBuf {
        let stem = scenario.strip_suffix(".scn").unwrap_or(scenario);
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("bundles").join(self.dir).join("golden").join(format!("{stem}.trace"))
    }
}

fn smart_building_registry() -> HandlerRegistry {
    smart_building::registry(PROFILES).expect("shipped profiles parse")
}

pub const PROFILES: &str = include_str!("../bundles/smart_building/profiles.tsv");

pub const SMART_BUILDING: Bundle = Bundle {
    name: "smart-building",
    dir: "smart_building",
    vocabulary: file!("smart_building", "building.svl"),
    architecture: file!("smart_building", "building.sal"),
    deployment: file!("smart_building", "building.sdl"),
    handler_sources: &[source!("smart_building.rs"), source!("logic.rs")],
    scenarios: &[file!("smart_building", "badge_entry.scn"), file!("smart_building", "floor_average.scn")],
    registry: smart_building_registry,
};

pub const FIRE_DETECTION: Bundle = Bundle {
    name: "fire-detection",
    dir: "fire_detection",
    vocabulary: file!("fire_detection", "fire.svl"),
    architecture: file!("fire_detection", "fire.sal"),
    deployment: file!("fire_detection", "fire.sdl"),
    handler_sources: &[source!("fire_detection.rs"), source!("logic.rs")],
    scenarios: &[
        file!("fire_detection", "fire.scn"),
        file!("fire_detection", "smoke_only.scn"),
        file!("fire_detection", "temp_only.scn"),
        file!("fire_detection", "below_threshold.scn"),
    ],
    registry: fire_detection::registry,
};

pub const BUNDLES: [Bundle; 2] = [SMART_BUILDING, FIRE_DETECTION];

pub fn bundle_by_name(name: &str) -> Option<Bundle> {
    BUNDLES.iter().copied().find(|b| b.name == name)
}
