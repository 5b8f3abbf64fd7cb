//! Toolchain for region-scoped IoT applications described by a vocabulary
//! (`.svl`), an architecture (`.sal`) and a deployment (`.sdl`).
//!
//! The pipeline is: [`syntax`] parses the three files, [`validate`] checks
//! them against each other, [`mapper`] places every service instance on a
//! device, [`codegen`] builds the framework manifests and scaffolds, and
//! [`linker`] packs everything into per-device [`package::DevicePackage`]s.
//! [`pipeline`] runs the whole chain from source text.

pub mod codegen;
pub mod json;
pub mod linker;
pub mod mapper;
pub mod model;
pub mod package;
pub mod pipeline;
pub mod region;
pub mod rng;
pub mod span;
pub mod syntax;
pub mod validate;

pub use model::*;
pub use region::{derive_instances, region_distance, RegionError};
pub use span::SourceSpan;
