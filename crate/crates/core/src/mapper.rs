//! Placement of service instances on devices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use thiserror::Error;

use crate::model::{Architecture, Assignment, Deployment, MappingOutput, RegionPath};
use crate::region::derive_instances;
use crate::rng::XorShift64Star;

/// Devices grouped by every prefix of their region path.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RegionIndex {
    /// Label name to the distinct paths truncated at that label.
    pub region_map: BTreeMap<String, BTreeSet<RegionPath>>,
    /// Truncated path to the devices under it, sorted by name.
    pub device_list_by_path: BTreeMap<RegionPath, Vec<String>>,
}

impl RegionIndex {
    pub fn devices_in(&self, path: &RegionPath) -> &[String] {
        self.device_list_by_path.get(path).map(Vec::as_slice).unwrap_or(&[])
    }
}

pub fn build_region_index(dep: &Deployment) -> RegionIndex {
    let mut idx = RegionIndex::default();
    for dev in &dep.devices {
        for (depth, entry) in dev.region.entries().iter().enumerate() {
            let prefix = dev.region.prefix(depth + 1);
            idx.region_map.entry(entry.label.clone()).or_default().insert(prefix.clone());
            idx.device_list_by_path.entry(prefix).or_default().push(dev.name.clone());
        }
    }
    for names in idx.device_list_by_path.values_mut() {
        names.sort();
    }
    idx
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("E-EMPTY-PARTITION: no device lies in partition `{partition}` of service `{service}`")]
    EmptyPartition { service: String, partition: RegionPath },
}

/// Assigns every instance, in [`derive_instances`] order, to a device drawn
/// uniformly from its partition. One draw is taken per instance, even when
/// there is a single candidate.
pub fn map_services(arch: &Architecture, dep: &Deployment, seed: u64) -> Result<MappingOutput, MappingError> {
    let idx = build_region_index(dep);
    let mut rng = XorShift64Star::new(seed);
    let mut assignments = Vec::new();
    for instance in derive_instances(arch, dep) {
        let candidates = idx.devices_in(&instance.partition);
        if candidates.is_empty() {
            return Err(MappingError::EmptyPartition {
                service: instance.service,
                partition: instance.partition,
            });
        }
        let device = candidates[rng.pick(candidates.len())].clone();
        assignments.push(Assignment { candidates: candidates.len(), instance, device });
    }
    Ok(MappingOutput { seed, assignments })
}

/// Text table with one row per assignment.
pub fn explain_mapping(out: &MappingOutput) -> String {
    let rows: Vec<[String; 4]> = out
        .assignments
        .iter()
        .map(|a| {
            [
                a.instance.service.clone(),
                a.instance.partition.to_string(),
                a.device.clone(),
                a.candidates.to_string(),
            ]
        })
        .collect();
    let header = ["instance", "partition", "device", "candidates"].map(String::from);
    let mut widths = header.clone().map(|h| h.len());
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let mut text = String::new();
    let _ = writeln!(text, "seed {}", out.seed);
    for r in std::iter::once(&header).chain(rows.iter()) {
        let line = format!(
            "{:<w0$}  {:<w1$}  {:<w2$}  {:>w3$}",
            r[0],
            r[1],
            r[2],
            r[3],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2],
            w3 = widths[3]
        );
        let _ = writeln!(text, "{}", line.trim_end());
    }
    text
}
