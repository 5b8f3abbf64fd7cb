//! Region scoping and service partitioning.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{Architecture, Deployment, RegionPath, ScopeSpec, ServiceInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegionError {
    #[error("path too shallow: `{path}` has no `{label}` level")]
    PathTooShallow { path: RegionPath, label: String },
}

/// Whether `a` and `b` are within `scope` of each other.
///
/// Both paths must reach the scope label. They are in scope when every
/// outer level is equal and the values at the scope label differ by at
/// most the radius.
pub fn region_distance(a: &RegionPath, b: &RegionPath, scope: &ScopeSpec) -> Result<bool, RegionError> {
    let depth = |p: &RegionPath| {
        p.depth_of(&scope.label)
            .ok_or_else(|| RegionError::PathTooShallow { path: p.clone(), label: scope.label.clone() })
    };
    let (da, db) = (depth(a)?, depth(b)?);
    if da != db || a.entries()[..da] != b.entries()[..db] {
        return Ok(false);
    }
    let diff = a.entries()[da].value.abs_diff(b.entries()[db].value);
    Ok(diff <= u64::from(scope.radius))
}

/// One instance per distinct device path truncated at each service's
/// `in-region` label, sorted by service name then partition path.
pub fn derive_instances(arch: &Architecture, dep: &Deployment) -> Vec<ServiceInstance> {
    let mut out = BTreeSet::new();
    for svc in &arch.services {
        for dev in &dep.devices {
            if let Some(partition) = dev.region.truncate_at(&svc.in_region) {
                out.insert(ServiceInstance { service: svc.name.clone(), partition });
            }
        }
    }
    out.into_iter().collect()
}
