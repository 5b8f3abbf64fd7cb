use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::manifest::FrameworkManifest;
use crate::package::HandlerKey;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EvolutionReport {
    pub added_hooks: Vec<HandlerKey>,
    /// Hooks that no longer exist; handlers written for them are dead.
    pub removed_hooks: Vec<HandlerKey>,
    pub unchanged_hooks: Vec<HandlerKey>,
    pub added_services: Vec<String>,
    pub removed_services: Vec<String>,
}

/// Compares two framework generations. Handlers registered for hooks the
/// old manifest never had are reported as removed too, so a stale
/// registry is caught even without the old manifest.
pub fn diff_frameworks(
    old: &FrameworkManifest,
    new: &FrameworkManifest,
    registered: &BTreeSet<HandlerKey>,
) -> EvolutionReport {
    let old_hooks: BTreeSet<HandlerKey> = old.hook_keys().into_iter().collect();
    let new_hooks: BTreeSet<HandlerKey> = new.hook_keys().into_iter().collect();
    let old_services: BTreeSet<&str> = old.services.iter().map(|s| s.service_name.as_str()).collect();
    let new_services: BTreeSet<&str> = new.services.iter().map(|s| s.service_name.as_str()).collect();
    EvolutionReport {
        added_hooks: new_hooks.difference(&old_hooks).cloned().collect(),
        removed_hooks: old_hooks.union(registered).filter(|k| !new_hooks.contains(k)).cloned().collect(),
        unchanged_hooks: new_hooks.intersection(&old_hooks).cloned().collect(),
        added_services: new_services.difference(&old_services).map(|s| s.to_string()).collect(),
        removed_services: old_services.difference(&new_services).map(|s| s.to_string()).collect(),
    }
}

impl EvolutionReport {
    pub fn is_unchanged(&self) -> bool {
        self.added_hooks.is_empty()
            && self.removed_hooks.is_empty()
            && self.added_services.is_empty()
            && self.removed_services.is_empty()
    }

    /// One line per change, classified as service or input additions and
    /// removals, followed by the count of preserved hooks.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.added_services {
            let _ = writeln!(out, "added service {s}");
        }
        for s in &self.removed_services {
            let _ = writeln!(out, "removed service {s}");
        }
        let is_new = |k: &HandlerKey| self.added_services.contains(&k.service);
        let is_gone = |k: &HandlerKey| self.removed_services.contains(&k.service);
        for k in &self.added_hooks {
            let what = if is_new(k) { "hook of new service" } else { "input" };
            let _ = writeln!(out, "added {what} {}.{}: implement it", k.service, k.hook);
        }
        for k in &self.removed_hooks {
            let what = if is_gone(k) { "hook of removed service" } else { "input" };
            let _ = writeln!(out, "removed {what} {}.{}: its handler is dead", k.service, k.hook);
        }
        let _ = writeln!(out, "preserved {} hook(s)", self.unchanged_hooks.len());
        out
    }
}
