//! Packs the frameworks, the mapping and the deployment into one
//! [`DevicePackage`] per device that has something to run.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::codegen::{event_structure, DriverManifest, FrameworkManifest};
use crate::json::to_canonical_json;
use crate::model::{Architecture, Deployment, MappingOutput, ResourceRef, Vocabulary};
use crate::package::{
    ActionSig, CommandEntry, DevicePackage, DriverBinding, EventSig, FactoryKey, FieldSchema, HandlerKey,
    InstancePackage, RequestEntry, Responder, RetrievalSig, StructSchema, Subscription,
};
use crate::region::derive_instances;

#[derive(Debug, Error)]
pub enum LinkError {
    #[error("E-UNMAPPED-INSTANCE: the mapping has no device for `{0}`")]
    UnmappedInstance(String),
    #[error("E-UNKNOWN-DEVICE: the mapping assigns `{instance}` to `{device}`, which the deployment does not declare")]
    UnknownDevice { instance: String, device: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
}

fn binding(r: ResourceRef<'_>, drivers: &DriverManifest, platform: &str) -> DriverBinding {
    let sig = |a: &crate::model::ActionDecl| ActionSig { action: a.name.clone(), params: a.params.clone() };
    let ret = |q: &crate::model::RetrievalDecl| RetrievalSig {
        retrieval: q.name.clone(),
        structure: q.structure.clone(),
        key: q.key.clone(),
    };
    let commands = match r {
        ResourceRef::UserInterface(u) => u.commands.iter().map(sig).collect(),
        _ => Vec::new(),
    };
    DriverBinding {
        resource_name: r.name().to_string(),
        interface_name: drivers
            .resource(r.name())
            .map(|d| d.interface_name.clone())
            .unwrap_or_else(|| crate::codegen::interface_name(r.name())),
        kind: r.kind(),
        factory_key: FactoryKey::new(r.name(), platform),
        events: r
            .generated_events()
            .iter()
            .map(|e| EventSig { event: e.name.clone(), structure: e.structure.clone() })
            .collect(),
        actions: r.target_actions().iter().map(sig).collect(),
        commands,
        retrievals: r.answered_retrievals().iter().map(ret).collect(),
    }
}

pub fn link(
    arch: &Architecture,
    dep: &Deployment,
    vocab: &Vocabulary,
    mapping: &MappingOutput,
    frameworks: &FrameworkManifest,
    drivers: &DriverManifest,
) -> Result<Vec<DevicePackage>, LinkError> {
    let mut by_device: BTreeMap<&str, Vec<InstancePackage>> = BTreeMap::new();
    for instance in derive_instances(arch, dep) {
        let device = mapping.device_for(&instance).ok_or_else(|| LinkError::UnmappedInstance(instance.id()))?;
        if dep.device(device).is_none() {
            return Err(LinkError::UnknownDevice { instance: instance.id(), device: device.to_string() });
        }
        let svc = arch.service(&instance.service).expect("derived from this architecture");
        let structure_of = |event: &str| event_structure(arch, vocab, event).unwrap_or_default().to_string();
        let handler_keys = match frameworks.service(&svc.name) {
            Some(f) => f.abstract_hooks.iter().map(|h| HandlerKey::new(&svc.name, &h.name)).collect(),
            None => Vec::new(),
        };
        by_device.entry(device).or_default().push(InstancePackage {
            service: svc.name.clone(),
            partition_path: instance.partition.clone(),
            subscriptions: svc
                .consumes
                .iter()
                .map(|c| Subscription {
                    event: c.event.clone(),
                    structure: structure_of(&c.event),
                    scope: c.scope.clone(),
                    partition_path: instance.partition.clone(),
                })
                .collect(),
            publications: svc
                .generates
                .iter()
                .map(|g| EventSig { event: g.event.clone(), structure: g.structure.clone() })
                .collect(),
            commands: svc
                .commands
                .iter()
                .map(|c| CommandEntry { action: c.action.clone(), args: c.args.clone(), scope: c.scope.clone() })
                .collect(),
            requests: svc.requests.iter().map(|r| RequestEntry { retrieval: r.retrieval.clone() }).collect(),
            handler_keys,
        });
    }

    let mut packages = Vec::new();
    for dev in &dep.devices {
        let instances = by_device.remove(dev.name.as_str()).unwrap_or_default();
        if dev.resources.is_empty() && instances.is_empty() {
            continue;
        }
        let hosted: Vec<ResourceRef<'_>> = dev.resources.iter().filter_map(|r| vocab.resource(&r.name)).collect();
        let driver_bindings: Vec<DriverBinding> =
            hosted.iter().map(|r| binding(*r, drivers, &dev.platform_type)).collect();
        let responders = hosted
            .iter()
            .flat_map(|r| {
                r.answered_retrievals()
                    .iter()
                    .map(|q| Responder { retrieval: q.name.clone(), resource: r.name().to_string() })
            })
            .collect();

        let mut used: BTreeSet<&str> = BTreeSet::new();
        for b in &driver_bindings {
            used.extend(b.events.iter().map(|e| e.structure.as_str()));
            used.extend(b.retrievals.iter().map(|q| q.structure.as_str()));
        }
        for i in &instances {
            used.extend(i.subscriptions.iter().map(|s| s.structure.as_str()));
            used.extend(i.publications.iter().map(|p| p.structure.as_str()));
        }
        for svc in instances.iter().filter_map(|i| arch.service(&i.service)) {
            for r in &svc.requests {
                used.extend(vocab.responders(&r.retrieval).map(|(_, q)| q.structure.as_str()));
            }
        }
        let schemas = used
            .into_iter()
            .filter_map(|name| vocab.structure(name))
            .map(|s| StructSchema {
                name: s.name.clone(),
                fields: s.fields.iter().map(|f| FieldSchema { name: f.name.clone(), ty: f.ty }).collect(),
            })
            .collect();

        packages.push(DevicePackage {
            device_name: dev.name.clone(),
            platform_type: dev.platform_type.clone(),
            region_path: dev.region.clone(),
            mobile: dev.mobile,
            driver_bindings,
            service_instances: instances,
            responders,
            schemas,
        });
    }
    packages.sort_by(|a, b| a.device_name.cmp(&b.device_name));
    Ok(packages)
}

/// Writes `<device>.pkg.json` for each package; returns the paths in
/// package order.
pub fn write_packages(packages: &[DevicePackage], out_dir: &Path) -> Result<Vec<PathBuf>, LinkError> {
    std::fs::create_dir_all(out_dir).map_err(|e| LinkError::Io { path: out_dir.to_path_buf(), source: e })?;
    let mut paths = Vec::new();
    for p in packages {
        let path = out_dir.join(p.file_name());
        let text = to_canonical_json(p).map_err(|e| LinkError::Json { path: path.clone(), source: e })?;
        std::fs::write(&path, text).map_err(|e| LinkError::Io { path: path.clone(), source: e })?;
        paths.push(path);
    }
    Ok(paths)
}

/// Reads every `*.pkg.json` in `dir`, sorted by device name.
pub fn read_packages(dir: &Path) -> Result<Vec<DevicePackage>, LinkError> {
    let entries = std::fs::read_dir(dir).map_err(|e| LinkError::Io { path: dir.to_path_buf(), source: e })?;
    let mut packages = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| LinkError::Io { path: dir.to_path_buf(), source: e })?.path();
        if !path.to_string_lossy().ends_with(".pkg.json") {
            continue;
        }
        let text = std::fs::read_to_string(&path).map_err(|e| LinkError::Io { path: path.clone(), source: e })?;
        let pkg: DevicePackage =
            serde_json::from_str(&text).map_err(|e| LinkError::Json { path: path.clone(), source: e })?;
        packages.push(pkg);
    }
    packages.sort_by(|a, b| a.device_name.cmp(&b.device_name));
    Ok(packages)
}
