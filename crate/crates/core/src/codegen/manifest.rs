use serde::{Deserialize, Serialize};

use crate::model::{Architecture, Param, ResourceKind, ResourceRef, ScopeSpec, Vocabulary};
use crate::package::{FactoryKey, HandlerKey};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameworkManifest {
    pub architecture: String,
    pub services: Vec<ServiceFramework>,
}

impl FrameworkManifest {
    pub fn service(&self, name: &str) -> Option<&ServiceFramework> {
        self.services.iter().find(|s| s.service_name == name)
    }

    /// Every `(service, hook)` pair, in manifest order.
    pub fn hook_keys(&self) -> Vec<HandlerKey> {
        self.services
            .iter()
            .flat_map(|s| s.abstract_hooks.iter().map(|h| HandlerKey::new(&s.service_name, &h.name)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ServiceFramework {
    pub service_name: String,
    pub partition_attribute: String,
    pub abstract_hooks: Vec<AbstractHook>,
    pub concrete_ops: Vec<ConcreteOp>,
}

/// The slot for handwritten logic: `onNew<event>`, one per consume.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractHook {
    pub name: String,
    pub event: String,
    pub structure: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum ConcreteOp {
    Subscribe { name: String, event: String, scope: ScopeSpec },
    Publish { name: String, event: String, structure: String },
    Send { name: String, action: String, args: Vec<String>, scope: ScopeSpec },
    Request { name: String, retrieval: String, structure: String, key: Param },
}

impl ConcreteOp {
    pub fn name(&self) -> &str {
        match self {
            ConcreteOp::Subscribe { name, .. }
            | ConcreteOp::Publish { name, .. }
            | ConcreteOp::Send { name, .. }
            | ConcreteOp::Request { name, .. } => name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConcreteOp::Subscribe { .. } => "subscribe",
            ConcreteOp::Publish { .. } => "publish",
            ConcreteOp::Send { .. } => "send",
            ConcreteOp::Request { .. } => "request",
        }
    }
}

pub fn hook_name(event: &str) -> String {
    format!("onNew{event}")
}

/// Struct carried by `event`, whether a sensor or a service produces it.
pub fn event_structure<'a>(arch: &'a Architecture, vocab: &'a Vocabulary, event: &str) -> Option<&'a str> {
    if let Some((_, e)) = vocab.sensor_event(event) {
        return Some(&e.structure);
    }
    arch.services
        .iter()
        .flat_map(|s| s.generates.iter())
        .find(|g| g.event == event)
        .map(|g| g.structure.as_str())
}

/// Services sorted by name; within a service, subscriptions, publications,
/// sends and requests each in declaration order.
pub fn generate_architecture_framework(arch: &Architecture, vocab: &Vocabulary) -> FrameworkManifest {
    let mut services: Vec<ServiceFramework> = arch
        .services
        .iter()
        .map(|svc| {
            let structure_of = |event: &str| event_structure(arch, vocab, event).unwrap_or_default().to_string();
            let abstract_hooks = svc
                .consumes
                .iter()
                .map(|c| AbstractHook { name: hook_name(&c.event), event: c.event.clone(), structure: structure_of(&c.event) })
                .collect();
            let mut ops = Vec::new();
            for c in &svc.consumes {
                ops.push(ConcreteOp::Subscribe {
                    name: format!("subscribe{}", c.event),
                    event: c.event.clone(),
                    scope: c.scope.clone(),
                });
            }
            for g in &svc.generates {
                ops.push(ConcreteOp::Publish {
                    name: format!("publish{}", g.event),
                    event: g.event.clone(),
                    structure: g.structure.clone(),
                });
            }
            for c in &svc.commands {
                ops.push(ConcreteOp::Send {
                    name: format!("send{}", c.action),
                    action: c.action.clone(),
                    args: c.args.clone(),
                    scope: c.scope.clone(),
                });
            }
            for r in &svc.requests {
                let decl = vocab.responders(&r.retrieval).next().map(|(_, d)| d);
                ops.push(ConcreteOp::Request {
                    name: format!("request{}", r.retrieval),
                    retrieval: r.retrieval.clone(),
                    structure: decl.map(|d| d.structure.clone()).unwrap_or_default(),
                    key: decl.map(|d| d.key.clone()).unwrap_or(Param {
                        name: String::new(),
                        ty: crate::model::PrimitiveType::String,
                    }),
                });
            }
            ServiceFramework {
                service_name: svc.name.clone(),
                partition_attribute: svc.in_region.clone(),
                abstract_hooks,
                concrete_ops: ops,
            }
        })
        .collect();
    services.sort_by(|a, b| a.service_name.cmp(&b.service_name));
    FrameworkManifest { architecture: arch.name.clone(), services }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriverManifest {
    pub vocabulary: String,
    pub resources: Vec<DriverInterface>,
}

impl DriverManifest {
    pub fn resource(&self, name: &str) -> Option<&DriverInterface> {
        self.resources.iter().find(|r| r.resource_name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DriverInterface {
    pub resource_name: String,
    pub kind: ResourceKind,
    pub interface_name: String,
    pub factory_name: String,
    pub methods: Vec<DriverMethod>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MethodMode {
    /// Returns a value to the caller.
    Sync,
    /// Takes a handler invoked on each new value.
    Async,
    /// Fire and forget.
    Oneway,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriverMethod {
    pub name: String,
    pub mode: MethodMode,
    pub params: Vec<Param>,
    pub returns: Option<String>,
}

pub fn interface_name(resource: &str) -> String {
    format!("I{resource}")
}

pub fn factory_key(resource: &str, platform: &str) -> FactoryKey {
    FactoryKey::new(resource, platform)
}

fn method(name: String, mode: MethodMode, params: Vec<Param>, returns: Option<&str>) -> DriverMethod {
    DriverMethod { name, mode, params, returns: returns.map(String::from) }
}

/// One interface per resource, in vocabulary kind order.
pub fn generate_vocabulary_framework(vocab: &Vocabulary) -> DriverManifest {
    let resources = vocab
        .resources()
        .map(|r| {
            let mut methods = Vec::new();
            match r {
                ResourceRef::Sensor(s) => {
                    for g in &s.generates {
                        methods.push(method(format!("get{}", g.name), MethodMode::Sync, vec![], Some(&g.structure)));
                        methods.push(method(format!("get{}", g.name), MethodMode::Async, vec![], Some(&g.structure)));
                    }
                }
                ResourceRef::Actuator(a) => {
                    for act in &a.actions {
                        methods.push(method(format!("do{}", act.name), MethodMode::Oneway, act.params.clone(), None));
                    }
                }
                ResourceRef::Storage(s) => {
                    for q in &s.retrievals {
                        methods.push(method(
                            format!("query{}", q.name),
                            MethodMode::Sync,
                            vec![q.key.clone()],
                            Some(&q.structure),
                        ));
                    }
                }
                ResourceRef::UserInterface(u) => {
                    for act in &u.actions {
                        methods.push(method(format!("notify{}", act.name), MethodMode::Oneway, act.params.clone(), None));
                    }
                    for c in &u.commands {
                        methods.push(method(format!("issue{}", c.name), MethodMode::Oneway, c.params.clone(), None));
                    }
                    for q in &u.requests {
                        methods.push(method(
                            format!("fetch{}", q.name),
                            MethodMode::Sync,
                            vec![q.key.clone()],
                            Some(&q.structure),
                        ));
                    }
                }
            }
            DriverInterface {
                resource_name: r.name().to_string(),
                kind: r.kind(),
                interface_name: interface_name(r.name()),
                factory_name: format!("{}Factory", r.name()),
                methods,
            }
        })
        .collect();
    DriverManifest { vocabulary: vocab.name.clone(), resources }
}
