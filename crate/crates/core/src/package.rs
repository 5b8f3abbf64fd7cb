//! Per-device packages: the linker's output and the runtime's input.
//!
//! Packages are plain data. The runtime resolves every [`HandlerKey`] and
//! [`FactoryKey`] against a registry when it loads them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{Param, PrimitiveType, RegionPath, ResourceKind, ScopeSpec};

/// Identifies one abstract hook of one service: `(service, onNew<event>)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HandlerKey {
    pub service: String,
    pub hook: String,
}

impl HandlerKey {
    pub fn new(service: impl Into<String>, hook: impl Into<String>) -> Self {
        Self { service: service.into(), hook: hook.into() }
    }
}

impl fmt::Display for HandlerKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.service, self.hook)
    }
}

/// Selects a driver implementation: `(resource, platform)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FactoryKey {
    pub resource: String,
    pub platform: String,
}

impl FactoryKey {
    pub fn new(resource: impl Into<String>, platform: impl Into<String>) -> Self {
        Self { resource: resource.into(), platform: platform.into() }
    }
}

impl fmt::Display for FactoryKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.resource, self.platform)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventSig {
    pub event: String,
    pub structure: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSig {
    pub action: String,
    pub params: Vec<Param>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetrievalSig {
    pub retrieval: String,
    pub structure: String,
    pub key: Param,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DriverBinding {
    pub resource_name: String,
    pub interface_name: String,
    pub kind: ResourceKind,
    pub factory_key: FactoryKey,
    /// Sensor measurements.
    pub events: Vec<EventSig>,
    /// Command targets: actuator actions and user-interface actions.
    pub actions: Vec<ActionSig>,
    /// User-interface commands.
    pub commands: Vec<ActionSig>,
    /// Storage retrievals and user-interface requests.
    pub retrievals: Vec<RetrievalSig>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Subscription {
    pub event: String,
    pub structure: String,
    pub scope: ScopeSpec,
    /// The subscriber's partition; the scope is evaluated against it.
    pub partition_path: RegionPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandEntry {
    pub action: String,
    pub args: Vec<String>,
    pub scope: ScopeSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestEntry {
    pub retrieval: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InstancePackage {
    pub service: String,
    pub partition_path: RegionPath,
    pub subscriptions: Vec<Subscription>,
    pub publications: Vec<EventSig>,
    pub commands: Vec<CommandEntry>,
    pub requests: Vec<RequestEntry>,
    pub handler_keys: Vec<HandlerKey>,
}

impl InstancePackage {
    pub fn id(&self) -> String {
        format!("{}@{}", self.service, self.partition_path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Responder {
    pub retrieval: String,
    pub resource: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSchema {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: PrimitiveType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructSchema {
    pub name: String,
    pub fields: Vec<FieldSchema>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DevicePackage {
    pub device_name: String,
    pub platform_type: String,
    pub region_path: RegionPath,
    pub mobile: bool,
    pub driver_bindings: Vec<DriverBinding>,
    pub service_instances: Vec<InstancePackage>,
    pub responders: Vec<Responder>,
    /// Every struct referenced by this package, sorted by name.
    pub schemas: Vec<StructSchema>,
}

impl DevicePackage {
    pub fn file_name(&self) -> String {
        format!("{}.pkg.json", self.device_name)
    }
}
