//! In-memory form of the three specifications.
//!
//! A [`Vocabulary`] describes the domain (regions, data structures and
//! resources), an [`Architecture`] the computational services built on top
//! of it, and a [`Deployment`] the concrete devices. All values are
//! immutable once parsed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::span::SourceSpan;

/// Source location attached to a declaration.
///
/// Locations are metadata only: two values that differ only in where
/// they were parsed from compare equal.
#[derive(Debug, Clone, Copy, Default)]
pub struct Loc(pub Option<SourceSpan>);

impl Loc {
    pub const NONE: Loc = Loc(None);

    pub fn span(&self) -> Option<SourceSpan> {
        self.0
    }
}

impl PartialEq for Loc {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl Eq for Loc {}

impl From<SourceSpan> for Loc {
    fn from(span: SourceSpan) -> Self {
        Loc(Some(span))
    }
}

/// Scalar field types allowed in data structures and action parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimitiveType {
    String,
    Integer,
    Long,
    Double,
    Boolean,
}

impl PrimitiveType {
    pub fn keyword(self) -> &'static str {
        match self {
            PrimitiveType::String => "string",
            PrimitiveType::Integer => "integer",
            PrimitiveType::Long => "long",
            PrimitiveType::Double => "double",
            PrimitiveType::Boolean => "boolean",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Some(match word {
            "string" => PrimitiveType::String,
            "integer" => PrimitiveType::Integer,
            "long" => PrimitiveType::Long,
            "double" => PrimitiveType::Double,
            "boolean" => PrimitiveType::Boolean,
            _ => return None,
        })
    }
}

impl fmt::Display for PrimitiveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A level of the region hierarchy. Depth 0 is the outermost level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionLabel {
    pub name: String,
    pub depth: usize,
    pub loc: Loc,
}

/// One `(label, value)` step of a region path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RegionEntry {
    pub label: String,
    pub value: i64,
}

impl RegionEntry {
    pub fn new(label: impl Into<String>, value: i64) -> Self {
        Self { label: label.into(), value }
    }
}

/// A position in the region hierarchy, outermost level first.
///
/// Paths may be prefixes (truncated at some level) but never skip a level.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RegionPath(pub Vec<RegionEntry>);

impl RegionPath {
    pub fn new(entries: Vec<RegionEntry>) -> Self {
        Self(entries)
    }

    pub fn entries(&self) -> &[RegionEntry] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Depth index of `label` in this path, if present.
    pub fn depth_of(&self, label: &str) -> Option<usize> {
        self.0.iter().position(|e| e.label == label)
    }

    pub fn value_of(&self, label: &str) -> Option<i64> {
        self.0.iter().find(|e| e.label == label).map(|e| e.value)
    }

    /// The first `depth` entries.
    pub fn prefix(&self, depth: usize) -> RegionPath {
        RegionPath(self.0[..depth.min(self.0.len())].to_vec())
    }

    /// Truncates the path just after `label`; `None` if the label is absent.
    pub fn truncate_at(&self, label: &str) -> Option<RegionPath> {
        self.depth_of(label).map(|d| self.prefix(d + 1))
    }

    pub fn starts_with(&self, prefix: &RegionPath) -> bool {
        prefix.0.len() <= self.0.len() && self.0[..prefix.0.len()] == prefix.0[..]
    }

    /// Length of the longest common prefix with `other`.
    pub fn common_prefix_len(&self, other: &RegionPath) -> usize {
        self.0.iter().zip(other.0.iter()).take_while(|(a, b)| a == b).count()
    }
}

impl fmt::Display for RegionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{}:{}", e.label, e.value)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    pub name: String,
    pub ty: PrimitiveType,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataStructure {
    pub name: String,
    pub fields: Vec<Field>,
    pub loc: Loc,
}

impl DataStructure {
    pub fn field(&self, name: &str) -> Option<&Field> {
        self.fields.iter().find(|f| f.name == name)
    }
}

/// A named, typed parameter of an action or the access key of a retrieval.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: PrimitiveType,
}

/// A sensor measurement: `generate <event>: <Struct>;`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventDecl {
    pub name: String,
    pub structure: String,
    pub loc: Loc,
}

/// An actuator action, a user-interface action, or a user-interface command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionDecl {
    pub name: String,
    pub params: Vec<Param>,
    pub loc: Loc,
}

/// A keyed retrieval from a storage, or a user-interface request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetrievalDecl {
    pub name: String,
    pub structure: String,
    pub key: Param,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensorDecl {
    pub name: String,
    pub generates: Vec<EventDecl>,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActuatorDecl {
    pub name: String,
    pub actions: Vec<ActionDecl>,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StorageDecl {
    pub name: String,
    pub retrievals: Vec<RetrievalDecl>,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserInterfaceDecl {
    pub name: String,
    pub commands: Vec<ActionDecl>,
    pub actions: Vec<ActionDecl>,
    pub requests: Vec<RetrievalDecl>,
    pub loc: Loc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ResourceKind {
    Sensor,
    Actuator,
    Storage,
    UserInterface,
}

impl fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResourceKind::Sensor => "sensor",
            ResourceKind::Actuator => "actuator",
            ResourceKind::Storage => "storage",
            ResourceKind::UserInterface => "user interface",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Resources {
    pub sensors: Vec<SensorDecl>,
    pub actuators: Vec<ActuatorDecl>,
    pub storages: Vec<StorageDecl>,
    pub user_interfaces: Vec<UserInterfaceDecl>,
}

impl Resources {
    pub fn len(&self) -> usize {
        self.sensors.len() + self.actuators.len() + self.storages.len() + self.user_interfaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Any resource declaration, borrowed.
#[derive(Debug, Clone, Copy)]
pub enum ResourceRef<'a> {
    Sensor(&'a SensorDecl),
    Actuator(&'a ActuatorDecl),
    Storage(&'a StorageDecl),
    UserInterface(&'a UserInterfaceDecl),
}

impl<'a> ResourceRef<'a> {
    pub fn name(&self) -> &'a str {
        match self {
            ResourceRef::Sensor(r) => &r.name,
            ResourceRef::Actuator(r) => &r.name,
            ResourceRef::Storage(r) => &r.name,
            ResourceRef::UserInterface(r) => &r.name,
        }
    }

    pub fn kind(&self) -> ResourceKind {
        match self {
            ResourceRef::Sensor(_) => ResourceKind::Sensor,
            ResourceRef::Actuator(_) => ResourceKind::Actuator,
            ResourceRef::Storage(_) => ResourceKind::Storage,
            ResourceRef::UserInterface(_) => ResourceKind::UserInterface,
        }
    }

    pub fn loc(&self) -> Loc {
        match self {
            ResourceRef::Sensor(r) => r.loc,
            ResourceRef::Actuator(r) => r.loc,
            ResourceRef::Storage(r) => r.loc,
            ResourceRef::UserInterface(r) => r.loc,
        }
    }

    /// Actions this resource accepts as command targets.
    pub fn target_actions(&self) -> &'a [ActionDecl] {
        match self {
            ResourceRef::Actuator(a) => &a.actions,
            ResourceRef::UserInterface(u) => &u.actions,
            _ => &[],
        }
    }

    /// Retrievals this resource can answer.
    pub fn answered_retrievals(&self) -> &'a [RetrievalDecl] {
        match self {
            ResourceRef::Storage(s) => &s.retrievals,
            ResourceRef::UserInterface(u) => &u.requests,
            _ => &[],
        }
    }

    pub fn generated_events(&self) -> &'a [EventDecl] {
        match self {
            ResourceRef::Sensor(s) => &s.generates,
            _ => &[],
        }
    }
}

/// Domain vocabulary: regions, data structures and resources.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    pub name: String,
    pub regions: Vec<RegionLabel>,
    pub structs: Vec<DataStructure>,
    pub resources: Resources,
    pub loc: Loc,
}

impl Vocabulary {
    pub fn region(&self, name: &str) -> Option<&RegionLabel> {
        self.regions.iter().find(|r| r.name == name)
    }

    pub fn structure(&self, name: &str) -> Option<&DataStructure> {
        self.structs.iter().find(|s| s.name == name)
    }

    /// All resources in kind order (sensors, actuators, storages, user
    /// interfaces), declaration order within a kind.
    pub fn resources(&self) -> impl Iterator<Item = ResourceRef<'_>> {
        let r = &self.resources;
        r.sensors
            .iter()
            .map(ResourceRef::Sensor)
            .chain(r.actuators.iter().map(ResourceRef::Actuator))
            .chain(r.storages.iter().map(ResourceRef::Storage))
            .chain(r.user_interfaces.iter().map(ResourceRef::UserInterface))
    }

    pub fn resource(&self, name: &str) -> Option<ResourceRef<'_>> {
        self.resources().find(|r| r.name() == name)
    }

    /// The sensor measurement named `event`, with its sensor.
    pub fn sensor_event(&self, event: &str) -> Option<(&SensorDecl, &EventDecl)> {
        self.resources
            .sensors
            .iter()
            .find_map(|s| s.generates.iter().find(|g| g.name == event).map(|g| (s, g)))
    }

    /// Resources that declare `action` as a command target.
    pub fn action_targets<'a>(
        &'a self,
        action: &'a str,
    ) -> impl Iterator<Item = (ResourceRef<'a>, &'a ActionDecl)> + 'a {
        self.resources()
            .filter_map(move |r| r.target_actions().iter().find(|a| a.name == action).map(|a| (r, a)))
    }

    /// Resources that can answer `retrieval`.
    pub fn responders<'a>(
        &'a self,
        retrieval: &'a str,
    ) -> impl Iterator<Item = (ResourceRef<'a>, &'a RetrievalDecl)> + 'a {
        self.resources().filter_map(move |r| {
            r.answered_retrievals().iter().find(|q| q.name == retrieval).map(|q| (r, q))
        })
    }
}

/// `hops:<radius>:<label>`, the region scope of a subscription or command.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ScopeSpec {
    pub radius: u32,
    pub label: String,
}

impl ScopeSpec {
    pub fn new(radius: u32, label: impl Into<String>) -> Self {
        Self { radius, label: label.into() }
    }
}

impl fmt::Display for ScopeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "hops:{}:{}", self.radius, self.label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsumeDecl {
    pub event: String,
    pub scope: ScopeSpec,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerateDecl {
    pub event: String,
    pub structure: String,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestDecl {
    pub retrieval: String,
    pub loc: Loc,
}

/// `command <Action>(<args>) to hops:<r>:<Label>;`
///
/// The target resource kind is not written in the architecture; it is
/// whatever resources of the vocabulary declare the action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandDecl {
    pub action: String,
    pub args: Vec<String>,
    pub scope: ScopeSpec,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationalService {
    pub name: String,
    pub consumes: Vec<ConsumeDecl>,
    pub generates: Vec<GenerateDecl>,
    pub requests: Vec<RequestDecl>,
    pub commands: Vec<CommandDecl>,
    pub in_region: String,
    pub in_region_loc: Loc,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Architecture {
    pub name: String,
    pub vocabulary_name: String,
    pub services: Vec<ComputationalService>,
    pub loc: Loc,
}

impl Architecture {
    pub fn service(&self, name: &str) -> Option<&ComputationalService> {
        self.services.iter().find(|s| s.name == name)
    }
}

/// A resource name listed in a device's `resources { ... }` block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostedResource {
    pub name: String,
    pub loc: Loc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviceDecl {
    pub name: String,
    pub region: RegionPath,
    pub region_loc: Loc,
    pub resources: Vec<HostedResource>,
    pub platform_type: String,
    pub mobile: bool,
    pub loc: Loc,
}

impl DeviceDecl {
    pub fn hosts(&self, resource: &str) -> bool {
        self.resources.iter().any(|r| r.name == resource)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deployment {
    pub name: String,
    pub vocabulary_name: String,
    pub devices: Vec<DeviceDecl>,
    pub loc: Loc,
}

impl Deployment {
    pub fn device(&self, name: &str) -> Option<&DeviceDecl> {
        self.devices.iter().find(|d| d.name == name)
    }
}

/// One placement of a service: the service instantiated for a single
/// partition of the region hierarchy.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ServiceInstance {
    pub service: String,
    #[serde(rename = "partitionPath")]
    pub partition: RegionPath,
}

impl ServiceInstance {
    /// Stable textual id, `Service@Label:v/...`.
    pub fn id(&self) -> String {
        format!("{}@{}", self.service, self.partition)
    }
}

impl fmt::Display for ServiceInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.service, self.partition)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Assignment {
    #[serde(flatten)]
    pub instance: ServiceInstance,
    pub device: String,
    /// Number of devices that were eligible for this instance.
    pub candidates: usize,
}

/// Result of mapping every service instance onto a device.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingOutput {
    pub seed: u64,
    pub assignments: Vec<Assignment>,
}

impl MappingOutput {
    pub fn device_for(&self, instance: &ServiceInstance) -> Option<&str> {
        self.assignments.iter().find(|a| &a.instance == instance).map(|a| a.device.as_str())
    }
}
