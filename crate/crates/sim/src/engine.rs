//! The event loop.
//!
//! All work sits in one min-heap ordered by `(time, lane, seq)`. Lane 0
//! holds scenario injections, lane `1 + i` deliveries to the `i`-th
//! instance in id order, and lane `1 + instances + j` actions on the
//! `j`-th driver. `seq` is a global insertion counter.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::sync::Arc;

use iotc_core::package::{DevicePackage, InstancePackage, StructSchema};
use iotc_core::{region_distance, RegionPath, ResourceKind, ScopeSpec};

use crate::context::{InstanceState, ServiceContext};
use crate::error::SimError;
use crate::event::{Event, EventSource};
use crate::registry::{Driver, DriverFactory, Handler, HandlerRegistry};
use crate::scenario::{Scenario, StepAction};
use crate::trace::{Trace, TraceKind, TraceRecord};
use crate::value::{check_payload, render_args, render_payload, Payload, Value};

/// One-hop delivery latency.
pub const LATENCY_MS: u64 = 1;

pub(crate) struct InstanceNode {
    pub(crate) id: String,
    pub(crate) pkg: InstancePackage,
    pub(crate) state: InstanceState,
    pub(crate) busy_until: u64,
}

struct DriverNode {
    device: usize,
    binding: usize,
    factory: DriverFactory,
    driver: Box<dyn Driver>,
}

enum Job {
    Inject(usize),
    Deliver { instance: usize, sub: usize, event: Arc<Event> },
    Act { driver: usize, action: String, args: Vec<Value>, cmd: u64 },
}

struct Scheduled {
    time: u64,
    lane: usize,
    seq: u64,
    job: Job,
}

impl Scheduled {
    fn key(&self) -> (u64, usize, u64) {
        (self.time, self.lane, self.seq)
    }
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Scheduled {}

impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scheduled {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

pub(crate) struct Core {
    devices: Vec<DevicePackage>,
    pub(crate) instances: Vec<InstanceNode>,
    drivers: Vec<DriverNode>,
    schemas: BTreeMap<String, StructSchema>,
    queue: BinaryHeap<Reverse<Scheduled>>,
    seq: u64,
    msg: u64,
    cmd: u64,
    corr: u64,
    records: Vec<TraceRecord>,
    pub(crate) seed: u64,
}

impl Core {
    fn schedule(&mut self, time: u64, lane: usize, job: Job) {
        self.seq += 1;
        self.queue.push(Reverse(Scheduled { time, lane, seq: self.seq, job }));
    }

    fn record(&mut self, time: u64, kind: TraceKind, detail: Vec<String>) {
        self.records.push(TraceRecord { time, kind, detail });
    }

    pub(crate) fn schema(&self, name: &str) -> Result<&StructSchema, SimError> {
        self.schemas.get(name).ok_or_else(|| SimError::Package(format!("no schema for struct `{name}`")))
    }

    fn device_index(&self, name: &str) -> Option<usize> {
        self.devices.binary_search_by(|d| d.device_name.as_str().cmp(name)).ok()
    }

    pub(crate) fn publish(&mut self, topic: &str, payload: Payload, source: EventSource, time: u64) {
        self.msg += 1;
        let msg = self.msg;
        self.record(
            time,
            TraceKind::Publish,
            vec![source.name.clone(), topic.to_string(), format!("msg={msg}"), render_payload(&payload)],
        );
        let mut targets = Vec::new();
        for (i, inst) in self.instances.iter().enumerate() {
            for (k, sub) in inst.pkg.subscriptions.iter().enumerate() {
                // A source path that does not reach the scope label is simply out of scope.
                if sub.event == topic && region_distance(&source.path, &sub.partition_path, &sub.scope) == Ok(true) {
                    targets.push((i, k));
                }
            }
        }
        let event = Arc::new(Event { topic: topic.to_string(), payload, source, time, msg });
        for (instance, sub) in targets {
            self.schedule(time + LATENCY_MS, 1 + instance, Job::Deliver { instance, sub, event: Arc::clone(&event) });
        }
    }

    pub(crate) fn command(
        &mut self,
        issuer: &str,
        origin: &RegionPath,
        action: &str,
        args: Vec<Value>,
        scope: &ScopeSpec,
        time: u64,
    ) -> Result<(), SimError> {
        self.cmd += 1;
        let cmd = self.cmd;
        self.record(
            time,
            TraceKind::Command,
            vec![issuer.to_string(), format!("{action}({})", render_args(&args)), scope.to_string(), format!("cmd={cmd}")],
        );
        let mut targets = Vec::new();
        for (j, d) in self.drivers.iter().enumerate() {
            let dev = &self.devices[d.device];
            let Some(sig) = dev.driver_bindings[d.binding].actions.iter().find(|a| a.action == action) else {
                continue;
            };
            if region_distance(&dev.region_path, origin, scope) != Ok(true) {
                continue;
            }
            if sig.params.len() != args.len() {
                return Err(SimError::ArgArity { action: action.to_string(), expected: sig.params.len(), got: args.len() });
            }
            if let Some((p, v)) = sig.params.iter().zip(&args).find(|(p, v)| p.ty != v.ty()) {
                return Err(SimError::PayloadType(format!(
                    "argument `{}` of `{action}` must be {}, got {}",
                    p.name,
                    p.ty,
                    v.ty()
                )));
            }
            targets.push(j);
        }
        let lanes = 1 + self.instances.len();
        for driver in targets {
            self.schedule(
                time + LATENCY_MS,
                lanes + driver,
                Job::Act { driver, action: action.to_string(), args: args.clone(), cmd },
            );
        }
        Ok(())
    }

    pub(crate) fn request(
        &mut self,
        instance: usize,
        retrieval: &str,
        key: Value,
        time: u64,
    ) -> Result<Option<Payload>, SimError> {
        let inst = &self.instances[instance];
        if !inst.pkg.requests.iter().any(|r| r.retrieval == retrieval) {
            return Err(SimError::Undeclared { instance: inst.id.clone(), what: format!("a request `{retrieval}`") });
        }
        let partition = &inst.pkg.partition_path;
        // Longest common prefix wins; devices are sorted, so the first
        // maximum is also the smallest name.
        let mut best: Option<(usize, usize, String)> = None;
        for (i, dev) in self.devices.iter().enumerate() {
            if let Some(r) = dev.responders.iter().find(|r| r.retrieval == retrieval) {
                let common = dev.region_path.common_prefix_len(partition);
                if best.as_ref().is_none_or(|(_, c, _)| common > *c) {
                    best = Some((i, common, r.resource.clone()));
                }
            }
        }
        let (device, _, resource) = best.ok_or_else(|| SimError::NoResponder(retrieval.to_string()))?;
        let driver = self
            .drivers
            .iter()
            .position(|d| d.device == device && self.devices[device].driver_bindings[d.binding].resource_name == resource)
            .ok_or_else(|| SimError::Package(format!("responder `{resource}` has no driver binding")))?;
        let binding = &self.devices[device].driver_bindings[self.drivers[driver].binding];
        let sig = binding
            .retrievals
            .iter()
            .find(|q| q.retrieval == retrieval)
            .ok_or_else(|| SimError::Package(format!("`{resource}` does not declare `{retrieval}`")))?
            .clone();
        if key.ty() != sig.key.ty {
            return Err(SimError::PayloadType(format!(
                "key `{}` of `{retrieval}` must be {}, got {}",
                sig.key.name,
                sig.key.ty,
                key.ty()
            )));
        }

        self.corr += 1;
        let corr = self.corr;
        let requester = self.instances[instance].id.clone();
        let device_name = self.devices[device].device_name.clone();
        self.record(
            time,
            TraceKind::Request,
            vec![requester, format!("{retrieval}({key})"), format!("corr={corr}"), device_name.clone()],
        );
        let response = self.drivers[driver].driver.query(retrieval, &key)?;
        if let Some(p) = &response {
            let schema = self.schema(&sig.structure)?;
            check_payload(p, schema).map_err(|m| SimError::PayloadType(format!("response to `{retrieval}`: {m}")))?;
        }
        self.record(
            time + 2 * LATENCY_MS,
            TraceKind::Respond,
            vec![
                device_name,
                resource,
                retrieval.to_string(),
                format!("corr={corr}"),
                response.as_ref().map_or_else(|| "none".to_string(), render_payload),
            ],
        );
        Ok(response)
    }
}

/// Loaded packages ready to run scenarios.
pub struct Simulator {
    core: Core,
    /// Per instance, one handler per subscription.
    handlers: Vec<Vec<Handler>>,
}

impl std::fmt::Debug for Simulator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Simulator")
            .field("devices", &self.device_names())
            .field("instances", &self.instance_ids())
            .finish()
    }
}

impl Simulator {
    /// Resolves every handler and driver key; fails listing all that are
    /// missing.
    pub fn load(mut packages: Vec<DevicePackage>, registry: &HandlerRegistry) -> Result<Self, SimError> {
        packages.sort_by(|a, b| a.device_name.cmp(&b.device_name));
        if let Some(w) = packages.windows(2).find(|w| w[0].device_name == w[1].device_name) {
            return Err(SimError::Package(format!("device `{}` appears twice", w[0].device_name)));
        }

        let mut missing_handlers = BTreeSet::new();
        let mut missing_drivers = BTreeSet::new();
        let mut instances = Vec::new();
        for p in &packages {
            for inst in &p.service_instances {
                if inst.handler_keys.len() != inst.subscriptions.len() {
                    return Err(SimError::Package(format!(
                        "`{}` has {} subscriptions but {} handler keys",
                        inst.id(),
                        inst.subscriptions.len(),
                        inst.handler_keys.len()
                    )));
                }
                let mut hs = Vec::new();
                for key in &inst.handler_keys {
                    match registry.handler(key) {
                        Some(h) => hs.push(Arc::clone(h)),
                        None => {
                            missing_handlers.insert(key.clone());
                        }
                    }
                }
                instances.push((inst.id(), inst.clone(), hs));
            }
            for b in &p.driver_bindings {
                if registry.driver(&b.factory_key).is_none() {
                    missing_drivers.insert(b.factory_key.clone());
                }
            }
        }
        if !missing_handlers.is_empty() {
            return Err(SimError::MissingHandler(missing_handlers.into_iter().collect()));
        }
        if !missing_drivers.is_empty() {
            return Err(SimError::MissingDriver(missing_drivers.into_iter().collect()));
        }

        instances.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = instances.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(SimError::Package(format!("instance `{}` is packaged twice", w[0].0)));
        }

        let mut schemas = BTreeMap::new();
        for p in &packages {
            for s in &p.schemas {
                schemas.insert(s.name.clone(), s.clone());
            }
        }

        let mut drivers = Vec::new();
        for (device, p) in packages.iter().enumerate() {
            for (binding, b) in p.driver_bindings.iter().enumerate() {
                let factory = Arc::clone(registry.driver(&b.factory_key).expect("checked above"));
                let driver = factory(b, p);
                drivers.push(DriverNode { device, binding, factory, driver });
            }
        }

        let mut handlers = Vec::new();
        let mut nodes = Vec::new();
        for (id, pkg, hs) in instances {
            handlers.push(hs);
            nodes.push(InstanceNode { id, pkg, state: InstanceState::default(), busy_until: 0 });
        }

        Ok(Simulator {
            core: Core {
                devices: packages,
                instances: nodes,
                drivers,
                schemas,
                queue: BinaryHeap::new(),
                seq: 0,
                msg: 0,
                cmd: 0,
                corr: 0,
                records: Vec::new(),
                seed: 0,
            },
            handlers,
        })
    }

    /// One node per loaded package.
    pub fn node_count(&self) -> usize {
        self.core.devices.len()
    }

    pub fn device_names(&self) -> Vec<&str> {
        self.core.devices.iter().map(|d| d.device_name.as_str()).collect()
    }

    /// Instance ids in delivery (lane) order.
    pub fn instance_ids(&self) -> Vec<&str> {
        self.core.instances.iter().map(|i| i.id.as_str()).collect()
    }

    fn reset(&mut self, seed: u64) {
        let c = &mut self.core;
        c.queue.clear();
        c.records.clear();
        c.seq = 0;
        c.msg = 0;
        c.cmd = 0;
        c.corr = 0;
        c.seed = seed;
        for i in &mut c.instances {
            i.state = InstanceState::default();
            i.busy_until = 0;
        }
        for d in &mut c.drivers {
            let p = &c.devices[d.device];
            d.driver = (d.factory)(&p.driver_bindings[d.binding], p);
        }
    }

    /// Runs from a fresh state. Same inputs, same trace.
    pub fn run_scenario(&mut self, scenario: &Scenario, seed: u64) -> Result<Trace, SimError> {
        self.reset(seed);
        for (i, step) in scenario.steps.iter().enumerate() {
            self.core.schedule(step.at, 0, Job::Inject(i));
        }
        while let Some(Reverse(item)) = self.core.queue.pop() {
            if scenario.end.is_some_and(|end| item.time > end) {
                break;
            }
            match item.job {
                Job::Inject(i) => self.inject(scenario, i, item.time)?,
                Job::Deliver { instance, sub, event } => {
                    let busy = self.core.instances[instance].busy_until;
                    if busy > item.time {
                        self.core.schedule(busy, item.lane, Job::Deliver { instance, sub, event });
                        continue;
                    }
                    let id = self.core.instances[instance].id.clone();
                    self.core.record(
                        item.time,
                        TraceKind::Deliver,
                        vec![id, event.topic.clone(), format!("msg={}", event.msg)],
                    );
                    let handler = Arc::clone(&self.handlers[instance][sub]);
                    let mut ctx = ServiceContext { core: &mut self.core, instance, now: item.time };
                    handler(&mut ctx, &event)?;
                }
                Job::Act { driver, action, args, cmd } => {
                    let d = &mut self.core.drivers[driver];
                    d.driver.on_action(&action, &args)?;
                    let dev = &self.core.devices[d.device];
                    let b = &dev.driver_bindings[d.binding];
                    let kind = if b.kind == ResourceKind::UserInterface { TraceKind::Notify } else { TraceKind::Actuate };
                    let detail = vec![
                        dev.device_name.clone(),
                        b.resource_name.clone(),
                        format!("{action}({})", render_args(&args)),
                        format!("cmd={cmd}"),
                    ];
                    self.core.record(item.time, kind, detail);
                }
            }
        }
        let mut records = std::mem::take(&mut self.core.records);
        records.sort_by_key(|r| r.time);
        Ok(Trace { records })
    }

    fn inject(&mut self, scenario: &Scenario, i: usize, time: u64) -> Result<(), SimError> {
        let step = &scenario.steps[i];
        let line = step.line;
        let bad_ref = |message: String| SimError::ScenarioRef { line, message };
        let bad_type = |message: String| SimError::PayloadType(format!("scenario line {line}: {message}"));
        let dev_idx =
            self.core.device_index(&step.device).ok_or_else(|| bad_ref(format!("no package for device `{}`", step.device)))?;
        let dev = &self.core.devices[dev_idx];
        match &step.action {
            StepAction::Emit { event, fields } => {
                let sig = dev
                    .driver_bindings
                    .iter()
                    .filter(|b| b.kind == ResourceKind::Sensor)
                    .flat_map(|b| &b.events)
                    .find(|e| &e.event == event)
                    .ok_or_else(|| bad_ref(format!("device `{}` has no sensor producing `{event}`", step.device)))?;
                let schema = self.core.schema(&sig.structure)?;
                let mut payload = Payload::new();
                for (name, raw) in fields {
                    let f = schema
                        .fields
                        .iter()
                        .find(|f| &f.name == name)
                        .ok_or_else(|| bad_type(format!("`{}` has no field `{name}`", schema.name)))?;
                    payload.insert(name.clone(), Value::parse(raw, f.ty).map_err(bad_type)?);
                }
                check_payload(&payload, schema).map_err(bad_type)?;
                let source = EventSource { name: dev.device_name.clone(), path: dev.region_path.clone() };
                let topic = event.clone();
                self.core.publish(&topic, payload, source, time);
            }
            StepAction::Ui { command, args } => {
                let (binding, sig) = dev
                    .driver_bindings
                    .iter()
                    .filter(|b| b.kind == ResourceKind::UserInterface)
                    .find_map(|b| b.commands.iter().find(|c| &c.action == command).map(|c| (b, c)))
                    .ok_or_else(|| bad_ref(format!("device `{}` has no user interface command `{command}`", step.device)))?;
                if sig.params.len() != args.len() {
                    return Err(SimError::ArgArity { action: command.clone(), expected: sig.params.len(), got: args.len() });
                }
                let values = sig
                    .params
                    .iter()
                    .zip(args)
                    .map(|(p, raw)| Value::parse(raw, p.ty))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(bad_type)?;
                let innermost = dev
                    .region_path
                    .entries()
                    .last()
                    .ok_or_else(|| bad_ref(format!("device `{}` has an empty region path", step.device)))?;
                let scope = ScopeSpec::new(0, innermost.label.clone());
                let issuer = format!("{}/{}", dev.device_name, binding.resource_name);
                let origin = dev.region_path.clone();
                let command = command.clone();
                self.core.command(&issuer, &origin, &command, values, &scope, time)?;
            }
        }
        Ok(())
    }
}
