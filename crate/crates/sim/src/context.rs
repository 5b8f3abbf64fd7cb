//! What a handler sees while it runs.

use std::collections::BTreeMap;

use iotc_core::RegionPath;

use crate::engine::Core;
use crate::error::SimError;
use crate::event::EventSource;
use crate::value::{check_payload, Payload, Value};

/// Per-instance key/value memory kept between deliveries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InstanceState {
    values: BTreeMap<String, Value>,
}

impl InstanceState {
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.values.insert(key.into(), value.into());
    }

    pub fn remove(&mut self, key: &str) -> Option<Value> {
        self.values.remove(key)
    }

    /// Entries whose key starts with `prefix`, with the prefix stripped.
    pub fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = (&'a str, &'a Value)> + 'a {
        self.values
            .range(prefix.to_string()..)
            .map_while(move |(k, v)| k.strip_prefix(prefix).map(|rest| (rest, v)))
    }
}

/// Handle passed to a handler for one delivery. Publishing, commanding
/// and requesting all happen at [`ServiceContext::now`]; a request moves
/// `now` forward by the round trip.
pub struct ServiceContext<'a> {
    pub(crate) core: &'a mut Core,
    pub(crate) instance: usize,
    pub(crate) now: u64,
}

impl ServiceContext<'_> {
    pub fn now(&self) -> u64 {
        self.now
    }

    pub fn seed(&self) -> u64 {
        self.core.seed
    }

    pub fn instance_id(&self) -> &str {
        &self.core.instances[self.instance].id
    }

    pub fn service(&self) -> &str {
        &self.core.instances[self.instance].pkg.service
    }

    pub fn partition(&self) -> &RegionPath {
        &self.core.instances[self.instance].pkg.partition_path
    }

    pub fn state(&mut self) -> &mut InstanceState {
        &mut self.core.instances[self.instance].state
    }

    pub fn publish(&mut self, event: &str, payload: Payload) -> Result<(), SimError> {
        let inst = &self.core.instances[self.instance];
        let sig = inst.pkg.publications.iter().find(|p| p.event == event).ok_or_else(|| SimError::Undeclared {
            instance: inst.id.clone(),
            what: format!("a publication of `{event}`"),
        })?;
        let schema = self.core.schema(&sig.structure)?;
        check_payload(&payload, schema).map_err(|m| SimError::PayloadType(format!("`{event}`: {m}")))?;
        let source = EventSource { name: inst.id.clone(), path: inst.pkg.partition_path.clone() };
        self.core.publish(event, payload, source, self.now);
        Ok(())
    }

    pub fn command(&mut self, action: &str, args: Vec<Value>) -> Result<(), SimError> {
        let inst = &self.core.instances[self.instance];
        let entry = inst.pkg.commands.iter().find(|c| c.action == action).ok_or_else(|| SimError::Undeclared {
            instance: inst.id.clone(),
            what: format!("a command `{action}`"),
        })?;
        if entry.args.len() != args.len() {
            return Err(SimError::ArgArity { action: action.to_string(), expected: entry.args.len(), got: args.len() });
        }
        let (issuer, partition, scope) = (inst.id.clone(), inst.pkg.partition_path.clone(), entry.scope.clone());
        self.core.command(&issuer, &partition, action, args, &scope, self.now)
    }

    /// Synchronous retrieval; the instance receives nothing else until
    /// the response time has passed.
    pub fn request(&mut self, retrieval: &str, key: Value) -> Result<Option<Payload>, SimError> {
        let response = self.core.request(self.instance, retrieval, key, self.now)?;
        self.now += 2 * crate::engine::LATENCY_MS;
        self.core.instances[self.instance].busy_until = self.now;
        Ok(response)
    }
}
