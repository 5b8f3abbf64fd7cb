//! Application logic and driver implementations, looked up by key when
//! packages are loaded.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use iotc_core::package::{DevicePackage, DriverBinding, FactoryKey, HandlerKey};

use crate::context::ServiceContext;
use crate::error::SimError;
use crate::event::Event;
use crate::value::{Payload, Value};

pub type Handler = Arc<dyn Fn(&mut ServiceContext<'_>, &Event) -> Result<(), SimError> + Send + Sync>;

pub type DriverFactory = Arc<dyn Fn(&DriverBinding, &DevicePackage) -> Box<dyn Driver> + Send + Sync>;

/// A simulated resource on one device.
pub trait Driver: Send {
    /// An actuator or user-interface action arrived.
    fn on_action(&mut self, _action: &str, _args: &[Value]) -> Result<(), SimError> {
        Ok(())
    }

    /// A storage or user-interface retrieval. `None` means no entry.
    fn query(&mut self, _retrieval: &str, _key: &Value) -> Result<Option<Payload>, SimError> {
        Ok(None)
    }
}

/// Accepts every action and answers no query.
#[derive(Debug, Default)]
pub struct NullDriver;

impl Driver for NullDriver {}

/// Answers queries from a fixed table keyed by the rendered key value.
#[derive(Debug, Clone, Default)]
pub struct TableDriver {
    pub rows: HashMap<String, Payload>,
}

impl Driver for TableDriver {
    fn query(&mut self, _retrieval: &str, key: &Value) -> Result<Option<Payload>, SimError> {
        Ok(self.rows.get(&key.to_string()).cloned())
    }
}

/// Platform name matching every device in [`HandlerRegistry::register_driver`].
pub const ANY_PLATFORM: &str = "*";

#[derive(Clone, Default)]
pub struct HandlerRegistry {
    handlers: BTreeMap<HandlerKey, Handler>,
    drivers: BTreeMap<FactoryKey, DriverFactory>,
}

impl HandlerRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_handler<F>(&mut self, service: &str, hook: &str, f: F) -> &mut Self
    where
        F: Fn(&mut ServiceContext<'_>, &Event) -> Result<(), SimError> + Send + Sync + 'static,
    {
        self.handlers.insert(HandlerKey::new(service, hook), Arc::new(f));
        self
    }

    pub fn register_driver<F>(&mut self, resource: &str, platform: &str, f: F) -> &mut Self
    where
        F: Fn(&DriverBinding, &DevicePackage) -> Box<dyn Driver> + Send + Sync + 'static,
    {
        self.drivers.insert(FactoryKey::new(resource, platform), Arc::new(f));
        self
    }

    pub fn remove_handler(&mut self, key: &HandlerKey) -> Option<Handler> {
        self.handlers.remove(key)
    }

    pub fn handler(&self, key: &HandlerKey) -> Option<&Handler> {
        self.handlers.get(key)
    }

    /// Exact key first, then the resource registered for [`ANY_PLATFORM`].
    pub fn driver(&self, key: &FactoryKey) -> Option<&DriverFactory> {
        self.drivers
            .get(key)
            .or_else(|| self.drivers.get(&FactoryKey::new(key.resource.clone(), ANY_PLATFORM)))
    }

    pub fn handler_keys(&self) -> impl Iterator<Item = &HandlerKey> {
        self.handlers.keys()
    }
}

impl std::fmt::Debug for HandlerRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HandlerRegistry")
            .field("handlers", &self.handlers.keys().collect::<Vec<_>>())
            .field("drivers", &self.drivers.keys().collect::<Vec<_>>())
            .finish()
    }
}
