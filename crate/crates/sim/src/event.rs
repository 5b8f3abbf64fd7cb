use iotc_core::RegionPath;

use crate::value::{Payload, Value};

/// Where an event came from: a sensor's device or a service instance.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSource {
    /// Device name for sensors, instance id for services.
    pub name: String,
    /// Device path for sensors, partition path for services.
    pub path: RegionPath,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub topic: String,
    pub payload: Payload,
    pub source: EventSource,
    /// Publication time in ms.
    pub time: u64,
    /// Message number, as printed in the trace.
    pub msg: u64,
}

impl Event {
    pub fn field(&self, name: &str) -> Option<&Value> {
        self.payload.get(name)
    }

    pub fn f64(&self, name: &str) -> Option<f64> {
        self.field(name).and_then(Value::as_f64)
    }

    pub fn bool(&self, name: &str) -> Option<bool> {
        self.field(name).and_then(Value::as_bool)
    }
}
