//! Deterministic discrete-event runtime for linked device packages.
//!
//! [`Simulator::load`] binds every package to handlers and drivers from a
//! [`HandlerRegistry`]; [`Simulator::run_scenario`] replays a [`Scenario`]
//! on a virtual millisecond clock and returns the [`Trace`].

mod context;
mod engine;
mod error;
mod event;
mod registry;
mod scenario;
mod trace;
mod value;

pub use context::{InstanceState, ServiceContext};
pub use engine::{Simulator, LATENCY_MS};
pub use error::SimError;
pub use event::{Event, EventSource};
pub use registry::{Driver, DriverFactory, Handler, HandlerRegistry, NullDriver, TableDriver, ANY_PLATFORM};
pub use scenario::{parse_scenario, Scenario, Step, StepAction};
pub use trace::{Trace, TraceKind, TraceRecord};
pub use value::{check_payload, render_args, render_payload, Payload, Value};
