use iotc_core::package::{FactoryKey, HandlerKey};
use thiserror::Error;

fn join<T: std::fmt::Display>(keys: &[T]) -> String {
    keys.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("E-MISSING-HANDLER: no handler registered for {}", join(.0))]
    MissingHandler(Vec<HandlerKey>),
    #[error("E-MISSING-DRIVER: no driver registered for {}", join(.0))]
    MissingDriver(Vec<FactoryKey>),
    #[error("E-PAYLOAD-TYPE: {0}")]
    PayloadType(String),
    #[error("E-ARG-ARITY: `{action}` takes {expected} argument(s), got {got}")]
    ArgArity { action: String, expected: usize, got: usize },
    #[error("E-NO-RESPONDER: no device answers `{0}`")]
    NoResponder(String),
    #[error("E-SCENARIO-PARSE: line {line}: {message}")]
    ScenarioParse { line: usize, message: String },
    #[error("E-SCENARIO-REF: line {line}: {message}")]
    ScenarioRef { line: usize, message: String },
    #[error("E-UNDECLARED: `{instance}` does not declare {what}")]
    Undeclared { instance: String, what: String },
    #[error("E-PACKAGE: {0}")]
    Package(String),
    #[error("E-DRIVER: {0}")]
    Driver(String),
}
