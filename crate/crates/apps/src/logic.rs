//! Helpers shared by both bundles' handlers.

use iotc_sim::{Event, InstanceState, Payload, ServiceContext, SimError, Value};

pub const UNIT: &str = "C";

/// Stores `value` as the latest reading from `source`; returns the mean
/// over the latest reading of every source seen so far.
pub fn latest_mean(state: &mut InstanceState, source: &str, value: f64) -> f64 {
    state.set(format!("latest/{source}"), value);
    let vals: Vec<f64> = state.with_prefix("latest/").filter_map(|(_, v)| v.as_f64()).collect();
    vals.iter().sum::<f64>() / vals.len() as f64
}

/// Stores a boolean per source; returns whether any is true.
pub fn latest_any(state: &mut InstanceState, source: &str, value: bool) -> bool {
    state.set(format!("latest/{source}"), value);
    state.with_prefix("latest/").any(|(_, v)| v.as_bool() == Some(true))
}

pub fn temp_payload(value: f64, unit: &str) -> Payload {
    [("tempValue".to_string(), Value::Double(value)), ("unitOfMeasurement".to_string(), unit.into())].into()
}

pub fn field_f64(ev: &Event, name: &str) -> Result<f64, SimError> {
    ev.f64(name).ok_or_else(|| SimError::PayloadType(format!("`{}` lacks numeric `{name}`", ev.topic)))
}

pub fn field_bool(ev: &Event, name: &str) -> Result<bool, SimError> {
    ev.bool(name).ok_or_else(|| SimError::PayloadType(format!("`{}` lacks boolean `{name}`", ev.topic)))
}

/// Averages `tempValue` over sources and publishes the result as `out`.
pub fn republish_mean(ctx: &mut ServiceContext<'_>, ev: &Event, out: &str) -> Result<f64, SimError> {
    let v = field_f64(ev, "tempValue")?;
    let mean = latest_mean(ctx.state(), &ev.source.name, v);
    let unit = ev.field("unitOfMeasurement").and_then(Value::as_str).unwrap_or(UNIT).to_string();
    ctx.publish(out, temp_payload(mean, &unit))?;
    Ok(mean)
}

