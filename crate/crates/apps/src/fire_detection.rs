//! Fire-detection logic: a room is on fire when its average temperature
//! exceeds the threshold while smoke is present; floors OR their rooms;
//! the building controller raises every alarm on the first floor fire.

use iotc_sim::{HandlerRegistry, NullDriver, Payload, ServiceContext, SimError, Value, ANY_PLATFORM};

use crate::logic::{field_bool, field_f64, latest_any, republish_mean};

/// Degrees above which a smoky room counts as burning.
pub const FIRE_TEMP_THRESHOLD: f64 = 50.0;

fn fire_payload(fire: bool) -> Payload {
    [("fire".to_string(), Value::Boolean(fire))].into()
}

/// Publishes `value` on `event` if it differs from the last published one.
fn publish_on_change(ctx: &mut ServiceContext<'_>, event: &str, value: bool) -> Result<(), SimError> {
    let last = ctx.state().get("published").and_then(Value::as_bool).unwrap_or(false);
    if value != last {
        ctx.state().set("published", value);
        ctx.publish(event, fire_payload(value))?;
    }
    Ok(())
}

fn room_state(ctx: &mut ServiceContext<'_>) -> Result<(), SimError> {
    let temp = ctx.state().get("temp").and_then(Value::as_f64);
    let smoke = ctx.state().get("smoke").and_then(Value::as_bool);
    let fire = matches!((temp, smoke), (Some(t), Some(true)) if t > FIRE_TEMP_THRESHOLD);
    publish_on_change(ctx, "roomFire", fire)
}

pub fn registry() -> HandlerRegistry {
    let mut reg = HandlerRegistry::new();
    for r in ["TemperatureSensor", "SmokeDetector", "Alarm", "SmartPhoneApp"] {
        reg.register_driver(r, ANY_PLATFORM, |_, _| Box::new(NullDriver));
    }

    reg.register_handler("RoomAvgTemp", "onNewtempMeasurement", |ctx, ev| {
        republish_mean(ctx, ev, "roomAvgTempMeasurement").map(drop)
    });
    reg.register_handler("RoomFireState", "onNewroomAvgTempMeasurement", |ctx, ev| {
        let t = field_f64(ev, "tempValue")?;
        ctx.state().set("temp", t);
        room_state(ctx)
    });
    reg.register_handler("RoomFireState", "onNewsmokeMeasurement", |ctx, ev| {
        let s = field_bool(ev, "smokePresence")?;
        ctx.state().set("smoke", s);
        room_state(ctx)
    });
    reg.register_handler("FloorFireState", "onNewroomFire", |ctx, ev| {
        let any = latest_any(ctx.state(), &ev.source.name, field_bool(ev, "fire")?);
        publish_on_change(ctx, "floorFire", any)
    });
    reg.register_handler("BuildingFireController", "onNewfloorFire", |ctx, ev| {
        let was = ctx.state().get("alarm").and_then(Value::as_bool).unwrap_or(false);
        let any = latest_any(ctx.state(), &ev.source.name, field_bool(ev, "fire")?);
        ctx.state().set("alarm", any);
        if any && !was {
            ctx.command("Activate", vec![])?;
            ctx.command("Display", vec![Value::String(format!("fire detected in {}", ev.source.path))])?;
        }
        Ok(())
    });
    reg
}
