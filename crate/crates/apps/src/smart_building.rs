//! Smart-building logic: room, floor and building temperature averages,
//! and badge-driven heating.

use iotc_sim::{HandlerRegistry, NullDriver, SimError, TableDriver, Value, ANY_PLATFORM};

use crate::logic::{field_f64, republish_mean, temp_payload, UNIT};

/// Temperature published when the last occupant leaves.
pub const LOWEST_SETTING: f64 = 15.0;

/// Reads `badgeID<TAB>preferredTemp` lines into a profile table.
pub fn parse_profiles(text: &str) -> Result<TableDriver, String> {
    let mut table = TableDriver::default();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (id, temp) = line.split_once('\t').ok_or_else(|| format!("profiles line {}: expected two columns", i + 1))?;
        let id: i32 = id.trim().parse().map_err(|_| format!("profiles line {}: bad badge id `{id}`", i + 1))?;
        let temp: f64 = temp.trim().parse().map_err(|_| format!("profiles line {}: bad temperature `{temp}`", i + 1))?;
        table.rows.insert(Value::Integer(id).to_string(), temp_payload(temp, UNIT));
    }
    Ok(table)
}

pub fn registry(profiles: &str) -> Result<HandlerRegistry, String> {
    let table = parse_profiles(profiles)?;
    let mut reg = HandlerRegistry::new();
    for r in ["TemperatureSensor", "BadgeReader", "Heater", "Monitor", "EndUserApp"] {
        reg.register_driver(r, ANY_PLATFORM, |_, _| Box::new(NullDriver));
    }
    reg.register_driver("ProfileDB", ANY_PLATFORM, move |_, _| Box::new(table.clone()));

    reg.register_handler("RoomAvgTemp", "onNewtempMeasurement", |ctx, ev| {
        republish_mean(ctx, ev, "roomAvgTempMeasurement").map(drop)
    });
    reg.register_handler("FloorAvgTemp", "onNewroomAvgTempMeasurement", |ctx, ev| {
        republish_mean(ctx, ev, "floorAvgTempMeasurement").map(drop)
    });
    reg.register_handler("BuildingAvgTemp", "onNewfloorAvgTempMeasurement", |ctx, ev| {
        let mean = republish_mean(ctx, ev, "buildingAvgTempMeasurement")?;
        ctx.command("Display", vec![Value::Double(mean)])
    });

    reg.register_handler("Proximity", "onNewbadgeDetected", |ctx, ev| {
        let badge = ev.field("badgeID").cloned().ok_or_else(|| SimError::PayloadType("badge without id".into()))?;
        // Unknown badges get no preference.
        if let Some(profile) = ctx.request("profile", badge)? {
            let pref = profile.get("tempValue").and_then(Value::as_f64).unwrap_or(LOWEST_SETTING);
            ctx.publish("tempPref", temp_payload(pref, UNIT))?;
        }
        Ok(())
    });
    reg.register_handler("Proximity", "onNewbadgeDisappeared", |ctx, _| {
        ctx.publish("lowestSetting", temp_payload(LOWEST_SETTING, UNIT))
    });

    reg.register_handler("RoomController", "onNewtempPref", |ctx, ev| {
        let pref = field_f64(ev, "tempValue")?;
        ctx.command("SetTemp", vec![Value::Double(pref)])
    });
    reg.register_handler("RoomController", "onNewlowestSetting", |ctx, _| ctx.command("Off", vec![]));
    reg.register_handler("RoomController", "onNewroomAvgTempMeasurement", |ctx, ev| {
        let v = field_f64(ev, "tempValue")?;
        ctx.state().set("roomAvg", v);
        Ok(())
    });
    Ok(reg)
}
