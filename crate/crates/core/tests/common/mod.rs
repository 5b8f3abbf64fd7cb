#![allow(dead_code)]

use iotc_core::syntax::{parse_architecture, parse_deployment, parse_vocabulary};
use iotc_core::{Architecture, Deployment, RegionEntry, RegionPath, Vocabulary};

pub const SB_SVL: &str = include_str!("../../../apps/bundles/smart_building/building.svl");
pub const SB_SAL: &str = include_str!("../../../apps/bundles/smart_building/building.sal");
pub const SB_SDL: &str = include_str!("../../../apps/bundles/smart_building/building.sdl");
pub const FIRE_SVL: &str = include_str!("../../../apps/bundles/fire_detection/fire.svl");
pub const FIRE_SAL: &str = include_str!("../../../apps/bundles/fire_detection/fire.sal");
pub const FIRE_SDL: &str = include_str!("../../../apps/bundles/fire_detection/fire.sdl");

pub fn building() -> (Vocabulary, Architecture, Deployment) {
    (
        parse_vocabulary(SB_SVL).unwrap(),
        parse_architecture(SB_SAL).unwrap(),
        parse_deployment(SB_SDL).unwrap(),
    )
}

pub fn fire() -> (Vocabulary, Architecture, Deployment) {
    (
        parse_vocabulary(FIRE_SVL).unwrap(),
        parse_architecture(FIRE_SAL).unwrap(),
        parse_deployment(FIRE_SDL).unwrap(),
    )
}

pub fn path(vals: &[(&str, i64)]) -> RegionPath {
    RegionPath::new(vals.iter().map(|(l, v)| RegionEntry::new(*l, *v)).collect())
}

pub fn room(b: i64, f: i64, r: i64) -> RegionPath {
    path(&[("Building", b), ("Floor", f), ("Room", r)])
}

/// `deployment` text with one device per `(name, b, f, r, resources)`.
pub fn deployment_text(vocab: &str, devices: &[(&str, i64, i64, i64, &[&str])]) -> String {
    let mut s = format!("deployment T uses {vocab};\n");
    for (name, b, f, r, res) in devices {
        s.push_str(&format!(
            "device {name} {{ region {{ Building:{b}; Floor:{f}; Room:{r}; }} resources {{ {} }} type: JavaSE; mobile: false; }}\n",
            res.join(", ")
        ));
    }
    s
}
