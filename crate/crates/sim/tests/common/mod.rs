#![allow(dead_code)]

use iotc_core::codegen::{generate_architecture_framework, generate_vocabulary_framework};
use iotc_core::linker::link;
use iotc_core::mapper::map_services;
use iotc_core::package::DevicePackage;
use iotc_core::syntax::{parse_architecture, parse_deployment, parse_vocabulary};
use iotc_sim::{HandlerRegistry, NullDriver, ANY_PLATFORM};

pub const VOCAB: &str = "vocabulary Lab;
regions { Building: integer; Floor: integer; Room: integer; }
structs { S { v: double; } Msg { text: string; } }
resources {
  sensors { Probe { generate t: S; } }
  actuators { Lamp { action On(level: double); action Dim(); } }
  storages { Store { generate rec: S accessed-by k: integer; } }
  userinterfaces { Panel { command Dim(); action Show(text: string); } }
}
";

pub fn packages(arch: &str, dep: &str, seed: u64) -> Vec<DevicePackage> {
    let v = parse_vocabulary(VOCAB).unwrap();
    let a = parse_architecture(arch).unwrap();
    let d = parse_deployment(dep).unwrap();
    let m = map_services(&a, &d, seed).unwrap();
    link(&a, &d, &v, &m, &generate_architecture_framework(&a, &v), &generate_vocabulary_framework(&v)).unwrap()
}

/// Null drivers for the four resources.
pub fn null_drivers(reg: &mut HandlerRegistry) {
    for r in ["Probe", "Lamp", "Store", "Panel"] {
        reg.register_driver(r, ANY_PLATFORM, |_, _| Box::new(NullDriver));
    }
}

pub fn device(name: &str, (b, f, r): (i64, i64, i64), resources: &[&str]) -> String {
    format!(
        "device {name} {{ region {{ Building:{b}; Floor:{f}; Room:{r}; }} resources {{ {} }} type: JavaSE; mobile: false; }}\n",
        resources.join(", ")
    )
}

pub fn deployment(devices: &[String]) -> String {
    format!("deployment D uses Lab;\n{}", devices.concat())
}
