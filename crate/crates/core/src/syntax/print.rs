//! Canonical printers. Output parses back to a structurally equal value.

use std::fmt::Write;

use crate::model::{ActionDecl, Architecture, Deployment, RetrievalDecl, Vocabulary};

fn signature(a: &ActionDecl) -> String {
    let params: Vec<String> = a.params.iter().map(|p| format!("{}: {}", p.name, p.ty)).collect();
    format!("{}({})", a.name, params.join(", "))
}

fn retrieval(r: &RetrievalDecl) -> String {
    format!("{}: {} accessed-by {}: {}", r.name, r.structure, r.key.name, r.key.ty)
}

pub fn print_vocabulary(v: &Vocabulary) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "vocabulary {};", v.name);
    let _ = writeln!(w, "regions {{");
    for r in &v.regions {
        let _ = writeln!(w, "  {}: integer;", r.name);
    }
    let _ = writeln!(w, "}}");

    let _ = writeln!(w, "structs {{");
    for s in &v.structs {
        let _ = writeln!(w, "  {} {{", s.name);
        for f in &s.fields {
            let _ = writeln!(w, "    {}: {};", f.name, f.ty);
        }
        let _ = writeln!(w, "  }}");
    }
    let _ = writeln!(w, "}}");

    let res = &v.resources;
    let _ = writeln!(w, "resources {{");
    if !res.sensors.is_empty() {
        let _ = writeln!(w, "  sensors {{");
        for s in &res.sensors {
            let _ = writeln!(w, "    {} {{", s.name);
            for g in &s.generates {
                let _ = writeln!(w, "      generate {}: {};", g.name, g.structure);
            }
            let _ = writeln!(w, "    }}");
        }
        let _ = writeln!(w, "  }}");
    }
    if !res.actuators.is_empty() {
        let _ = writeln!(w, "  actuators {{");
        for a in &res.actuators {
            let _ = writeln!(w, "    {} {{", a.name);
            for act in &a.actions {
                let _ = writeln!(w, "      action {};", signature(act));
            }
            let _ = writeln!(w, "    }}");
        }
        let _ = writeln!(w, "  }}");
    }
    if !res.storages.is_empty() {
        let _ = writeln!(w, "  storages {{");
        for s in &res.storages {
            let _ = writeln!(w, "    {} {{", s.name);
            for r in &s.retrievals {
                let _ = writeln!(w, "      generate {};", retrieval(r));
            }
            let _ = writeln!(w, "    }}");
        }
        let _ = writeln!(w, "  }}");
    }
    if !res.user_interfaces.is_empty() {
        let _ = writeln!(w, "  userinterfaces {{");
        for u in &res.user_interfaces {
            let _ = writeln!(w, "    {} {{", u.name);
            for c in &u.commands {
                let _ = writeln!(w, "      command {};", signature(c));
            }
            for a in &u.actions {
                let _ = writeln!(w, "      action {};", signature(a));
            }
            for r in &u.requests {
                let _ = writeln!(w, "      request {};", retrieval(r));
            }
            let _ = writeln!(w, "    }}");
        }
        let _ = writeln!(w, "  }}");
    }
    let _ = writeln!(w, "}}");
    out
}

pub fn print_architecture(a: &Architecture) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "architecture {} uses {};", a.name, a.vocabulary_name);
    for s in &a.services {
        let _ = writeln!(w, "computationalService {} {{", s.name);
        for c in &s.consumes {
            let _ = writeln!(w, "  consume {} from {};", c.event, c.scope);
        }
        for r in &s.requests {
            let _ = writeln!(w, "  request {};", r.retrieval);
        }
        for g in &s.generates {
            let _ = writeln!(w, "  generate {}: {};", g.event, g.structure);
        }
        for c in &s.commands {
            let _ = writeln!(w, "  command {}({}) to {};", c.action, c.args.join(", "), c.scope);
        }
        let _ = writeln!(w, "  in-region: {};", s.in_region);
        let _ = writeln!(w, "}}");
    }
    out
}

/// Eight lines per device after a one-line header.
pub fn print_deployment(d: &Deployment) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "deployment {} uses {};", d.name, d.vocabulary_name);
    for dev in &d.devices {
        let entries: Vec<String> =
            dev.region.entries().iter().map(|e| format!("{}:{};", e.label, e.value)).collect();
        let names: Vec<&str> = dev.resources.iter().map(|r| r.name.as_str()).collect();
        let _ = writeln!(w, "device {} {{", dev.name);
        let _ = writeln!(w, "  region {{");
        let _ = writeln!(w, "    {}", entries.join(" "));
        let _ = writeln!(w, "  }}");
        if names.is_empty() {
            let _ = writeln!(w, "  resources {{ }}");
        } else {
            let _ = writeln!(w, "  resources {{ {} }}", names.join(", "));
        }
        let _ = writeln!(w, "  type: {};", dev.platform_type);
        let _ = writeln!(w, "  mobile: {};", dev.mobile);
        let _ = writeln!(w, "}}");
    }
    out
}
