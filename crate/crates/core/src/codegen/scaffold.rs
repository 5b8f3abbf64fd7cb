use serde_json::{json, Value};

use super::manifest::{ConcreteOp, DriverInterface, DriverManifest, DriverMethod, FrameworkManifest, MethodMode, ServiceFramework};
use super::template::{Template, TemplateError};
use super::CodegenError;

/// A named pair of templates, one rendered per service and one per resource.
#[derive(Debug, Clone, Copy)]
pub struct TemplateSet {
    pub name: &'static str,
    pub service: &'static str,
    pub resource: &'static str,
}

pub const NEUTRAL: TemplateSet = TemplateSet {
    name: "neutral",
    service: include_str!("../../templates/neutral/service.tmpl"),
    resource: include_str!("../../templates/neutral/resource.tmpl"),
};

pub fn template_set(name: &str) -> Result<TemplateSet, CodegenError> {
    match name {
        "neutral" => Ok(NEUTRAL),
        other => Err(CodegenError::TemplateMissing(other.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scaffold {
    /// Relative, `/`-separated.
    pub path: String,
    pub text: String,
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("manifest types serialize")
}

/// The manifest entry plus per-kind views of `concreteOps`, since
/// templates cannot branch on a tag.
pub fn service_context(svc: &ServiceFramework) -> Value {
    let mut ctx = to_value(svc);
    let ops = |kind: &str| -> Vec<Value> {
        svc.concrete_ops
            .iter()
            .filter(|op| op.kind() == kind)
            .map(|op| {
                let mut v = to_value(op);
                if let ConcreteOp::Send { args, .. } = op {
                    v["argList"] = json!(args.join(", "));
                }
                v
            })
            .collect()
    };
    ctx["subscribeOps"] = json!(ops("subscribe"));
    ctx["publishOps"] = json!(ops("publish"));
    ctx["sendOps"] = json!(ops("send"));
    ctx["requestOps"] = json!(ops("request"));
    ctx
}

fn signature(m: &DriverMethod) -> String {
    let params: Vec<String> = m.params.iter().map(|p| format!("{}: {}", p.name, p.ty)).collect();
    let ret = m.returns.as_deref().unwrap_or("void");
    match m.mode {
        MethodMode::Sync => format!("{}({}): {}", m.name, params.join(", "), ret),
        MethodMode::Async => format!("{}(handler: ({}) -> void): void", m.name, ret),
        MethodMode::Oneway => format!("{}({}): void", m.name, params.join(", ")),
    }
}

pub fn resource_context(r: &DriverInterface) -> Value {
    let mut ctx = to_value(r);
    ctx["kindLabel"] = json!(r.kind.to_string());
    if let Some(methods) = ctx["methods"].as_array_mut() {
        for (v, m) in methods.iter_mut().zip(&r.methods) {
            v["signature"] = json!(signature(m));
        }
    }
    ctx
}

/// One scaffold per service (`architecture/<Service>.scaffold`) and per
/// resource (`vocabulary/<Resource>.scaffold`).
pub fn render_scaffolds(
    frameworks: &FrameworkManifest,
    drivers: &DriverManifest,
    set: &str,
) -> Result<Vec<Scaffold>, CodegenError> {
    let set = template_set(set)?;
    let service = Template::parse(set.service)?;
    let resource = Template::parse(set.resource)?;
    let mut out = Vec::new();
    for svc in &frameworks.services {
        out.push(Scaffold {
            path: format!("architecture/{}.scaffold", svc.service_name),
            text: service.render(&service_context(svc))?,
        });
    }
    for r in &drivers.resources {
        out.push(Scaffold {
            path: format!("vocabulary/{}.scaffold", r.resource_name),
            text: resource.render(&resource_context(r))?,
        });
    }
    Ok(out)
}

impl From<TemplateError> for CodegenError {
    fn from(e: TemplateError) -> Self {
        CodegenError::Template(e)
    }
}
