//! Scalar payload values.

use std::collections::BTreeMap;
use std::fmt;

use iotc_core::package::StructSchema;
use iotc_core::PrimitiveType;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    String(String),
    Integer(i32),
    Long(i64),
    Double(f64),
    Boolean(bool),
}

/// Event data, keyed by field name.
pub type Payload = BTreeMap<String, Value>;

impl Value {
    pub fn ty(&self) -> PrimitiveType {
        match self {
            Value::String(_) => PrimitiveType::String,
            Value::Integer(_) => PrimitiveType::Integer,
            Value::Long(_) => PrimitiveType::Long,
            Value::Double(_) => PrimitiveType::Double,
            Value::Boolean(_) => PrimitiveType::Boolean,
        }
    }

    /// Numeric view of integers, longs and doubles.
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Value::Integer(v) => Some(f64::from(v)),
            Value::Long(v) => Some(v as f64),
            Value::Double(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match *self {
            Value::Boolean(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::String(s) => Some(s),
            _ => None,
        }
    }

    /// Parses scenario text as `ty`. Strings may be bare or double-quoted
    /// with `\"` and `\\` escapes.
    pub fn parse(raw: &str, ty: PrimitiveType) -> Result<Value, String> {
        let bad = || format!("`{raw}` is not a valid {ty}");
        Ok(match ty {
            PrimitiveType::String => Value::String(unquote(raw).ok_or_else(bad)?),
            PrimitiveType::Integer => Value::Integer(raw.parse().map_err(|_| bad())?),
            PrimitiveType::Long => Value::Long(raw.parse().map_err(|_| bad())?),
            PrimitiveType::Double => {
                let v: f64 = raw.parse().map_err(|_| bad())?;
                if !v.is_finite() {
                    return Err(bad());
                }
                Value::Double(v)
            }
            PrimitiveType::Boolean => match raw {
                "true" => Value::Boolean(true),
                "false" => Value::Boolean(false),
                _ => return Err(bad()),
            },
        })
    }
}

fn unquote(raw: &str) -> Option<String> {
    let Some(inner) = raw.strip_prefix('"') else {
        return Some(raw.to_string());
    };
    let inner = inner.strip_suffix('"')?;
    let mut out = String::new();
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => out.push(chars.next().filter(|c| *c == '"' || *c == '\\')?),
            '"' => return None,
            c => out.push(c),
        }
    }
    Some(out)
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::String(s) => write!(f, "{s:?}"),
            Value::Integer(v) => write!(f, "{v}"),
            Value::Long(v) => write!(f, "{v}"),
            Value::Double(v) => write!(f, "{v:?}"),
            Value::Boolean(v) => write!(f, "{v}"),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Double(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Boolean(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::String(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::String(v)
    }
}

/// `{a=1,b="x"}`, keys in order.
pub fn render_payload(p: &Payload) -> String {
    let parts: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{{{}}}", parts.join(","))
}

/// Comma-joined values, used for action arguments.
pub fn render_args(args: &[Value]) -> String {
    args.iter().map(Value::to_string).collect::<Vec<_>>().join(", ")
}

/// Exact field match against the schema: nothing missing, nothing extra,
/// every value of the declared type.
pub fn check_payload(p: &Payload, schema: &StructSchema) -> Result<(), String> {
    for f in &schema.fields {
        match p.get(&f.name) {
            None => return Err(format!("field `{}` of `{}` is missing", f.name, schema.name)),
            Some(v) if v.ty() != f.ty => {
                return Err(format!("field `{}` of `{}` must be {}, got {}", f.name, schema.name, f.ty, v.ty()))
            }
            Some(_) => {}
        }
    }
    if let Some(extra) = p.keys().find(|k| !schema.fields.iter().any(|f| &f.name == *k)) {
        return Err(format!("`{}` has no field `{extra}`", schema.name));
    }
    Ok(())
}
