//! Trace records and their tab-separated text form.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TraceKind {
    Publish,
    Deliver,
    Command,
    Actuate,
    Request,
    Respond,
    Notify,
}

impl TraceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceKind::Publish => "PUBLISH",
            TraceKind::Deliver => "DELIVER",
            TraceKind::Command => "COMMAND",
            TraceKind::Actuate => "ACTUATE",
            TraceKind::Request => "REQUEST",
            TraceKind::Respond => "RESPOND",
            TraceKind::Notify => "NOTIFY",
        }
    }
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub time: u64,
    pub kind: TraceKind,
    pub detail: Vec<String>,
}

impl TraceRecord {
    /// The value of a `key=value` detail column.
    pub fn tag(&self, key: &str) -> Option<&str> {
        self.detail.iter().find_map(|d| d.strip_prefix(key)?.strip_prefix('='))
    }
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.time, self.kind)?;
        for d in &self.detail {
            write!(f, "\t{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
}

impl Trace {
    pub fn of_kind(&self, kind: TraceKind) -> impl Iterator<Item = &TraceRecord> {
        self.records.iter().filter(move |r| r.kind == kind)
    }

    pub fn count(&self, kind: TraceKind) -> usize {
        self.of_kind(kind).count()
    }

    /// One record per line, each ending in `\n`.
    pub fn render(&self) -> String {
        self.records.iter().map(|r| format!("{r}\n")).collect()
    }
}
