//! A small logic-less template engine.
//!
//! `{{path}}` inserts a scalar, `{{#each path}}...{{/each}}` repeats its
//! body once per array element with the element pushed as the innermost
//! scope. A path is dot-separated; its first segment is looked up from the
//! innermost scope outwards, `this` names the innermost scope itself.
//! A line holding nothing but one section tag and whitespace is dropped
//! from the output entirely. See `docs/templates.md`.

use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("template line {line}: unterminated tag")]
    Unterminated { line: usize },
    #[error("template line {line}: `{{{{/each}}}}` without an open section")]
    UnbalancedClose { line: usize },
    #[error("template: section `{path}` opened on line {line} is never closed")]
    Unclosed { path: String, line: usize },
    #[error("template: `{path}` does not resolve")]
    Unresolved { path: String },
    #[error("template: `{path}` is not a scalar")]
    NotScalar { path: String },
    #[error("template: `{path}` is not a list")]
    NotList { path: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Text(String),
    Var(String),
    Each(String, Vec<Node>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    nodes: Vec<Node>,
}

enum Tag {
    Open(String),
    Close,
    Var(String),
}

fn classify(inner: &str) -> Tag {
    let inner = inner.trim();
    if let Some(rest) = inner.strip_prefix("#each") {
        Tag::Open(rest.trim().to_string())
    } else if inner == "/each" {
        Tag::Close
    } else {
        Tag::Var(inner.to_string())
    }
}

/// A line that is only a section tag, given without its newline.
fn standalone_section(line: &str) -> Option<Tag> {
    let t = line.trim();
    let inner = t.strip_prefix("{{")?.strip_suffix("}}")?;
    if inner.contains("{{") || inner.contains("}}") {
        return None;
    }
    match classify(inner) {
        Tag::Var(_) => None,
        tag => Some(tag),
    }
}

impl Template {
    pub fn parse(src: &str) -> Result<Self, TemplateError> {
        // Stack of open sections: (path, opening line, nodes collected so far).
        let mut stack: Vec<(String, usize, Vec<Node>)> = vec![(String::new(), 0, Vec::new())];
        let mut text = String::new();

        fn flush(text: &mut String, stack: &mut [(String, usize, Vec<Node>)]) {
            if !text.is_empty() {
                stack.last_mut().expect("root scope").2.push(Node::Text(std::mem::take(text)));
            }
        }

        fn apply(
            tag: Tag,
            line: usize,
            text: &mut String,
            stack: &mut Vec<(String, usize, Vec<Node>)>,
        ) -> Result<(), TemplateError> {
            flush(text, stack);
            match tag {
                Tag::Open(path) => stack.push((path, line, Vec::new())),
                Tag::Close => {
                    if stack.len() == 1 {
                        return Err(TemplateError::UnbalancedClose { line });
                    }
                    let (path, _, body) = stack.pop().expect("checked above");
                    stack.last_mut().expect("root scope").2.push(Node::Each(path, body));
                }
                Tag::Var(path) => stack.last_mut().expect("root scope").2.push(Node::Var(path)),
            }
            Ok(())
        }

        for (i, raw) in src.split_inclusive('\n').enumerate() {
            let line_no = i + 1;
            let body = raw.strip_suffix('\n').unwrap_or(raw);
            if let Some(tag) = standalone_section(body) {
                apply(tag, line_no, &mut text, &mut stack)?;
                continue;
            }
            let mut rest = raw;
            while let Some(open) = rest.find("{{") {
                text.push_str(&rest[..open]);
                let after = &rest[open + 2..];
                let close = after.find("}}").ok_or(TemplateError::Unterminated { line: line_no })?;
                apply(classify(&after[..close]), line_no, &mut text, &mut stack)?;
                rest = &after[close + 2..];
            }
            text.push_str(rest);
        }
        flush(&mut text, &mut stack);
        if stack.len() > 1 {
            let (path, line, _) = stack.pop().expect("checked above");
            return Err(TemplateError::Unclosed { path, line });
        }
        let (_, _, nodes) = stack.pop().expect("root scope");
        Ok(Template { nodes })
    }

    pub fn render(&self, ctx: &Value) -> Result<String, TemplateError> {
        let mut out = String::new();
        let mut scopes = vec![ctx];
        render_nodes(&self.nodes, &mut scopes, &mut out)?;
        Ok(out)
    }
}

fn lookup<'a>(scopes: &[&'a Value], path: &str) -> Option<&'a Value> {
    let mut parts = path.split('.');
    let first = parts.next()?;
    let mut cur = if first == "this" {
        *scopes.last()?
    } else {
        scopes.iter().rev().find_map(|s| s.get(first))?
    };
    for p in parts {
        cur = cur.get(p)?;
    }
    Some(cur)
}

fn render_nodes<'a>(nodes: &'a [Node], scopes: &mut Vec<&'a Value>, out: &mut String) -> Result<(), TemplateError> {
    for n in nodes {
        match n {
            Node::Text(t) => out.push_str(t),
            Node::Var(path) => {
                let v = lookup(scopes, path).ok_or_else(|| TemplateError::Unresolved { path: path.clone() })?;
                match v {
                    Value::String(s) => out.push_str(s),
                    Value::Number(num) => out.push_str(&num.to_string()),
                    Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
                    Value::Null => {}
                    _ => return Err(TemplateError::NotScalar { path: path.clone() }),
                }
            }
            Node::Each(path, body) => {
                let v = lookup(scopes, path).ok_or_else(|| TemplateError::Unresolved { path: path.clone() })?;
                let Value::Array(items) = v else {
                    return Err(TemplateError::NotList { path: path.clone() });
                };
                for item in items {
                    scopes.push(item);
                    let r = render_nodes(body, scopes, out);
                    scopes.pop();
                    r?;
                }
            }
        }
    }
    Ok(())
}
