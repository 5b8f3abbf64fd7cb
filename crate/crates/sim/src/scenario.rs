//! Scenario scripts.
//!
//! ```text
//! # comment
//! at 100 device BadgeReader-Device-1 emit badgeDetected badgeID=12 timeStamp=100
//! at 200 device LobbyDisplay ui Off()
//! end 6000
//! ```
//!
//! Values stay as text until the run, where they are typed against the
//! event's struct or the command's parameters.

use crate::error::SimError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepAction {
    Emit { event: String, fields: Vec<(String, String)> },
    Ui { command: String, args: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub at: u64,
    pub device: String,
    pub action: StepAction,
    /// 1-based source line, for error messages.
    pub line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Scenario {
    pub steps: Vec<Step>,
    /// Nothing later than this time is executed.
    pub end: Option<u64>,
}

impl Scenario {
    pub fn emit(&mut self, at: u64, device: &str, event: &str, fields: &[(&str, &str)]) -> &mut Self {
        let line = self.steps.len() + 1;
        self.steps.push(Step {
            at,
            device: device.to_string(),
            action: StepAction::Emit {
                event: event.to_string(),
                fields: fields.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
            },
            line,
        });
        self
    }
}

/// Splits on whitespace outside double quotes and stops at a `#` that
/// starts a token. Returns `(byte offset, token)` pairs.
fn tokens(line: &str) -> Result<Vec<(usize, &str)>, String> {
    let mut out = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if bytes[i] == b'#' {
            break;
        }
        let start = i;
        let mut quoted = false;
        while i < bytes.len() && (quoted || !bytes[i].is_ascii_whitespace()) {
            match bytes[i] {
                b'\\' if quoted => i += 1,
                b'"' => quoted = !quoted,
                _ => {}
            }
            i += 1;
        }
        if quoted {
            return Err("unterminated string".into());
        }
        out.push((start, &line[start..i.min(line.len())]));
    }
    Ok(out)
}

fn split_args(inner: &str) -> Result<Vec<String>, String> {
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' if quoted => {
                cur.push(c);
                cur.extend(chars.next());
            }
            '"' => {
                quoted = !quoted;
                cur.push(c);
            }
            ',' if !quoted => out.push(std::mem::take(&mut cur).trim().to_string()),
            c => cur.push(c),
        }
    }
    if quoted {
        return Err("unterminated string".into());
    }
    out.push(cur.trim().to_string());
    if out.iter().any(String::is_empty) {
        return Err("empty argument".into());
    }
    Ok(out)
}

/// `Name(a, b)` with the rest of the line already trimmed of comments.
fn parse_call(text: &str) -> Result<(String, Vec<String>), String> {
    let open = text.find('(').ok_or("expected `<command>(<args>)`")?;
    let name = text[..open].trim();
    let inner = text[open + 1..].strip_suffix(')').ok_or("expected `)` at the end of the command")?;
    if name.is_empty() || name.contains(char::is_whitespace) {
        return Err("expected a command name before `(`".into());
    }
    Ok((name.to_string(), split_args(inner)?))
}

fn parse_line(line: &str, scn: &mut Scenario, line_no: usize) -> Result<(), String> {
    let toks = tokens(line)?;
    let words: Vec<&str> = toks.iter().map(|(_, t)| *t).collect();
    match words.first() {
        None => Ok(()),
        Some(&"end") => {
            let [_, ms] = words[..] else { return Err("expected `end <ms>`".into()) };
            if scn.end.is_some() {
                return Err("duplicate `end`".into());
            }
            scn.end = Some(ms.parse().map_err(|_| format!("`{ms}` is not a time in ms"))?);
            Ok(())
        }
        Some(&"at") => {
            if words.len() < 5 || words[2] != "device" {
                return Err("expected `at <ms> device <name> emit|ui ...`".into());
            }
            let at = words[1].parse().map_err(|_| format!("`{}` is not a time in ms", words[1]))?;
            let device = words[3].to_string();
            let action = match words[4] {
                "emit" => {
                    let event = words.get(5).ok_or("expected an event name after `emit`")?.to_string();
                    let mut fields = Vec::new();
                    for w in &words[6..] {
                        let (k, v) = w.split_once('=').ok_or_else(|| format!("expected `field=value`, got `{w}`"))?;
                        if k.is_empty() || v.is_empty() {
                            return Err(format!("expected `field=value`, got `{w}`"));
                        }
                        if fields.iter().any(|(f, _): &(String, String)| f == k) {
                            return Err(format!("field `{k}` given twice"));
                        }
                        fields.push((k.to_string(), v.to_string()));
                    }
                    StepAction::Emit { event, fields }
                }
                "ui" => {
                    let start = toks.get(5).ok_or("expected `<command>(<args>)` after `ui`")?.0;
                    let end = toks.last().map(|(s, t)| s + t.len()).unwrap_or(line.len());
                    let (command, args) = parse_call(line[start..end].trim())?;
                    StepAction::Ui { command, args }
                }
                other => return Err(format!("expected `emit` or `ui`, got `{other}`")),
            };
            scn.steps.push(Step { at, device, action, line: line_no });
            Ok(())
        }
        Some(other) => Err(format!("unknown directive `{other}`")),
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, SimError> {
    let mut scn = Scenario::default();
    for (i, line) in text.lines().enumerate() {
        parse_line(line, &mut scn, i + 1).map_err(|message| SimError::ScenarioParse { line: i + 1, message })?;
    }
    Ok(scn)
}
