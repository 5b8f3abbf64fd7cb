use crate::model::{Deployment, DeviceDecl, HostedResource, Loc, RegionEntry, RegionPath};
use crate::span::SourceSpan;

use super::{PResult, Parser, TokenKind, ANONYMOUS_FILE};

pub fn parse_deployment(text: &str) -> PResult<Deployment> {
    parse_deployment_named(ANONYMOUS_FILE, text)
}

/// Parses `.sdl` text. Region labels and resource names are checked
/// against the vocabulary later, by the validator.
pub fn parse_deployment_named(file: &str, text: &str) -> PResult<Deployment> {
    let mut p = Parser::new(file, text)?;
    let start = p.expect_keyword("deployment")?;
    let (name, _) = p.name("a deployment name")?;
    p.expect_keyword("uses")?;
    let (vocabulary_name, _) = p.name("a vocabulary name")?;
    let head_end = p.expect(TokenKind::Semi)?;

    let mut devices: Vec<DeviceDecl> = Vec::new();
    while !p.at_eof() {
        if !p.at_word("device") {
            return Err(p.unexpected(&["`device`"]));
        }
        let dev = p.device()?;
        if devices.iter().any(|d| d.name == dev.name) {
            let span = dev.loc.span().expect("parsed device has a span");
            return Err(p.error_at(span, format!("duplicate device `{}`", dev.name), &[]));
        }
        devices.push(dev);
    }
    if devices.is_empty() {
        return Err(p.error_at(start.join(head_end), "deployment declares no devices", &["`device`"]));
    }
    Ok(Deployment { name, vocabulary_name, devices, loc: start.into() })
}

const CLAUSES: &[&str] = &["`region`", "`resources`", "`type`", "`mobile`", "`}`"];

impl Parser<'_> {
    fn device(&mut self) -> PResult<DeviceDecl> {
        self.expect_keyword("device")?;
        let (name, span) = self.name("a device name")?;
        self.expect(TokenKind::LBrace)?;

        let mut region: Option<(RegionPath, Loc)> = None;
        let mut resources: Option<Vec<HostedResource>> = None;
        let mut platform: Option<String> = None;
        let mut mobile: Option<bool> = None;

        loop {
            let kw_span = self.peek().span;
            let kw = match self.peek_kind() {
                TokenKind::RBrace => break,
                TokenKind::Word(w) => w.clone(),
                _ => return Err(self.unexpected(CLAUSES)),
            };
            let dup = |p: &Parser<'_>| p.error_at(kw_span, format!("duplicate `{kw}` clause"), &[]);
            match kw.as_str() {
                "region" => {
                    if region.is_some() {
                        return Err(dup(self));
                    }
                    self.bump();
                    region = Some(self.region_block(kw_span)?);
                }
                "resources" => {
                    if resources.is_some() {
                        return Err(dup(self));
                    }
                    self.bump();
                    self.expect(TokenKind::LBrace)?;
                    let names = self.name_list(TokenKind::RBrace, "a resource name")?;
                    self.expect(TokenKind::RBrace)?;
                    resources = Some(
                        names.into_iter().map(|(name, s)| HostedResource { name, loc: s.into() }).collect(),
                    );
                }
                "type" => {
                    if platform.is_some() {
                        return Err(dup(self));
                    }
                    self.bump();
                    self.expect(TokenKind::Colon)?;
                    let (t, _) = self.name("a platform type")?;
                    self.expect(TokenKind::Semi)?;
                    platform = Some(t);
                }
                "mobile" => {
                    if mobile.is_some() {
                        return Err(dup(self));
                    }
                    self.bump();
                    self.expect(TokenKind::Colon)?;
                    let value = if self.at_word("true") {
                        true
                    } else if self.at_word("false") {
                        false
                    } else {
                        return Err(self.unexpected(&["`true`", "`false`"]));
                    };
                    self.bump();
                    self.expect(TokenKind::Semi)?;
                    mobile = Some(value);
                }
                _ => return Err(self.unexpected(CLAUSES)),
            }
        }
        let close = self.bump().span;
        let missing = |what: &str| {
            self.error_at(close, format!("device `{name}` is missing its `{what}` clause"), &[])
        };
        let (region, region_loc) = region.ok_or_else(|| missing("region"))?;
        let resources = resources.ok_or_else(|| missing("resources"))?;
        let platform_type = platform.ok_or_else(|| missing("type"))?;
        let mobile = mobile.ok_or_else(|| missing("mobile"))?;
        Ok(DeviceDecl { name, region, region_loc, resources, platform_type, mobile, loc: span.into() })
    }

    /// `region { Label: value; ... }` with the `region` keyword consumed.
    fn region_block(&mut self, start: SourceSpan) -> PResult<(RegionPath, Loc)> {
        self.expect(TokenKind::LBrace)?;
        let mut entries: Vec<RegionEntry> = Vec::new();
        while *self.peek_kind() != TokenKind::RBrace {
            let entry_start = self.peek().span;
            let (label, lspan) = match self.peek_kind().clone() {
                TokenKind::Word(w) => (w, self.bump().span),
                _ => {
                    return Err(self.error_at(
                        entry_start,
                        "malformed region entry, expected <Label>:<value>;",
                        &["a region label"],
                    ))
                }
            };
            if *self.peek_kind() != TokenKind::Colon {
                return Err(self.error_at(
                    self.peek().span,
                    "malformed region entry, expected <Label>:<value>;",
                    &["`:`"],
                ));
            }
            self.bump();
            let value = match self.peek_kind().clone() {
                TokenKind::Int(v) => {
                    self.bump();
                    v
                }
                _ => {
                    return Err(self.error_at(
                        self.peek().span,
                        "malformed region entry, expected an integer region value",
                        &["an integer"],
                    ))
                }
            };
            self.expect(TokenKind::Semi)?;
            if entries.iter().any(|e| e.label == label) {
                return Err(self.error_at(lspan, format!("duplicate region label `{label}`"), &[]));
            }
            entries.push(RegionEntry { label, value });
        }
        let close = self.bump().span;
        Ok((RegionPath(entries), start.join(close).into()))
    }
}
