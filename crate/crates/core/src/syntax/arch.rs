use std::collections::HashSet;

use crate::model::{
    Architecture, CommandDecl, ComputationalService, ConsumeDecl, GenerateDecl, Loc, RequestDecl,
};

use super::{PResult, Parser, TokenKind, ANONYMOUS_FILE};

pub fn parse_architecture(text: &str) -> PResult<Architecture> {
    parse_architecture_named(ANONYMOUS_FILE, text)
}

/// Parses `.sal` text. Names are not resolved against a vocabulary here;
/// that is the validator's job.
pub fn parse_architecture_named(file: &str, text: &str) -> PResult<Architecture> {
    let mut p = Parser::new(file, text)?;
    let start = p.expect_keyword("architecture")?;
    let (name, _) = p.name("an architecture name")?;
    p.expect_keyword("uses")?;
    let (vocabulary_name, _) = p.name("a vocabulary name")?;
    p.expect(TokenKind::Semi)?;

    let mut services: Vec<ComputationalService> = Vec::new();
    while !p.at_eof() {
        if !p.at_word("computationalService") {
            return Err(p.unexpected(&["`computationalService`"]));
        }
        let svc = p.service()?;
        if services.iter().any(|s| s.name == svc.name) {
            let span = svc.loc.span().expect("parsed service has a span");
            return Err(p.error_at(span, format!("duplicate service `{}`", svc.name), &[]));
        }
        services.push(svc);
    }
    Ok(Architecture { name, vocabulary_name, services, loc: start.into() })
}

const CLAUSES: &[&str] = &["`consume`", "`generate`", "`request`", "`command`", "`in-region`", "`}`"];

impl Parser<'_> {
    fn service(&mut self) -> PResult<ComputationalService> {
        self.expect_keyword("computationalService")?;
        let (name, span) = self.name("a service name")?;
        self.expect(TokenKind::LBrace)?;

        let mut consumes: Vec<ConsumeDecl> = Vec::new();
        let mut generates: Vec<GenerateDecl> = Vec::new();
        let mut requests: Vec<RequestDecl> = Vec::new();
        let mut commands: Vec<CommandDecl> = Vec::new();
        let mut in_region: Option<(String, Loc)> = None;

        let mut consumed = HashSet::new();
        let mut generated = HashSet::new();
        loop {
            let kw_span = self.peek().span;
            let kw = match self.peek_kind() {
                TokenKind::RBrace => break,
                TokenKind::Word(w) => w.clone(),
                _ => return Err(self.unexpected(CLAUSES)),
            };
            match kw.as_str() {
                "consume" => {
                    self.bump();
                    let (event, espan) = self.name("an event name")?;
                    self.expect_keyword("from")?;
                    let (scope, _) = self.hops()?;
                    self.expect(TokenKind::Semi)?;
                    if !consumed.insert(event.clone()) {
                        return Err(self.error_at(espan, format!("duplicate consume `{event}`"), &[]));
                    }
                    consumes.push(ConsumeDecl { event, scope, loc: espan.into() });
                }
                "generate" => {
                    self.bump();
                    let (event, espan) = self.name("an event name")?;
                    self.expect(TokenKind::Colon)?;
                    let (structure, _) = self.name("a struct name")?;
                    self.expect(TokenKind::Semi)?;
                    if !generated.insert(event.clone()) {
                        return Err(self.error_at(espan, format!("duplicate generate `{event}`"), &[]));
                    }
                    generates.push(GenerateDecl { event, structure, loc: espan.into() });
                }
                "request" => {
                    self.bump();
                    let (retrieval, rspan) = self.name("a retrieval name")?;
                    self.expect(TokenKind::Semi)?;
                    requests.push(RequestDecl { retrieval, loc: rspan.into() });
                }
                "command" => {
                    self.bump();
                    let (action, aspan) = self.name("an action name")?;
                    self.expect(TokenKind::LParen)?;
                    let args = self
                        .name_list(TokenKind::RParen, "an argument name")?
                        .into_iter()
                        .map(|(n, _)| n)
                        .collect();
                    self.expect(TokenKind::RParen)?;
                    self.expect_keyword("to")?;
                    let (scope, _) = self.hops()?;
                    self.expect(TokenKind::Semi)?;
                    commands.push(CommandDecl { action, args, scope, loc: aspan.into() });
                }
                "in-region" => {
                    self.bump();
                    self.expect(TokenKind::Colon)?;
                    let (label, lspan) = self.name("a region label")?;
                    self.expect(TokenKind::Semi)?;
                    if in_region.is_some() {
                        return Err(self.error_at(kw_span, "duplicate in-region clause", &[]));
                    }
                    in_region = Some((label, lspan.into()));
                }
                _ => return Err(self.unexpected(CLAUSES)),
            }
        }
        let close = self.bump().span;
        let Some((in_region, in_region_loc)) = in_region else {
            return Err(self.error_at(
                close,
                format!("missing in-region clause in service `{name}`"),
                &["`in-region`"],
            ));
        };
        Ok(ComputationalService {
            name,
            consumes,
            generates,
            requests,
            commands,
            in_region,
            in_region_loc,
            loc: span.into(),
        })
    }
}
