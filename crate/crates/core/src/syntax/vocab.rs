use std::collections::{BTreeMap, HashMap, HashSet};

use crate::model::{
    ActionDecl, ActuatorDecl, DataStructure, EventDecl, Field, Loc, Param, RegionLabel, Resources,
    RetrievalDecl, SensorDecl, StorageDecl, UserInterfaceDecl, Vocabulary,
};
use crate::span::SourceSpan;

use super::{PResult, Parser, TokenKind, ANONYMOUS_FILE};

pub fn parse_vocabulary(text: &str) -> PResult<Vocabulary> {
    parse_vocabulary_named(ANONYMOUS_FILE, text)
}

/// Parses `.svl` text; `file` is only used in error locations.
pub fn parse_vocabulary_named(file: &str, text: &str) -> PResult<Vocabulary> {
    let mut p = Parser::new(file, text)?;
    let vocab = p.vocabulary()?;
    check_vocabulary(&p, &vocab)?;
    Ok(vocab)
}

const RESOURCE_KINDS: &[&str] = &["`sensors`", "`actuators`", "`storages`", "`userinterfaces`"];

impl Parser<'_> {
    fn vocabulary(&mut self) -> PResult<Vocabulary> {
        let start = self.expect_keyword("vocabulary")?;
        let (name, _) = self.name("a vocabulary name")?;
        self.expect(TokenKind::Semi)?;

        if !self.at_word("regions") {
            return Err(self.unexpected(&["`regions`"]));
        }
        let regions = self.regions()?;
        let structs = if self.at_word("structs") { self.structs()? } else { Vec::new() };
        let known: HashSet<String> = structs.iter().map(|s| s.name.clone()).collect();
        let resources =
            if self.at_word("resources") { self.resources(&known)? } else { Resources::default() };
        if !self.at_eof() {
            let expected: &[&str] = match (structs.is_empty(), resources.is_empty()) {
                (true, true) => &["`structs`", "`resources`", "end of input"],
                (false, true) => &["`resources`", "end of input"],
                _ => &["end of input"],
            };
            return Err(self.unexpected(expected));
        }
        Ok(Vocabulary { name, regions, structs, resources, loc: start.into() })
    }

    fn regions(&mut self) -> PResult<Vec<RegionLabel>> {
        let open = self.expect_keyword("regions")?;
        self.expect(TokenKind::LBrace)?;
        let mut out: Vec<RegionLabel> = Vec::new();
        while *self.peek_kind() != TokenKind::RBrace {
            let (name, span) = self.name("a region label")?;
            self.expect(TokenKind::Colon)?;
            let (ty, tspan) = self.name("`integer`")?;
            if ty != "integer" {
                return Err(self.error_at(
                    tspan,
                    format!("region type must be `integer`, found `{ty}`"),
                    &["`integer`"],
                ));
            }
            self.expect(TokenKind::Semi)?;
            if out.iter().any(|r| r.name == name) {
                return Err(self.error_at(span, format!("duplicate region label `{name}`"), &[]));
            }
            out.push(RegionLabel { name, depth: out.len(), loc: span.into() });
        }
        let close = self.bump().span;
        if out.is_empty() {
            return Err(self.error_at(open.join(close), "regions block must declare at least one region", &[]));
        }
        Ok(out)
    }

    fn structs(&mut self) -> PResult<Vec<DataStructure>> {
        self.expect_keyword("structs")?;
        self.expect(TokenKind::LBrace)?;
        let mut out: Vec<DataStructure> = Vec::new();
        while *self.peek_kind() != TokenKind::RBrace {
            let (name, span) = self.name("a struct name")?;
            if out.iter().any(|s| s.name == name) {
                return Err(self.error_at(span, format!("duplicate struct `{name}`"), &[]));
            }
            self.expect(TokenKind::LBrace)?;
            let mut fields: Vec<Field> = Vec::new();
            while *self.peek_kind() != TokenKind::RBrace {
                let (fname, fspan) = self.name("a field name")?;
                self.expect(TokenKind::Colon)?;
                let (ty, _) = self.primitive()?;
                self.expect(TokenKind::Semi)?;
                if fields.iter().any(|f| f.name == fname) {
                    return Err(self.error_at(
                        fspan,
                        format!("duplicate field `{fname}` in struct `{name}`"),
                        &[],
                    ));
                }
                fields.push(Field { name: fname, ty, loc: fspan.into() });
            }
            self.bump();
            out.push(DataStructure { name, fields, loc: span.into() });
        }
        self.bump();
        Ok(out)
    }

    fn resources(&mut self, structs: &HashSet<String>) -> PResult<Resources> {
        self.expect_keyword("resources")?;
        self.expect(TokenKind::LBrace)?;
        let mut res = Resources::default();
        let mut seen_kinds: HashSet<String> = HashSet::new();
        while *self.peek_kind() != TokenKind::RBrace {
            let kind = match self.peek_kind() {
                TokenKind::Word(w) => w.clone(),
                _ => return Err(self.unexpected(RESOURCE_KINDS)),
            };
            let kspan = self.peek().span;
            if !["sensors", "actuators", "storages", "userinterfaces"].contains(&kind.as_str()) {
                return Err(self.unexpected(RESOURCE_KINDS));
            }
            if !seen_kinds.insert(kind.clone()) {
                return Err(self.error_at(kspan, format!("duplicate `{kind}` block"), &[]));
            }
            self.bump();
            self.expect(TokenKind::LBrace)?;
            while *self.peek_kind() != TokenKind::RBrace {
                let (name, span) = self.name("a resource name")?;
                self.expect(TokenKind::LBrace)?;
                match kind.as_str() {
                    "sensors" => {
                        let generates = self.sensor_body(structs)?;
                        res.sensors.push(SensorDecl { name, generates, loc: span.into() });
                    }
                    "actuators" => {
                        let actions = self.actuator_body()?;
                        res.actuators.push(ActuatorDecl { name, actions, loc: span.into() });
                    }
                    "storages" => {
                        let retrievals = self.storage_body(structs)?;
                        res.storages.push(StorageDecl { name, retrievals, loc: span.into() });
                    }
                    _ => {
                        let (commands, actions, requests) = self.ui_body(structs)?;
                        res.user_interfaces.push(UserInterfaceDecl {
                            name,
                            commands,
                            actions,
                            requests,
                            loc: span.into(),
                        });
                    }
                }
                self.bump();
            }
            self.bump();
        }
        self.bump();
        Ok(res)
    }

    fn sensor_body(&mut self, structs: &HashSet<String>) -> PResult<Vec<EventDecl>> {
        let mut out = Vec::new();
        while *self.peek_kind() != TokenKind::RBrace {
            self.expect_keyword("generate")?;
            let (name, span) = self.name("an event name")?;
            self.expect(TokenKind::Colon)?;
            let structure = self.struct_ref(structs)?;
            self.expect(TokenKind::Semi)?;
            out.push(EventDecl { name, structure, loc: span.into() });
        }
        Ok(out)
    }

    fn actuator_body(&mut self) -> PResult<Vec<ActionDecl>> {
        let mut out = Vec::new();
        while *self.peek_kind() != TokenKind::RBrace {
            self.expect_keyword("action")?;
            out.push(self.action_signature()?);
        }
        Ok(out)
    }

    fn storage_body(&mut self, structs: &HashSet<String>) -> PResult<Vec<RetrievalDecl>> {
        let mut out = Vec::new();
        while *self.peek_kind() != TokenKind::RBrace {
            self.expect_keyword("generate")?;
            out.push(self.retrieval(structs)?);
        }
        Ok(out)
    }

    #[allow(clippy::type_complexity)]
    fn ui_body(
        &mut self,
        structs: &HashSet<String>,
    ) -> PResult<(Vec<ActionDecl>, Vec<ActionDecl>, Vec<RetrievalDecl>)> {
        let (mut commands, mut actions, mut requests) = (Vec::new(), Vec::new(), Vec::new());
        while *self.peek_kind() != TokenKind::RBrace {
            if self.at_word("command") {
                self.bump();
                commands.push(self.action_signature()?);
            } else if self.at_word("action") {
                self.bump();
                actions.push(self.action_signature()?);
            } else if self.at_word("request") {
                self.bump();
                requests.push(self.retrieval(structs)?);
            } else {
                return Err(self.unexpected(&["`command`", "`action`", "`request`", "`}`"]));
            }
        }
        Ok((commands, actions, requests))
    }

    fn struct_ref(&mut self, structs: &HashSet<String>) -> PResult<String> {
        let (name, span) = self.name("a struct name")?;
        if !structs.contains(&name) {
            return Err(self.error_at(span, format!("unresolved struct `{name}`"), &[]));
        }
        Ok(name)
    }

    /// `Name ( p: type, ... ) ;`
    fn action_signature(&mut self) -> PResult<ActionDecl> {
        let (name, span) = self.name("an action name")?;
        self.expect(TokenKind::LParen)?;
        let mut params: Vec<Param> = Vec::new();
        if *self.peek_kind() != TokenKind::RParen {
            loop {
                let (pname, pspan) = self.name("a parameter name")?;
                self.expect(TokenKind::Colon)?;
                let (ty, _) = self.primitive()?;
                if params.iter().any(|p| p.name == pname) {
                    return Err(self.error_at(pspan, format!("duplicate parameter `{pname}`"), &[]));
                }
                params.push(Param { name: pname, ty });
                if *self.peek_kind() == TokenKind::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen)?;
        self.expect(TokenKind::Semi)?;
        Ok(ActionDecl { name, params, loc: span.into() })
    }

    /// `name : Struct accessed-by key : type ;`
    fn retrieval(&mut self, structs: &HashSet<String>) -> PResult<RetrievalDecl> {
        let (name, span) = self.name("a retrieval name")?;
        self.expect(TokenKind::Colon)?;
        let structure = self.struct_ref(structs)?;
        self.expect_keyword("accessed-by")?;
        let (key, _) = self.name("an access key name")?;
        self.expect(TokenKind::Colon)?;
        let (ty, _) = self.primitive()?;
        self.expect(TokenKind::Semi)?;
        Ok(RetrievalDecl { name, structure, key: Param { name: key, ty }, loc: span.into() })
    }
}

fn span_of(loc: Loc) -> SourceSpan {
    loc.span().unwrap_or(SourceSpan::point(1, 1))
}

/// Name-level invariants that need the whole vocabulary.
fn check_vocabulary(p: &Parser<'_>, v: &Vocabulary) -> PResult<()> {
    let mut resource_names: HashSet<&str> = HashSet::new();
    for r in v.resources() {
        if !resource_names.insert(r.name()) {
            return Err(p.error_at(span_of(r.loc()), format!("duplicate resource `{}`", r.name()), &[]));
        }
    }

    let mut events: HashSet<&str> = HashSet::new();
    for s in &v.resources.sensors {
        for g in &s.generates {
            if !events.insert(&g.name) {
                return Err(p.error_at(span_of(g.loc), format!("duplicate event `{}`", g.name), &[]));
            }
        }
    }

    // Actions of the same name must agree on their signature across resources.
    let mut action_sigs: HashMap<&str, &[Param]> = HashMap::new();
    for a in &v.resources.actuators {
        let mut local = HashSet::new();
        for act in &a.actions {
            if !local.insert(&act.name) {
                return Err(p.error_at(
                    span_of(act.loc),
                    format!("duplicate action `{}` in `{}`", act.name, a.name),
                    &[],
                ));
            }
            check_signature(p, &mut action_sigs, act)?;
        }
    }
    for u in &v.resources.user_interfaces {
        let mut local = HashSet::new();
        for act in &u.actions {
            if !local.insert(&act.name) {
                return Err(p.error_at(
                    span_of(act.loc),
                    format!("duplicate action `{}` in `{}`", act.name, u.name),
                    &[],
                ));
            }
            check_signature(p, &mut action_sigs, act)?;
        }
    }

    let actuator_actions: BTreeMap<&str, &ActionDecl> = v
        .resources
        .actuators
        .iter()
        .flat_map(|a| a.actions.iter().map(|act| (act.name.as_str(), act)))
        .collect();
    for u in &v.resources.user_interfaces {
        let mut local = HashSet::new();
        for cmd in &u.commands {
            if !local.insert(&cmd.name) {
                return Err(p.error_at(
                    span_of(cmd.loc),
                    format!("duplicate command `{}` in `{}`", cmd.name, u.name),
                    &[],
                ));
            }
            match actuator_actions.get(cmd.name.as_str()) {
                Some(act) if act.params == cmd.params => {}
                Some(_) => {
                    return Err(p.error_at(
                        span_of(cmd.loc),
                        format!("command `{}` does not match the actuator action signature", cmd.name),
                        &[],
                    ))
                }
                None => {
                    return Err(p.error_at(
                        span_of(cmd.loc),
                        format!("command `{}` does not name any actuator action", cmd.name),
                        &[],
                    ))
                }
            }
        }
    }

    let mut retrievals: HashSet<&str> = HashSet::new();
    let answered = v
        .resources
        .storages
        .iter()
        .flat_map(|s| s.retrievals.iter())
        .chain(v.resources.user_interfaces.iter().flat_map(|u| u.requests.iter()));
    for q in answered {
        if !retrievals.insert(&q.name) {
            return Err(p.error_at(span_of(q.loc), format!("duplicate retrieval `{}`", q.name), &[]));
        }
    }
    Ok(())
}

fn check_signature<'v>(
    p: &Parser<'_>,
    sigs: &mut HashMap<&'v str, &'v [Param]>,
    act: &'v ActionDecl,
) -> PResult<()> {
    match sigs.get(act.name.as_str()) {
        Some(existing) if *existing != act.params.as_slice() => Err(p.error_at(
            span_of(act.loc),
            format!("action `{}` redeclared with a different signature", act.name),
            &[],
        )),
        _ => {
            sigs.insert(&act.name, &act.params);
            Ok(())
        }
    }
}
