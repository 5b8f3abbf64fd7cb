//! Lexing, parsing and canonical printing of `.svl`, `.sal` and `.sdl` text.
//!
//! The three languages share one lexer: words (keywords and identifiers,
//! `-` allowed after the first character), integers, the punctuation
//! `{ } ( ) : ; ,`, and `//` line comments. Keywords are recognised by
//! position, so a keyword in one language is an ordinary identifier in
//! another. The full grammar is in `docs/grammar.md`.

mod arch;
mod deploy;
mod lexer;
mod print;
mod vocab;

use std::fmt;

use crate::span::SourceSpan;

pub use arch::{parse_architecture, parse_architecture_named};
pub use deploy::{parse_deployment, parse_deployment_named};
pub use lexer::{tokenize, Token, TokenKind};
pub use print::{print_architecture, print_deployment, print_vocabulary};
pub use vocab::{parse_vocabulary, parse_vocabulary_named};

/// File name used when text is parsed without one.
pub const ANONYMOUS_FILE: &str = "<input>";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub file: String,
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(
        file: &str,
        span: SourceSpan,
        message: impl Into<String>,
        expected: Vec<String>,
    ) -> Self {
        let message = message.into();
        debug_assert!(!message.is_empty());
        Self { file: file.to_string(), span, message, expected }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: error: {}", self.file, self.span, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

pub(crate) type PResult<T> = Result<T, ParseError>;

/// Token cursor shared by the three parsers.
pub(crate) struct Parser<'a> {
    file: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(file: &'a str, text: &str) -> PResult<Self> {
        Ok(Self { file, toks: tokenize(file, text)?, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub(crate) fn peek_kind(&self) -> &TokenKind {
        &self.peek().kind
    }

    pub(crate) fn bump(&mut self) -> Token {
        let tok = self.toks[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        tok
    }

    pub(crate) fn at_eof(&self) -> bool {
        self.peek().kind == TokenKind::Eof
    }

    pub(crate) fn at_word(&self, word: &str) -> bool {
        matches!(self.peek_kind(), TokenKind::Word(w) if w == word)
    }

    pub(crate) fn error_at(
        &self,
        span: SourceSpan,
        message: impl Into<String>,
        expected: &[&str],
    ) -> ParseError {
        ParseError::new(self.file, span, message, expected.iter().map(|s| s.to_string()).collect())
    }

    pub(crate) fn unexpected(&self, expected: &[&str]) -> ParseError {
        let tok = self.peek();
        let message = match &tok.kind {
            TokenKind::Word(w) if expected.iter().all(|e| e.starts_with('`')) => {
                format!("unknown keyword `{w}`")
            }
            other => format!("unexpected {}", other.describe()),
        };
        self.error_at(tok.span, message, expected)
    }

    pub(crate) fn expect(&mut self, kind: TokenKind) -> PResult<SourceSpan> {
        if *self.peek_kind() == kind {
            Ok(self.bump().span)
        } else {
            let want = kind.describe();
            Err(self.error_at(
                self.peek().span,
                format!("unexpected {}", self.peek_kind().describe()),
                &[want.as_str()],
            ))
        }
    }

    pub(crate) fn expect_keyword(&mut self, word: &str) -> PResult<SourceSpan> {
        if self.at_word(word) {
            Ok(self.bump().span)
        } else {
            let want = format!("`{word}`");
            Err(self.unexpected(&[want.as_str()]))
        }
    }

    /// Any word, used as a name.
    pub(crate) fn name(&mut self, what: &str) -> PResult<(String, SourceSpan)> {
        match self.peek_kind().clone() {
            TokenKind::Word(w) => Ok((w, self.bump().span)),
            other => Err(self.error_at(
                self.peek().span,
                format!("unexpected {}, expected {what}", other.describe()),
                &[what],
            )),
        }
    }

    pub(crate) fn primitive(&mut self) -> PResult<(crate::model::PrimitiveType, SourceSpan)> {
        let (word, span) = self.name("a primitive type")?;
        match crate::model::PrimitiveType::from_keyword(&word) {
            Some(ty) => Ok((ty, span)),
            None => Err(self.error_at(
                span,
                format!("unknown primitive type `{word}`"),
                &["`string`", "`integer`", "`long`", "`double`", "`boolean`"],
            )),
        }
    }

    /// `hops : <uint> : <Label>`, the `hops` keyword included.
    pub(crate) fn hops(&mut self) -> PResult<(crate::model::ScopeSpec, SourceSpan)> {
        let start = self.expect_keyword("hops")?;
        self.expect(TokenKind::Colon)?;
        let (radius, rspan) = match self.peek_kind().clone() {
            TokenKind::Int(v) => (v, self.bump().span),
            _ => {
                return Err(self.error_at(
                    self.peek().span,
                    "malformed hops clause, expected hops:<radius>:<label>",
                    &["an integer radius"],
                ))
            }
        };
        if radius < 0 {
            return Err(self.error_at(rspan, "radius must be non-negative", &[]));
        }
        let radius = u32::try_from(radius)
            .map_err(|_| self.error_at(rspan, "radius out of range", &[]))?;
        if *self.peek_kind() != TokenKind::Colon {
            return Err(self.error_at(
                self.peek().span,
                "malformed hops clause, expected hops:<radius>:<label>",
                &["`:`"],
            ));
        }
        self.bump();
        let (label, lspan) = self.name("a region label")?;
        Ok((crate::model::ScopeSpec { radius, label }, start.join(lspan)))
    }

    /// Comma-separated names up to (not including) `close`.
    pub(crate) fn name_list(
        &mut self,
        close: TokenKind,
        what: &str,
    ) -> PResult<Vec<(String, SourceSpan)>> {
        let mut out = Vec::new();
        if *self.peek_kind() == close {
            return Ok(out);
        }
        loop {
            out.push(self.name(what)?);
            if *self.peek_kind() == TokenKind::Comma {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }
}
