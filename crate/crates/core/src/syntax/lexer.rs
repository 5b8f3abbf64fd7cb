use crate::span::SourceSpan;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    /// A word: keyword or identifier. May contain `-` after the first
    /// character (`in-region`, `TemperatureMgmt-Device-1`).
    Word(String),
    Int(i64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Comma,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::Int(i) => format!("`{i}`"),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Semi => "`;`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
    last: (u32, u32),
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        self.last = (self.line, self.col);
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

fn is_word_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

pub fn tokenize(file: &str, text: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor { chars: text.chars().peekable(), line: 1, col: 1, last: (1, 1) };
    let mut out = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '/' {
                let start = (cur.line, cur.col);
                cur.bump();
                if cur.peek() == Some('/') {
                    while let Some(c) = cur.peek() {
                        if c == '\n' {
                            break;
                        }
                        cur.bump();
                    }
                } else {
                    return Err(ParseError::new(
                        file,
                        SourceSpan::point(start.0, start.1),
                        "unexpected character `/`",
                        Vec::new(),
                    ));
                }
            } else {
                break;
            }
        }
        let (line, col) = (cur.line, cur.col);
        let Some(c) = cur.peek() else {
            // End of input is reported on the last character of the last token.
            let span = out.last().map_or(SourceSpan::point(1, 1), |t: &Token| {
                SourceSpan::point(t.span.end_line, t.span.end_col)
            });
            out.push(Token { kind: TokenKind::Eof, span });
            return Ok(out);
        };
        let kind = if is_word_start(c) {
            let mut word = String::new();
            while let Some(c) = cur.peek() {
                if !is_word_char(c) {
                    break;
                }
                word.push(c);
                cur.bump();
            }
            TokenKind::Word(word)
        } else if c.is_ascii_digit() || c == '-' {
            let mut digits = String::new();
            digits.push(c);
            cur.bump();
            while let Some(c) = cur.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                digits.push(c);
                cur.bump();
            }
            match digits.parse::<i64>() {
                Ok(v) => TokenKind::Int(v),
                Err(_) => {
                    return Err(ParseError::new(
                        file,
                        SourceSpan::new(line, col, cur.last.0, cur.last.1),
                        format!("malformed integer `{digits}`"),
                        Vec::new(),
                    ))
                }
            }
        } else {
            cur.bump();
            match c {
                '{' => TokenKind::LBrace,
                '}' => TokenKind::RBrace,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                ':' => TokenKind::Colon,
                ';' => TokenKind::Semi,
                ',' => TokenKind::Comma,
                other => {
                    return Err(ParseError::new(
                        file,
                        SourceSpan::point(line, col),
                        format!("unexpected character `{other}`"),
                        Vec::new(),
                    ))
                }
            }
        };
        out.push(Token { kind, span: SourceSpan::new(line, col, cur.last.0, cur.last.1) });
    }
}
