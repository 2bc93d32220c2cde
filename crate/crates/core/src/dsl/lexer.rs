use std::sync::Arc;

use super::error::{ErrorKind, Location, ScriptError};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Let,
    Load,
    Save,
    Print,
    Import,
    Ident(String),
    Number(f64),
    Str(String),
    LParen,
    RParen,
    Comma,
    Equals,
    /// An infix or prefix operator symbol, `S` included.
    Op(&'static str),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub location: Location,
}

/// Operator spellings, longest first so that matching is greedy.
const OPERATORS: &[&str] = &[
    ".<=.", ".>=.", ".*.", ".+.", "./.", ".-.", ".<.", ".>.", ">=.", "<=.", ">.", "<.", "+.",
    "-.", "*.", ">=", "<=", "&", "|", "!", ">", "<", "+", "-", "*",
];

pub fn tokenize(source: &str, file: &str) -> Result<Vec<Token>, ScriptError> {
    Lexer::new(source, file).run()
}

struct Lexer<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    line: u32,
    line_start: usize,
    file: Arc<str>,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, file: &str) -> Self {
        Self {
            src: text.as_bytes(),
            text,
            pos: 0,
            line: 1,
            line_start: 0,
            file: file.into(),
        }
    }

    fn location(&self, pos: usize) -> Location {
        Location {
            file: self.file.clone(),
            line: self.line,
            column: (self.text[self.line_start..pos].chars().count() + 1) as u32,
        }
    }

    fn peek(&self, offset: usize) -> Option<u8> {
        self.src.get(self.pos + offset).copied()
    }

    fn run(mut self) -> Result<Vec<Token>, ScriptError> {
        let mut out = Vec::new();
        while let Some(c) = self.peek(0) {
            let start = self.pos;
            match c {
                b'\n' => {
                    self.pos += 1;
                    self.line += 1;
                    self.line_start = self.pos;
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                b'/' if self.peek(1) == Some(b'/') => {
                    while self.peek(0).is_some_and(|c| c != b'\n') {
                        self.pos += 1;
                    }
                }
                b'(' | b')' | b',' | b'=' => {
                    self.pos += 1;
                    let tok = match c {
                        b'(' => Tok::LParen,
                        b')' => Tok::RParen,
                        b',' => Tok::Comma,
                        _ => Tok::Equals,
                    };
                    out.push(self.token(tok, start));
                }
                b'"' => {
                    let s = self.string()?;
                    out.push(self.token(Tok::Str(s), start));
                }
                c if c.is_ascii_digit() => {
                    let n = self.number()?;
                    out.push(self.token(Tok::Number(n), start));
                }
                c if c.is_ascii_alphabetic() => {
                    while self
                        .peek(0)
                        .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                    {
                        self.pos += 1;
                    }
                    let word = &self.text[start..self.pos];
                    let tok = match word {
                        "let" => Tok::Let,
                        "load" => Tok::Load,
                        "save" => Tok::Save,
                        "print" => Tok::Print,
                        "import" => Tok::Import,
                        "S" => Tok::Op("S"),
                        _ => Tok::Ident(word.to_string()),
                    };
                    out.push(self.token(tok, start));
                }
                _ => {
                    let rest = &self.text[self.pos..];
                    match OPERATORS.iter().find(|op| rest.starts_with(**op)) {
                        Some(op) => {
                            self.pos += op.len();
                            out.push(self.token(Tok::Op(op), start));
                        }
                        None => {
                            let ch = rest.chars().next().unwrap_or('?');
                            return Err(ScriptError::at(
                                ErrorKind::Lex,
                                &self.location(start),
                                format!("unexpected character `{ch}`"),
                            ));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn token(&self, tok: Tok, start: usize) -> Token {
        Token {
            tok,
            location: self.location(start),
        }
    }

    fn string(&mut self) -> Result<String, ScriptError> {
        let start = self.pos;
        self.pos += 1;
        let mut s = String::new();
        loop {
            let rest = &self.text[self.pos..];
            let Some(c) = rest.chars().next() else {
                break;
            };
            match c {
                '"' => {
                    self.pos += 1;
                    return Ok(s);
                }
                '\n' => break,
                '\\' if matches!(rest[1..].chars().next(), Some('"' | '\\')) => {
                    s.push(rest[1..].chars().next().unwrap());
                    self.pos += 2;
                }
                c => {
                    s.push(c);
                    self.pos += c.len_utf8();
                }
            }
        }
        Err(ScriptError::at(
            ErrorKind::Lex,
            &self.location(start),
            "unterminated string literal",
        ))
    }

    fn number(&mut self) -> Result<f64, ScriptError> {
        let start = self.pos;
        let digits = |lx: &mut Self| {
            while lx.peek(0).is_some_and(|c| c.is_ascii_digit()) {
                lx.pos += 1;
            }
        };
        digits(self);
        if self.peek(0) == Some(b'.') && self.peek(1).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.peek(0), Some(b'e' | b'E')) {
            let sign = usize::from(matches!(self.peek(1), Some(b'+' | b'-')));
            if self.peek(1 + sign).is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1 + sign;
                digits(self);
            }
        }
        self.text[start..self.pos].parse().map_err(|_| {
            ScriptError::at(
                ErrorKind::Lex,
                &self.location(start),
                "malformed number literal",
            )
        })
    }
}
