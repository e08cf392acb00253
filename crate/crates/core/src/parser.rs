//! Lexer and recursive-descent parser for `.ett` source files.
//!
//! ```text
//! program   ::= { "def" IDENT ":" expr ":=" expr }
//! expr      ::= "\" IDENT+ "." expr
//!             | "let" IDENT ":" expr ":=" expr ";" expr
//!             | "(" IDENT ":" expr ")" "->" expr | appexpr "->" expr
//!             | "(" IDENT ":" expr ")" "*" expr  | appexpr "*" expr
//!             | appexpr
//! appexpr   ::= projexpr { projexpr }
//! projexpr  ::= atom { ".1" | ".2" }
//! atom      ::= IDENT | "U" | "Unit" | "tt" | "(" expr "," expr ")" | "(" expr ")"
//! ```
//!
//! `--` starts a comment that runs to the end of the line.

use std::collections::HashSet;
use std::fmt;

use crate::syntax::{Name, RawKind, RawTerm, Span, ANON};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    fn error(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic { severity: Severity::Error, message: message.into(), span }
    }

    /// Renders as `line:col: error: message` against the original source.
    pub fn render(&self, src: &str) -> String {
        let (line, col) = line_col(src, self.span.start);
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        format!("{line}:{col}: {sev}: {}", self.message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}: {}", self.span.start, self.span.end, self.message)
    }
}

/// 1-based line and column of a byte offset.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(src.len());
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    (line, col)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDecl {
    pub name: Name,
    pub name_span: Span,
    pub ty: RawTerm,
    pub body: RawTerm,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawProgram {
    pub decls: Vec<RawDecl>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(Name),
    Def,
    Let,
    Univ,
    UnitType,
    UnitVal,
    Backslash,
    Dot,
    Proj1,
    Proj2,
    Colon,
    Define,
    Semi,
    Arrow,
    Star,
    Comma,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(n) => format!("identifier `{n}`"),
            Tok::Def => "`def`".into(),
            Tok::Let => "`let`".into(),
            Tok::Univ => "`U`".into(),
            Tok::UnitType => "`Unit`".into(),
            Tok::UnitVal => "`tt`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Proj1 => "`.1`".into(),
            Tok::Proj2 => "`.2`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Define => "`:=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Star => "`*`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, Diagnostic> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = src[i..].chars().next().expect("in bounds");
        let start = i;
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if src[i..].starts_with("--") {
            i = src[i..].find('\n').map_or(src.len(), |n| i + n);
            continue;
        }
        let (tok, len) = match c {
            '\\' => (Tok::Backslash, 1),
            '.' => match bytes.get(i + 1) {
                Some(b'1') => (Tok::Proj1, 2),
                Some(b'2') => (Tok::Proj2, 2),
                _ => (Tok::Dot, 1),
            },
            ':' if bytes.get(i + 1) == Some(&b'=') => (Tok::Define, 2),
            ':' => (Tok::Colon, 1),
            ';' => (Tok::Semi, 1),
            '-' if bytes.get(i + 1) == Some(&b'>') => (Tok::Arrow, 2),
            '*' => (Tok::Star, 1),
            ',' => (Tok::Comma, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            c if is_ident_start(c) => {
                let len = src[i..].find(|c: char| !is_ident_char(c)).unwrap_or(src.len() - i);
                let word = &src[i..i + len];
                let tok = match word {
                    "def" => Tok::Def,
                    "let" => Tok::Let,
                    "U" => Tok::Univ,
                    "Unit" => Tok::UnitType,
                    "tt" => Tok::UnitVal,
                    w => Tok::Ident(w.into()),
                };
                (tok, len)
            }
            c => {
                return Err(Diagnostic::error(
                    Span::new(start, start + c.len_utf8()),
                    format!("unexpected character `{c}`"),
                ))
            }
        };
        i += len;
        toks.push((tok, Span::new(start, i)));
    }
    toks.push((Tok::Eof, Span::new(src.len(), src.len())));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].1.end
        }
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        let span = self.span();
        // Zero-width spans at end of input still need to be non-empty for reporting.
        let span = if span.start == span.end { Span::new(span.start.saturating_sub(1), span.end) } else { span };
        Diagnostic::error(span, format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn ident(&mut self) -> PResult<(Name, Span)> {
        match self.peek().clone() {
            Tok::Ident(n) => {
                let sp = self.bump().1;
                Ok((n, sp))
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn program(&mut self) -> PResult<RawProgram> {
        let mut decls = Vec::new();
        let mut seen = HashSet::new();
        while *self.peek() != Tok::Eof {
            self.expect(Tok::Def)?;
            let (name, name_span) = self.ident()?;
            if &*name == ANON {
                return Err(Diagnostic::error(name_span, "`_` cannot name a definition"));
            }
            if !seen.insert(name.clone()) {
                return Err(Diagnostic::error(name_span, format!("duplicate definition `{name}`")));
            }
            self.expect(Tok::Colon)?;
            let ty = self.expr()?;
            self.expect(Tok::Define)?;
            let body = self.expr()?;
            decls.push(RawDecl { name, name_span, ty, body });
        }
        Ok(RawProgram { decls })
    }

    fn expr(&mut self) -> PResult<RawTerm> {
        let start = self.span().start;
        match self.peek() {
            Tok::Backslash => {
                self.bump();
                let mut names = vec![self.ident()?.0];
                while let Tok::Ident(_) = self.peek() {
                    names.push(self.ident()?.0);
                }
                self.expect(Tok::Dot)?;
                let body = self.expr()?;
                let span = Span::new(start, self.prev_end());
                Ok(names.into_iter().rev().fold(body, |body, n| RawTerm::new(span, RawKind::Lam(n, Box::new(body)))))
            }
            Tok::Let => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect(Tok::Colon)?;
                let ty = self.expr()?;
                self.expect(Tok::Define)?;
                let bound = self.expr()?;
                self.expect(Tok::Semi)?;
                let body = self.expr()?;
                let span = Span::new(start, self.prev_end());
                Ok(RawTerm::new(span, RawKind::Let(name, Box::new(ty), Box::new(bound), Box::new(body))))
            }
            Tok::LParen if matches!(self.peek_at(1), Tok::Ident(_)) && *self.peek_at(2) == Tok::Colon => {
                self.bump();
                let (name, _) = self.ident()?;
                self.expect(Tok::Colon)?;
                let dom = self.expr()?;
                self.expect(Tok::RParen)?;
                let is_pi = match self.peek() {
                    Tok::Arrow => true,
                    Tok::Star => false,
                    _ => return Err(self.unexpected("`->` or `*` after a binder")),
                };
                self.bump();
                let cod = self.expr()?;
                let span = Span::new(start, self.prev_end());
                let kind = if is_pi {
                    RawKind::Pi(name, Box::new(dom), Box::new(cod))
                } else {
                    RawKind::Sigma(name, Box::new(dom), Box::new(cod))
                };
                Ok(RawTerm::new(span, kind))
            }
            _ => {
                let lhs = self.app_expr()?;
                let is_pi = match self.peek() {
                    Tok::Arrow => true,
                    Tok::Star => false,
                    _ => return Ok(lhs),
                };
                self.bump();
                let rhs = self.expr()?;
                let span = Span::new(start, self.prev_end());
                let anon: Name = ANON.into();
                let kind = if is_pi {
                    RawKind::Pi(anon, Box::new(lhs), Box::new(rhs))
                } else {
                    RawKind::Sigma(anon, Box::new(lhs), Box::new(rhs))
                };
                Ok(RawTerm::new(span, kind))
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Univ | Tok::UnitType | Tok::UnitVal | Tok::LParen)
    }

    fn app_expr(&mut self) -> PResult<RawTerm> {
        let start = self.span().start;
        let mut head = self.proj_expr()?;
        while self.starts_atom() {
            let arg = self.proj_expr()?;
            let span = Span::new(start, self.prev_end());
            head = RawTerm::new(span, RawKind::App(Box::new(head), Box::new(arg)));
        }
        Ok(head)
    }

    fn proj_expr(&mut self) -> PResult<RawTerm> {
        let start = self.span().start;
        let mut t = self.atom()?;
        loop {
            let kind = match self.peek() {
                Tok::Proj1 => RawKind::Fst(Box::new(t)),
                Tok::Proj2 => RawKind::Snd(Box::new(t)),
                _ => return Ok(t),
            };
            self.bump();
            t = RawTerm::new(Span::new(start, self.prev_end()), kind);
        }
    }

    fn atom(&mut self) -> PResult<RawTerm> {
        let start = self.span().start;
        let kind = match self.peek().clone() {
            Tok::Ident(n) => {
                self.bump();
                RawKind::Var(n)
            }
            Tok::Univ => {
                self.bump();
                RawKind::Univ
            }
            Tok::UnitType => {
                self.bump();
                RawKind::UnitType
            }
            Tok::UnitVal => {
                self.bump();
                RawKind::UnitVal
            }
            Tok::LParen => {
                self.bump();
                let first = self.expr()?;
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                        let second = self.expr()?;
                        self.expect(Tok::RParen)?;
                        RawKind::Pair(Box::new(first), Box::new(second))
                    }
                    Tok::RParen => {
                        self.bump();
                        // Keep the inner node, widened to cover the parentheses.
                        return Ok(RawTerm::new(Span::new(start, self.prev_end()), first.kind));
                    }
                    _ => return Err(self.unexpected("`,` or `)`")),
                }
            }
            _ => return Err(self.unexpected("an expression")),
        };
        Ok(RawTerm::new(Span::new(start, self.prev_end()), kind))
    }
}

/// Parses a whole program. On failure at least one error diagnostic is
/// returned; parsing stops at the first error.
pub fn parse_program(src: &str) -> Result<RawProgram, Vec<Diagnostic>> {
    let toks = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser { toks, pos: 0 };
    p.program().map_err(|d| vec![d])
}

/// Parses a single expression (used by tests and the REPL-ish helpers).
pub fn parse_expr(src: &str) -> Result<RawTerm, Vec<Diagnostic>> {
    let toks = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr().map_err(|d| vec![d])?;
    if *p.peek() != Tok::Eof {
        return Err(vec![p.unexpected("end of input")]);
    }
    Ok(e)
}
