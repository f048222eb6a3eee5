//! Reader for the canonical term syntax.
//!
//! `\x. body` (or `λx. body`, with `\x y. body` as shorthand), application by
//! juxtaposition, constants start with an uppercase letter and may carry a
//! `#k` type index, everything else is a variable.

use std::str::FromStr;

use thiserror::Error;

use super::Term;
use crate::types::is_ident_char;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermSyntaxError {
    #[error("unexpected {found} at offset {offset}")]
    Unexpected { found: String, offset: usize },
    #[error("bad type index after `#` at offset {offset}")]
    BadIndex { offset: usize },
    #[error("empty term")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    Comma,
    Open,
    Close,
    Ident(String, Option<usize>),
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, TermSyntaxError> {
    let mut out = Vec::new();
    let mut it = input.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '\\' | 'λ' => {
                it.next();
                out.push((i, Tok::Lambda));
            }
            '.' => {
                it.next();
                out.push((i, Tok::Dot));
            }
            ',' => {
                it.next();
                out.push((i, Tok::Comma));
            }
            '(' => {
                it.next();
                out.push((i, Tok::Open));
            }
            ')' => {
                it.next();
                out.push((i, Tok::Close));
            }
            c if is_ident_char(c) => {
                let mut name = String::new();
                while let Some(&(_, c)) = it.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    name.push(c);
                    it.next();
                }
                let mut index = None;
                if let Some(&(j, '#')) = it.peek() {
                    it.next();
                    let mut digits = String::new();
                    while let Some(&(_, c)) = it.peek() {
                        if !c.is_ascii_digit() {
                            break;
                        }
                        digits.push(c);
                        it.next();
                    }
                    index = Some(digits.parse().map_err(|_| TermSyntaxError::BadIndex { offset: j })?);
                }
                out.push((i, Tok::Ident(name, index)));
            }
            other => {
                return Err(TermSyntaxError::Unexpected {
                    found: format!("`{other}`"),
                    offset: i,
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn error(&self) -> TermSyntaxError {
        match self.toks.get(self.pos) {
            Some((offset, tok)) => TermSyntaxError::Unexpected {
                found: format!("{tok:?}"),
                offset: *offset,
            },
            None => TermSyntaxError::Unexpected {
                found: "end of input".into(),
                offset: self.end,
            },
        }
    }

    fn term(&mut self) -> Result<Term, TermSyntaxError> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.abstraction();
        }
        let mut t = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Ident(..)) | Some(Tok::Open) => {
                    let a = self.atom()?;
                    t = Term::app(t, a);
                }
                Some(Tok::Lambda) => {
                    let a = self.abstraction()?;
                    return Ok(Term::app(t, a));
                }
                _ => return Ok(t),
            }
        }
    }

    fn abstraction(&mut self) -> Result<Term, TermSyntaxError> {
        self.pos += 1;
        let mut binders = Vec::new();
        loop {
            match self.peek().cloned() {
                Some(Tok::Ident(name, None)) if !starts_upper(&name) => {
                    self.pos += 1;
                    binders.push(name);
                }
                Some(Tok::Comma) if !binders.is_empty() => self.pos += 1,
                Some(Tok::Dot) if !binders.is_empty() => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error()),
            }
        }
        let body = self.term()?;
        Ok(Term::abs_all(binders, body))
    }

    fn atom(&mut self) -> Result<Term, TermSyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name, index)) => {
                self.pos += 1;
                if starts_upper(&name) {
                    Ok(Term::constant(name.to_lowercase(), index.unwrap_or(0)))
                } else if index.is_some() {
                    Err(TermSyntaxError::BadIndex {
                        offset: self.toks[self.pos - 1].0,
                    })
                } else {
                    Ok(Term::Var(name))
                }
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let t = self.term()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(self.error());
                }
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error()),
        }
    }
}

fn starts_upper(name: &str) -> bool {
    name.chars().next().is_some_and(char::is_uppercase)
}

impl FromStr for Term {
    type Err = TermSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks = lex(s)?;
        if toks.is_empty() {
            return Err(TermSyntaxError::Empty);
        }
        let mut p = Parser {
            toks,
            pos: 0,
            end: s.len(),
        };
        let t = p.term()?;
        if p.pos != p.toks.len() {
            return Err(p.error());
        }
        Ok(t)
    }
}
