//! Oriented (directional) Lambek types.
//!
//! A type is either an atom or `c(α, β)` where `c` is one of the two slashes:
//! `/(α, β)` is written `β/α` and takes its argument on the right, `\(α, β)`
//! is written `α\β` and takes its argument on the left.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The two slashes of the product-free Lambek calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Connective {
    /// `/`: the argument sits to the right.
    Over,
    /// `\`: the argument sits to the left.
    Under,
}

impl Connective {
    pub const BOTH: [Connective; 2] = [Connective::Over, Connective::Under];

    /// The complementary slash (`c̃`).
    pub fn complement(self) -> Connective {
        match self {
            Connective::Over => Connective::Under,
            Connective::Under => Connective::Over,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Connective::Over => '/',
            Connective::Under => '\\',
        }
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrientedType {
    Atom(String),
    Slash {
        connective: Connective,
        argument: Box<OrientedType>,
        result: Box<OrientedType>,
    },
}

impl OrientedType {
    pub fn atom(name: impl Into<String>) -> Self {
        OrientedType::Atom(name.into())
    }

    /// `c(argument, result)`.
    pub fn slash(connective: Connective, argument: OrientedType, result: OrientedType) -> Self {
        OrientedType::Slash {
            connective,
            argument: Box::new(argument),
            result: Box::new(result),
        }
    }

    /// `result/argument`.
    pub fn over(result: OrientedType, argument: OrientedType) -> Self {
        Self::slash(Connective::Over, argument, result)
    }

    /// `argument\result`.
    pub fn under(argument: OrientedType, result: OrientedType) -> Self {
        Self::slash(Connective::Under, argument, result)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, OrientedType::Atom(_))
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            OrientedType::Atom(a) => Some(a),
            OrientedType::Slash { .. } => None,
        }
    }

    /// Order: 1 on atoms, `max(1 + ord(α), ord(β))` on `c(α, β)`.
    pub fn order(&self) -> usize {
        match self {
            OrientedType::Atom(_) => 1,
            OrientedType::Slash { argument, result, .. } => (1 + argument.order()).max(result.order()),
        }
    }

    /// Unfolds `c₁(α₁, c₂(α₂, … cₙ(αₙ, r)…))` into its argument list and
    /// atomic result.
    pub fn decompose(&self) -> Decomposition<'_> {
        let mut arguments = Vec::new();
        let mut current = self;
        loop {
            match current {
                OrientedType::Atom(r) => return Decomposition { arguments, result: r },
                OrientedType::Slash {
                    connective,
                    argument,
                    result,
                } => {
                    arguments.push((*connective, argument.as_ref()));
                    current = result;
                }
            }
        }
    }

    /// Inverse of [`OrientedType::decompose`].
    pub fn recompose<'a, I>(arguments: I, result: &str) -> OrientedType
    where
        I: IntoIterator<Item = (Connective, &'a OrientedType)>,
        I::IntoIter: DoubleEndedIterator,
    {
        arguments
            .into_iter()
            .rev()
            .fold(OrientedType::atom(result), |acc, (c, arg)| {
                OrientedType::slash(c, arg.clone(), acc)
            })
    }

    /// Number of atom and slash occurrences.
    pub fn size(&self) -> usize {
        match self {
            OrientedType::Atom(_) => 1,
            OrientedType::Slash { argument, result, .. } => 1 + argument.size() + result.size(),
        }
    }

    /// Atoms occurring in the type, in left-to-right order of first occurrence.
    pub fn atoms(&self) -> Vec<&str> {
        fn walk<'a>(t: &'a OrientedType, out: &mut Vec<&'a str>) {
            match t {
                OrientedType::Atom(a) => {
                    if !out.contains(&a.as_str()) {
                        out.push(a);
                    }
                }
                OrientedType::Slash { argument, result, .. } => {
                    walk(argument, out);
                    walk(result, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// Result of [`OrientedType::decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition<'a> {
    pub arguments: Vec<(Connective, &'a OrientedType)>,
    pub result: &'a str,
}

impl Decomposition<'_> {
    pub fn arity(&self) -> usize {
        self.arguments.len()
    }

    pub fn recompose(&self) -> OrientedType {
        OrientedType::recompose(self.arguments.iter().copied(), self.result)
    }
}

impl fmt::Display for OrientedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(t: &OrientedType, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if t.is_atomic() {
                write!(f, "{t}")
            } else {
                write!(f, "({t})")
            }
        }
        match self {
            OrientedType::Atom(a) => f.write_str(a),
            OrientedType::Slash {
                connective: Connective::Over,
                argument,
                result,
            } => {
                operand(result, f)?;
                f.write_str("/")?;
                operand(argument, f)
            }
            OrientedType::Slash {
                connective: Connective::Under,
                argument,
                result,
            } => {
                operand(argument, f)?;
                f.write_str("\\")?;
                operand(result, f)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeSyntaxError {
    #[error("empty type expression")]
    Empty,
    #[error("unexpected `{found}` at offset {offset}")]
    Unexpected { found: String, offset: usize },
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("`/` and `\\` mixed without parentheses at offset {offset}")]
    MixedSlashes { offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Slash(Connective),
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, TypeSyntaxError> {
    let mut out = Vec::new();
    let mut chars = input.char_indices().peekable();
    while let Some(&(i, ch)) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '/' => {
                chars.next();
                out.push((i, Token::Slash(Connective::Over)));
            }
            '\\' => {
                chars.next();
                out.push((i, Token::Slash(Connective::Under)));
            }
            '(' => {
                chars.next();
                out.push((i, Token::Open));
            }
            ')' => {
                chars.next();
                out.push((i, Token::Close));
            }
            c if is_ident_char(c) => {
                let mut name = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    name.push(c);
                    chars.next();
                }
                out.push((i, Token::Ident(name)));
            }
            other => {
                return Err(TypeSyntaxError::Unexpected {
                    found: other.to_string(),
                    offset: i,
                })
            }
        }
    }
    Ok(out)
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '-'
}

struct TypeParser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl TypeParser {
    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.pos)
    }

    fn unexpected(&self) -> TypeSyntaxError {
        match self.peek() {
            Some((offset, tok)) => TypeSyntaxError::Unexpected {
                found: match tok {
                    Token::Ident(s) => s.clone(),
                    Token::Slash(c) => c.to_string(),
                    Token::Open => "(".into(),
                    Token::Close => ")".into(),
                },
                offset: *offset,
            },
            None => TypeSyntaxError::Unexpected {
                found: "end of input".into(),
                offset: self.end,
            },
        }
    }

    fn primary(&mut self) -> Result<OrientedType, TypeSyntaxError> {
        match self.peek().map(|(_, t)| t.clone()) {
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(OrientedType::Atom(name))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.chain()?;
                match self.peek() {
                    Some((_, Token::Close)) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    None => Err(TypeSyntaxError::Unbalanced),
                    _ => Err(self.unexpected()),
                }
            }
            None if self.pos == 0 => Err(TypeSyntaxError::Empty),
            _ => Err(self.unexpected()),
        }
    }

    /// A chain of operands joined by a single kind of slash. `/` chains fold
    /// to the left (`a/b/c = (a/b)/c`), `\` chains fold to the right
    /// (`a\b\c = a\(b\c)`); both keep the result on the open end.
    fn chain(&mut self) -> Result<OrientedType, TypeSyntaxError> {
        let mut operands = vec![self.primary()?];
        let mut kind: Option<Connective> = None;
        while let Some((offset, Token::Slash(c))) = self.peek().cloned() {
            match kind {
                Some(k) if k != c => return Err(TypeSyntaxError::MixedSlashes { offset }),
                _ => kind = Some(c),
            }
            self.pos += 1;
            operands.push(self.primary()?);
        }
        Ok(match kind {
            None => operands.pop().expect("one operand"),
            Some(Connective::Over) => {
                let mut iter = operands.into_iter();
                let first = iter.next().expect("operand");
                iter.fold(first, OrientedType::over)
            }
            Some(Connective::Under) => {
                let mut iter = operands.into_iter().rev();
                let last = iter.next().expect("operand");
                iter.fold(last, |acc, arg| OrientedType::under(arg, acc))
            }
        })
    }
}

impl FromStr for OrientedType {
    type Err = TypeSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = tokenize(s)?;
        if tokens.is_empty() {
            return Err(TypeSyntaxError::Empty);
        }
        let mut parser = TypeParser {
            tokens,
            pos: 0,
            end: s.len(),
        };
        let ty = parser.chain()?;
        if parser.pos != parser.tokens.len() {
            return Err(match parser.peek() {
                Some((_, Token::Close)) => TypeSyntaxError::Unbalanced,
                _ => parser.unexpected(),
            });
        }
        Ok(ty)
    }
}

impl Serialize for OrientedType {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OrientedType {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
