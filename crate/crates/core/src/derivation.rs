//! Derivation trees for the natural-deduction system and its proper-axiom
//! variants, with a checker and an S-expression format.
//!
//! The three rule systems share the connective rules in compact form:
//!
//! * `Intro(c)`: from `f_c(Γ, x:α) ⊢ u : β` infer `Γ ⊢ λx.u : c(α, β)`;
//! * `Elim(c)`: from `Γ ⊢ u : c(α, β)` and `Δ ⊢ v : α` infer
//!   `f_c(Γ, Δ) ⊢ u v : β`;
//! * `Cut(y)`: from `Γ ⊢ u : β` with `y:γ` in `Γ` and `Δ ⊢ v : γ` infer
//!   `Γ[y := Δ] ⊢ u[y := v] : β`.
//!
//! Children are stored major premise first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{flatten, flatten_lexeme, AxiomSet};
use crate::context::{ContextItem, ContextWord};
use crate::grammar::Grammar;
use crate::lambda::Term;
use crate::sequent::{Sequent, SequentSyntaxError};
use crate::types::{Connective, OrientedType};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    Ax,
    Lex { index: usize },
    Intro(Connective),
    Elim(Connective),
    Cut { var: String },
    PaxE1 { lexeme: String, index: usize },
    PaxE2 { ty: OrientedType },
    PaxI,
}

impl Rule {
    fn arity(&self) -> usize {
        match self {
            Rule::Ax | Rule::Lex { .. } | Rule::PaxE1 { .. } | Rule::PaxE2 { .. } | Rule::PaxI => 0,
            Rule::Intro(_) => 1,
            Rule::Elim(_) | Rule::Cut { .. } => 2,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Ax => f.write_str("ax"),
            Rule::Lex { index } => write!(f, "lex {index}"),
            Rule::Intro(c) => write!(f, "intro{c}"),
            Rule::Elim(c) => write!(f, "elim{c}"),
            Rule::Cut { var } => write!(f, "cut {var}"),
            Rule::PaxE1 { lexeme, index } => write!(f, "pax-e1 {lexeme} {index}"),
            Rule::PaxE2 { ty } => write!(f, "pax-e2 \"{ty}\""),
            Rule::PaxI => f.write_str("pax-i"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: Rule, conclusion: Sequent) -> Self {
        Derivation {
            rule,
            conclusion,
            children: Vec::new(),
        }
    }

    pub fn node(rule: Rule, conclusion: Sequent, children: Vec<Derivation>) -> Self {
        Derivation {
            rule,
            conclusion,
            children,
        }
    }

    /// The conclusion term (every node of a built derivation carries one).
    pub fn term(&self) -> &Term {
        self.conclusion.term.as_ref().expect("derivation nodes carry terms")
    }

    /// Nodes in pre-order.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let n = out[i];
            i += 1;
            out.extend(n.children.iter());
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(Derivation::height).max().unwrap_or(0)
    }

    /// Writes the canonical S-expression, one node per line.
    pub fn to_sexpr(&self) -> String {
        let mut out = String::new();
        self.write_sexpr(0, &mut out);
        out
    }

    fn write_sexpr(&self, indent: usize, out: &mut String) {
        use std::fmt::Write;
        let _ = write!(out, "{:indent$}({} [{}]", "", self.rule, self.conclusion);
        for child in &self.children {
            out.push('\n');
            child.write_sexpr(indent + 2, out);
        }
        out.push(')');
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

/// Rebuilds the conclusion term bottom-up.
pub fn extract_term(d: &Derivation) -> Term {
    match &d.rule {
        Rule::Ax => match &d.conclusion.context[0] {
            ContextItem::Var { name, .. } => Term::var(name.clone()),
            ContextItem::Lexeme(_) => d.term().clone(),
        },
        Rule::Lex { index } => match &d.conclusion.context[0] {
            ContextItem::Lexeme(name) => Term::constant(name.clone(), *index),
            ContextItem::Var { .. } => d.term().clone(),
        },
        Rule::PaxE1 { .. } | Rule::PaxE2 { .. } | Rule::PaxI => d.term().clone(),
        Rule::Intro(c) => {
            let premise = &d.children[0];
            let body = extract_term(premise);
            let x = premise
                .conclusion
                .context
                .split_boundary(*c)
                .and_then(|(_, item)| item.var_name().map(str::to_string))
                .unwrap_or_else(|| "x".to_string());
            Term::abs(x, body)
        }
        Rule::Elim(_) => Term::app(extract_term(&d.children[0]), extract_term(&d.children[1])),
        Rule::Cut { var } => extract_term(&d.children[0]).substitute(var, &extract_term(&d.children[1])),
    }
}

/// Which rules a derivation may use.
#[derive(Clone, Copy, Debug)]
pub enum RuleSystem<'a> {
    /// Axiom, lexicon, introductions and eliminations.
    Natural,
    /// The base proper axioms, introductions and cut.
    Intermediate,
    /// Instances of a given proper-axiom set, and cut.
    CutOnly(&'a AxiomSet),
}

impl RuleSystem<'_> {
    fn allows(&self, rule: &Rule) -> bool {
        match self {
            RuleSystem::Natural => matches!(rule, Rule::Ax | Rule::Lex { .. } | Rule::Intro(_) | Rule::Elim(_)),
            RuleSystem::Intermediate => matches!(
                rule,
                Rule::PaxE1 { .. } | Rule::PaxE2 { .. } | Rule::Intro(_) | Rule::Cut { .. }
            ),
            RuleSystem::CutOnly(_) => matches!(rule, Rule::PaxI | Rule::Cut { .. }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node {path:?} ({rule}): {reason}")]
pub struct CheckError {
    /// Child indices from the root.
    pub path: Vec<usize>,
    pub rule: String,
    pub reason: String,
}

/// Checks every node in pre-order; reports the first broken side condition.
pub fn check_derivation(sys: RuleSystem<'_>, grammar: &Grammar, d: &Derivation) -> Result<(), CheckError> {
    let strict = grammar.signed_occurrences().strict_positive;
    let mut path = Vec::new();
    check_node(sys, grammar, &strict, d, &mut path)
}

fn check_node(
    sys: RuleSystem<'_>,
    grammar: &Grammar,
    strict: &indexmap::IndexSet<OrientedType>,
    d: &Derivation,
    path: &mut Vec<usize>,
) -> Result<(), CheckError> {
    let fail = |reason: String| CheckError {
        path: path.clone(),
        rule: d.rule.to_string(),
        reason,
    };
    if !sys.allows(&d.rule) {
        return Err(fail("rule not available in this system".into()));
    }
    if d.children.len() != d.rule.arity() {
        return Err(fail(format!(
            "expected {} premises, found {}",
            d.rule.arity(),
            d.children.len()
        )));
    }
    local(sys, grammar, strict, d).map_err(fail)?;
    for (i, child) in d.children.iter().enumerate() {
        path.push(i);
        check_node(sys, grammar, strict, child, path)?;
        path.pop();
    }
    Ok(())
}

fn ensure(cond: bool, reason: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(reason())
    }
}

fn local(
    sys: RuleSystem<'_>,
    grammar: &Grammar,
    strict: &indexmap::IndexSet<OrientedType>,
    d: &Derivation,
) -> Result<(), String> {
    let concl = &d.conclusion;
    let term = concl.term.as_ref().ok_or("conclusion has no term")?;
    ensure(concl.context.is_linear(), || "context variables repeat".into())?;
    let ctx_vars: std::collections::BTreeSet<String> = concl.context.var_names().map(str::to_string).collect();
    ensure(term.free_vars() == ctx_vars, || {
        format!("free variables of {term} do not match the context")
    })?;
    ensure(term.is_linear(), || format!("{term} is not linear"))?;

    let same_up_to_renaming = |expected: &Sequent| concl.canonical_key() == expected.canonical_key();

    match &d.rule {
        Rule::Ax => {
            let [ContextItem::Var { name, ty }] = concl.context.items() else {
                return Err("axiom context must be a single variable".into());
            };
            ensure(*ty == concl.ty, || "axiom type mismatch".into())?;
            ensure(*term == Term::var(name.clone()), || {
                "axiom term must be the variable".into()
            })
        }
        Rule::Lex { index } => {
            let [ContextItem::Lexeme(name)] = concl.context.items() else {
                return Err("lexical context must be a single lexeme".into());
            };
            let ty = grammar
                .lexical_type(name, *index)
                .ok_or_else(|| format!("`{name}` has no type #{index}"))?;
            ensure(*ty == concl.ty, || format!("`{name}` #{index} has type {ty}"))?;
            ensure(*term == Term::constant(name.clone(), *index), || {
                "lexical term must be the constant".into()
            })
        }
        Rule::Intro(c) => {
            let premise = &d.children[0].conclusion;
            let OrientedType::Slash {
                connective,
                argument,
                result,
            } = &concl.ty
            else {
                return Err("introduction concludes an atomic type".into());
            };
            ensure(connective == c, || "connective mismatch".into())?;
            ensure(**result == premise.ty, || "premise type is not the result".into())?;
            let (gamma, item) = premise
                .context
                .split_boundary(*c)
                .ok_or("premise context too short for an introduction")?;
            let ContextItem::Var { name, ty } = item else {
                return Err("discharged item is not a variable".into());
            };
            ensure(ty == **argument, || "discharged variable has the wrong type".into())?;
            ensure(gamma == concl.context, || "context mismatch".into())?;
            let body = premise.term.as_ref().ok_or("premise has no term")?;
            ensure(term.alpha_eq(&Term::abs(name, body.clone())), || {
                "term is not the abstraction of the premise".into()
            })
        }
        Rule::Elim(c) => {
            let (major, minor) = (&d.children[0].conclusion, &d.children[1].conclusion);
            let OrientedType::Slash {
                connective,
                argument,
                result,
            } = &major.ty
            else {
                return Err("major premise has an atomic type".into());
            };
            ensure(connective == c, || "connective mismatch".into())?;
            ensure(**argument == minor.ty, || "argument type mismatch".into())?;
            ensure(**result == concl.ty, || "result type mismatch".into())?;
            ensure(
                ContextWord::combine(*c, &major.context, &minor.context) == concl.context,
                || "context is not the compact combination of the premises".into(),
            )?;
            let (f, a) = (
                major.term.as_ref().ok_or("premise has no term")?,
                minor.term.as_ref().ok_or("premise has no term")?,
            );
            ensure(term.alpha_eq(&Term::app(f.clone(), a.clone())), || {
                "term is not the application of the premises".into()
            })
        }
        Rule::Cut { var } => {
            let (major, minor) = (&d.children[0].conclusion, &d.children[1].conclusion);
            let pos = major
                .context
                .position_of_var(var)
                .ok_or_else(|| format!("`{var}` is not in the major premise"))?;
            ensure(major.context[pos].var_type() == Some(&minor.ty), || {
                "cut formula mismatch".into()
            })?;
            ensure(major.ty == concl.ty, || "result type mismatch".into())?;
            ensure(major.context.replace_at(pos, &minor.context) == concl.context, || {
                "context is not the substituted major context".into()
            })?;
            let (u, v) = (
                major.term.as_ref().ok_or("premise has no term")?,
                minor.term.as_ref().ok_or("premise has no term")?,
            );
            ensure(term.alpha_eq(&u.substitute(var, v)), || {
                "term is not the substituted major term".into()
            })
        }
        Rule::PaxE1 { lexeme, index } => {
            let expected =
                flatten_lexeme(grammar, lexeme, *index).ok_or_else(|| format!("`{lexeme}` has no type #{index}"))?;
            ensure(same_up_to_renaming(&expected), || {
                format!("not the flattening of `{lexeme}`: expected {expected}")
            })
        }
        Rule::PaxE2 { ty } => {
            let expected = flatten(ty, ContextItem::var("x", ty.clone()), strict).map_err(|e| e.to_string())?;
            ensure(same_up_to_renaming(&expected), || {
                format!("not the flattening of {ty}: expected {expected}")
            })
        }
        Rule::PaxI => {
            let RuleSystem::CutOnly(base) = sys else {
                return Err("no axiom base".into());
            };
            ensure(base.contains_key(&concl.canonical_key()), || {
                "not an instance of a proper axiom of the base".into()
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SexprError {
    #[error("unexpected end of input")]
    Eof,
    #[error("expected `{expected}` at offset {offset}")]
    Expected { expected: &'static str, offset: usize },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("bad sequent: {0}")]
    Sequent(#[from] SequentSyntaxError),
}

struct SexprReader<'a> {
    src: &'a str,
    pos: usize,
}

impl SexprReader<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char, expected: &'static str) -> Result<(), SexprError> {
        if self.peek() != Some(c) {
            return Err(SexprError::Expected {
                expected,
                offset: self.pos,
            });
        }
        self.pos += c.len_utf8();
        Ok(())
    }

    fn word(&mut self) -> Result<String, SexprError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with('"') {
            let rest = &self.src[self.pos + 1..];
            let end = rest.find('"').ok_or(SexprError::Eof)?;
            let w = rest[..end].to_string();
            self.pos += end + 2;
            return Ok(w);
        }
        let rest = &self.src[self.pos..];
        let end = rest
            .find(|c: char| c.is_whitespace() || c == '[' || c == '(' || c == ')')
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(SexprError::Expected {
                expected: "word",
                offset: self.pos,
            });
        }
        self.pos += end;
        Ok(rest[..end].to_string())
    }

    fn derivation(&mut self) -> Result<Derivation, SexprError> {
        self.expect('(', "(")?;
        let head = self.word()?;
        let bad = || SexprError::UnknownRule(head.clone());
        let rule = match head.as_str() {
            "ax" => Rule::Ax,
            "lex" => Rule::Lex {
                index: self.word()?.parse().map_err(|_| bad())?,
            },
            "intro/" => Rule::Intro(Connective::Over),
            "intro\\" => Rule::Intro(Connective::Under),
            "elim/" => Rule::Elim(Connective::Over),
            "elim\\" => Rule::Elim(Connective::Under),
            "cut" => Rule::Cut { var: self.word()? },
            "pax-e1" => Rule::PaxE1 {
                lexeme: self.word()?,
                index: self.word()?.parse().map_err(|_| bad())?,
            },
            "pax-e2" => Rule::PaxE2 {
                ty: self
                    .word()?
                    .parse()
                    .map_err(|e| SexprError::Sequent(SequentSyntaxError::Type(e)))?,
            },
            "pax-i" => Rule::PaxI,
            _ => return Err(bad()),
        };
        self.expect('[', "[")?;
        let rest = &self.src[self.pos..];
        let end = rest.find(']').ok_or(SexprError::Eof)?;
        let conclusion: Sequent = rest[..end].parse()?;
        self.pos += end + 1;
        let mut children = Vec::new();
        while self.peek() == Some('(') {
            children.push(self.derivation()?);
        }
        self.expect(')', ")")?;
        Ok(Derivation::node(rule, conclusion, children))
    }
}

impl FromStr for Derivation {
    type Err = SexprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut r = SexprReader { src: s, pos: 0 };
        let d = r.derivation()?;
        if r.peek().is_some() {
            return Err(SexprError::Expected {
                expected: "end of input",
                offset: r.pos,
            });
        }
        Ok(d)
    }
}
