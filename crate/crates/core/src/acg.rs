//! Abstract categorial grammars: signatures, lexicons, and the translation of
//! a context-free grammar into a second-order ACG whose object language is a
//! string signature.
//!
//! Strings are encoded at type `σ = * → *`: a word `a b c` is
//! `λz. A (B (C z))`, concatenation is composition and the empty string is
//! the identity.

use std::collections::HashMap;
use std::fmt;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cfg::{Cfg, ParseTree, Symbol};
use crate::grammar::Grammar;
use crate::lambda::{
    beta_normalize, check_simple, erase, fresh_name, ConstTypes, SimpleType, Term, TypeError, TypingEnv,
};
use crate::types::OrientedType;

/// The single base type of the string signature.
pub const STRING_BASE: &str = "*";

/// `σ = * → *`.
pub fn sigma() -> SimpleType {
    SimpleType::arrow(SimpleType::base(STRING_BASE), SimpleType::base(STRING_BASE))
}

/// `λx. x`.
pub fn epsilon() -> Term {
    Term::abs("x", Term::var("x"))
}

/// `λf g z. f (g z)`.
pub fn plus() -> Term {
    Term::abs_all(
        ["f", "g", "z"],
        Term::app(Term::var("f"), Term::app(Term::var("g"), Term::var("z"))),
    )
}

/// `a + b`, left unreduced.
pub fn concat(a: Term, b: Term) -> Term {
    Term::apply_all(plus(), [a, b])
}

/// The σ-encoding of a token list.
pub fn string_term(tokens: &[impl AsRef<str>]) -> Term {
    let z = "z";
    let body = tokens
        .iter()
        .rev()
        .fold(Term::var(z), |acc, t| Term::app(Term::constant(t.as_ref(), 0), acc));
    Term::abs(z, body)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub base_types: IndexSet<String>,
    pub constants: IndexMap<String, SimpleType>,
}

impl Signature {
    /// The maximum order of a constant's type.
    pub fn order(&self) -> usize {
        self.constants.values().map(SimpleType::order).max().unwrap_or(0)
    }

    /// Every base in every constant type is declared.
    pub fn undeclared_bases(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        for (c, ty) in &self.constants {
            for b in ty.bases() {
                if !self.base_types.contains(b) {
                    out.push((c.as_str(), b));
                }
            }
        }
        out
    }

    /// The τ₀-erasure of a Lambek grammar: one constant per lexical entry,
    /// named after the lexeme (`lexeme_k` for the k-th type when k > 0).
    pub fn of_grammar(g: &Grammar) -> Signature {
        let mut sig = Signature {
            base_types: g.atoms().map(String::from).collect(),
            constants: IndexMap::new(),
        };
        for (lexeme, index, ty) in g.entries() {
            sig.constants.insert(lexical_constant(lexeme, index), erase(ty));
        }
        sig
    }

    /// The string signature over `tokens`: base `*` and `t : * -> *` each.
    pub fn strings(tokens: impl IntoIterator<Item = impl AsRef<str>>) -> Signature {
        Signature {
            base_types: [STRING_BASE.to_string()].into_iter().collect(),
            constants: tokens.into_iter().map(|t| (t.as_ref().to_string(), sigma())).collect(),
        }
    }
}

pub fn lexical_constant(lexeme: &str, index: usize) -> String {
    match index {
        0 => lexeme.to_string(),
        k => format!("{lexeme}_{k}"),
    }
}

impl ConstTypes for Signature {
    fn const_type(&self, name: &str, index: usize) -> Option<SimpleType> {
        if index != 0 {
            return None;
        }
        self.constants.get(name).cloned()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    pub type_map: IndexMap<String, SimpleType>,
    pub term_map: IndexMap<String, Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("no image for constant `{0}`")]
    MissingConstant(String),
    #[error("no image for base type `{0}`")]
    MissingBase(String),
    #[error("image of `{constant}` does not have type {expected} (source type {source_type}): {reason}")]
    IllTyped {
        constant: String,
        source_type: SimpleType,
        expected: SimpleType,
        reason: TypeError,
    },
}

impl Lexicon {
    pub fn map_type(&self, ty: &SimpleType) -> Result<SimpleType, LexiconError> {
        if let Some(b) = ty.bases().into_iter().find(|b| !self.type_map.contains_key(*b)) {
            return Err(LexiconError::MissingBase(b.to_string()));
        }
        Ok(ty.map_bases(&|b| self.type_map[b].clone()))
    }
}

/// Checks the homomorphism condition: every source constant's image
/// typechecks in the target at the translated type.
pub fn validate_lexicon(lex: &Lexicon, src: &Signature, tgt: &Signature) -> Result<(), LexiconError> {
    for (c, ty) in &src.constants {
        let image = lex
            .term_map
            .get(c)
            .ok_or_else(|| LexiconError::MissingConstant(c.clone()))?;
        let expected = lex.map_type(ty)?;
        check_simple(&TypingEnv::new(), image, &expected, tgt).map_err(|reason| LexiconError::IllTyped {
            constant: c.clone(),
            source_type: ty.clone(),
            expected: expected.clone(),
            reason,
        })?;
    }
    Ok(())
}

/// Replaces every constant by its image and β-normalizes.
pub fn apply_lexicon(lex: &Lexicon, u: &Term) -> Result<Term, LexiconError> {
    fn go(lex: &Lexicon, u: &Term) -> Result<Term, LexiconError> {
        Ok(match u {
            Term::Var(_) => u.clone(),
            Term::Const { name, .. } => lex
                .term_map
                .get(name)
                .cloned()
                .ok_or_else(|| LexiconError::MissingConstant(name.clone()))?,
            Term::Abs(x, b) => Term::abs(x.clone(), go(lex, b)?),
            Term::App(f, a) => Term::app(go(lex, f)?, go(lex, a)?),
        })
    }
    Ok(beta_normalize(&go(lex, u)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum YieldError {
    #[error("not a string term: {0}")]
    IllTyped(#[from] TypeError),
    #[error("normal form is not a constant spine: {0}")]
    NotASpine(Term),
}

/// Reads the token list denoted by a term of type σ over `object`.
pub fn yield_string(object_term: &Term, object: &Signature) -> Result<Vec<String>, YieldError> {
    check_simple(&TypingEnv::new(), object_term, &sigma(), object)?;
    let names = object_term.all_names();
    let z = fresh_name("z", |n| names.contains(n));
    let nf = beta_normalize(&Term::app(object_term.clone(), Term::var(&z)));
    let mut out = Vec::new();
    let mut cur = &nf;
    loop {
        match cur {
            Term::Var(v) if *v == z => return Ok(out),
            Term::App(f, rest) => match f.as_ref() {
                Term::Const { name, .. } => {
                    out.push(name.clone());
                    cur = rest;
                }
                _ => return Err(YieldError::NotASpine(nf)),
            },
            _ => return Err(YieldError::NotASpine(nf)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Acg {
    #[serde(rename = "abstract")]
    pub abstract_sig: Signature,
    pub object: Signature,
    pub lexicon: Lexicon,
    pub distinguished: SimpleType,
    /// Abstract base type name ↦ the nonterminal it stands for.
    pub nonterminals: IndexMap<String, OrientedType>,
}

impl Acg {
    pub fn validate(&self) -> Result<(), LexiconError> {
        validate_lexicon(&self.lexicon, &self.abstract_sig, &self.object)
    }

    /// The two-block text form: signatures with `constant : type;` lines and
    /// the lexicon with `constant := term;` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_signature(&mut out, "abstract", &self.abstract_sig);
        write_signature(&mut out, "object", &self.object);
        out.push_str("lexicon strings(abstract) : object =\n");
        for (b, t) in &self.lexicon.type_map {
            out.push_str(&format!("  {b} := {t};\n"));
        }
        for (c, u) in &self.lexicon.term_map {
            out.push_str(&format!("  {c} := {u};\n"));
        }
        out.push_str("end\n");
        out
    }
}

fn write_signature(out: &mut String, name: &str, sig: &Signature) {
    out.push_str(&format!("signature {name} =\n"));
    if !sig.base_types.is_empty() {
        let bases: Vec<&str> = sig.base_types.iter().map(String::as_str).collect();
        out.push_str(&format!("  {} : type;\n", bases.join(", ")));
    }
    for (c, t) in &sig.constants {
        out.push_str(&format!("  {c} : {t};\n"));
    }
    out.push_str("end\n");
}

impl fmt::Display for Acg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// An identifier for an oriented type: `/` ↦ `_o_`, `\` ↦ `_u_`,
/// `(` ↦ `l_`, `)` ↦ `_r`.
pub fn mangle(ty: &OrientedType) -> String {
    let mut out = String::new();
    for c in ty.to_string().chars() {
        match c {
            '/' => out.push_str("_o_"),
            '\\' => out.push_str("_u_"),
            '(' => out.push_str("l_"),
            ')' => out.push_str("_r"),
            c => out.push(c),
        }
    }
    out
}

/// Abstract constant of production `index`.
pub fn production_constant(cfg: &Cfg, index: usize) -> String {
    format!("p{index}_{}", mangle(&cfg.productions[index].lhs))
}

/// The ACG whose abstract language is the set of derivation trees of `cfg`
/// and whose object language is its string language.
pub fn cfg_to_acg(cfg: &Cfg) -> Acg {
    let mut names: IndexMap<OrientedType, String> = IndexMap::new();
    let mut taken: IndexSet<String> = IndexSet::new();
    for nt in &cfg.nonterminals {
        let base = mangle(nt);
        let name = if taken.contains(&base) {
            fresh_name(&format!("{base}_"), |n| taken.contains(n))
        } else {
            base
        };
        taken.insert(name.clone());
        names.insert(nt.clone(), name);
    }
    let base = |t: &OrientedType| SimpleType::base(names[t].clone());

    let mut abstract_sig = Signature {
        base_types: names.values().cloned().collect(),
        constants: IndexMap::new(),
    };
    let object = Signature::strings(&cfg.terminals);
    let mut lexicon = Lexicon {
        type_map: names.values().map(|n| (n.clone(), sigma())).collect(),
        term_map: IndexMap::new(),
    };

    for (i, p) in cfg.productions.iter().enumerate() {
        let c = production_constant(cfg, i);
        let args: Vec<SimpleType> = p
            .rhs
            .iter()
            .filter_map(|s| match s {
                Symbol::Nonterminal(n) => Some(base(n)),
                Symbol::Terminal(_) => None,
            })
            .collect();
        abstract_sig
            .constants
            .insert(c.clone(), SimpleType::arrows(args, base(&p.lhs)));

        let mut binders = Vec::new();
        let mut parts = Vec::new();
        for s in &p.rhs {
            match s {
                Symbol::Nonterminal(_) => {
                    let y = format!("y{}", binders.len() + 1);
                    parts.push(Term::var(&y));
                    binders.push(y);
                }
                Symbol::Terminal(t) => parts.push(string_term(&[t])),
            }
        }
        let body = parts.into_iter().rev().fold(epsilon(), |acc, part| concat(part, acc));
        lexicon
            .term_map
            .insert(c, beta_normalize(&Term::abs_all(binders, body)));
    }

    Acg {
        distinguished: base(&cfg.start),
        abstract_sig,
        object,
        lexicon,
        nonterminals: names.into_iter().map(|(t, n)| (n, t)).collect(),
    }
}

/// The abstract term of a parse tree: its production constant applied to the
/// children's terms.
pub fn tree_to_abstract_term(cfg: &Cfg, tree: &ParseTree) -> Term {
    Term::apply_all(
        Term::constant(production_constant(cfg, tree.production), 0),
        tree.children.iter().map(|c| tree_to_abstract_term(cfg, c)),
    )
}

/// Abstract terms whose image is `tokens`, found by parsing with `cfg`.
pub fn object_membership(cfg: &Cfg, tokens: &[impl AsRef<str>], cap: usize) -> Vec<Term> {
    if tokens.is_empty() {
        return Vec::new();
    }
    cfg.parse(tokens, cap)
        .iter()
        .map(|t| tree_to_abstract_term(cfg, t))
        .collect()
}

/// Inverse of [`tree_to_abstract_term`] on well-formed terms.
pub fn abstract_term_to_tree(cfg: &Cfg, term: &Term) -> Option<ParseTree> {
    let index: HashMap<String, usize> = (0..cfg.productions.len())
        .map(|i| (production_constant(cfg, i), i))
        .collect();
    fn go(cfg: &Cfg, index: &HashMap<String, usize>, t: &Term, start: usize) -> Option<ParseTree> {
        let hf = t.head_form();
        if !hf.binders.is_empty() {
            return None;
        }
        let Term::Const { name, .. } = &hf.head else {
            return None;
        };
        let p = *index.get(name)?;
        let mut pos = start;
        let mut children = Vec::new();
        let mut args = hf.args.iter();
        for s in &cfg.productions[p].rhs {
            match s {
                Symbol::Terminal(_) => pos += 1,
                Symbol::Nonterminal(_) => {
                    let child = go(cfg, index, args.next()?, pos)?;
                    pos = child.span.1;
                    children.push(child);
                }
            }
        }
        if args.next().is_some() {
            return None;
        }
        Some(ParseTree {
            production: p,
            span: (start, pos),
            children,
        })
    }
    go(cfg, &index, term, 0)
}
