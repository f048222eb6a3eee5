//! Lambek grammars and their signed subformula occurrences.

use std::fmt;
use std::str::FromStr;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{is_ident_char, OrientedType, TypeSyntaxError};

/// A product-free Lambek grammar `(Pr, T, χ, s)`.
///
/// Lexemes are stored lowercased and keep the order in which they were
/// first declared; each lexeme keeps its types in declaration order, and the
/// position of a type in that list is its χ-index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grammar {
    atoms: IndexSet<String>,
    start: String,
    lexicon: IndexMap<String, Vec<OrientedType>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: bad type: {source}")]
    Type {
        line: usize,
        #[source]
        source: TypeSyntaxError,
    },
    #[error("missing `start:` declaration")]
    MissingStart,
    #[error("start symbol `{0}` is not a declared atom")]
    StartNotAtom(String),
    #[error("atom `{atom}` used in the type of `{lexeme}` is not declared")]
    UndeclaredAtom { lexeme: String, atom: String },
    #[error("`{0}` is both an atom and a lexeme")]
    AtomLexemeClash(String),
    #[error("the lexicon is empty")]
    EmptyLexicon,
}

impl Grammar {
    /// Builds and validates a grammar. Entries for the same lexeme accumulate;
    /// an exact duplicate type for a lexeme is ignored.
    pub fn new<A, E>(atoms: A, start: &str, entries: E) -> Result<Self, GrammarError>
    where
        A: IntoIterator,
        A::Item: Into<String>,
        E: IntoIterator<Item = (String, OrientedType)>,
    {
        let atoms: IndexSet<String> = atoms.into_iter().map(Into::into).collect();
        let mut lexicon: IndexMap<String, Vec<OrientedType>> = IndexMap::new();
        for (lexeme, ty) in entries {
            let types = lexicon.entry(lexeme.to_lowercase()).or_default();
            if !types.contains(&ty) {
                types.push(ty);
            }
        }
        let g = Grammar {
            atoms,
            start: start.to_string(),
            lexicon,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GrammarError> {
        if !self.atoms.contains(&self.start) {
            return Err(GrammarError::StartNotAtom(self.start.clone()));
        }
        if self.lexicon.is_empty() {
            return Err(GrammarError::EmptyLexicon);
        }
        for (lexeme, types) in &self.lexicon {
            if self.atoms.contains(lexeme) {
                return Err(GrammarError::AtomLexemeClash(lexeme.clone()));
            }
            for ty in types {
                for atom in ty.atoms() {
                    if !self.atoms.contains(atom) {
                        return Err(GrammarError::UndeclaredAtom {
                            lexeme: lexeme.clone(),
                            atom: atom.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.atoms.iter().map(String::as_str)
    }

    /// The distinguished atom `s`.
    pub fn start(&self) -> &str {
        &self.start
    }

    pub fn start_type(&self) -> OrientedType {
        OrientedType::atom(self.start.clone())
    }

    pub fn lexemes(&self) -> impl Iterator<Item = &str> {
        self.lexicon.keys().map(String::as_str)
    }

    pub fn contains_lexeme(&self, lexeme: &str) -> bool {
        self.lexicon.contains_key(lexeme)
    }

    /// χ(t), in declaration order. Empty for unknown lexemes.
    pub fn types_of(&self, lexeme: &str) -> &[OrientedType] {
        self.lexicon.get(lexeme).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn lexical_type(&self, lexeme: &str, index: usize) -> Option<&OrientedType> {
        self.types_of(lexeme).get(index)
    }

    /// All `(lexeme, χ-index, type)` triples in file order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, usize, &OrientedType)> {
        self.lexicon
            .iter()
            .flat_map(|(lexeme, types)| types.iter().enumerate().map(move |(i, ty)| (lexeme.as_str(), i, ty)))
    }

    /// A copy of this grammar with one more lexical entry.
    pub fn with_entry(&self, lexeme: &str, ty: OrientedType) -> Result<Grammar, GrammarError> {
        let mut atoms = self.atoms.clone();
        for atom in ty.atoms() {
            atoms.insert(atom.to_string());
        }
        let entries = self
            .entries()
            .map(|(l, _, t)| (l.to_string(), t.clone()))
            .chain(std::iter::once((lexeme.to_string(), ty)))
            .collect::<Vec<_>>();
        Grammar::new(atoms, &self.start, entries)
    }

    pub fn signed_occurrences(&self) -> SignedOccurrences {
        SignedOccurrences::of(self.entries().map(|(_, _, ty)| ty))
    }

    /// Tokenizes a sentence: whitespace-separated, lowercased.
    pub fn tokenize(sentence: &str) -> Vec<String> {
        sentence.split_whitespace().map(str::to_lowercase).collect()
    }

    /// The first token that is not a lexeme, if any.
    pub fn unknown_token<'a>(&self, tokens: &'a [String]) -> Option<&'a str> {
        tokens.iter().find(|t| !self.contains_lexeme(t)).map(String::as_str)
    }
}

impl FromStr for Grammar {
    type Err = GrammarError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut atoms: Vec<String> = Vec::new();
        let mut start = None;
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((head, rest)) = line.split_once(':') else {
                return Err(GrammarError::Syntax {
                    line: line_no,
                    message: format!("expected `name : type`, found `{line}`"),
                });
            };
            let head = head.trim();
            let rest = rest.trim();
            match head {
                "atoms" => atoms.extend(rest.split_whitespace().map(str::to_string)),
                "start" => start = Some(rest.to_string()),
                lexeme => {
                    if lexeme.is_empty() || !lexeme.chars().all(is_ident_char) {
                        return Err(GrammarError::Syntax {
                            line: line_no,
                            message: format!("bad lexeme `{lexeme}`"),
                        });
                    }
                    let ty = rest
                        .parse()
                        .map_err(|source| GrammarError::Type { line: line_no, source })?;
                    entries.push((lexeme.to_string(), ty));
                }
            }
        }
        let start = start.ok_or(GrammarError::MissingStart)?;
        Grammar::new(atoms, &start, entries)
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms: Vec<&str> = self.atoms().collect();
        writeln!(f, "atoms: {}", atoms.join(" "))?;
        writeln!(f, "start: {}", self.start)?;
        for (lexeme, _, ty) in self.entries() {
            writeln!(f, "{lexeme} : {ty}")?;
        }
        Ok(())
    }
}

/// Signed subformulas of a set of lexical types, occurrence-collapsed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedOccurrences {
    pub positive: IndexSet<OrientedType>,
    pub negative: IndexSet<OrientedType>,
    /// Positive occurrences that are proper subterms of a lexical type.
    pub strict_positive: IndexSet<OrientedType>,
}

impl SignedOccurrences {
    pub fn of<'a>(lexical: impl IntoIterator<Item = &'a OrientedType>) -> Self {
        fn walk(ty: &OrientedType, positive: bool, root: bool, out: &mut SignedOccurrences) {
            if positive {
                out.positive.insert(ty.clone());
                if !root {
                    out.strict_positive.insert(ty.clone());
                }
            } else {
                out.negative.insert(ty.clone());
            }
            if let OrientedType::Slash { argument, result, .. } = ty {
                walk(result, positive, false, out);
                walk(argument, !positive, false, out);
            }
        }
        let mut out = SignedOccurrences::default();
        for ty in lexical {
            walk(ty, true, true, &mut out);
        }
        out
    }
}
