//! Context words: non-empty sequences of lexemes and typed variables.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::types::{Connective, OrientedType};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ContextItem {
    Lexeme(String),
    Var { name: String, ty: OrientedType },
}

impl ContextItem {
    pub fn lexeme(name: impl Into<String>) -> Self {
        ContextItem::Lexeme(name.into())
    }

    pub fn var(name: impl Into<String>, ty: OrientedType) -> Self {
        ContextItem::Var { name: name.into(), ty }
    }

    pub fn var_name(&self) -> Option<&str> {
        match self {
            ContextItem::Var { name, .. } => Some(name),
            ContextItem::Lexeme(_) => None,
        }
    }

    pub fn var_type(&self) -> Option<&OrientedType> {
        match self {
            ContextItem::Var { ty, .. } => Some(ty),
            ContextItem::Lexeme(_) => None,
        }
    }
}

impl fmt::Display for ContextItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextItem::Lexeme(name) => f.write_str(name),
            ContextItem::Var { name, ty } => write!(f, "{name}:{ty}"),
        }
    }
}

/// A non-empty word over lexemes and typed variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<ContextItem>", into = "Vec<ContextItem>")]
pub struct ContextWord(Vec<ContextItem>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("context words cannot be empty")]
pub struct EmptyContext;

impl TryFrom<Vec<ContextItem>> for ContextWord {
    type Error = EmptyContext;

    fn try_from(items: Vec<ContextItem>) -> Result<Self, Self::Error> {
        ContextWord::new(items)
    }
}

impl From<ContextWord> for Vec<ContextItem> {
    fn from(w: ContextWord) -> Self {
        w.0
    }
}

impl ContextWord {
    pub fn new(items: Vec<ContextItem>) -> Result<Self, EmptyContext> {
        if items.is_empty() {
            Err(EmptyContext)
        } else {
            Ok(ContextWord(items))
        }
    }

    pub fn singleton(item: ContextItem) -> Self {
        ContextWord(vec![item])
    }

    /// The word spelled by a list of lexemes.
    pub fn from_lexemes<S: AsRef<str>>(tokens: &[S]) -> Result<Self, EmptyContext> {
        ContextWord::new(tokens.iter().map(|t| ContextItem::lexeme(t.as_ref())).collect())
    }

    pub fn items(&self) -> &[ContextItem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ContextItem> {
        self.0.iter()
    }

    /// `Γ·Δ`.
    pub fn concat(&self, other: &ContextWord) -> ContextWord {
        let mut items = self.0.clone();
        items.extend(other.0.iter().cloned());
        ContextWord(items)
    }

    /// `f_c(Γ, Δ)`: `Γ·Δ` for `/`, `Δ·Γ` for `\`.
    pub fn combine(c: Connective, gamma: &ContextWord, delta: &ContextWord) -> ContextWord {
        match c {
            Connective::Over => gamma.concat(delta),
            Connective::Under => delta.concat(gamma),
        }
    }

    /// `f_c(w, item)`: appends for `/`, prepends for `\`.
    pub fn attach(&self, c: Connective, item: ContextItem) -> ContextWord {
        let mut items = self.0.clone();
        match c {
            Connective::Over => items.push(item),
            Connective::Under => items.insert(0, item),
        }
        ContextWord(items)
    }

    /// Inverse of [`ContextWord::attach`]: the boundary item on the `c` side
    /// and the (non-empty) rest. `None` for singleton words.
    pub fn split_boundary(&self, c: Connective) -> Option<(ContextWord, ContextItem)> {
        if self.0.len() < 2 {
            return None;
        }
        let mut items = self.0.clone();
        let item = match c {
            Connective::Over => items.pop().expect("len >= 2"),
            Connective::Under => items.remove(0),
        };
        Some((ContextWord(items), item))
    }

    /// Replaces the item at `position` by the items of `with`.
    pub fn replace_at(&self, position: usize, with: &ContextWord) -> ContextWord {
        let mut items = Vec::with_capacity(self.0.len() + with.0.len() - 1);
        items.extend_from_slice(&self.0[..position]);
        items.extend(with.0.iter().cloned());
        items.extend_from_slice(&self.0[position + 1..]);
        ContextWord(items)
    }

    pub fn position_of_var(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|i| i.var_name() == Some(name))
    }

    pub fn var_names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().filter_map(ContextItem::var_name)
    }

    pub fn lexemes(&self) -> impl Iterator<Item = &str> {
        self.0.iter().filter_map(|i| match i {
            ContextItem::Lexeme(l) => Some(l.as_str()),
            ContextItem::Var { .. } => None,
        })
    }

    /// True when no variable name occurs twice.
    pub fn is_linear(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.var_names().all(|n| seen.insert(n))
    }
}

impl Index<usize> for ContextWord {
    type Output = ContextItem;

    fn index(&self, i: usize) -> &ContextItem {
        &self.0[i]
    }
}

impl<'a> IntoIterator for &'a ContextWord {
    type Item = &'a ContextItem;
    type IntoIter = std::slice::Iter<'a, ContextItem>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for ContextWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{item}")?;
        }
        Ok(())
    }
}
