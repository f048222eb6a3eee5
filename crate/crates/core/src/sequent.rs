//! Sequents `Γ ⊢ u : β`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::context::{ContextItem, ContextWord};
use crate::lambda::{Term, TermSyntaxError};
use crate::types::{OrientedType, TypeSyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub context: ContextWord,
    /// Absent for search goals.
    pub term: Option<Term>,
    pub ty: OrientedType,
}

impl Sequent {
    pub fn new(context: ContextWord, term: Term, ty: OrientedType) -> Self {
        Sequent {
            context,
            term: Some(term),
            ty,
        }
    }

    pub fn goal(context: ContextWord, ty: OrientedType) -> Self {
        Sequent {
            context,
            term: None,
            ty,
        }
    }

    /// Renames context variables (and their free occurrences in the term).
    pub fn rename_vars(&self, map: &HashMap<String, String>) -> Sequent {
        let items = self
            .context
            .iter()
            .map(|item| match item {
                ContextItem::Var { name, ty } => ContextItem::Var {
                    name: map.get(name).cloned().unwrap_or_else(|| name.clone()),
                    ty: ty.clone(),
                },
                lexeme => lexeme.clone(),
            })
            .collect();
        Sequent {
            context: ContextWord::new(items).expect("renaming keeps length"),
            term: self.term.as_ref().map(|t| t.rename_free(map)),
            ty: self.ty.clone(),
        }
    }

    /// Identity up to renaming of context variables and α-conversion:
    /// variables become `v1, v2, …` in context order and the term is put in
    /// α-canonical form.
    pub fn canonical_key(&self) -> String {
        let map: HashMap<String, String> = self
            .context
            .var_names()
            .enumerate()
            .map(|(i, n)| (n.to_string(), format!("v{}", i + 1)))
            .collect();
        let renamed = self.rename_vars(&map);
        let term = renamed.term.map(|t| t.alpha_canonical());
        Sequent { term, ..renamed }.to_string()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- ", self.context)?;
        if let Some(t) = &self.term {
            write!(f, "{t} : ")?;
        }
        write!(f, "{}", self.ty)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequentSyntaxError {
    #[error("missing `|-`")]
    MissingTurnstile,
    #[error("empty context")]
    EmptyContext,
    #[error("bad context item `{0}`")]
    BadItem(String),
    #[error(transparent)]
    Type(#[from] TypeSyntaxError),
    #[error(transparent)]
    Term(#[from] TermSyntaxError),
}

impl FromStr for ContextItem {
    type Err = SequentSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.split_once(':') {
            Some((name, ty)) => {
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(SequentSyntaxError::BadItem(s.to_string()));
                }
                Ok(ContextItem::var(name, ty.parse()?))
            }
            None if !s.is_empty() && !s.contains(char::is_whitespace) => Ok(ContextItem::lexeme(s.to_lowercase())),
            None => Err(SequentSyntaxError::BadItem(s.to_string())),
        }
    }
}

impl FromStr for ContextWord {
    type Err = SequentSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let items = s.split(',').map(str::parse).collect::<Result<Vec<ContextItem>, _>>()?;
        ContextWord::new(items).map_err(|_| SequentSyntaxError::EmptyContext)
    }
}

impl FromStr for Sequent {
    type Err = SequentSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (ctx, rhs) = s.split_once("|-").ok_or(SequentSyntaxError::MissingTurnstile)?;
        if ctx.trim().is_empty() {
            return Err(SequentSyntaxError::EmptyContext);
        }
        let context = ctx.parse()?;
        let (term, ty) = match rhs.rsplit_once(':') {
            Some((term, ty)) => (Some(term.parse()?), ty.parse()?),
            None => (None, rhs.parse()?),
        };
        Ok(Sequent { context, term, ty })
    }
}
