//! Linear λ-terms over lexical constants.

mod normal;
mod parse;
mod typing;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use normal::{beta_eta_normalize, beta_normalize, eta_long, is_beta_normal};
pub use parse::TermSyntaxError;
pub use typing::{
    check_simple, erase, typecheck_simple, ConstTypes, SimpleType, SimpleTypeSyntaxError, TypeError, TypingEnv,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// A lexical constant with the χ-index of the type it was used at.
    Const {
        name: String,
        index: usize,
    },
    Abs(String, Box<Term>),
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>, index: usize) -> Term {
        Term::Const {
            name: name.into(),
            index,
        }
    }

    pub fn abs(binder: impl Into<String>, body: Term) -> Term {
        Term::Abs(binder.into(), Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// `head a₁ … aₙ`.
    pub fn apply_all(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// `λx₁…xₙ. body`.
    pub fn abs_all<S: Into<String>>(binders: impl IntoIterator<Item = S>, body: Term) -> Term {
        let binders: Vec<String> = binders.into_iter().map(Into::into).collect();
        binders.into_iter().rev().fold(body, |acc, x| Term::abs(x, acc))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const { .. } => 1,
            Term::Abs(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
            Term::Const { .. } => {}
            Term::Abs(x, b) => {
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
        }
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => x == y,
            Term::Const { .. } => false,
            Term::Abs(y, b) => y != x && b.occurs_free(x),
            Term::App(f, a) => f.occurs_free(x) || a.occurs_free(x),
        }
    }

    /// Every variable name in the term, bound or free.
    pub fn all_names(&self) -> HashSet<String> {
        fn walk(t: &Term, out: &mut HashSet<String>) {
            match t {
                Term::Var(x) => {
                    out.insert(x.clone());
                }
                Term::Const { .. } => {}
                Term::Abs(x, b) => {
                    out.insert(x.clone());
                    walk(b, out);
                }
                Term::App(f, a) => {
                    walk(f, out);
                    walk(a, out);
                }
            }
        }
        let mut out = HashSet::new();
        walk(self, &mut out);
        out
    }

    /// Constants in left-to-right order.
    pub fn constants(&self) -> Vec<(&str, usize)> {
        fn walk<'a>(t: &'a Term, out: &mut Vec<(&'a str, usize)>) {
            match t {
                Term::Var(_) => {}
                Term::Const { name, index } => out.push((name, *index)),
                Term::Abs(_, b) => walk(b, out),
                Term::App(f, a) => {
                    walk(f, out);
                    walk(a, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Every bound variable occurs exactly once in its scope and every free
    /// variable occurs exactly once.
    pub fn is_linear(&self) -> bool {
        fn walk(t: &Term, counts: &mut HashMap<String, usize>) -> bool {
            match t {
                Term::Var(x) => {
                    *counts.entry(x.clone()).or_default() += 1;
                    true
                }
                Term::Const { .. } => true,
                Term::Abs(x, b) => {
                    let saved = counts.remove(x);
                    let ok = walk(b, counts);
                    let used = counts.remove(x).unwrap_or(0);
                    if let Some(c) = saved {
                        counts.insert(x.clone(), c);
                    }
                    ok && used == 1
                }
                Term::App(f, a) => walk(f, counts) && walk(a, counts),
            }
        }
        let mut counts = HashMap::new();
        walk(self, &mut counts) && counts.values().all(|&c| c == 1)
    }

    /// Capture-avoiding `self[x := v]`.
    pub fn substitute(&self, x: &str, v: &Term) -> Term {
        let fv = v.free_vars();
        self.subst_with(x, v, &fv)
    }

    fn subst_with(&self, x: &str, v: &Term, fv: &BTreeSet<String>) -> Term {
        match self {
            Term::Var(y) if y == x => v.clone(),
            Term::Var(_) | Term::Const { .. } => self.clone(),
            Term::Abs(y, _) if y == x => self.clone(),
            Term::Abs(y, b) => {
                if !b.occurs_free(x) {
                    return self.clone();
                }
                if fv.contains(y) {
                    let mut avoid = b.all_names();
                    avoid.extend(fv.iter().cloned());
                    avoid.insert(x.to_string());
                    let fresh = fresh_name(y, |n| avoid.contains(n));
                    let renamed = b.substitute(y, &Term::Var(fresh.clone()));
                    Term::abs(fresh, renamed.subst_with(x, v, fv))
                } else {
                    Term::abs(y.clone(), b.subst_with(x, v, fv))
                }
            }
            Term::App(f, a) => Term::app(f.subst_with(x, v, fv), a.subst_with(x, v, fv)),
        }
    }

    /// Renames free variables according to `map` (names not in the map are
    /// kept). The new names must not be captured; binders are renamed when
    /// they would be.
    pub fn rename_free(&self, map: &HashMap<String, String>) -> Term {
        if map.is_empty() {
            return self.clone();
        }
        // Two-phase through placeholder names so that swaps are safe.
        let avoid: HashSet<String> = self.all_names().into_iter().chain(map.values().cloned()).collect();
        let mut placeholders = Vec::new();
        let mut t = self.clone();
        for (i, (from, _)) in map.iter().enumerate() {
            let ph = fresh_name(&format!("_r{i}"), |n| avoid.contains(n));
            t = t.substitute(from, &Term::Var(ph.clone()));
            placeholders.push(ph);
        }
        for ((_, to), ph) in map.iter().zip(placeholders) {
            t = t.substitute(&ph, &Term::Var(to.clone()));
        }
        t
    }

    /// The α-canonical representative: bound variables renamed in pre-order
    /// to `x, y, w, v, x1, …`, skipping names free in the term.
    pub fn alpha_canonical(&self) -> Term {
        let free = self.free_vars();
        let mut counter = 0usize;
        let mut next = || loop {
            let name = canonical_name(counter);
            counter += 1;
            if !free.contains(&name) {
                return name;
            }
        };
        fn walk(t: &Term, env: &mut Vec<(String, String)>, next: &mut dyn FnMut() -> String) -> Term {
            match t {
                Term::Var(x) => match env.iter().rev().find(|(from, _)| from == x) {
                    Some((_, to)) => Term::Var(to.clone()),
                    None => t.clone(),
                },
                Term::Const { .. } => t.clone(),
                Term::Abs(x, b) => {
                    let name = next();
                    env.push((x.clone(), name.clone()));
                    let body = walk(b, env, next);
                    env.pop();
                    Term::abs(name, body)
                }
                Term::App(f, a) => {
                    let f = walk(f, env, next);
                    let a = walk(a, env, next);
                    Term::app(f, a)
                }
            }
        }
        walk(self, &mut Vec::new(), &mut next)
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other || self.alpha_canonical() == other.alpha_canonical()
    }

    /// Splits `λx⃗. h a⃗` into its binders, head and arguments.
    pub fn head_form(&self) -> HeadForm {
        let mut binders = Vec::new();
        let mut t = self;
        while let Term::Abs(x, b) = t {
            binders.push(x.clone());
            t = b;
        }
        let mut args = Vec::new();
        while let Term::App(f, a) = t {
            args.push((**a).clone());
            t = f;
        }
        args.reverse();
        HeadForm {
            binders,
            head: t.clone(),
            args,
        }
    }

    /// Largest number of enclosing binders whose variables occur free in a
    /// common subterm. Only defined on β-normal terms.
    pub fn nesting_depth(&self) -> Result<usize, NotBetaNormal> {
        if !is_beta_normal(self) {
            return Err(NotBetaNormal);
        }
        fn walk<'a>(t: &'a Term, path: &mut Vec<&'a str>) -> usize {
            // A shadowed binder has no free occurrences below its shadow, so
            // each name counts once.
            let fv = t.free_vars();
            let here = fv.iter().filter(|x| path.contains(&x.as_str())).count();
            let below = match t {
                Term::Var(_) | Term::Const { .. } => 0,
                Term::Abs(x, b) => {
                    path.push(x);
                    let d = walk(b, path);
                    path.pop();
                    d
                }
                Term::App(f, a) => walk(f, path).max(walk(a, path)),
            };
            here.max(below)
        }
        Ok(walk(self, &mut Vec::new()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("nesting depth is only defined on β-normal terms")]
pub struct NotBetaNormal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadForm {
    pub binders: Vec<String>,
    pub head: Term,
    pub args: Vec<Term>,
}

fn canonical_name(k: usize) -> String {
    const BASE: [&str; 4] = ["x", "y", "w", "v"];
    let stem = BASE[k % BASE.len()];
    match k / BASE.len() {
        0 => stem.to_string(),
        n => format!("{stem}{n}"),
    }
}

/// `base` if allowed, else `stem1`, `stem2`, … where `stem` is `base`
/// without trailing digits.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !taken(n))
        .expect("unbounded")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Const { name, index } => {
                f.write_str(&name.to_uppercase())?;
                if *index > 0 {
                    write!(f, "#{index}")?;
                }
                Ok(())
            }
            Term::Abs(x, b) => write!(f, "\\{x}. {b}"),
            Term::App(fun, arg) => {
                match **fun {
                    Term::Abs(..) => write!(f, "({fun})")?,
                    _ => write!(f, "{fun}")?,
                }
                match **arg {
                    Term::App(..) | Term::Abs(..) => write!(f, " ({arg})"),
                    _ => write!(f, " {arg}"),
                }
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
