//! Simple (non-oriented) linear typing.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Term;
use crate::grammar::Grammar;
use crate::types::OrientedType;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    Base(String),
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn base(name: impl Into<String>) -> Self {
        SimpleType::Base(name.into())
    }

    pub fn arrow(argument: SimpleType, result: SimpleType) -> Self {
        SimpleType::Arrow(Box::new(argument), Box::new(result))
    }

    /// `a₁ → … → aₙ → result`.
    pub fn arrows(arguments: impl IntoIterator<Item = SimpleType>, result: SimpleType) -> Self {
        let args: Vec<_> = arguments.into_iter().collect();
        args.into_iter().rev().fold(result, |acc, a| SimpleType::arrow(a, acc))
    }

    /// 1 on base types, `max(1 + ord(α), ord(β))` on `α → β`.
    pub fn order(&self) -> usize {
        match self {
            SimpleType::Base(_) => 1,
            SimpleType::Arrow(a, b) => (1 + a.order()).max(b.order()),
        }
    }

    /// Argument types and final base type.
    pub fn uncurry(&self) -> (Vec<&SimpleType>, &str) {
        let mut args = Vec::new();
        let mut t = self;
        loop {
            match t {
                SimpleType::Base(b) => return (args, b),
                SimpleType::Arrow(a, r) => {
                    args.push(a.as_ref());
                    t = r;
                }
            }
        }
    }

    pub fn bases(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                SimpleType::Base(b) => {
                    if !out.contains(&b.as_str()) {
                        out.push(b.as_str());
                    }
                }
                SimpleType::Arrow(a, r) => {
                    stack.push(r);
                    stack.push(a);
                }
            }
        }
        out
    }

    /// Replaces every base type through `f`.
    pub fn map_bases(&self, f: &impl Fn(&str) -> SimpleType) -> SimpleType {
        match self {
            SimpleType::Base(b) => f(b),
            SimpleType::Arrow(a, r) => SimpleType::arrow(a.map_bases(f), r.map_bases(f)),
        }
    }
}

/// τ₀: forgets the orientation of slashes, `c(α, β) ↦ α → β`.
pub fn erase(ty: &OrientedType) -> SimpleType {
    match ty {
        OrientedType::Atom(a) => SimpleType::Base(a.clone()),
        OrientedType::Slash { argument, result, .. } => SimpleType::arrow(erase(argument), erase(result)),
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Base(b) => f.write_str(b),
            SimpleType::Arrow(a, r) => match **a {
                SimpleType::Arrow(..) => write!(f, "({a}) -> {r}"),
                SimpleType::Base(_) => write!(f, "{a} -> {r}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad simple type `{0}`")]
pub struct SimpleTypeSyntaxError(pub String);

impl FromStr for SimpleType {
    type Err = SimpleTypeSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SimpleTypeSyntaxError(s.to_string());
        let spaced = s.replace('(', " ( ").replace(')', " ) ").replace("->", " -> ");
        let toks: Vec<&str> = spaced.split_whitespace().collect();
        fn arrow(toks: &[&str], pos: &mut usize) -> Option<SimpleType> {
            let a = atom(toks, pos)?;
            if toks.get(*pos) == Some(&"->") {
                *pos += 1;
                let r = arrow(toks, pos)?;
                Some(SimpleType::arrow(a, r))
            } else {
                Some(a)
            }
        }
        fn atom(toks: &[&str], pos: &mut usize) -> Option<SimpleType> {
            match *toks.get(*pos)? {
                "(" => {
                    *pos += 1;
                    let t = arrow(toks, pos)?;
                    (toks.get(*pos) == Some(&")")).then(|| {
                        *pos += 1;
                        t
                    })
                }
                ")" | "->" => None,
                name => {
                    *pos += 1;
                    Some(SimpleType::base(name))
                }
            }
        }
        let mut pos = 0;
        let t = arrow(&toks, &mut pos).ok_or_else(err)?;
        if pos != toks.len() {
            return Err(err());
        }
        Ok(t)
    }
}

impl Serialize for SimpleType {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SimpleType {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Types of constants, looked up by name and χ-index.
pub trait ConstTypes {
    fn const_type(&self, name: &str, index: usize) -> Option<SimpleType>;
}

impl ConstTypes for Grammar {
    fn const_type(&self, name: &str, index: usize) -> Option<SimpleType> {
        self.lexical_type(name, index).map(erase)
    }
}

/// Constants keyed by name only; the index must be 0.
impl ConstTypes for IndexMap<String, SimpleType> {
    fn const_type(&self, name: &str, index: usize) -> Option<SimpleType> {
        if index != 0 {
            return None;
        }
        self.get(name).cloned()
    }
}

impl<T: ConstTypes + ?Sized> ConstTypes for &T {
    fn const_type(&self, name: &str, index: usize) -> Option<SimpleType> {
        (**self).const_type(name, index)
    }
}

/// Variable typings; each variable is bound at most once.
pub type TypingEnv = IndexMap<String, SimpleType>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("unknown constant `{name}#{index}`")]
    UnknownConstant { name: String, index: usize },
    #[error("type clash: expected {expected}, found {found}")]
    Clash { expected: String, found: String },
    #[error("variable `{0}` is not used exactly once")]
    NonLinear(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Base(String),
    Arrow(Box<Ty>, Box<Ty>),
    Meta(usize),
}

impl Ty {
    fn from_simple(t: &SimpleType) -> Ty {
        match t {
            SimpleType::Base(b) => Ty::Base(b.clone()),
            SimpleType::Arrow(a, r) => Ty::Arrow(Box::new(Ty::from_simple(a)), Box::new(Ty::from_simple(r))),
        }
    }
}

#[derive(Default)]
struct Unifier {
    solved: HashMap<usize, Ty>,
    next: usize,
}

impl Unifier {
    fn fresh(&mut self) -> Ty {
        self.next += 1;
        Ty::Meta(self.next - 1)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Meta(m) => match self.solved.get(m) {
                Some(t) => self.resolve(t),
                None => t.clone(),
            },
            Ty::Arrow(a, r) => Ty::Arrow(Box::new(self.resolve(a)), Box::new(self.resolve(r))),
            Ty::Base(_) => t.clone(),
        }
    }

    fn occurs(&self, m: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Meta(n) => n == m,
            Ty::Arrow(a, r) => self.occurs(m, &a) || self.occurs(m, &r),
            Ty::Base(_) => false,
        }
    }

    fn unify(&mut self, expected: &Ty, found: &Ty) -> Result<(), TypeError> {
        let (e, f) = (self.resolve(expected), self.resolve(found));
        match (&e, &f) {
            (Ty::Meta(a), Ty::Meta(b)) if a == b => Ok(()),
            (Ty::Meta(m), other) | (other, Ty::Meta(m)) => {
                if self.occurs(*m, other) {
                    return Err(self.clash(&e, &f));
                }
                self.solved.insert(*m, other.clone());
                Ok(())
            }
            (Ty::Base(a), Ty::Base(b)) if a == b => Ok(()),
            (Ty::Arrow(a1, r1), Ty::Arrow(a2, r2)) => {
                self.unify(a1, a2)?;
                self.unify(r1, r2)
            }
            _ => Err(self.clash(&e, &f)),
        }
    }

    fn clash(&self, e: &Ty, f: &Ty) -> TypeError {
        TypeError::Clash {
            expected: self.render(e).to_string(),
            found: self.render(f).to_string(),
        }
    }

    /// Unsolved metavariables become base types `?k`.
    fn render(&self, t: &Ty) -> SimpleType {
        match self.resolve(t) {
            Ty::Base(b) => SimpleType::Base(b),
            Ty::Meta(m) => SimpleType::Base(format!("?{m}")),
            Ty::Arrow(a, r) => SimpleType::arrow(self.render(&a), self.render(&r)),
        }
    }
}

struct Inference<'a, C: ?Sized> {
    consts: &'a C,
    u: Unifier,
    /// Scoped variable types with their use counts.
    scope: Vec<(String, Ty, usize)>,
}

impl<C: ConstTypes + ?Sized> Inference<'_, C> {
    fn infer(&mut self, t: &Term) -> Result<Ty, TypeError> {
        match t {
            Term::Var(x) => {
                let slot = self
                    .scope
                    .iter_mut()
                    .rev()
                    .find(|(n, _, _)| n == x)
                    .ok_or_else(|| TypeError::Unbound(x.clone()))?;
                slot.2 += 1;
                if slot.2 > 1 {
                    return Err(TypeError::NonLinear(x.clone()));
                }
                Ok(slot.1.clone())
            }
            Term::Const { name, index } => self
                .consts
                .const_type(name, *index)
                .map(|t| Ty::from_simple(&t))
                .ok_or_else(|| TypeError::UnknownConstant {
                    name: name.clone(),
                    index: *index,
                }),
            Term::Abs(x, body) => {
                let a = self.u.fresh();
                self.scope.push((x.clone(), a.clone(), 0));
                let r = self.infer(body)?;
                let (_, _, uses) = self.scope.pop().expect("pushed");
                if uses != 1 {
                    return Err(TypeError::NonLinear(x.clone()));
                }
                Ok(Ty::Arrow(Box::new(a), Box::new(r)))
            }
            Term::App(f, a) => {
                let tf = self.infer(f)?;
                let ta = self.infer(a)?;
                let r = self.u.fresh();
                self.u.unify(&tf, &Ty::Arrow(Box::new(ta), Box::new(r.clone())))?;
                Ok(r)
            }
        }
    }
}

fn run<C: ConstTypes + ?Sized>(
    env: &TypingEnv,
    u: &Term,
    consts: &C,
    expected: Option<&SimpleType>,
) -> Result<SimpleType, TypeError> {
    let mut inf = Inference {
        consts,
        u: Unifier::default(),
        scope: env.iter().map(|(n, t)| (n.clone(), Ty::from_simple(t), 0)).collect(),
    };
    let t = inf.infer(u)?;
    if let Some((name, _, _)) = inf.scope.iter().find(|(_, _, uses)| *uses != 1) {
        return Err(TypeError::NonLinear(name.clone()));
    }
    if let Some(e) = expected {
        inf.u.unify(&Ty::from_simple(e), &t)?;
    }
    Ok(inf.u.render(&t))
}

/// Infers the principal simple type of `u` under `env`, using every
/// variable of `env` exactly once. Unconstrained parts of the type come back
/// as base types named `?k`.
pub fn typecheck_simple<C: ConstTypes + ?Sized>(
    env: &TypingEnv,
    u: &Term,
    consts: &C,
) -> Result<SimpleType, TypeError> {
    run(env, u, consts, None)
}

/// Checks `u` against an expected type.
pub fn check_simple<C: ConstTypes + ?Sized>(
    env: &TypingEnv,
    u: &Term,
    expected: &SimpleType,
    consts: &C,
) -> Result<(), TypeError> {
    run(env, u, consts, Some(expected)).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> SimpleType {
        s.parse().unwrap()
    }

    fn consts(pairs: &[(&str, &str)]) -> IndexMap<String, SimpleType> {
        pairs.iter().map(|(n, t)| (n.to_string(), st(t))).collect()
    }

    #[test]
    fn simple_type_syntax() {
        assert_eq!(st("a -> b -> c"), st("a -> (b -> c)"));
        assert_eq!(st("(a -> b) -> c").to_string(), "(a -> b) -> c");
        assert_eq!(st("(a -> b) -> c").order(), 3);
        assert!("a ->".parse::<SimpleType>().is_err());
        assert!("(a".parse::<SimpleType>().is_err());
    }

    #[test]
    fn erasure() {
        let t: OrientedType = "(n\\n)/(s/np)".parse().unwrap();
        assert_eq!(erase(&t), st("(np -> s) -> n -> n"));
    }

    #[test]
    fn typing_examples() {
        let c = consts(&[("a", "r -> q")]);
        let env: TypingEnv = [("x".to_string(), st("r"))].into_iter().collect();
        assert_eq!(typecheck_simple(&env, &"A x".parse().unwrap(), &c), Ok(st("q")));

        let id = typecheck_simple(&TypingEnv::new(), &"\\x. x".parse().unwrap(), &c).unwrap();
        let SimpleType::Arrow(a, b) = &id else { panic!("{id}") };
        assert_eq!(a, b);

        assert_eq!(
            typecheck_simple(&TypingEnv::new(), &"\\x. x x".parse().unwrap(), &c),
            Err(TypeError::NonLinear("x".into()))
        );
        assert_eq!(
            typecheck_simple(&TypingEnv::new(), &"y".parse().unwrap(), &c),
            Err(TypeError::Unbound("y".into()))
        );
        assert!(matches!(
            typecheck_simple(&env, &"A (A x)".parse().unwrap(), &c),
            Err(TypeError::Clash { .. })
        ));
    }

    #[test]
    fn checking_against_a_type() {
        let c = consts(&[("a", "r -> q")]);
        let t = "\\x. A x".parse().unwrap();
        assert_eq!(check_simple(&TypingEnv::new(), &t, &st("r -> q"), &c), Ok(()));
        assert!(check_simple(&TypingEnv::new(), &t, &st("q -> q"), &c).is_err());
        let id = "\\x. x".parse().unwrap();
        assert_eq!(check_simple(&TypingEnv::new(), &id, &st("p -> p"), &c), Ok(()));
    }

    #[test]
    fn grammar_constants_are_erased() {
        let g: Grammar = "atoms: s np\nstart: s\ndort : np\\s\npierre : np".parse().unwrap();
        assert_eq!(
            typecheck_simple(&TypingEnv::new(), &"DORT PIERRE".parse().unwrap(), &g),
            Ok(st("s"))
        );
        assert!(matches!(
            typecheck_simple(&TypingEnv::new(), &"DORT#1 PIERRE".parse().unwrap(), &g),
            Err(TypeError::UnknownConstant { .. })
        ));
    }
}
