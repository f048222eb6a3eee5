//! β-normalization and type-directed η-long expansion.

use super::typing::{check_simple, ConstTypes, SimpleType, TypeError, TypingEnv};
use super::{fresh_name, Term};

pub fn is_beta_normal(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Const { .. } => true,
        Term::Abs(_, b) => is_beta_normal(b),
        Term::App(f, a) => !matches!(**f, Term::Abs(..)) && is_beta_normal(f) && is_beta_normal(a),
    }
}

/// β-normal form. Terminates on linear (and more generally typable) terms.
pub fn beta_normalize(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Const { .. } => t.clone(),
        Term::Abs(x, b) => Term::abs(x.clone(), beta_normalize(b)),
        Term::App(f, a) => match beta_normalize(f) {
            Term::Abs(x, body) => beta_normalize(&body.substitute(&x, a)),
            f => Term::app(f, beta_normalize(a)),
        },
    }
}

/// η-long expansion of a β-normal term at `ty`.
pub fn eta_long<C: ConstTypes + ?Sized>(
    t: &Term,
    ty: &SimpleType,
    env: &TypingEnv,
    consts: &C,
) -> Result<Term, TypeError> {
    let mut scope: Vec<(String, SimpleType)> = env.iter().map(|(n, t)| (n.clone(), t.clone())).collect();
    long(t, ty, &mut scope, consts)
}

fn clash(expected: &SimpleType, found: impl ToString) -> TypeError {
    TypeError::Clash {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn long<C: ConstTypes + ?Sized>(
    t: &Term,
    ty: &SimpleType,
    scope: &mut Vec<(String, SimpleType)>,
    consts: &C,
) -> Result<Term, TypeError> {
    match (t, ty) {
        (Term::Abs(x, b), SimpleType::Arrow(a, r)) => {
            scope.push((x.clone(), (**a).clone()));
            let body = long(b, r, scope, consts);
            scope.pop();
            Ok(Term::abs(x.clone(), body?))
        }
        (Term::Abs(..), SimpleType::Base(_)) => Err(clash(ty, "an abstraction")),
        (_, SimpleType::Arrow(a, r)) => {
            let names = t.all_names();
            let x = fresh_name("x", |n| names.contains(n) || scope.iter().any(|(m, _)| m == n));
            scope.push((x.clone(), (**a).clone()));
            let body = long(&Term::app(t.clone(), Term::var(x.clone())), r, scope, consts);
            scope.pop();
            Ok(Term::abs(x, body?))
        }
        (_, SimpleType::Base(_)) => {
            let hf = t.head_form();
            let head_ty = match &hf.head {
                Term::Var(x) => scope
                    .iter()
                    .rev()
                    .find(|(n, _)| n == x)
                    .map(|(_, t)| t.clone())
                    .ok_or_else(|| TypeError::Unbound(x.clone()))?,
                Term::Const { name, index } => {
                    consts
                        .const_type(name, *index)
                        .ok_or_else(|| TypeError::UnknownConstant {
                            name: name.clone(),
                            index: *index,
                        })?
                }
                other => return Err(clash(ty, format!("non-normal head {other}"))),
            };
            let mut current = &head_ty;
            let mut args = Vec::with_capacity(hf.args.len());
            for arg in &hf.args {
                let SimpleType::Arrow(a, r) = current else {
                    return Err(clash(ty, &head_ty));
                };
                args.push(long(arg, a, scope, consts)?);
                current = r;
            }
            if current != ty {
                return Err(clash(ty, current));
            }
            Ok(Term::apply_all(hf.head, args))
        }
    }
}

/// The β-normal η-long form of `u` at `ty`.
pub fn beta_eta_normalize<C: ConstTypes + ?Sized>(
    u: &Term,
    ty: &SimpleType,
    env: &TypingEnv,
    consts: &C,
) -> Result<Term, TypeError> {
    check_simple(env, u, ty, consts)?;
    eta_long(&beta_normalize(u), ty, env, consts)
}
