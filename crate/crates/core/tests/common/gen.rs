//! Random well-typed linear λ-terms, with redexes, over constants invented
//! on demand.

use indexmap::IndexMap;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use lambridge::{SimpleType, Term};

pub struct TermGen {
    rng: StdRng,
    pub consts: IndexMap<String, SimpleType>,
    fresh: usize,
}

type Ctx = Vec<(String, SimpleType)>;

impl TermGen {
    pub fn new(seed: u64) -> Self {
        TermGen {
            rng: StdRng::seed_from_u64(seed),
            consts: IndexMap::new(),
            fresh: 0,
        }
    }

    pub fn var(&mut self) -> String {
        self.fresh += 1;
        format!("v{}", self.fresh)
    }

    fn constant(&mut self, ty: SimpleType) -> Term {
        let name = format!("k{}", self.consts.len());
        self.consts.insert(name.clone(), ty);
        Term::constant(name, 0)
    }

    pub fn ty(&mut self, depth: usize) -> SimpleType {
        let atoms = ["a", "b"];
        if depth == 0 || self.rng.random_bool(0.5) {
            SimpleType::base(atoms[self.rng.random_range(0..2)])
        } else {
            let a = self.ty(depth - 1);
            let b = self.ty(depth - 1);
            SimpleType::arrow(a, b)
        }
    }

    fn split(&mut self, ctx: Ctx) -> (Ctx, Ctx) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for item in ctx {
            if self.rng.random_bool(0.5) {
                left.push(item);
            } else {
                right.push(item);
            }
        }
        (left, right)
    }

    /// A term of type `ty` using every variable of `ctx` exactly once.
    pub fn term(&mut self, ty: &SimpleType, ctx: Ctx, budget: usize) -> Term {
        if budget == 0 {
            return self.leaf(ty, ctx);
        }
        match self.rng.random_range(0..4) {
            0 if matches!(ty, SimpleType::Arrow(..)) => {
                let SimpleType::Arrow(a, b) = ty else { unreachable!() };
                let x = self.var();
                let mut ctx = ctx;
                ctx.push((x.clone(), (**a).clone()));
                Term::abs(x, self.term(b, ctx, budget - 1))
            }
            1 if budget >= 2 => {
                let a = self.ty(1);
                let (c1, c2) = self.split(ctx);
                let x = self.var();
                let mut c1 = c1;
                c1.push((x.clone(), a.clone()));
                let body = self.term(ty, c1, budget - 2);
                let arg = self.term(&a, c2, budget - 2);
                Term::app(Term::abs(x, body), arg)
            }
            2 => {
                let a = self.ty(1);
                let (c1, c2) = self.split(ctx);
                let f = self.term(&SimpleType::arrow(a.clone(), ty.clone()), c1, budget - 1);
                let arg = self.term(&a, c2, budget - 1);
                Term::app(f, arg)
            }
            _ => self.leaf(ty, ctx),
        }
    }

    fn leaf(&mut self, ty: &SimpleType, mut ctx: Ctx) -> Term {
        if let [(x, t)] = ctx.as_slice() {
            if t == ty {
                return Term::var(x.as_str());
            }
        }
        ctx.shuffle(&mut self.rng);
        let k = self.constant(SimpleType::arrows(ctx.iter().map(|(_, t)| t.clone()), ty.clone()));
        Term::apply_all(k, ctx.into_iter().map(|(x, _)| Term::var(x)))
    }
}

pub fn depth(t: &Term) -> usize {
    match t {
        Term::Var(_) | Term::Const { .. } => 0,
        Term::Abs(_, b) => 1 + depth(b),
        Term::App(f, a) => 1 + depth(f).max(depth(a)),
    }
}

/// Every term one β-step away.
pub fn beta_steps(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    match t {
        Term::Var(_) | Term::Const { .. } => {}
        Term::Abs(x, b) => out.extend(beta_steps(b).into_iter().map(|b| Term::abs(x.clone(), b))),
        Term::App(f, a) => {
            if let Term::Abs(x, body) = f.as_ref() {
                out.push(body.substitute(x, a));
            }
            out.extend(beta_steps(f).into_iter().map(|f| Term::app(f, (**a).clone())));
            out.extend(beta_steps(a).into_iter().map(|a| Term::app((**f).clone(), a)));
        }
    }
    out
}

/// Every term one η-reduction away.
pub fn eta_reductions(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    match t {
        Term::Var(_) | Term::Const { .. } => {}
        Term::Abs(x, b) => {
            if let Term::App(f, a) = b.as_ref() {
                if matches!(a.as_ref(), Term::Var(y) if y == x) && !f.occurs_free(x) {
                    out.push((**f).clone());
                }
            }
            out.extend(eta_reductions(b).into_iter().map(|b| Term::abs(x.clone(), b)));
        }
        Term::App(f, a) => {
            out.extend(eta_reductions(f).into_iter().map(|f| Term::app(f, (**a).clone())));
            out.extend(eta_reductions(a).into_iter().map(|a| Term::app((**f).clone(), a)));
        }
    }
    out
}
