//! A brute-force enumerator of β-normal η-long natural-deduction proofs.
//!
//! No memo table, no pruning beyond the non-empty-antecedent condition: goals
//! with a compound type are introduced, atomic goals pick every possible head
//! and every split of the remaining context between the head's arguments.
#![allow(dead_code)]

pub mod gen;

use std::cell::Cell;
use std::collections::BTreeSet;

use lambridge::{Connective, Grammar, OrientedType, Term};

#[derive(Clone, Debug)]
enum Item {
    Lex(String),
    Hyp(String, OrientedType),
}

pub struct Oracle<'g> {
    g: &'g Grammar,
    fresh: Cell<usize>,
}

impl<'g> Oracle<'g> {
    pub fn new(g: &'g Grammar) -> Self {
        Oracle { g, fresh: Cell::new(0) }
    }

    /// Every normal proof term of `tokens ⊢ s`, up to α.
    pub fn terms(&self, tokens: &[impl AsRef<str>]) -> Vec<Term> {
        if tokens.is_empty() {
            return Vec::new();
        }
        let ctx: Vec<Item> = tokens.iter().map(|t| Item::Lex(t.as_ref().to_string())).collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for t in self.prove(&ctx, &self.g.start_type()) {
            if seen.insert(t.alpha_canonical().to_string()) {
                out.push(t);
            }
        }
        out
    }

    /// The least nesting over all normal proofs, if any.
    pub fn min_nesting(&self, tokens: &[impl AsRef<str>]) -> Option<usize> {
        self.terms(tokens).iter().map(nesting).min()
    }

    fn fresh(&self) -> String {
        let n = self.fresh.get();
        self.fresh.set(n + 1);
        format!("h{n}")
    }

    fn prove(&self, ctx: &[Item], goal: &OrientedType) -> Vec<Term> {
        if ctx.is_empty() {
            return Vec::new();
        }
        if let OrientedType::Slash {
            connective,
            argument,
            result,
        } = goal
        {
            let x = self.fresh();
            let hyp = Item::Hyp(x.clone(), (**argument).clone());
            let mut extended = ctx.to_vec();
            match connective {
                Connective::Over => extended.push(hyp),
                Connective::Under => extended.insert(0, hyp),
            }
            return self
                .prove(&extended, result)
                .into_iter()
                .map(|t| Term::abs(x.clone(), t))
                .collect();
        }
        let mut out = Vec::new();
        for k in 0..ctx.len() {
            let (left, right) = (&ctx[..k], &ctx[k + 1..]);
            match &ctx[k] {
                Item::Lex(w) => {
                    for (i, ty) in self.g.types_of(w).iter().enumerate() {
                        out.extend(self.spine(left, Term::constant(w.as_str(), i), ty, right, goal));
                    }
                }
                Item::Hyp(x, ty) => out.extend(self.spine(left, Term::var(x.as_str()), ty, right, goal)),
            }
        }
        out
    }

    fn spine(&self, left: &[Item], head: Term, ty: &OrientedType, right: &[Item], goal: &OrientedType) -> Vec<Term> {
        let mut out = Vec::new();
        match ty {
            OrientedType::Atom(_) => {
                if ty == goal && left.is_empty() && right.is_empty() {
                    out.push(head);
                }
            }
            OrientedType::Slash {
                connective: Connective::Over,
                argument,
                result,
            } => {
                for i in 1..=right.len() {
                    for v in self.prove(&right[..i], argument) {
                        out.extend(self.spine(left, Term::app(head.clone(), v), result, &right[i..], goal));
                    }
                }
            }
            OrientedType::Slash {
                connective: Connective::Under,
                argument,
                result,
            } => {
                for j in 0..left.len() {
                    for v in self.prove(&left[j..], argument) {
                        out.extend(self.spine(&left[..j], Term::app(head.clone(), v), result, right, goal));
                    }
                }
            }
        }
        out
    }
}

/// Nesting of a term whose binders are pairwise distinct: the largest number
/// of enclosing binders whose variables are all free in one subterm.
pub fn nesting(t: &Term) -> usize {
    fn walk(t: &Term, binders: &mut Vec<String>, best: &mut usize) {
        let fv = t.free_vars();
        let here = binders.iter().filter(|b| fv.contains(*b)).count();
        *best = (*best).max(here);
        match t {
            Term::Var(_) | Term::Const { .. } => {}
            Term::Abs(x, b) => {
                binders.push(x.clone());
                walk(b, binders, best);
                binders.pop();
            }
            Term::App(f, a) => {
                walk(f, binders, best);
                walk(a, binders, best);
            }
        }
    }
    let mut best = 0;
    walk(t, &mut Vec::new(), &mut best);
    best
}

/// Every word over the grammar's lexemes of length `1..=max_len`.
pub fn words(g: &Grammar, max_len: usize) -> Vec<Vec<String>> {
    let lexemes: Vec<String> = g.lexemes().map(String::from).collect();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &lexemes {
                let mut w = w.clone();
                w.push(l.clone());
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn toks(s: &str) -> Vec<String> {
    Grammar::tokenize(s)
}
