//! Proof search for β-normal η-long natural-deduction derivations.
//!
//! A goal `Γ ⊢ β` is solved by peeling every introduction off `β` (each
//! `c(α, β')` adds a fresh `x:α` on the `c` side of `Γ`), then choosing a
//! head in the context whose type returns the remaining atom, and growing a
//! block around the head: every `/` argument takes a non-empty segment to the
//! right, every `\` argument one to the left, until the block is the whole
//! context. Each argument is a subgoal. The total size of the types involved
//! strictly decreases, so the search space is finite.
//!
//! A memoized decider computes, for every subgoal, whether it is derivable
//! and the least nesting depth of its derivations; enumeration only explores
//! derivable branches.

use std::collections::HashMap;

use indexmap::IndexMap;
use thiserror::Error;

use crate::context::{ContextItem, ContextWord};
use crate::derivation::{Derivation, Rule};
use crate::grammar::Grammar;
use crate::lambda::{fresh_name, Term};
use crate::sequent::Sequent;
use crate::types::{Connective, OrientedType};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum nesting of subgoals.
    pub max_depth: usize,
    /// Maximum number of fresh subgoals expanded per query.
    pub max_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_depth: 40,
            max_nodes: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search budget exhausted ({nodes} nodes, depth {depth})")]
    BudgetExhausted { nodes: usize, depth: usize },
    #[error("unknown lexeme `{0}`")]
    UnknownLexeme(String),
    #[error("empty sentence")]
    EmptyInput,
}

type TypeId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Key {
    Lex(u32),
    Hyp(TypeId),
}

#[derive(Default)]
struct TypeTable {
    ids: HashMap<OrientedType, TypeId>,
    types: Vec<OrientedType>,
    /// `(arguments, atomic result)` per type.
    shapes: Vec<(Vec<(Connective, TypeId)>, TypeId)>,
    /// `Some((c, argument, result))` for slashes.
    slash: Vec<Option<(Connective, TypeId, TypeId)>>,
}

impl TypeTable {
    fn intern(&mut self, ty: &OrientedType) -> TypeId {
        if let Some(&id) = self.ids.get(ty) {
            return id;
        }
        let parts = match ty {
            OrientedType::Atom(_) => None,
            OrientedType::Slash {
                connective,
                argument,
                result,
            } => Some((*connective, self.intern(argument), self.intern(result))),
        };
        let id = self.types.len() as TypeId;
        self.types.push(ty.clone());
        self.ids.insert(ty.clone(), id);
        self.slash.push(parts);
        let shape = match parts {
            None => (Vec::new(), id),
            Some((c, a, r)) => {
                let (mut args, res) = self.shapes[r as usize].clone();
                args.insert(0, (c, a));
                (args, res)
            }
        };
        self.shapes.push(shape);
        id
    }
}

/// A proof-search session over one grammar. Keeps its memo tables between
/// queries; not shared between threads (use one per worker).
pub struct Prover<'g> {
    grammar: &'g Grammar,
    budget: Budget,
    table: TypeTable,
    lex_ids: IndexMap<String, u32>,
    lex_types: Vec<Vec<TypeId>>,
    memo: HashMap<(Vec<Key>, TypeId), Option<u32>>,
    arg_cache: HashMap<(OrientedType, OrientedType), Option<Term>>,
    nodes: usize,
}

struct Ctx {
    items: Vec<ContextItem>,
    keys: Vec<Key>,
}

impl<'g> Prover<'g> {
    pub fn new(grammar: &'g Grammar) -> Self {
        Self::with_budget(grammar, Budget::default())
    }

    pub fn with_budget(grammar: &'g Grammar, budget: Budget) -> Self {
        let mut table = TypeTable::default();
        let mut lex_ids = IndexMap::new();
        let mut lex_types = Vec::new();
        for lexeme in grammar.lexemes() {
            lex_ids.insert(lexeme.to_string(), lex_types.len() as u32);
            lex_types.push(grammar.types_of(lexeme).iter().map(|t| table.intern(t)).collect());
        }
        Prover {
            grammar,
            budget,
            table,
            lex_ids,
            lex_types,
            memo: HashMap::new(),
            arg_cache: HashMap::new(),
            nodes: 0,
        }
    }

    pub fn grammar(&self) -> &'g Grammar {
        self.grammar
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    fn key_of(&mut self, item: &ContextItem) -> Result<Key, SearchError> {
        match item {
            ContextItem::Lexeme(l) => self
                .lex_ids
                .get(l)
                .map(|&id| Key::Lex(id))
                .ok_or_else(|| SearchError::UnknownLexeme(l.clone())),
            ContextItem::Var { ty, .. } => Ok(Key::Hyp(self.table.intern(ty))),
        }
    }

    fn keys_of(&mut self, ctx: &ContextWord) -> Result<Vec<Key>, SearchError> {
        ctx.iter().map(|i| self.key_of(i)).collect()
    }

    fn words(tokens: &[impl AsRef<str>]) -> Result<ContextWord, SearchError> {
        ContextWord::from_lexemes(tokens).map_err(|_| SearchError::EmptyInput)
    }

    fn tick(&mut self, depth: usize) -> Result<(), SearchError> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes || depth > self.budget.max_depth {
            return Err(SearchError::BudgetExhausted {
                nodes: self.nodes,
                depth,
            });
        }
        Ok(())
    }

    /// Least nesting depth over all normal derivations of `ctx ⊢ goal`, or
    /// `None` when it is not derivable.
    pub fn min_nesting(&mut self, ctx: &ContextWord, goal: &OrientedType) -> Result<Option<usize>, SearchError> {
        let keys = self.keys_of(ctx)?;
        let goal = self.table.intern(goal);
        self.nodes = 0;
        Ok(self.decide(keys, goal, 0)?.map(|d| d as usize))
    }

    pub fn is_derivable(&mut self, ctx: &ContextWord, goal: &OrientedType) -> Result<bool, SearchError> {
        Ok(self.min_nesting(ctx, goal)?.is_some())
    }

    /// Whether the sentence derives the start symbol.
    pub fn accepts(&mut self, tokens: &[impl AsRef<str>]) -> Result<bool, SearchError> {
        let ctx = Self::words(tokens)?;
        let s = self.grammar.start_type();
        self.is_derivable(&ctx, &s)
    }

    /// Whether the sentence derives the start symbol with at most `bound`
    /// nested introductions.
    pub fn accepts_within(&mut self, tokens: &[impl AsRef<str>], bound: usize) -> Result<bool, SearchError> {
        let ctx = Self::words(tokens)?;
        let s = self.grammar.start_type();
        Ok(self.min_nesting(&ctx, &s)?.is_some_and(|d| d <= bound))
    }

    fn peel(&mut self, mut keys: Vec<Key>, mut goal: TypeId) -> (Vec<Key>, TypeId) {
        while let Some((c, a, r)) = self.table.slash[goal as usize] {
            match c {
                Connective::Over => keys.push(Key::Hyp(a)),
                Connective::Under => keys.insert(0, Key::Hyp(a)),
            }
            goal = r;
        }
        (keys, goal)
    }

    fn head_types(&self, key: Key) -> Vec<TypeId> {
        match key {
            Key::Lex(id) => self.lex_types[id as usize].clone(),
            Key::Hyp(t) => vec![t],
        }
    }

    fn decide(&mut self, keys: Vec<Key>, goal: TypeId, depth: usize) -> Result<Option<u32>, SearchError> {
        let (keys, goal) = self.peel(keys, goal);
        if let Some(&r) = self.memo.get(&(keys.clone(), goal)) {
            return Ok(r);
        }
        self.tick(depth)?;
        let vars = keys.iter().filter(|k| matches!(k, Key::Hyp(_))).count() as u32;
        let n = keys.len();
        let mut best: Option<u32> = None;
        for p in 0..n {
            for head in self.head_types(keys[p]) {
                let (args, res) = self.table.shapes[head as usize].clone();
                if res != goal {
                    continue;
                }
                let mut found = None;
                self.best_split(&keys, &args, 0, p, p + 1, 0, depth, &mut found)?;
                if let Some(v) = found {
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
        }
        let r = best.map(|b| b.max(vars));
        self.memo.insert((keys, goal), r);
        Ok(r)
    }

    /// Minimizes, over all segmentations of the remaining arguments, the
    /// maximum nesting of the argument subgoals.
    #[allow(clippy::too_many_arguments)]
    fn best_split(
        &mut self,
        keys: &[Key],
        args: &[(Connective, TypeId)],
        i: usize,
        lo: usize,
        hi: usize,
        acc: u32,
        depth: usize,
        best: &mut Option<u32>,
    ) -> Result<(), SearchError> {
        let n = keys.len();
        if i == args.len() {
            if lo == 0 && hi == n {
                *best = Some(best.map_or(acc, |b| b.min(acc)));
            }
            return Ok(());
        }
        let rest = &args[i..];
        let overs = rest.iter().filter(|(c, _)| *c == Connective::Over).count();
        let unders = rest.len() - overs;
        if overs > n - hi || unders > lo || (overs == 0 && hi != n) || (unders == 0 && lo != 0) {
            return Ok(());
        }
        let (c, arg) = args[i];
        let (overs_after, unders_after) = match c {
            Connective::Over => (overs - 1, unders),
            Connective::Under => (overs, unders - 1),
        };
        let room = match c {
            Connective::Over => n - hi,
            Connective::Under => lo,
        };
        let reserve = match c {
            Connective::Over => overs_after,
            Connective::Under => unders_after,
        };
        for len in 1..=room.saturating_sub(reserve) {
            let (seg, lo2, hi2) = match c {
                Connective::Over => (&keys[hi..hi + len], lo, hi + len),
                Connective::Under => (&keys[lo - len..lo], lo - len, hi),
            };
            if let Some(d) = self.decide(seg.to_vec(), arg, depth + 1)? {
                let acc2 = acc.max(d);
                if best.is_some_and(|b| b <= acc2) {
                    continue;
                }
                self.best_split(keys, args, i + 1, lo2, hi2, acc2, depth, best)?;
            }
        }
        Ok(())
    }

    /// Up to `limit` derivations of the sentence at the start symbol.
    pub fn prove_ie(&mut self, tokens: &[impl AsRef<str>], limit: usize) -> Result<Vec<Derivation>, SearchError> {
        let ctx = Self::words(tokens)?;
        let s = self.grammar.start_type();
        self.prove_sequent(&ctx, &s, limit, None)
    }

    pub fn prove_ie_first(&mut self, tokens: &[impl AsRef<str>]) -> Result<Option<Derivation>, SearchError> {
        Ok(self.prove_ie(tokens, 1)?.into_iter().next())
    }

    /// Up to `limit` normal derivations of `ctx ⊢ goal`, optionally only
    /// those with at most `bound` nested introductions. Derivations come in
    /// the deterministic search order: heads left to right, lexicon entries
    /// in file order, segments by increasing length.
    pub fn prove_sequent(
        &mut self,
        ctx: &ContextWord,
        goal: &OrientedType,
        limit: usize,
        bound: Option<usize>,
    ) -> Result<Vec<Derivation>, SearchError> {
        if limit == 0 {
            return Ok(Vec::new());
        }
        let keys = self.keys_of(ctx)?;
        let gid = self.table.intern(goal);
        self.nodes = 0;
        let c = Ctx {
            items: ctx.items().to_vec(),
            keys,
        };
        self.derive(c, gid, limit, bound.map(|b| b as u32), 0)
    }

    fn admissible(
        &mut self,
        keys: Vec<Key>,
        goal: TypeId,
        bound: Option<u32>,
        depth: usize,
    ) -> Result<bool, SearchError> {
        Ok(match self.decide(keys, goal, depth)? {
            None => false,
            Some(d) => bound.is_none_or(|b| d <= b),
        })
    }

    fn derive(
        &mut self,
        ctx: Ctx,
        goal: TypeId,
        limit: usize,
        bound: Option<u32>,
        depth: usize,
    ) -> Result<Vec<Derivation>, SearchError> {
        if !self.admissible(ctx.keys.clone(), goal, bound, depth)? {
            return Ok(Vec::new());
        }
        self.tick(depth)?;
        // Peel introductions, remembering each intermediate conclusion.
        let mut items = ctx.items;
        let mut keys = ctx.keys;
        let mut g = goal;
        let mut peeled: Vec<(ContextWord, OrientedType, Connective, String)> = Vec::new();
        while let Some((c, a, r)) = self.table.slash[g as usize] {
            let word = ContextWord::new(items.clone()).expect("non-empty");
            let x = fresh_name("x", |n| items.iter().any(|i| i.var_name() == Some(n)));
            let hyp = ContextItem::var(x.clone(), self.table.types[a as usize].clone());
            peeled.push((word, self.table.types[g as usize].clone(), c, x));
            match c {
                Connective::Over => {
                    items.push(hyp);
                    keys.push(Key::Hyp(a));
                }
                Connective::Under => {
                    items.insert(0, hyp);
                    keys.insert(0, Key::Hyp(a));
                }
            }
            g = r;
        }
        let mut bodies = Vec::new();
        let n = items.len();
        'heads: for p in 0..n {
            let heads: Vec<(usize, TypeId)> = self.head_types(keys[p]).into_iter().enumerate().collect();
            for (index, head) in heads {
                let (args, res) = self.table.shapes[head as usize].clone();
                if res != g {
                    continue;
                }
                let mut splits = Vec::new();
                self.splits(&keys, &args, 0, p, p + 1, bound, depth, &mut Vec::new(), &mut splits)?;
                for segs in splits {
                    let leaf = self.head_leaf(&items[p], index, head);
                    let remaining = limit - bodies.len();
                    let built = self.build_spine(leaf, &items, &args, &segs, remaining, bound, depth)?;
                    bodies.extend(built);
                    if bodies.len() >= limit {
                        break 'heads;
                    }
                }
            }
        }
        // Wrap the introductions back, innermost first.
        let mut out = bodies;
        for (word, ty, c, _) in peeled.into_iter().rev() {
            out = out
                .into_iter()
                .map(|d| {
                    let x = match d.conclusion.context.split_boundary(c) {
                        Some((_, ContextItem::Var { name, .. })) => name,
                        _ => unreachable!("peeled variable sits on the boundary"),
                    };
                    let term = Term::abs(x, d.term().clone());
                    Derivation::node(Rule::Intro(c), Sequent::new(word.clone(), term, ty.clone()), vec![d])
                })
                .collect();
        }
        Ok(out)
    }

    fn head_leaf(&self, item: &ContextItem, index: usize, head: TypeId) -> Derivation {
        let ty = self.table.types[head as usize].clone();
        let ctx = ContextWord::singleton(item.clone());
        match item {
            ContextItem::Lexeme(name) => Derivation::leaf(
                Rule::Lex { index },
                Sequent::new(ctx, Term::constant(name.clone(), index), ty),
            ),
            ContextItem::Var { name, .. } => Derivation::leaf(Rule::Ax, Sequent::new(ctx, Term::var(name.clone()), ty)),
        }
    }

    /// All admissible segmentations, as `(start, end)` ranges per argument.
    #[allow(clippy::too_many_arguments)]
    fn splits(
        &mut self,
        keys: &[Key],
        args: &[(Connective, TypeId)],
        i: usize,
        lo: usize,
        hi: usize,
        bound: Option<u32>,
        depth: usize,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) -> Result<(), SearchError> {
        let n = keys.len();
        if i == args.len() {
            if lo == 0 && hi == n {
                out.push(current.clone());
            }
            return Ok(());
        }
        let rest = &args[i..];
        let overs = rest.iter().filter(|(c, _)| *c == Connective::Over).count();
        let unders = rest.len() - overs;
        if overs > n - hi || unders > lo || (overs == 0 && hi != n) || (unders == 0 && lo != 0) {
            return Ok(());
        }
        let (c, arg) = args[i];
        let (room, reserve) = match c {
            Connective::Over => (n - hi, overs - 1),
            Connective::Under => (lo, unders - 1),
        };
        for len in 1..=room.saturating_sub(reserve) {
            let (range, lo2, hi2) = match c {
                Connective::Over => ((hi, hi + len), lo, hi + len),
                Connective::Under => ((lo - len, lo), lo - len, hi),
            };
            if self.admissible(keys[range.0..range.1].to_vec(), arg, bound, depth + 1)? {
                current.push(range);
                self.splits(keys, args, i + 1, lo2, hi2, bound, depth, current, out)?;
                current.pop();
            }
        }
        Ok(())
    }

    /// Builds the elimination spine over every combination of argument
    /// derivations, up to `limit` results.
    #[allow(clippy::too_many_arguments)]
    fn build_spine(
        &mut self,
        leaf: Derivation,
        items: &[ContextItem],
        args: &[(Connective, TypeId)],
        segs: &[(usize, usize)],
        limit: usize,
        bound: Option<u32>,
        depth: usize,
    ) -> Result<Vec<Derivation>, SearchError> {
        let mut partial = vec![leaf];
        for (&(c, arg), &(a, b)) in args.iter().zip(segs) {
            let sub = Ctx {
                items: items[a..b].to_vec(),
                keys: items[a..b].iter().map(|i| self.key_of(i)).collect::<Result<_, _>>()?,
            };
            let minors = self.derive(sub, arg, limit, bound, depth + 1)?;
            let result_ty = match &partial[0].conclusion.ty {
                OrientedType::Slash { result, .. } => (**result).clone(),
                OrientedType::Atom(_) => unreachable!("one argument per slash"),
            };
            let mut next = Vec::new();
            'outer: for major in &partial {
                for minor in &minors {
                    let ctx = ContextWord::combine(c, &major.conclusion.context, &minor.conclusion.context);
                    let term = Term::app(major.term().clone(), minor.term().clone());
                    next.push(Derivation::node(
                        Rule::Elim(c),
                        Sequent::new(ctx, term, result_ty.clone()),
                        vec![major.clone(), minor.clone()],
                    ));
                    if next.len() >= limit {
                        break 'outer;
                    }
                }
            }
            partial = next;
        }
        Ok(partial)
    }

    /// A term `v` with `x:α ⊢ v : γ`, the first one found; cached per
    /// `(α, γ)`.
    pub fn prove_arg(&mut self, alpha: &OrientedType, gamma: &OrientedType) -> Result<Option<Term>, SearchError> {
        let key = (alpha.clone(), gamma.clone());
        if let Some(hit) = self.arg_cache.get(&key) {
            return Ok(hit.clone());
        }
        let ctx = ContextWord::singleton(ContextItem::var("x", alpha.clone()));
        let found = self
            .prove_sequent(&ctx, gamma, 1, None)?
            .into_iter()
            .next()
            .map(|d| d.term().clone());
        self.arg_cache.insert(key, found.clone());
        Ok(found)
    }
}

/// Oriented typing of a β-normal term: whether `ctx ⊢ term : ty` has a
/// normal derivation whose extracted term is `term`.
pub fn typecheck_oriented(grammar: &Grammar, ctx: &ContextWord, term: &Term, ty: &OrientedType) -> bool {
    check_oriented(grammar, ctx.items(), term, ty)
}

fn check_oriented(grammar: &Grammar, items: &[ContextItem], term: &Term, ty: &OrientedType) -> bool {
    if items.is_empty() {
        return false;
    }
    if let Term::Abs(x, body) = term {
        let OrientedType::Slash {
            connective,
            argument,
            result,
        } = ty
        else {
            return false;
        };
        if items.iter().any(|i| i.var_name() == Some(x)) {
            return false;
        }
        let mut extended = items.to_vec();
        let hyp = ContextItem::var(x.clone(), (**argument).clone());
        match connective {
            Connective::Over => extended.push(hyp),
            Connective::Under => extended.insert(0, hyp),
        }
        return check_oriented(grammar, &extended, body, result);
    }
    let hf = term.head_form();
    let candidates: Vec<(usize, OrientedType)> = match &hf.head {
        Term::Var(x) => items
            .iter()
            .enumerate()
            .filter_map(|(p, i)| match i {
                ContextItem::Var { name, ty } if name == x => Some((p, ty.clone())),
                _ => None,
            })
            .collect(),
        Term::Const { name, index } => match grammar.lexical_type(name, *index) {
            Some(t) => items
                .iter()
                .enumerate()
                .filter(|(_, i)| matches!(i, ContextItem::Lexeme(l) if l == name))
                .map(|(p, _)| (p, t.clone()))
                .collect(),
            None => Vec::new(),
        },
        _ => return false,
    };
    candidates.into_iter().any(|(p, head_ty)| {
        let mut args = Vec::new();
        let mut t = &head_ty;
        for _ in &hf.args {
            match t {
                OrientedType::Slash {
                    connective,
                    argument,
                    result,
                } => {
                    args.push((*connective, argument.as_ref()));
                    t = result;
                }
                OrientedType::Atom(_) => return false,
            }
        }
        if t != ty {
            return false;
        }
        grow(grammar, items, &hf.args, &args, 0, p, p + 1)
    })
}

fn grow(
    grammar: &Grammar,
    items: &[ContextItem],
    terms: &[Term],
    args: &[(Connective, &OrientedType)],
    i: usize,
    lo: usize,
    hi: usize,
) -> bool {
    if i == args.len() {
        return lo == 0 && hi == items.len();
    }
    let (c, arg) = args[i];
    let room = match c {
        Connective::Over => items.len() - hi,
        Connective::Under => lo,
    };
    (1..=room).any(|len| {
        let (seg, lo2, hi2) = match c {
            Connective::Over => (&items[hi..hi + len], lo, hi + len),
            Connective::Under => (&items[lo - len..lo], lo - len, hi),
        };
        check_oriented(grammar, seg, &terms[i], arg) && grow(grammar, items, terms, args, i + 1, lo2, hi2)
    })
}
