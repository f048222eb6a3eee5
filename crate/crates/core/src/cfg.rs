//! The context-free grammar read off a set of proper axioms: one production
//! `β → Γ` per axiom `Γ ⊢ β`, where lexemes stay terminals and every typed
//! variable becomes the nonterminal named by its type.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{AxiomSet, ProperAxiom};
use crate::context::{ContextItem, ContextWord};
use crate::derivation::{Derivation, Rule};
use crate::grammar::Grammar;
use crate::sequent::Sequent;
use crate::types::OrientedType;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    Terminal(String),
    Nonterminal(OrientedType),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Terminal(t) => write!(f, "\"{t}\""),
            Symbol::Nonterminal(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Production {
    pub lhs: OrientedType,
    pub rhs: Vec<Symbol>,
    /// The axiom the production was read from; absent for imported grammars.
    pub axiom: Option<ProperAxiom>,
}

impl Production {
    pub fn is_unit(&self) -> bool {
        matches!(self.rhs.as_slice(), [Symbol::Nonterminal(_)])
    }
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        for s in &self.rhs {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cfg {
    pub nonterminals: IndexSet<OrientedType>,
    pub terminals: IndexSet<String>,
    pub productions: Vec<Production>,
    pub start: OrientedType,
}

/// A derivation tree; `children` follow the nonterminals of the production's
/// right-hand side.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParseTree {
    pub production: usize,
    /// Token range `[start, end)`.
    pub span: (usize, usize),
    pub children: Vec<ParseTree>,
}

impl ParseTree {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ParseTree::size).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfgError {
    #[error("production {0} has no originating axiom")]
    NoAxiom(usize),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("no start declaration")]
    MissingStart,
}

pub fn to_cfg(axioms: &AxiomSet, g: &Grammar) -> Cfg {
    let start = g.start_type();
    let mut nonterminals = IndexSet::new();
    nonterminals.insert(start.clone());
    let mut terminals = IndexSet::new();
    let mut productions = Vec::with_capacity(axioms.len());
    for ax in axioms.iter() {
        nonterminals.insert(ax.sequent.ty.clone());
        let rhs = ax
            .sequent
            .context
            .iter()
            .map(|item| match item {
                ContextItem::Lexeme(l) => {
                    terminals.insert(l.clone());
                    Symbol::Terminal(l.clone())
                }
                ContextItem::Var { ty, .. } => {
                    nonterminals.insert(ty.clone());
                    Symbol::Nonterminal(ty.clone())
                }
            })
            .collect();
        productions.push(Production {
            lhs: ax.sequent.ty.clone(),
            rhs,
            axiom: Some(ax.clone()),
        });
    }
    Cfg {
        nonterminals,
        terminals,
        productions,
        start,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Sym {
    T(u32),
    N(u32),
}

/// Index-based view of a grammar, built once and reused across inputs.
pub struct Recognizer<'c> {
    cfg: &'c Cfg,
    rhs: Vec<Vec<Sym>>,
    lhs: Vec<u32>,
    by_lhs: Vec<Vec<usize>>,
    term_ids: HashMap<String, u32>,
    /// Non-unit productions keyed by their first symbol.
    first_t: HashMap<u32, Vec<usize>>,
    first_n: Vec<Vec<usize>>,
    /// Unit productions `A → B`, keyed by `B`.
    units: Vec<Vec<u32>>,
}

impl<'c> Recognizer<'c> {
    pub fn new(cfg: &'c Cfg) -> Self {
        let mut term_ids: HashMap<String, u32> = HashMap::new();
        for t in &cfg.terminals {
            let id = term_ids.len() as u32;
            term_ids.entry(t.clone()).or_insert(id);
        }
        let k = cfg.nonterminals.len();
        let nt = |t: &OrientedType| cfg.nonterminals.get_index_of(t).expect("declared") as u32;
        let mut r = Recognizer {
            cfg,
            rhs: Vec::new(),
            lhs: Vec::new(),
            by_lhs: vec![Vec::new(); k],
            term_ids,
            first_t: HashMap::new(),
            first_n: vec![Vec::new(); k],
            units: vec![Vec::new(); k],
        };
        for (i, p) in cfg.productions.iter().enumerate() {
            let l = nt(&p.lhs);
            let rhs: Vec<Sym> = p
                .rhs
                .iter()
                .map(|s| match s {
                    Symbol::Terminal(t) => {
                        let next = r.term_ids.len() as u32;
                        Sym::T(*r.term_ids.entry(t.clone()).or_insert(next))
                    }
                    Symbol::Nonterminal(n) => Sym::N(nt(n)),
                })
                .collect();
            match rhs.as_slice() {
                [Sym::N(b)] => r.units[*b as usize].push(l),
                [Sym::T(t), ..] => r.first_t.entry(*t).or_default().push(i),
                [Sym::N(b), ..] => r.first_n[*b as usize].push(i),
                [] => {}
            }
            r.by_lhs[l as usize].push(i);
            r.lhs.push(l);
            r.rhs.push(rhs);
        }
        r
    }

    pub fn chart(&self, tokens: &[impl AsRef<str>]) -> Chart<'_> {
        let toks: Vec<Option<u32>> = tokens.iter().map(|t| self.term_ids.get(t.as_ref()).copied()).collect();
        let n = toks.len();
        let k = self.cfg.nonterminals.len();
        let mut chart = Chart {
            rec: self,
            tokens: toks,
            cells: vec![vec![vec![false; k]; n + 1]; n + 1],
        };
        for len in 1..=n {
            for i in 0..=n - len {
                chart.fill(i, i + len);
            }
        }
        chart
    }

    pub fn recognizes(&self, tokens: &[impl AsRef<str>]) -> bool {
        self.chart(tokens).accepts()
    }
}

/// Which nonterminals derive which spans of one input.
pub struct Chart<'r> {
    rec: &'r Recognizer<'r>,
    tokens: Vec<Option<u32>>,
    /// `cells[i][j]`: nonterminals deriving tokens `i..j`.
    cells: Vec<Vec<Vec<bool>>>,
}

impl<'r> Chart<'r> {
    fn fill(&mut self, i: usize, j: usize) {
        let rec = self.rec;
        let mut candidates: Vec<usize> = Vec::new();
        if let Some(ps) = self.tokens[i].and_then(|t| rec.first_t.get(&t)) {
            candidates.extend(ps);
        }
        for e in i + 1..j {
            for (b, &present) in self.cells[i][e].iter().enumerate() {
                if present {
                    candidates.extend(&rec.first_n[b]);
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        let mut found = Vec::new();
        for p in candidates {
            let l = rec.lhs[p] as usize;
            if !self.cells[i][j][l] && self.matches(&rec.rhs[p], i, j) {
                self.cells[i][j][l] = true;
                found.push(l);
            }
        }
        while let Some(b) = found.pop() {
            for &a in &rec.units[b] {
                if !self.cells[i][j][a as usize] {
                    self.cells[i][j][a as usize] = true;
                    found.push(a as usize);
                }
            }
        }
    }

    fn matches(&self, rhs: &[Sym], i: usize, j: usize) -> bool {
        let Some((first, rest)) = rhs.split_first() else {
            return i == j;
        };
        if rhs.len() > j - i {
            return false;
        }
        match *first {
            Sym::T(t) => self.tokens[i] == Some(t) && self.matches(rest, i + 1, j),
            Sym::N(n) => (i + 1..=j - rest.len()).any(|e| self.cells[i][e][n as usize] && self.matches(rest, e, j)),
        }
    }

    /// All ways to lay `rhs` over `i..j`, as one span per symbol.
    fn layouts(&self, rhs: &[Sym], i: usize, j: usize) -> Vec<Vec<(usize, usize)>> {
        let Some((first, rest)) = rhs.split_first() else {
            return if i == j { vec![Vec::new()] } else { Vec::new() };
        };
        if rhs.len() > j - i {
            return Vec::new();
        }
        let ends: Vec<usize> = match *first {
            Sym::T(t) if self.tokens[i] == Some(t) => vec![i + 1],
            Sym::T(_) => Vec::new(),
            Sym::N(n) => (i + 1..=j - rest.len())
                .filter(|&e| self.cells[i][e][n as usize])
                .collect(),
        };
        let mut out = Vec::new();
        for e in ends {
            for mut tail in self.layouts(rest, e, j) {
                tail.insert(0, (i, e));
                out.push(tail);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn derives(&self, nonterminal: &OrientedType, i: usize, j: usize) -> bool {
        match self.rec.cfg.nonterminals.get_index_of(nonterminal) {
            Some(n) if i < j && j <= self.len() => self.cells[i][j][n],
            _ => false,
        }
    }

    pub fn accepts(&self) -> bool {
        !self.is_empty() && self.derives(&self.rec.cfg.start, 0, self.len())
    }

    /// Up to `cap` parse trees of the whole input, in leftmost order. A unit
    /// chain never visits the same nonterminal twice.
    pub fn trees(&self, cap: usize) -> Vec<ParseTree> {
        if !self.accepts() || cap == 0 {
            return Vec::new();
        }
        let s = self
            .rec
            .cfg
            .nonterminals
            .get_index_of(&self.rec.cfg.start)
            .expect("start") as u32;
        self.trees_of(s, 0, self.len(), &mut vec![s], cap)
    }

    fn trees_of(&self, nt: u32, i: usize, j: usize, chain: &mut Vec<u32>, cap: usize) -> Vec<ParseTree> {
        let mut out = Vec::new();
        for &p in &self.rec.by_lhs[nt as usize] {
            let rhs = &self.rec.rhs[p];
            for layout in self.layouts(rhs, i, j) {
                let mut partial: Vec<Vec<ParseTree>> = vec![Vec::new()];
                for (sym, &(a, b)) in rhs.iter().zip(&layout) {
                    let Sym::N(child) = *sym else { continue };
                    let subtrees = if (a, b) == (i, j) {
                        if chain.contains(&child) {
                            Vec::new()
                        } else {
                            chain.push(child);
                            let t = self.trees_of(child, a, b, chain, cap);
                            chain.pop();
                            t
                        }
                    } else {
                        self.trees_of(child, a, b, &mut vec![child], cap)
                    };
                    let mut next = Vec::new();
                    'combine: for prefix in &partial {
                        for t in &subtrees {
                            let mut v = prefix.clone();
                            v.push(t.clone());
                            next.push(v);
                            if next.len() >= cap {
                                break 'combine;
                            }
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                for children in partial {
                    out.push(ParseTree {
                        production: p,
                        span: (i, j),
                        children,
                    });
                    if out.len() >= cap {
                        return out;
                    }
                }
            }
        }
        out
    }
}

impl Cfg {
    pub fn recognizer(&self) -> Recognizer<'_> {
        Recognizer::new(self)
    }

    pub fn recognizes(&self, tokens: &[impl AsRef<str>]) -> bool {
        self.recognizer().recognizes(tokens)
    }

    /// Up to `cap` parse trees.
    pub fn parse(&self, tokens: &[impl AsRef<str>], cap: usize) -> Vec<ParseTree> {
        self.recognizer().chart(tokens).trees(cap)
    }

    /// The terminal word spelled by a tree.
    pub fn leaves(&self, tree: &ParseTree) -> Vec<String> {
        let mut out = Vec::new();
        let mut children = tree.children.iter();
        for s in &self.productions[tree.production].rhs {
            match s {
                Symbol::Terminal(t) => out.push(t.clone()),
                Symbol::Nonterminal(_) => out.extend(self.leaves(children.next().expect("one child per nonterminal"))),
            }
        }
        out
    }

    /// Every word of length `1..=max_len` derivable from the start symbol.
    pub fn enumerate_language(&self, max_len: usize) -> BTreeSet<Vec<String>> {
        let c = Recognizer::new(self);
        let k = self.nonterminals.len();
        let mut sets: Vec<HashSet<Vec<u32>>> = vec![HashSet::new(); k];
        if max_len > 0 {
            loop {
                let mut changed = false;
                for p in 0..c.rhs.len() {
                    let mut acc: Vec<Vec<u32>> = vec![Vec::new()];
                    for sym in &c.rhs[p] {
                        let mut next = Vec::new();
                        for w in &acc {
                            match *sym {
                                Sym::T(t) if w.len() < max_len => {
                                    let mut w = w.clone();
                                    w.push(t);
                                    next.push(w);
                                }
                                Sym::T(_) => {}
                                Sym::N(n) => {
                                    for u in &sets[n as usize] {
                                        if w.len() + u.len() <= max_len {
                                            let mut w = w.clone();
                                            w.extend_from_slice(u);
                                            next.push(w);
                                        }
                                    }
                                }
                            }
                        }
                        acc = next;
                        if acc.is_empty() {
                            break;
                        }
                    }
                    let l = c.lhs[p] as usize;
                    for w in acc {
                        changed |= sets[l].insert(w);
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        let names: HashMap<u32, &str> = c.term_ids.iter().map(|(t, &i)| (i, t.as_str())).collect();
        let s = self.nonterminals.get_index_of(&self.start).expect("start");
        sets[s]
            .iter()
            .map(|w| w.iter().map(|t| names[t].to_string()).collect())
            .collect()
    }

    /// Nonterminals reachable from the start symbol, and nonterminals that
    /// derive some terminal word.
    pub fn reachable_productive(&self) -> (IndexSet<OrientedType>, IndexSet<OrientedType>) {
        let mut reachable = IndexSet::new();
        reachable.insert(self.start.clone());
        loop {
            let before = reachable.len();
            for p in &self.productions {
                if reachable.contains(&p.lhs) {
                    for s in &p.rhs {
                        if let Symbol::Nonterminal(n) = s {
                            reachable.insert(n.clone());
                        }
                    }
                }
            }
            if reachable.len() == before {
                break;
            }
        }
        let mut productive = IndexSet::new();
        loop {
            let before = productive.len();
            for p in &self.productions {
                if p.rhs.iter().all(|s| match s {
                    Symbol::Terminal(_) => true,
                    Symbol::Nonterminal(n) => productive.contains(n),
                }) {
                    productive.insert(p.lhs.clone());
                }
            }
            if productive.len() == before {
                break;
            }
        }
        (reachable, productive)
    }

    /// `start: s` followed by one `lhs -> rhs` line per production.
    pub fn to_bnf(&self) -> String {
        let mut out = format!("start: {}\n", self.start);
        for p in &self.productions {
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    /// Reads the format written by [`Cfg::to_bnf`]; `#` starts a comment.
    pub fn from_bnf(text: &str) -> Result<Cfg, CfgError> {
        let mut start = None;
        let mut nonterminals = IndexSet::new();
        let mut terminals = IndexSet::new();
        let mut productions = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| CfgError::Syntax { line: line_no, message };
            if let Some(s) = line.strip_prefix("start:") {
                let ty: OrientedType = s.trim().parse().map_err(|e| syntax(format!("{e}")))?;
                start = Some(ty);
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| syntax("expected `lhs -> rhs`".into()))?;
            let lhs: OrientedType = lhs.trim().parse().map_err(|e| syntax(format!("{e}")))?;
            nonterminals.insert(lhs.clone());
            let mut symbols = Vec::new();
            for tok in rhs.split_whitespace() {
                if let Some(t) = tok.strip_prefix('"').and_then(|t| t.strip_suffix('"')) {
                    terminals.insert(t.to_string());
                    symbols.push(Symbol::Terminal(t.to_string()));
                } else {
                    let ty: OrientedType = tok.parse().map_err(|e| syntax(format!("{e}")))?;
                    nonterminals.insert(ty.clone());
                    symbols.push(Symbol::Nonterminal(ty));
                }
            }
            if symbols.is_empty() {
                return Err(syntax("empty right-hand side".into()));
            }
            productions.push(Production {
                lhs,
                rhs: symbols,
                axiom: None,
            });
        }
        let start = start.ok_or(CfgError::MissingStart)?;
        let mut all = IndexSet::new();
        all.insert(start.clone());
        all.extend(nonterminals);
        Ok(Cfg {
            nonterminals: all,
            terminals,
            productions,
            start,
        })
    }
}

fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

impl FromStr for Cfg {
    type Err = CfgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Cfg::from_bnf(s)
    }
}

/// Replays a parse tree as a cut-only derivation: every node becomes a copy
/// of its axiom with fresh variable names, and its children are cut into the
/// variables from left to right.
pub fn tree_to_cut_proof(cfg: &Cfg, tree: &ParseTree) -> Result<Derivation, CfgError> {
    let mut counter = 0;
    build_cut(cfg, tree, &mut counter)
}

fn build_cut(cfg: &Cfg, tree: &ParseTree, counter: &mut usize) -> Result<Derivation, CfgError> {
    let ax = cfg.productions[tree.production]
        .axiom
        .as_ref()
        .ok_or(CfgError::NoAxiom(tree.production))?;
    let mut rename = HashMap::new();
    let mut vars = Vec::new();
    for name in ax.sequent.context.var_names() {
        *counter += 1;
        let fresh = format!("y{counter}");
        rename.insert(name.to_string(), fresh.clone());
        vars.push(fresh);
    }
    let mut d = Derivation::leaf(Rule::PaxI, ax.sequent.rename_vars(&rename));
    for (var, child) in vars.into_iter().zip(&tree.children) {
        let minor = build_cut(cfg, child, counter)?;
        let major_ctx: &ContextWord = &d.conclusion.context;
        let pos = major_ctx.position_of_var(&var).expect("renamed variable");
        let ctx = major_ctx.replace_at(pos, &minor.conclusion.context);
        let term = d.term().substitute(&var, minor.term());
        let ty = d.conclusion.ty.clone();
        d = Derivation::node(Rule::Cut { var }, Sequent::new(ctx, term, ty), vec![d, minor]);
    }
    Ok(d)
}
