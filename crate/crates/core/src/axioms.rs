//! Proper axioms: flattening, the base set A₀, the operators Q1 and Q2, the
//! accessibility filter and the leveling loop.

use std::collections::HashSet;
use std::fmt;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::context::{ContextItem, ContextWord};
use crate::grammar::Grammar;
use crate::lambda::{beta_normalize, fresh_name, Term};
use crate::prover::{Prover, SearchError};
use crate::sequent::Sequent;
use crate::types::{Connective, OrientedType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Provenance {
    /// Flattening of a lexical type.
    E1 { lexeme: String, index: usize },
    /// Flattening of a strictly positive type around a variable head.
    E2 { ty: OrientedType },
    /// Boundary variable `y:γ` abstracted through `x:α ⊢ v : γ`.
    Q1 {
        parent: usize,
        alpha: OrientedType,
        gamma: OrientedType,
        v: Term,
    },
    /// Boundary variable `y:α` replaced by `z x` with `z:c(δ, α)`.
    Q2 { parent: usize, delta: OrientedType },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::E1 { lexeme, index } => write!(f, "E1 {lexeme}#{index}"),
            Provenance::E2 { ty } => write!(f, "E2 {ty}"),
            Provenance::Q1 {
                parent,
                alpha,
                gamma,
                v,
            } => write!(f, "Q1 of #{parent} alpha={alpha} gamma={gamma} v={v}"),
            Provenance::Q2 { parent, delta } => write!(f, "Q2 of #{parent} delta={delta}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperAxiom {
    /// Stable within one leveling run.
    pub id: usize,
    pub sequent: Sequent,
    pub provenance: Provenance,
    /// Round in which the axiom first appeared.
    pub generation: usize,
}

impl ProperAxiom {
    pub fn term(&self) -> &Term {
        self.sequent.term.as_ref().expect("axioms carry terms")
    }
}

impl fmt::Display for ProperAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}   # #{} gen {} {}",
            self.sequent, self.id, self.generation, self.provenance
        )
    }
}

/// Axioms deduplicated by [`Sequent::canonical_key`], in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomSet {
    axioms: IndexMap<String, ProperAxiom>,
    pub generation: usize,
    next_id: usize,
}

impl AxiomSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an axiom unless an α-variant is present; returns whether it was
    /// new.
    pub fn insert(&mut self, sequent: Sequent, provenance: Provenance, generation: usize) -> bool {
        let key = sequent.canonical_key();
        if self.axioms.contains_key(&key) {
            return false;
        }
        let id = self.next_id;
        self.next_id += 1;
        self.axioms.insert(
            key,
            ProperAxiom {
                id,
                sequent,
                provenance,
                generation,
            },
        );
        true
    }

    pub fn contains_key(&self, key: &str) -> bool {
        self.axioms.contains_key(key)
    }

    pub fn contains(&self, sequent: &Sequent) -> bool {
        self.contains_key(&sequent.canonical_key())
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ProperAxiom> {
        self.axioms.values()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.axioms.keys().map(String::as_str)
    }

    pub fn get(&self, i: usize) -> Option<&ProperAxiom> {
        self.axioms.get_index(i).map(|(_, a)| a)
    }

    pub fn by_id(&self, id: usize) -> Option<&ProperAxiom> {
        self.axioms.values().find(|a| a.id == id)
    }

    /// Same sequents up to renaming.
    pub fn is_subset(&self, other: &AxiomSet) -> bool {
        self.keys().all(|k| other.contains_key(k))
    }

    /// Number of axioms per generation.
    pub fn generation_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.generation + 1];
        for a in self.iter() {
            if a.generation >= counts.len() {
                counts.resize(a.generation + 1, 0);
            }
            counts[a.generation] += 1;
        }
        counts
    }

    fn retain(&mut self, keep: impl Fn(&ProperAxiom) -> bool) {
        self.axioms.retain(|_, a| keep(a));
    }

    /// One line per axiom: `context |- term : type   # provenance`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for a in self.iter() {
            out.push_str(&a.to_string());
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlattenError {
    #[error("variable head of type {0} is not strictly positive")]
    NotStrictlyPositive(OrientedType),
}

/// `π(α)[head] ⊢ head z₁ … zₙ : ρ(α)`: the arguments of `α` become fresh
/// variables `z₁ … zₙ`, each attached on the side its slash points to.
pub fn flatten(
    alpha: &OrientedType,
    head: ContextItem,
    strict_positive: &IndexSet<OrientedType>,
) -> Result<Sequent, FlattenError> {
    let head_term = match &head {
        ContextItem::Lexeme(name) => Term::constant(name.clone(), 0),
        ContextItem::Var { name, ty } => {
            if !strict_positive.contains(ty) {
                return Err(FlattenError::NotStrictlyPositive(ty.clone()));
            }
            Term::var(name.clone())
        }
    };
    let d = alpha.decompose();
    let mut ctx = ContextWord::singleton(head.clone());
    let mut args = Vec::new();
    let mut i = 0;
    for (c, arg) in &d.arguments {
        let name = loop {
            i += 1;
            let n = format!("z{i}");
            if head.var_name() != Some(n.as_str()) {
                break n;
            }
        };
        ctx = ctx.attach(*c, ContextItem::var(name.clone(), (*arg).clone()));
        args.push(Term::var(name));
    }
    Ok(Sequent::new(
        ctx,
        Term::apply_all(head_term, args),
        OrientedType::atom(d.result),
    ))
}

/// The E1 axiom of a lexical entry; `None` when the entry does not exist.
pub fn flatten_lexeme(g: &Grammar, lexeme: &str, index: usize) -> Option<Sequent> {
    let ty = g.lexical_type(lexeme, index)?;
    let mut s = flatten(ty, ContextItem::lexeme(lexeme), &IndexSet::new()).expect("lexeme head");
    let args = s.term.take().expect("built with a term").head_form().args;
    s.term = Some(Term::apply_all(Term::constant(lexeme, index), args));
    Some(s)
}

/// E1 axioms for every lexical entry, then E2 axioms for every strictly
/// positive type.
pub fn build_a0(g: &Grammar) -> AxiomSet {
    let mut set = AxiomSet::new();
    for (lexeme, index, _) in g.entries() {
        set.insert(
            flatten_lexeme(g, lexeme, index).expect("entry exists"),
            Provenance::E1 {
                lexeme: lexeme.to_string(),
                index,
            },
            0,
        );
    }
    let strict = g.signed_occurrences().strict_positive;
    for ty in &strict {
        let s = flatten(ty, ContextItem::var("x", ty.clone()), &strict).expect("strictly positive");
        set.insert(s, Provenance::E2 { ty: ty.clone() }, 0);
    }
    set
}

fn taken_names(ctx: &ContextWord, term: &Term) -> HashSet<String> {
    let mut names = term.all_names();
    names.extend(ctx.var_names().map(str::to_string));
    names
}

/// Q1 over every axiom of `base`.
pub fn q1(
    base: &AxiomSet,
    strict_positive: &IndexSet<OrientedType>,
    prover: &mut Prover<'_>,
) -> Result<Vec<(Sequent, Provenance)>, SearchError> {
    let mut out = Vec::new();
    for ax in base.iter() {
        let u = ax.term();
        for c in Connective::BOTH {
            let Some((gamma_ctx, ContextItem::Var { name: y, ty: gamma })) = ax.sequent.context.split_boundary(c)
            else {
                continue;
            };
            for alpha in strict_positive {
                let Some(v) = prover.prove_arg(alpha, &gamma)? else {
                    continue;
                };
                let taken = taken_names(&ax.sequent.context, u);
                let x = fresh_name("x", |n| taken.contains(n));
                let v_x = v.substitute("x", &Term::var(x.clone()));
                let body = beta_normalize(&u.substitute(&y, &v_x));
                out.push((
                    Sequent::new(
                        gamma_ctx.clone(),
                        Term::abs(x, body),
                        OrientedType::slash(c, alpha.clone(), ax.sequent.ty.clone()),
                    ),
                    Provenance::Q1 {
                        parent: ax.id,
                        alpha: alpha.clone(),
                        gamma: gamma.clone(),
                        v,
                    },
                ));
            }
        }
    }
    Ok(out)
}

/// Q2 over every axiom of `base`, with `δ` ranging over the strictly
/// positive types.
pub fn q2(base: &AxiomSet, strict_positive: &IndexSet<OrientedType>) -> Vec<(Sequent, Provenance)> {
    let mut out = Vec::new();
    for ax in base.iter() {
        let u = ax.term();
        for c in Connective::BOTH {
            let Some((gamma_ctx, ContextItem::Var { name: y, ty: alpha })) = ax.sequent.context.split_boundary(c)
            else {
                continue;
            };
            for delta in strict_positive {
                let taken = taken_names(&ax.sequent.context, u);
                let z = fresh_name("z", |n| taken.contains(n));
                let x = fresh_name("x", |n| taken.contains(n) || n == z);
                let zx = Term::app(Term::var(z.clone()), Term::var(x.clone()));
                let body = beta_normalize(&u.substitute(&y, &zx));
                let z_ty = OrientedType::slash(c, delta.clone(), alpha.clone());
                out.push((
                    Sequent::new(
                        gamma_ctx.attach(c, ContextItem::var(z, z_ty)),
                        Term::abs(x, body),
                        OrientedType::slash(c, delta.clone(), ax.sequent.ty.clone()),
                    ),
                    Provenance::Q2 {
                        parent: ax.id,
                        delta: delta.clone(),
                    },
                ));
            }
        }
    }
    out
}

/// Types reachable from the start symbol: seeded with `s`, closed under
/// "some axiom concluding a reachable type has a variable of this type".
pub fn reachable_types(axioms: &AxiomSet, g: &Grammar) -> IndexSet<OrientedType> {
    let mut reachable: IndexSet<OrientedType> = IndexSet::new();
    reachable.insert(g.start_type());
    loop {
        let before = reachable.len();
        for a in axioms.iter() {
            if reachable.contains(&a.sequent.ty) {
                for item in a.sequent.context.iter() {
                    if let Some(t) = item.var_type() {
                        reachable.insert(t.clone());
                    }
                }
            }
        }
        if reachable.len() == before {
            return reachable;
        }
    }
}

/// Keeps the axioms whose conclusion type is reachable.
pub fn accessible_filter(axioms: &AxiomSet, g: &Grammar) -> AxiomSet {
    let reachable = reachable_types(axioms, g);
    let mut out = axioms.clone();
    out.retain(|a| reachable.contains(&a.sequent.ty));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelOptions {
    pub iterations: usize,
    /// Apply the accessibility filter after every round.
    pub filter: bool,
}

impl Default for LevelOptions {
    fn default() -> Self {
        LevelOptions {
            iterations: 3,
            filter: true,
        }
    }
}

/// The leveling loop: start from A₀ and add `Q1(B) ∪ Q2(B)` for the given
/// number of rounds.
pub fn level(g: &Grammar, options: LevelOptions) -> Result<AxiomSet, SearchError> {
    let mut prover = Prover::new(g);
    level_with(g, options, &mut prover)
}

pub fn level_with(g: &Grammar, options: LevelOptions, prover: &mut Prover<'_>) -> Result<AxiomSet, SearchError> {
    let strict = g.signed_occurrences().strict_positive;
    let mut b1 = build_a0(g);
    if options.filter {
        b1 = accessible_filter(&b1, g);
    }
    for round in 1..=options.iterations {
        let b0 = b1.clone();
        let mut fresh = q1(&b0, &strict, prover)?;
        fresh.extend(q2(&b0, &strict));
        for (s, p) in fresh {
            b1.insert(s, p, round);
        }
        if options.filter {
            b1 = accessible_filter(&b1, g);
        }
        b1.generation = round;
    }
    Ok(b1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn seq(s: &str) -> Sequent {
        s.parse().unwrap()
    }

    #[test]
    fn flatten_examples() {
        let none = IndexSet::new();
        let voit: OrientedType = "(np\\s)/np".parse().unwrap();
        let s = flatten(&voit, ContextItem::lexeme("voit"), &none).unwrap();
        assert_eq!(s.to_string(), "z2:np, voit, z1:np |- VOIT z1 z2 : s");
        let que: OrientedType = "(n\\n)/(s/np)".parse().unwrap();
        let s = flatten(&que, ContextItem::lexeme("que"), &none).unwrap();
        assert_eq!(s.to_string(), "z2:n, que, z1:s/np |- QUE z1 z2 : n");
        let np: OrientedType = "np".parse().unwrap();
        let strict: IndexSet<_> = [np.clone()].into();
        let s = flatten(&np, ContextItem::var("x", np.clone()), &strict).unwrap();
        assert_eq!(s.to_string(), "x:np |- x : np");
        assert!(flatten(&np, ContextItem::var("x", np.clone()), &none).is_err());
    }

    #[test]
    fn a0_sizes() {
        assert_eq!(build_a0(&fixtures::g0()).len(), 6 + 5);
        assert_eq!(build_a0(&fixtures::g1()).len(), 3 + 3);
        let single: Grammar = "atoms: p\nstart: p\nt : p".parse().unwrap();
        let a0 = build_a0(&single);
        assert_eq!(a0.len(), 1);
        assert!(a0.contains(&seq("t |- T : p")));
    }

    #[test]
    fn a0_of_g1_has_the_leaves_used_for_bbaac() {
        let a0 = build_a0(&fixtures::g1());
        assert!(a0.contains(&seq("b, z1:s/r |- B z1 : s")));
        assert!(a0.contains(&seq("a, z1:s, z2:r |- A z1 z2 : s")));
    }

    #[test]
    fn multi_typed_lexemes_keep_their_index() {
        let g: Grammar = "atoms: s np\nstart: s\nx : np\nx : s/np".parse().unwrap();
        let a0 = build_a0(&g);
        assert!(a0.contains(&seq("x, z1:np |- X#1 z1 : s")));
    }

    #[test]
    fn q1_examples() {
        let g = fixtures::g0();
        let strict = g.signed_occurrences().strict_positive;
        let mut prover = Prover::new(&g);
        let mut base = AxiomSet::new();
        base.insert(
            seq("z2:np, voit, z1:np |- VOIT z1 z2 : s"),
            Provenance::E1 {
                lexeme: "voit".into(),
                index: 0,
            },
            0,
        );
        base.insert(
            seq("x:np |- x : np"),
            Provenance::E2 {
                ty: "np".parse().unwrap(),
            },
            0,
        );
        let out = q1(&base, &strict, &mut prover).unwrap();
        let keys: Vec<String> = out.iter().map(|(s, _)| s.canonical_key()).collect();
        assert!(keys.contains(&seq("z2:np, voit |- \\x. VOIT x z2 : s/np").canonical_key()));
        assert!(out.iter().all(|(s, _)| s.context.len() == 2));

        let g1 = fixtures::g1();
        let strict = g1.signed_occurrences().strict_positive;
        let mut prover = Prover::new(&g1);
        let mut base = AxiomSet::new();
        base.insert(
            seq("a, z1:s, z2:r |- A z1 z2 : s"),
            Provenance::E1 {
                lexeme: "a".into(),
                index: 0,
            },
            0,
        );
        let out = q1(&base, &strict, &mut prover).unwrap();
        let keys: Vec<String> = out.iter().map(|(s, _)| s.canonical_key()).collect();
        assert!(keys.contains(&seq("a, z1:s |- \\x. A z1 x : s/r").canonical_key()));
    }

    #[test]
    fn q2_example() {
        let g1 = fixtures::g1();
        let strict = g1.signed_occurrences().strict_positive;
        let mut base = AxiomSet::new();
        base.insert(
            seq("a, z1:s |- \\x. A z1 x : s/r"),
            Provenance::E2 {
                ty: "s".parse().unwrap(),
            },
            0,
        );
        base.insert(
            seq("x:np |- x : np"),
            Provenance::E2 {
                ty: "np".parse().unwrap(),
            },
            0,
        );
        let out = q2(&base, &strict);
        let keys: Vec<String> = out.iter().map(|(s, _)| s.canonical_key()).collect();
        assert!(keys.contains(&seq("a, z:s/r |- \\x. \\y. A (z x) y : (s/r)/r").canonical_key()));
        // Singletons have no boundary to rewrite.
        assert!(out
            .iter()
            .all(|(s, _)| s.context.iter().any(|i| i.var_name().is_none())));
    }

    #[test]
    fn filter_keeps_a0_of_g0() {
        let g = fixtures::g0();
        let a0 = build_a0(&g);
        assert_eq!(accessible_filter(&a0, &g).len(), a0.len());
    }

    #[test]
    fn filter_drops_unreachable_results() {
        let g = fixtures::g0();
        let mut set = build_a0(&g);
        set.insert(
            seq("z1:np, voit, z2:np/n |- \\x. VOIT (z2 x) z1 : s/n"),
            Provenance::E2 {
                ty: "s".parse().unwrap(),
            },
            1,
        );
        let kept = accessible_filter(&set, &g);
        assert_eq!(kept.len(), set.len() - 1);
    }

    #[test]
    fn level_zero_is_filtered_a0() {
        let g = fixtures::g1();
        let l0 = level(
            &g,
            LevelOptions {
                iterations: 0,
                filter: true,
            },
        )
        .unwrap();
        assert_eq!(l0, accessible_filter(&build_a0(&g), &g));
    }

    #[test]
    fn level_one_of_g0_has_the_operated_axiom() {
        let g = fixtures::g0();
        let l1 = level(
            &g,
            LevelOptions {
                iterations: 1,
                filter: true,
            },
        )
        .unwrap();
        assert!(l1.contains(&seq("z2:np, voit |- \\x. VOIT x z2 : s/np")));
        assert_eq!(l1.generation, 1);
    }
}
