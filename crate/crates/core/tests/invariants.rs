mod common;

use std::collections::BTreeSet;

use common::{words, Oracle};
use indexmap::IndexSet;
use lambridge::axioms::build_a0;
use lambridge::lambda::{beta_eta_normalize, beta_normalize, erase, TypingEnv};
use lambridge::prover::typecheck_oriented;
use lambridge::{
    check_derivation, fixtures, level, to_cfg, tree_to_cut_proof, AxiomSet, Grammar, LevelOptions, OrientedType,
    Provenance, RuleSystem, Term,
};

fn levels(g: &Grammar, filter: bool, upto: usize) -> Vec<AxiomSet> {
    (0..=upto)
        .map(|i| level(g, LevelOptions { iterations: i, filter }).unwrap())
        .collect()
}

/// Strictly positive, or `c(δ, α)` with `δ` strictly positive and `α`
/// admissible.
fn admissible(t: &OrientedType, strict: &IndexSet<OrientedType>) -> bool {
    if strict.contains(t) {
        return true;
    }
    match t {
        OrientedType::Slash { argument, result, .. } => strict.contains(&**argument) && admissible(result, strict),
        OrientedType::Atom(_) => false,
    }
}

#[test]
fn every_axiom_is_sound() {
    for (name, g) in fixtures::all() {
        let strict = g.signed_occurrences().strict_positive;
        for filter in [true, false] {
            let iterations = if filter || name != "g0-ext" { 3 } else { 2 };
            let axioms = level(&g, LevelOptions { iterations, filter }).unwrap();
            for ax in axioms.iter() {
                let s = &ax.sequent;
                let u = ax.term();
                assert!(s.context.is_linear() && u.is_linear(), "{name}: {ax}");
                let vars: BTreeSet<String> = s.context.var_names().map(String::from).collect();
                assert_eq!(u.free_vars(), vars, "{name}: {ax}");
                assert!(typecheck_oriented(&g, &s.context, u, &s.ty), "{name}: {ax}");
                for item in s.context.iter() {
                    if let Some(ty) = item.var_type() {
                        assert!(admissible(ty, &strict), "{name}: {ax}");
                    }
                }
                assert!(s.context.lexemes().count() <= 1, "{name}: {ax}");
            }
        }
    }
}

#[test]
fn q_abstractions_reduce_back() {
    for (name, g) in fixtures::all() {
        let axioms = level(
            &g,
            LevelOptions {
                iterations: 2,
                filter: false,
            },
        )
        .unwrap();
        for ax in axioms.iter() {
            let (parent, probe) = match &ax.provenance {
                Provenance::Q1 { parent, v, .. } => (parent, v.clone()),
                Provenance::Q2 { .. } | Provenance::E1 { .. } | Provenance::E2 { .. } => continue,
            };
            let Some(p) = axioms.by_id(*parent) else { continue };
            // The boundary variable of the parent is the one missing from the child.
            let child_vars: BTreeSet<&str> = ax.sequent.context.var_names().collect();
            let y = p
                .sequent
                .context
                .var_names()
                .find(|v| !child_vars.contains(v))
                .expect("Q1 removes one variable");
            let fresh = "q0";
            let applied = beta_normalize(&Term::app(ax.term().clone(), Term::var(fresh)));
            let direct = beta_normalize(&p.term().substitute(y, &probe.substitute("x", &Term::var(fresh))));
            assert!(applied.alpha_eq(&direct), "{name}: {ax} from {p}");
        }
    }
}

#[test]
fn levels_grow() {
    for (name, g) in fixtures::all() {
        for filter in [true, false] {
            let upto = if filter || name != "g0-ext" { 4 } else { 3 };
            let ls = levels(&g, filter, upto);
            if !filter {
                assert_eq!(ls[0].len(), build_a0(&g).len());
            }
            for n in 0..upto {
                assert!(ls[n].is_subset(&ls[n + 1]), "{name} filter={filter} n={n}");
            }
        }
    }
}

#[test]
fn cut_proofs_replay_parse_trees() {
    for (name, g) in fixtures::all() {
        let axioms = level(&g, LevelOptions::default()).unwrap();
        let cfg = to_cfg(&axioms, &g);
        let oracle = Oracle::new(&g);
        let s = erase(&g.start_type());
        for w in words(&g, 5) {
            let trees = cfg.parse(&w, 50);
            if trees.is_empty() {
                continue;
            }
            let normal: BTreeSet<String> = oracle
                .terms(&w)
                .iter()
                .map(|t| {
                    beta_eta_normalize(t, &s, &TypingEnv::new(), &g)
                        .unwrap()
                        .alpha_canonical()
                        .to_string()
                })
                .collect();
            for t in &trees {
                assert_eq!(cfg.leaves(t), w);
                let d = tree_to_cut_proof(&cfg, t).unwrap();
                check_derivation(RuleSystem::CutOnly(&axioms), &g, &d).unwrap();
                assert_eq!(d.conclusion.context.lexemes().collect::<Vec<_>>(), w);
                let u = beta_eta_normalize(d.term(), &s, &TypingEnv::new(), &g).unwrap();
                assert!(normal.contains(&u.alpha_canonical().to_string()), "{name}: {w:?} {u}");
            }
        }
    }
}
