mod common;

use std::collections::BTreeSet;

use common::{toks, words, Oracle};
use lambridge::{check_derivation, extract_term, fixtures, ContextWord, Prover, RuleSystem, Term};

fn canonical(ts: &[Term]) -> BTreeSet<String> {
    ts.iter().map(|t| t.alpha_canonical().to_string()).collect()
}

#[test]
fn prover_matches_brute_force_on_short_words() {
    for (name, g) in fixtures::all() {
        let oracle = Oracle::new(&g);
        let mut prover = Prover::new(&g);
        for w in words(&g, 5) {
            let expected = oracle.terms(&w);
            let ctx = ContextWord::from_lexemes(&w).unwrap();
            let nesting = prover.min_nesting(&ctx, &g.start_type()).unwrap();
            assert_eq!(nesting, expected.iter().map(common::nesting).min(), "{name}: {w:?}");
            let found = prover.prove_ie(&w, 1000).unwrap();
            let terms: Vec<Term> = found.iter().map(|d| d.term().clone()).collect();
            assert_eq!(canonical(&terms), canonical(&expected), "{name}: {w:?}");
            for d in &found {
                check_derivation(RuleSystem::Natural, &g, d).unwrap();
                assert!(extract_term(d).alpha_eq(d.term()));
            }
        }
    }
}

#[test]
fn bounded_search_respects_the_bound() {
    let g = fixtures::g1();
    let mut prover = Prover::new(&g);
    let w = toks("b b b a a a c");
    let ctx = ContextWord::from_lexemes(&w).unwrap();
    assert!(prover
        .prove_sequent(&ctx, &g.start_type(), 5, Some(2))
        .unwrap()
        .is_empty());
    let found = prover.prove_sequent(&ctx, &g.start_type(), 5, Some(3)).unwrap();
    assert!(!found.is_empty());
    for d in found {
        assert_eq!(d.term().nesting_depth().unwrap(), 3);
        assert_eq!(common::nesting(d.term()), 3);
    }
}

#[test]
fn relative_clause_terms() {
    let g = fixtures::g0();
    let w = toks("le chat que pierre voit dort");
    let oracle = Oracle::new(&g);
    let expected = oracle.terms(&w);
    assert_eq!(expected.len(), 1);
    let relative: Term = "DORT (LE (QUE (\\x. VOIT x PIERRE) CHAT))".parse().unwrap();
    assert!(expected[0].alpha_eq(&relative));
    assert_eq!(common::nesting(&expected[0]), 1);
}
