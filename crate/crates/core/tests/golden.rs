use std::collections::BTreeSet;

use lambridge::{
    check_derivation, fixtures, level, to_cfg, Derivation, Grammar, LevelOptions, Prover, RuleSystem, Term,
};

const RELATIVE: &str = include_str!("golden/g0_relative.sexpr");
const LEVEL3_BNF: &str = include_str!("golden/g0_level3.bnf");

#[test]
fn relative_clause_derivation() {
    let g = fixtures::g0();
    let d = Prover::new(&g)
        .prove_ie_first(&Grammar::tokenize("le chat que pierre voit dort"))
        .unwrap()
        .unwrap();
    assert_eq!(d.to_sexpr(), RELATIVE);
    let read: Derivation = RELATIVE.parse().unwrap();
    assert_eq!(read, d);
    check_derivation(RuleSystem::Natural, &g, &read).unwrap();
    let expected: Term = "DORT (LE (QUE (\\x. VOIT x PIERRE) CHAT))".parse().unwrap();
    assert!(read.term().alpha_eq(&expected));
}

#[test]
fn level3_cfg_export() {
    let g = fixtures::g0();
    let axioms = level(&g, LevelOptions::default()).unwrap();
    let cfg = to_cfg(&axioms, &g);
    assert_eq!(cfg.to_bnf(), LEVEL3_BNF);

    // Rebuild the production lines from the axioms' text form alone.
    let mut rebuilt = BTreeSet::new();
    for line in axioms.to_text().lines() {
        let sequent = line.split("   #").next().unwrap();
        let (ctx, rhs) = sequent.split_once(" |- ").unwrap();
        let ty = rhs.rsplit_once(" : ").unwrap().1;
        let symbols: Vec<String> = ctx
            .split(", ")
            .map(|item| match item.split_once(':') {
                Some((_, t)) => t.to_string(),
                None => format!("\"{item}\""),
            })
            .collect();
        rebuilt.insert(format!("{ty} -> {}", symbols.join(" ")));
    }
    let exported: BTreeSet<String> = LEVEL3_BNF.lines().skip(1).map(String::from).collect();
    assert_eq!(exported, rebuilt);
}
