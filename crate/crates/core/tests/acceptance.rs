//! Acceptance criteria. Prints one PASS/FAIL line per criterion, with detail
//! lines underneath, and a summary line.
//!
//! The process exits successfully either way so that `cargo test` goes on to
//! the other suites; pass `--strict` to exit with failure when a criterion
//! fails: `cargo test --test acceptance -- --strict`.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::gen::{beta_steps, depth, eta_reductions, TermGen};
use common::{toks, words, Oracle};
use lambridge::acg::{apply_lexicon, tree_to_abstract_term, yield_string};
use lambridge::axioms::build_a0;
use lambridge::lambda::{beta_eta_normalize, erase, TypingEnv};
use lambridge::{
    cfg_to_acg, fixtures, level, to_cfg, tree_to_cut_proof, AxiomSet, Cfg, Grammar, LevelOptions, Prover, Sequent,
    SimpleType, Term,
};

const PARSE_LIMIT: Duration = Duration::from_secs(1);
const FAMILY_LIMIT: Duration = Duration::from_secs(10);
const ORACLE_LIMIT: Duration = Duration::from_secs(300);
const MAX_LEN: usize = 5;
const LEVEL: usize = 3;
const TREE_CAP: usize = 1000;
const RANDOM_TERMS: usize = 1000;
const MAX_TERM_DEPTH: usize = 6;
const SEED: u64 = 0x1a3b_0c0d;

type Outcome = Result<Vec<String>, Vec<String>>;

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

fn within(limit: Duration, t: Duration, what: &str, notes: &mut Vec<String>) -> bool {
    notes.push(format!("{what}: {} (limit {})", secs(t), secs(limit)));
    t < limit
}

fn finish(ok: bool, notes: Vec<String>) -> Outcome {
    if ok {
        Ok(notes)
    } else {
        Err(notes)
    }
}

fn relative_clause() -> Outcome {
    let g = fixtures::g0();
    let expected: Term = "DORT (LE (QUE (\\x. VOIT x PIERRE) CHAT))".parse().unwrap();
    let start = Instant::now();
    let d = Prover::new(&g)
        .prove_ie_first(&toks("le chat que pierre voit dort"))
        .unwrap();
    let t = start.elapsed();
    let mut notes = Vec::new();
    let ok = match &d {
        Some(d) => {
            notes.push(format!("term: {}", d.term()));
            d.term().alpha_eq(&expected)
        }
        None => {
            notes.push("no derivation".into());
            false
        }
    };
    let fast = within(PARSE_LIMIT, t, "search", &mut notes);
    finish(ok && fast, notes)
}

fn negatives() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, g, sentence) in [
        ("g3", fixtures::g3(), "b a"),
        ("g0-ext", fixtures::g0_ext(), "le très chat dort"),
    ] {
        let start = Instant::now();
        let found = Prover::new(&g).prove_ie_first(&toks(sentence));
        let t = start.elapsed();
        let rejected = matches!(found, Ok(None));
        notes.push(format!(
            "{name} \"{sentence}\": {}",
            if rejected { "rejected" } else { "NOT rejected" }
        ));
        ok &= rejected;
        ok &= within(PARSE_LIMIT, t, "search", &mut notes);
    }
    finish(ok, notes)
}

fn a0_golden() -> Outcome {
    let a0 = build_a0(&fixtures::g0());
    let listed = [
        "z2:n, que, z1:s/np |- QUE z1 z2 : n",
        "z2:np, voit, z1:np |- VOIT z1 z2 : s",
        "x:np |- x : np",
        "pierre |- PIERRE : np",
        "chat |- CHAT : n",
    ];
    // The full set, from flattening each lexical type and each strictly
    // positive type {np, s, n\n, n, np\s} by hand.
    let by_hand = [
        "le, z1:n |- LE z1 : np",
        "chat |- CHAT : n",
        "z1:np, dort |- DORT z1 : s",
        "z2:n, que, z1:s/np |- QUE z1 z2 : n",
        "pierre |- PIERRE : np",
        "z2:np, voit, z1:np |- VOIT z1 z2 : s",
        "x:np |- x : np",
        "x:s |- x : s",
        "z1:n, x:n\\n |- x z1 : n",
        "x:n |- x : n",
        "z1:np, x:np\\s |- x z1 : s",
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for s in listed {
        let present = a0.contains(&s.parse::<Sequent>().unwrap());
        if !present {
            notes.push(format!("missing: {s}"));
        }
        ok &= present;
    }
    let expected: BTreeSet<String> = by_hand
        .iter()
        .map(|s| s.parse::<Sequent>().unwrap().canonical_key())
        .collect();
    let actual: BTreeSet<String> = a0.keys().map(String::from).collect();
    if expected != actual {
        ok = false;
        notes.push(format!("extra: {:?}", actual.difference(&expected).collect::<Vec<_>>()));
        notes.push(format!(
            "absent: {:?}",
            expected.difference(&actual).collect::<Vec<_>>()
        ));
    }
    notes.push(format!("{} axioms; the five listed are present", a0.len()));
    finish(ok, notes)
}

fn family_check(name: &str, g: &Grammar, word: impl Fn(usize) -> Vec<String>, notes: &mut Vec<String>) -> bool {
    let mut ok = true;
    let mut wrong = Vec::new();
    for i in 0..=3 {
        let cfg = to_cfg(
            &level(
                g,
                LevelOptions {
                    iterations: i,
                    filter: true,
                },
            )
            .unwrap(),
            g,
        );
        for k in 1..=3 {
            let member = cfg.recognizes(&word(k));
            if member != (k <= i) {
                ok = false;
                wrong.push(format!("(i={i}, k={k}: member={member})"));
            }
        }
    }
    if wrong.is_empty() {
        notes.push(format!("{name}: membership iff k <= i for all i <= 3, k <= 3"));
    } else {
        notes.push(format!("{name}: mismatches {}", wrong.join(" ")));
    }
    ok
}

fn nesting_families() -> Outcome {
    let mut notes = Vec::new();
    let start = Instant::now();
    let g1 = fixtures::g1();
    let g2 = fixtures::g2();
    let a = family_check(
        "g1 b^k a^k c",
        &g1,
        |k| {
            let mut w = vec!["b".to_string(); k];
            w.extend(vec!["a".to_string(); k]);
            w.push("c".into());
            w
        },
        &mut notes,
    );
    let b = family_check(
        "g2 a^k b",
        &g2,
        |k| {
            let mut w = vec!["a".to_string(); k];
            w.push("b".into());
            w
        },
        &mut notes,
    );
    let fast = within(FAMILY_LIMIT, start.elapsed(), "total", &mut notes);
    finish(a && b && fast, notes)
}

struct Pipeline {
    name: &'static str,
    g: Grammar,
    cfg: Cfg,
    accepted: Vec<Vec<String>>,
}

fn pipelines() -> Vec<Pipeline> {
    fixtures::all()
        .into_iter()
        .map(|(name, g)| {
            let axioms = level(
                &g,
                LevelOptions {
                    iterations: LEVEL,
                    filter: true,
                },
            )
            .unwrap();
            let cfg = to_cfg(&axioms, &g);
            let accepted = words(&g, MAX_LEN).into_iter().filter(|w| cfg.recognizes(w)).collect();
            Pipeline { name, g, cfg, accepted }
        })
        .collect()
}

fn oracle_equivalence(ps: &[Pipeline]) -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for p in ps {
        let bounded = matches!(p.name, "g1" | "g2");
        let oracle = Oracle::new(&p.g);
        let recognizer = p.cfg.recognizer();
        let mut mismatches = Vec::new();
        let all = words(&p.g, MAX_LEN);
        for w in &all {
            let nesting = oracle.min_nesting(w);
            let expected = if bounded {
                nesting.is_some_and(|n| n <= LEVEL)
            } else {
                nesting.is_some()
            };
            if expected != recognizer.recognizes(w) {
                mismatches.push(w.join(" "));
            }
        }
        notes.push(format!(
            "{}: {} words, {} accepted, {} mismatches{}",
            p.name,
            all.len(),
            p.accepted.len(),
            mismatches.len(),
            if bounded { " (nesting <= 3)" } else { "" }
        ));
        for m in mismatches.iter().take(5) {
            notes.push(format!("  mismatch: {m}"));
        }
        ok &= mismatches.is_empty();
    }
    let fast = within(ORACLE_LIMIT, start.elapsed(), "total", &mut notes);
    finish(ok && fast, notes)
}

fn term_preservation(ps: &[Pipeline]) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for p in ps {
        let s = erase(&p.g.start_type());
        let normal = |t: &Term| {
            beta_eta_normalize(t, &s, &TypingEnv::new(), &p.g)
                .unwrap()
                .alpha_canonical()
                .to_string()
        };
        let mut prover = Prover::new(&p.g);
        let mut failures = Vec::new();
        for w in &p.accepted {
            let ie: HashSet<String> = prover
                .prove_ie(w, TREE_CAP)
                .unwrap()
                .iter()
                .map(|d| normal(d.term()))
                .collect();
            let hit = p.cfg.parse(w, TREE_CAP).iter().any(|t| {
                let d = tree_to_cut_proof(&p.cfg, t).unwrap();
                ie.contains(&normal(d.term()))
            });
            if !hit {
                failures.push(w.join(" "));
            }
        }
        notes.push(format!(
            "{}: {} words, {} without a matching term",
            p.name,
            p.accepted.len(),
            failures.len()
        ));
        for f in failures.iter().take(5) {
            notes.push(format!("  {f}"));
        }
        ok &= failures.is_empty();
    }
    finish(ok, notes)
}

fn isomorphism(ps: &[Pipeline]) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for p in ps {
        let acg = cfg_to_acg(&p.cfg);
        let order = acg.abstract_sig.order();
        let valid = acg.validate().is_ok();
        let mut trees = 0;
        let mut bad_yield = 0;
        let mut collisions = 0;
        for w in &p.accepted {
            let mut seen = HashSet::new();
            for t in p.cfg.parse(w, TREE_CAP) {
                trees += 1;
                let u = tree_to_abstract_term(&p.cfg, &t);
                let y = apply_lexicon(&acg.lexicon, &u)
                    .ok()
                    .and_then(|image| yield_string(&image, &acg.object).ok());
                if y.as_ref() != Some(w) {
                    bad_yield += 1;
                }
                if !seen.insert(u.to_string()) {
                    collisions += 1;
                }
            }
        }
        notes.push(format!(
            "{}: {} productions, order {order}, lexicon {}, {trees} trees, {bad_yield} bad yields, {collisions} collisions",
            p.name,
            p.cfg.productions.len(),
            if valid { "valid" } else { "INVALID" },
        ));
        ok &= order <= 2 && valid && bad_yield == 0 && collisions == 0;
    }
    finish(ok, notes)
}

fn properties() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    // Normal forms of random terms.
    let mut gen = TermGen::new(SEED);
    let mut checked = 0;
    let mut variants = 0;
    let mut failures = Vec::new();
    while checked < RANDOM_TERMS {
        let ty = gen.ty(2);
        let budget = 1 + checked % MAX_TERM_DEPTH;
        let u = gen.term(&ty, Vec::new(), budget);
        if depth(&u) > MAX_TERM_DEPTH {
            continue;
        }
        checked += 1;
        let env = TypingEnv::new();
        let nf = match beta_eta_normalize(&u, &ty, &env, &gen.consts) {
            Ok(nf) => nf,
            Err(e) => {
                failures.push(format!("{u} : {ty} rejected: {e}"));
                continue;
            }
        };
        if !beta_eta_normalize(&nf, &ty, &env, &gen.consts).is_ok_and(|again| again.alpha_eq(&nf)) {
            failures.push(format!("not idempotent on {u}"));
        }
        let mut others = beta_steps(&u);
        others.extend(eta_reductions(&u));
        if let SimpleType::Arrow(..) = ty {
            let x = gen.var();
            others.push(Term::abs(x.clone(), Term::app(u.clone(), Term::var(x))));
        }
        for v in others {
            variants += 1;
            if !beta_eta_normalize(&v, &ty, &env, &gen.consts).is_ok_and(|w| w.alpha_eq(&nf)) {
                failures.push(format!("{v} and {u} normalize differently"));
            }
        }
    }
    notes.push(format!(
        "normal forms: {checked} terms, {variants} one-step variants, {} failures",
        failures.len()
    ));
    for f in failures.iter().take(3) {
        notes.push(format!("  {f}"));
    }
    ok &= failures.is_empty();

    // Substitution commutation.
    let mut bad = 0;
    for _ in 0..RANDOM_TERMS {
        let (a, b) = (gen.ty(1), gen.ty(1));
        let (x, y) = (gen.var(), gen.var());
        let ty = gen.ty(1);
        let u = gen.term(&ty, vec![(x.clone(), a.clone()), (y.clone(), b.clone())], 4);
        let p = gen.var();
        let pt = gen.ty(1);
        let v = gen.term(&b, vec![(p, pt)], 3);
        let w = gen.term(&a, Vec::new(), 3);
        let left = u.substitute(&y, &v).substitute(&x, &w);
        let right = u.substitute(&x, &w).substitute(&y, &v);
        if !left.alpha_eq(&right) {
            bad += 1;
        }
    }
    notes.push(format!(
        "substitution commutation: {RANDOM_TERMS} cases, {bad} failures"
    ));
    ok &= bad == 0;

    // The worked nesting example.
    let n2: Term = "B (\\x. B (\\y. A (A C x) y))".parse().unwrap();
    let nesting = n2.nesting_depth();
    notes.push(format!("nesting of {n2}: {nesting:?}"));
    ok &= nesting == Ok(2);

    // Monotonicity of the leveling loop.
    let mut shrinking = Vec::new();
    for (name, g) in fixtures::all() {
        let ls: Vec<AxiomSet> = (0..=4)
            .map(|i| {
                level(
                    &g,
                    LevelOptions {
                        iterations: i,
                        filter: true,
                    },
                )
                .unwrap()
            })
            .collect();
        for n in 0..=3 {
            if !ls[n].is_subset(&ls[n + 1]) {
                shrinking.push(format!("{name} n={n}"));
            }
        }
    }
    notes.push(format!(
        "monotonicity n <= 3, all fixtures: {} violations",
        shrinking.len()
    ));
    ok &= shrinking.is_empty();

    finish(ok, notes)
}

fn run(number: &str, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(vec![format!("panicked: {msg}")])
    });
    let (passed, notes) = match outcome {
        Ok(n) => (true, n),
        Err(n) => (false, n),
    };
    println!(
        "{} {number} {title} [{}]",
        if passed { "PASS" } else { "FAIL" },
        secs(start.elapsed())
    );
    for n in notes {
        println!("       {n}");
    }
    passed
}

fn main() -> ExitCode {
    let mut passed = vec![
        run("1", "G0 relative clause term", relative_clause),
        run("2", "negative fixtures rejected", negatives),
        run("3", "A0 golden set for G0", a0_golden),
        run("4", "nesting families at levels 0..3", nesting_families),
    ];
    let ps = pipelines();
    passed.push(run("5", "brute-force oracle vs CFG at level 3", || {
        oracle_equivalence(&ps)
    }));
    passed.push(run("6", "cut proofs preserve terms", || term_preservation(&ps)));
    passed.push(run("7", "parse trees and abstract terms", || isomorphism(&ps)));
    passed.push(run("8", "property suites", properties));
    let failed = passed.iter().filter(|p| !**p).count();
    println!("{} passed, {failed} failed", passed.len() - failed);
    let strict = std::env::args().any(|a| a == "--strict");
    if failed == 0 || !strict {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
