//! The grammars used throughout the tests and the guide.

use crate::acg::{concat, epsilon, sigma, string_term, Lexicon};
use crate::grammar::Grammar;
use crate::lambda::Term;

pub const G0: &str = include_str!("../grammars/g0.lg");
pub const G0_EXT: &str = include_str!("../grammars/g0_ext.lg");
pub const G1: &str = include_str!("../grammars/g1.lg");
pub const G2: &str = include_str!("../grammars/g2.lg");
pub const G3: &str = include_str!("../grammars/g3.lg");

fn load(src: &str) -> Grammar {
    src.parse().expect("bundled grammar parses")
}

/// Determiner, noun, verbs and an object relative pronoun.
pub fn g0() -> Grammar {
    load(G0)
}

/// [`g0`] plus `beau : n/n` and `très : (n/n)/(n/n)`.
pub fn g0_ext() -> Grammar {
    load(G0_EXT)
}

/// `a : (s/r)/s`, `b : s/(s/r)`, `c : s`.
pub fn g1() -> Grammar {
    load(G1)
}

/// `a : s/(s/(s\s))`, `b : s`.
pub fn g2() -> Grammar {
    load(G2)
}

/// `a : (p/q)/r`, `b : s/((p/r)/q)`.
pub fn g3() -> Grammar {
    load(G3)
}

/// Every bundled grammar with a short name.
pub fn all() -> Vec<(&'static str, Grammar)> {
    vec![
        ("g0", g0()),
        ("g0-ext", g0_ext()),
        ("g1", g1()),
        ("g2", g2()),
        ("g3", g3()),
    ]
}

/// A hand-written string lexicon for the erased [`g0`] signature, kept as a
/// regression fixture for lexicon validation and yields:
///
/// ```text
/// le     ↦ λx. le + x          pierre ↦ pierre
/// chat   ↦ chat                voit   ↦ λy x. x + voit + y
/// dort   ↦ λx. x + dort        que    ↦ λy x. x + que + (y ε)
/// ```
pub fn g0_yield_lexicon() -> Lexicon {
    let v = Term::var;
    let w = |t: &str| string_term(&[t]);
    let terms = [
        ("le", Term::abs("x", concat(w("le"), v("x")))),
        ("chat", w("chat")),
        ("dort", Term::abs("x", concat(v("x"), w("dort")))),
        (
            "que",
            Term::abs_all(
                ["y", "x"],
                concat(v("x"), concat(w("que"), Term::app(v("y"), epsilon()))),
            ),
        ),
        ("pierre", w("pierre")),
        (
            "voit",
            Term::abs_all(["y", "x"], concat(v("x"), concat(w("voit"), v("y")))),
        ),
    ];
    Lexicon {
        type_map: ["s", "np", "n"].iter().map(|b| (b.to_string(), sigma())).collect(),
        term_map: terms.into_iter().map(|(c, t)| (c.to_string(), t)).collect(),
    }
}
