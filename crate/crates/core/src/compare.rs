//! Word-by-word comparison of the Lambek prover against the extracted CFG.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::axioms::{level_with, LevelOptions};
use crate::cfg::to_cfg;
use crate::context::ContextWord;
use crate::grammar::Grammar;
use crate::prover::{Budget, Prover, SearchError};

/// Every word over `lexemes` of length `1..=max_len`, shortest first, each
/// length in lexicographic order of lexeme positions.
pub fn all_words(lexemes: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                lexemes.iter().map(move |l| {
                    let mut w = w.clone();
                    w.push(l.to_string());
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompareOptions {
    pub level: LevelOptions,
    pub max_len: usize,
    pub budget: Budget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordDiff {
    pub word: Vec<String>,
    pub derivable: bool,
    pub in_cfg: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub iterations: usize,
    pub max_len: usize,
    pub axioms: usize,
    pub productions: usize,
    pub words: usize,
    pub accepted_by_cfg: usize,
    /// Words where plain derivability and CFG membership disagree.
    pub full: Vec<WordDiff>,
    /// Words where derivability with nesting at most `iterations` and CFG
    /// membership disagree.
    pub bounded: Vec<WordDiff>,
}

impl CompareReport {
    pub fn agrees(&self) -> bool {
        self.bounded.is_empty()
    }
}

pub fn compare(g: &Grammar, options: CompareOptions) -> Result<CompareReport, SearchError> {
    let mut prover = Prover::with_budget(g, options.budget);
    let axioms = level_with(g, options.level, &mut prover)?;
    let cfg = to_cfg(&axioms, g);
    let recognizer = cfg.recognizer();
    let lexemes: Vec<&str> = g.lexemes().collect();
    let words = all_words(&lexemes, options.max_len);
    let bound = options.level.iterations;

    let rows: Vec<(bool, bool, bool)> = words
        .par_iter()
        .map_init(
            || Prover::with_budget(g, options.budget),
            |p, w| -> Result<_, SearchError> {
                let nesting = p.min_nesting(&ContextWord::from_lexemes(w).expect("non-empty"), &g.start_type())?;
                let in_cfg = recognizer.recognizes(w);
                Ok((nesting.is_some(), nesting.is_some_and(|n| n <= bound), in_cfg))
            },
        )
        .collect::<Result<_, _>>()?;

    let mut report = CompareReport {
        iterations: bound,
        max_len: options.max_len,
        axioms: axioms.len(),
        productions: cfg.productions.len(),
        words: words.len(),
        accepted_by_cfg: 0,
        full: Vec::new(),
        bounded: Vec::new(),
    };
    for (w, (full, bounded, in_cfg)) in words.into_iter().zip(rows) {
        report.accepted_by_cfg += in_cfg as usize;
        if full != in_cfg {
            report.full.push(WordDiff {
                word: w.clone(),
                derivable: full,
                in_cfg,
            });
        }
        if bounded != in_cfg {
            report.bounded.push(WordDiff {
                word: w,
                derivable: bounded,
                in_cfg,
            });
        }
    }
    Ok(report)
}
