//! Lambek grammars, their proper-axiom presentation, and the context-free
//! and abstract categorial grammars extracted from it.

pub mod acg;
pub mod axioms;
pub mod cfg;
pub mod compare;
pub mod context;
pub mod derivation;
pub mod fixtures;
pub mod grammar;
pub mod lambda;
pub mod prover;
pub mod sequent;
pub mod types;

pub use acg::{cfg_to_acg, Acg, Lexicon, Signature};
pub use axioms::{level, AxiomSet, LevelOptions, ProperAxiom, Provenance};
pub use cfg::{to_cfg, tree_to_cut_proof, Cfg, ParseTree, Production, Recognizer, Symbol};
pub use compare::{compare, CompareOptions, CompareReport};
pub use context::{ContextItem, ContextWord};
pub use derivation::{check_derivation, extract_term, Derivation, Rule, RuleSystem};
pub use grammar::{Grammar, SignedOccurrences};
pub use lambda::{SimpleType, Term};
pub use prover::{Budget, Prover, SearchError};
pub use sequent::Sequent;
pub use types::{Connective, OrientedType};
