//! Generalized splicing and self-assembly of words, finite languages,
//! head-normal grammars and finite automata, with an audit harness that
//! checks the construction claims against independent oracles.

pub mod automata;
pub mod format;
pub mod grammar;
pub mod gsa;
mod par;
pub mod splice;
pub mod verify;
pub mod word;

pub use gsa::{gsa_finite, gsa_finite_with, gsa_pair, gsa_pair_single_letter, ParentPolicy};
pub use splice::{canonical_rules, gs_finite, splice, SplicingRule};
pub use word::{FiniteLanguage, Symbol, Word};

/// Number of worker threads data-parallel operations may use.
pub fn threads() -> usize {
    par::threads()
}
