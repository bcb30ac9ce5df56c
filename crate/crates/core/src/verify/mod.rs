//! Audit harness: independent oracles, claim audits and suite runs with
//! machine-readable reports.

mod audit;
mod oracle;
mod suite;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::automata::NfaError;
use crate::grammar::{AssemblyMode, GrammarError};
use crate::gsa::ParentPolicy;
use crate::word::Word;

pub use audit::{
    audit_automata_assembly, audit_closures, audit_fin_fin, audit_grammar_assembly, audit_gs_eq_gsa, audit_observation,
    Operand, PairClass, SuiteEntry,
};
pub use oracle::{gsa_bounded_oracle, gsa_grammar_oracle};
pub use suite::{
    closure_suite, curated_cf_pairs, curated_finite_pairs, curated_lin_pairs, curated_regular_pairs,
    random_finite_pairs, random_word_pairs, run_suite, FailureRef, Index, SuiteRun, Tally, RANDOM_PAIRS,
};

/// Default seed for randomized suites.
pub const DEFAULT_SEED: u64 = 0;
/// Default word-length bound.
pub const DEFAULT_MAX_LEN: usize = 10;
/// Default extra parent depth beyond `max_len`.
pub const DEFAULT_SLACK: usize = 4;

/// Flag carried by reports whose inputs were linear grammars certified only
/// as context-free.
pub const UNAUDITED_LIN: &str = "UNAUDITED-LIN";

/// Flag carried by grammar reports where the parent-slice oracle at the
/// configured parent depth missed words the exact-affix oracle found.
pub const SLICE_ORACLE_INCOMPLETE: &str = "SLICE_ORACLE_INCOMPLETE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ClaimId {
    #[serde(rename = "THM1_GS_EQ_GSA")]
    Thm1GsEqGsa,
    #[serde(rename = "THM_FIN_FIN")]
    ThmFinFin,
    #[serde(rename = "THM_GRAMMAR_EQ")]
    ThmGrammarEq,
    #[serde(rename = "THM_AUTOMATA_EQ")]
    ThmAutomataEq,
    #[serde(rename = "OBS_GRAMMAR_AUTOMATA_AGREE")]
    ObsGrammarAutomataAgree,
    #[serde(rename = "CLOSURE_REG")]
    ClosureReg,
    #[serde(rename = "CLOSURE_LIN")]
    ClosureLin,
    #[serde(rename = "CLOSURE_CF")]
    ClosureCf,
}

impl ClaimId {
    pub const ALL: [ClaimId; 8] = [
        ClaimId::Thm1GsEqGsa,
        ClaimId::ThmFinFin,
        ClaimId::ThmGrammarEq,
        ClaimId::ThmAutomataEq,
        ClaimId::ObsGrammarAutomataAgree,
        ClaimId::ClosureReg,
        ClaimId::ClosureLin,
        ClaimId::ClosureCf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::Thm1GsEqGsa => "THM1_GS_EQ_GSA",
            ClaimId::ThmFinFin => "THM_FIN_FIN",
            ClaimId::ThmGrammarEq => "THM_GRAMMAR_EQ",
            ClaimId::ThmAutomataEq => "THM_AUTOMATA_EQ",
            ClaimId::ObsGrammarAutomataAgree => "OBS_GRAMMAR_AUTOMATA_AGREE",
            ClaimId::ClosureReg => "CLOSURE_REG",
            ClaimId::ClosureLin => "CLOSURE_LIN",
            ClaimId::ClosureCf => "CLOSURE_CF",
        }
    }
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    HoldsWithinBounds,
    HoldsExactly,
    Fails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::HoldsWithinBounds => "HOLDS_WITHIN_BOUNDS",
            Verdict::HoldsExactly => "HOLDS_EXACTLY",
            Verdict::Fails => "FAILS",
        })
    }
}

/// How a verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Both sides computed completely as finite sets.
    FiniteSetExact,
    /// Regular-language algebra on automata.
    AutomataAlgebra,
    /// Enumeration of both sides up to a length bound.
    BoundedEnumeration,
}

impl Method {
    pub fn is_exact(self) -> bool {
        matches!(self, Method::FiniteSetExact | Method::AutomataAlgebra)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_len: Option<usize>,
    pub parent_depth: Option<usize>,
    pub seed: Option<u64>,
}

/// A word on one side of a comparison only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: Word,
    /// Which side contains the word, e.g. `assembled_only`.
    pub side: String,
    /// Derivation, accepting path or splice provenance on the containing
    /// side, or the search bound on the other.
    pub trace: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub claim: ClaimId,
    pub label: String,
    /// Digest of the canonical text of the inputs.
    pub input: String,
    pub mode: Option<AssemblyMode>,
    pub parents: ParentPolicy,
    pub bounds: Bounds,
    pub verdict: Verdict,
    pub witnesses: Vec<Word>,
    pub counterexamples: Vec<Counterexample>,
    pub method: Method,
    pub flags: Vec<String>,
    pub details: BTreeMap<String, serde_json::Value>,
    /// Wall time, recorded only on request so reports stay reproducible.
    pub elapsed_ms: Option<u64>,
}

/// Counterexamples and witnesses kept per report; totals go to `details`.
pub const REPORT_CAP: usize = 16;

impl AuditReport {
    /// Checks the vocabulary rules: `FAILS` carries a counterexample and
    /// `HOLDS_EXACTLY` needs an exact method.
    pub fn is_well_formed(&self) -> bool {
        match self.verdict {
            Verdict::Fails => !self.counterexamples.is_empty(),
            Verdict::HoldsExactly => self.method.is_exact() && self.counterexamples.is_empty(),
            Verdict::HoldsWithinBounds => self.counterexamples.is_empty() && self.bounds.max_len.is_some(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    fn sort_key(&self) -> (ClaimId, &str, Option<AssemblyMode>, &str) {
        (self.claim, &self.input, self.mode, &self.label)
    }
}

/// Settings shared by every audit of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AuditConfig {
    pub max_len: usize,
    pub parent_depth: usize,
    pub seed: u64,
    pub parents: ParentPolicy,
    /// Record `elapsed_ms`; off by default so reruns are byte-identical.
    pub timings: bool,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            max_len: DEFAULT_MAX_LEN,
            parent_depth: DEFAULT_MAX_LEN + DEFAULT_SLACK,
            seed: DEFAULT_SEED,
            parents: ParentPolicy::default(),
            timings: false,
        }
    }
}

impl AuditConfig {
    pub fn with_max_len(max_len: usize) -> Self {
        AuditConfig { max_len, parent_depth: max_len + DEFAULT_SLACK, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AuditError {
    /// An inclusion that must hold by construction was violated.
    #[error("hard invariant violated for {claim} on {label}: {detail} (word {word:?})")]
    HardInvariant { claim: ClaimId, label: String, word: String, detail: String },
    #[error("parent depth {parent_depth} is below the length bound {n}")]
    ParentDepth { n: usize, parent_depth: usize },
    #[error("max_len must be at least 1")]
    ZeroBound,
    #[error("operands do not fit the {0} class")]
    OperandClass(String),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Nfa(#[from] NfaError),
}

/// Sorts reports by claim, then input digest.
pub fn sort_reports(reports: &mut [AuditReport]) {
    reports.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}
