//! Curated and seeded random inputs, and suite runs with an index document.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::audit::{relabel, PairClass};
use super::{
    audit_automata_assembly, audit_closures, audit_grammar_assembly, audit_gs_eq_gsa, audit_observation, sort_reports,
    AuditConfig, AuditError, AuditReport, ClaimId, Operand, SuiteEntry, Verdict,
};
use crate::automata::grammar_to_nfa;
use crate::grammar::format::parse_grammar;
use crate::grammar::{AssemblyMode, HeadNormalGrammar};
use crate::word::{FiniteLanguage, Symbol, Word};

const SYMBOLS: [char; 3] = ['a', 'b', 'c'];
/// Random finite-language pairs per suite run.
pub const RANDOM_PAIRS: usize = 50;

fn lang(ws: &[&str]) -> FiniteLanguage {
    ws.iter().copied().collect()
}

fn grammar(src: &str) -> HeadNormalGrammar {
    parse_grammar(src).expect("curated grammar parses")
}

/// Named finite-language pairs.
pub fn curated_finite_pairs() -> Vec<(String, FiniteLanguage, FiniteLanguage)> {
    [
        ("ab-ba", lang(&["ab"]), lang(&["ba"])),
        ("empty-left", FiniteLanguage::new(), lang(&["ab"])),
        ("disjoint", lang(&["a"]), lang(&["b"])),
        ("mixed", lang(&["abc", "ca"]), lang(&["bcb", "a", "cc"])),
        ("repeated-letter", lang(&["aa", "aba"]), lang(&["a", "bab"])),
        ("identical", lang(&["aba", "b"]), lang(&["aba", "b"])),
    ]
    .into_iter()
    .map(|(n, l1, l2)| (n.to_string(), l1, l2))
    .collect()
}

/// Named right-linear grammar pairs; the first is the worked example.
pub fn curated_regular_pairs() -> Vec<(String, HeadNormalGrammar, HeadNormalGrammar)> {
    let a_star_b = "start: S1\nS1 -> a S1\nS1 -> b\n";
    let b_star_a = "start: S2\nS2 -> b S2\nS2 -> a\n";
    [
        ("a*b|b*a", a_star_b, b_star_a),
        ("a*b|c*d", a_star_b, "start: T\nT -> c T\nT -> d\n"),
        ("a*b|a*b", a_star_b, a_star_b),
        ("(ab)+|b*a", "start: P\nP -> a Q\nQ -> b P\nQ -> b\n", b_star_a),
        ("a*|ba*", "start: E\nE -> a E\nE -> @eps\n", "start: T\nT -> b U\nT -> b\nU -> a U\nU -> a\n"),
        ("(a|b)*c|c*a", "start: S\nS -> a S\nS -> b S\nS -> c\n", "start: T\nT -> c T\nT -> a\n"),
    ]
    .into_iter()
    .map(|(n, s1, s2)| (n.to_string(), grammar(s1), grammar(s2)))
    .collect()
}

/// Named linear grammar pairs, given in GNF.
pub fn curated_lin_pairs() -> Vec<(String, HeadNormalGrammar, HeadNormalGrammar)> {
    vec![(
        "a^n c b^n|b^n c a^n".into(),
        grammar("start: S\nS -> a S B\nS -> c\nB -> b\n"),
        grammar("start: T\nT -> b T A\nT -> c\nA -> a\n"),
    )]
}

/// Named context-free GNF grammar pairs.
pub fn curated_cf_pairs() -> Vec<(String, HeadNormalGrammar, HeadNormalGrammar)> {
    let dyck = "start: D\nD -> a B\nD -> a B D\nB -> b\nB -> a B B\n";
    vec![
        ("dyck|a^n b^n".into(), grammar(dyck), grammar("start: T\nT -> a T C\nT -> a C\nC -> b\n")),
        ("dyck|c a* b".into(), grammar(dyck), grammar("start: T\nT -> c U\nU -> a U\nU -> b\n")),
    ]
}

fn random_word(rng: &mut ChaCha8Rng, alphabet: &[Symbol], max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_symbols((0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect())
}

fn random_alphabet(rng: &mut ChaCha8Rng) -> Vec<Symbol> {
    let k = rng.gen_range(1..=SYMBOLS.len());
    SYMBOLS[..k].iter().map(|&c| Symbol::new(c).expect("letter")).collect()
}

/// Seeded random finite-language pairs: alphabet of 1 to 3 letters, at most
/// 8 words per language, words of length at most 5.
pub fn random_finite_pairs(seed: u64, count: usize) -> Vec<(FiniteLanguage, FiniteLanguage)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let alphabet = random_alphabet(&mut rng);
            let mut side = || {
                let size = rng.gen_range(0..=8);
                (0..size).map(|_| random_word(&mut rng, &alphabet, 5)).collect::<FiniteLanguage>()
            };
            let l1 = side();
            (l1, side())
        })
        .collect()
}

/// Seeded random word pairs: alphabet of 1 to 3 letters, length at most 8.
pub fn random_word_pairs(seed: u64, count: usize) -> Vec<(Word, Word)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let alphabet = random_alphabet(&mut rng);
            let w1 = random_word(&mut rng, &alphabet, 8);
            (w1, random_word(&mut rng, &alphabet, 8))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub holds_exactly: usize,
    pub holds_within_bounds: usize,
    pub fails: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureRef {
    pub claim: ClaimId,
    pub label: String,
    pub input: String,
    pub mode: Option<AssemblyMode>,
}

/// Per-claim tallies of a suite run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Index {
    pub reports: usize,
    pub tallies: BTreeMap<ClaimId, Tally>,
    pub failures: Vec<FailureRef>,
}

impl Index {
    pub fn of(reports: &[AuditReport]) -> Index {
        let mut tallies: BTreeMap<ClaimId, Tally> = BTreeMap::new();
        let mut failures = Vec::new();
        for r in reports {
            let t = tallies.entry(r.claim).or_default();
            match r.verdict {
                Verdict::HoldsExactly => t.holds_exactly += 1,
                Verdict::HoldsWithinBounds => t.holds_within_bounds += 1,
                Verdict::Fails => {
                    t.fails += 1;
                    failures.push(FailureRef {
                        claim: r.claim,
                        label: r.label.clone(),
                        input: r.input.clone(),
                        mode: r.mode,
                    });
                }
            }
        }
        Index { reports: reports.len(), tallies, failures }
    }

    pub fn any_fails(&self) -> bool {
        !self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteRun {
    pub config: AuditConfig,
    pub index: Index,
    pub reports: Vec<AuditReport>,
}

impl SuiteRun {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

enum Job {
    Finite(String, FiniteLanguage, FiniteLanguage, bool),
    Regular(String, HeadNormalGrammar, HeadNormalGrammar),
    ContextFree(String, HeadNormalGrammar, HeadNormalGrammar),
    Closures(Vec<SuiteEntry>),
}

fn run_job(job: &Job, cfg: &AuditConfig) -> Result<Vec<AuditReport>, AuditError> {
    let labelled = |label: &str, r: Result<AuditReport, AuditError>| {
        let mut r = r.map_err(|e| relabel(e, label))?;
        r.label = label.to_string();
        Ok::<_, AuditError>(r)
    };
    match job {
        Job::Finite(label, l1, l2, random) => {
            let mut out = vec![labelled(label, audit_gs_eq_gsa(l1, l2, cfg))?];
            if *random {
                out[0].bounds.seed = Some(cfg.seed);
            }
            Ok(out)
        }
        Job::Regular(label, g1, g2) => {
            let (m1, m2) = (grammar_to_nfa(g1)?, grammar_to_nfa(g2)?);
            let mut out = Vec::new();
            for mode in [AssemblyMode::Paper, AssemblyMode::SingleCrossover] {
                out.push(labelled(label, audit_grammar_assembly(g1, g2, mode, cfg))?);
                out.push(labelled(label, audit_automata_assembly(&m1, &m2, mode, cfg))?);
                out.push(labelled(label, audit_observation(g1, g2, mode, cfg))?);
            }
            Ok(out)
        }
        Job::ContextFree(label, g1, g2) => [AssemblyMode::Paper, AssemblyMode::SingleCrossover]
            .into_iter()
            .map(|mode| labelled(label, audit_grammar_assembly(g1, g2, mode, cfg)))
            .collect(),
        Job::Closures(entries) => audit_closures(entries, cfg),
    }
}

/// Closure entries covering every pair class.
pub fn closure_suite() -> Vec<SuiteEntry> {
    let mut out = Vec::new();
    for (label, l1, l2) in curated_finite_pairs() {
        out.push(SuiteEntry { label, class: PairClass::Fin, left: Operand::Words(l1), right: Operand::Words(l2) });
    }
    for (label, g1, g2) in curated_regular_pairs() {
        out.push(SuiteEntry { label, class: PairClass::Reg, left: Operand::Grammar(g1), right: Operand::Grammar(g2) });
    }
    let (_, a_star_b, _) = curated_regular_pairs().remove(0);
    out.push(SuiteEntry {
        label: "fin:ab,ba|a*b".into(),
        class: PairClass::Reg,
        left: Operand::Words(lang(&["ab", "ba"])),
        right: Operand::Grammar(a_star_b),
    });
    for (label, g1, g2) in curated_lin_pairs() {
        out.push(SuiteEntry { label, class: PairClass::Lin, left: Operand::Grammar(g1), right: Operand::Grammar(g2) });
    }
    for (label, g1, g2) in curated_cf_pairs() {
        out.push(SuiteEntry { label, class: PairClass::Cf, left: Operand::Grammar(g1), right: Operand::Grammar(g2) });
    }
    out
}

/// Runs every claim audit over the curated inputs and
/// [`RANDOM_PAIRS`] seeded random finite pairs. Audits run in parallel;
/// reports come back sorted by claim, then input digest.
pub fn run_suite(cfg: &AuditConfig) -> Result<SuiteRun, AuditError> {
    let mut jobs = Vec::new();
    for (label, l1, l2) in curated_finite_pairs() {
        jobs.push(Job::Finite(label, l1, l2, false));
    }
    for (i, (l1, l2)) in random_finite_pairs(cfg.seed, RANDOM_PAIRS).into_iter().enumerate() {
        jobs.push(Job::Finite(format!("random-{i:02}"), l1, l2, true));
    }
    for (label, g1, g2) in curated_regular_pairs() {
        jobs.push(Job::Regular(label, g1, g2));
    }
    for (label, g1, g2) in curated_lin_pairs().into_iter().chain(curated_cf_pairs()) {
        jobs.push(Job::ContextFree(label, g1, g2));
    }
    jobs.push(Job::Closures(closure_suite()));

    let batches = crate::par::map(&jobs, |j| run_job(j, cfg));
    let mut reports = Vec::new();
    for b in batches {
        reports.extend(b?);
    }
    sort_reports(&mut reports);
    Ok(SuiteRun { config: *cfg, index: Index::of(&reports), reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_inputs_respect_their_limits() {
        let pairs = random_finite_pairs(7, 50);
        assert_eq!(pairs.len(), 50);
        for (l1, l2) in &pairs {
            for l in [l1, l2] {
                assert!(l.len() <= 8);
                assert!(l.max_word_len() <= 5);
                assert!(l.alphabet().len() <= 3);
            }
        }
        assert_eq!(pairs, random_finite_pairs(7, 50));
        assert_ne!(pairs, random_finite_pairs(8, 50));
        let words = random_word_pairs(1, 100);
        assert!(words.iter().all(|(a, b)| a.len() <= 8 && b.len() <= 8));
    }

    #[test]
    fn curated_inputs_parse() {
        assert_eq!(curated_regular_pairs().len(), 6);
        assert!(!curated_cf_pairs().is_empty());
        assert!(closure_suite().iter().any(|e| e.class == PairClass::Lin));
    }
}
