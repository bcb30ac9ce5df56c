//! Bounded self-assembly oracles over enumerated slices and grammars.

use std::collections::BTreeSet;

use super::AuditError;
use crate::grammar::{enumerate_grammar, enumerate_prefixes, enumerate_suffixes, HeadNormalGrammar};
use crate::gsa::{join_on_letter, qualifying_parents, ParentPolicy};
use crate::word::{FiniteLanguage, Symbol, Word};

/// Length-≤`n` part of the self-assembly of two languages given by their
/// length-≤`parent_depth` slices: parents plus single-letter crossovers of
/// slice prefixes and suffixes, both directions.
///
/// Complete only when every length-≤`n` prefix and suffix of each language
/// extends to a word of length ≤ `parent_depth`; callers add slack and, for
/// regular inputs, cross-check against the exact automaton.
pub fn gsa_bounded_oracle(
    enum1: &FiniteLanguage,
    enum2: &FiniteLanguage,
    n: usize,
    parent_depth: usize,
    policy: ParentPolicy,
) -> Result<FiniteLanguage, AuditError> {
    if parent_depth < n {
        return Err(AuditError::ParentDepth { n, parent_depth });
    }
    let slice = |l: &FiniteLanguage| {
        let (prefixes, suffixes) = affixes(l, n);
        Slice { words: l.restrict_len(n), prefixes, suffixes, symbols: l.occurring_symbols() }
    };
    Ok(assemble(&slice(enum1), &slice(enum2), n, policy))
}

/// Length-≤`n` part of the self-assembly of two grammar languages, with
/// prefixes and suffixes searched directly on the grammars. Exact for any
/// context-free input, with no parent-depth bound.
pub fn gsa_grammar_oracle(
    g1: &HeadNormalGrammar,
    g2: &HeadNormalGrammar,
    n: usize,
    policy: ParentPolicy,
) -> Result<FiniteLanguage, AuditError> {
    let slice = |g: &HeadNormalGrammar| -> Result<Slice, AuditError> {
        let g = g.trim();
        Ok(Slice {
            words: enumerate_grammar(&g, n),
            prefixes: enumerate_prefixes(&g, n).words().clone(),
            suffixes: enumerate_suffixes(&g, n)?.words().clone(),
            symbols: g.occurring_terminals(),
        })
    };
    Ok(assemble(&slice(g1)?, &slice(g2)?, n, policy))
}

/// Length-bounded view of one operand.
struct Slice {
    words: FiniteLanguage,
    prefixes: BTreeSet<Word>,
    suffixes: BTreeSet<Word>,
    symbols: BTreeSet<Symbol>,
}

fn assemble(s1: &Slice, s2: &Slice, n: usize, policy: ParentPolicy) -> FiniteLanguage {
    let mut out: FiniteLanguage = join_on_letter(&s1.prefixes, &s2.suffixes, Some(n)).into_iter().collect();
    out.extend(join_on_letter(&s2.prefixes, &s1.suffixes, Some(n)));
    out.extend(qualifying_parents(s1.words.iter(), &s2.symbols, policy).cloned());
    out.extend(qualifying_parents(s2.words.iter(), &s1.symbols, policy).cloned());
    out
}

/// Nonempty prefixes and suffixes of length at most `n`.
fn affixes(l: &FiniteLanguage, n: usize) -> (BTreeSet<Word>, BTreeSet<Word>) {
    let mut pre = BTreeSet::new();
    let mut suf = BTreeSet::new();
    for w in l.iter() {
        let k = w.len();
        for i in 1..=k.min(n) {
            pre.insert(w.slice(0, i));
            suf.insert(w.slice(k - i, k));
        }
    }
    (pre, suf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{crossover_nfa, enumerate_nfa, grammar_to_nfa};
    use crate::grammar::enumerate_grammar;
    use crate::grammar::fixtures::{a_star_b, b_star_a};
    use crate::grammar::format::parse_grammar;
    use crate::gsa::gsa_finite_with;

    fn lang(ws: &[&str]) -> FiniteLanguage {
        ws.iter().copied().collect()
    }

    #[test]
    fn worked_pair_slice() {
        let (g1, g2) = (a_star_b(), b_star_a());
        let out =
            gsa_bounded_oracle(&enumerate_grammar(&g1, 8), &enumerate_grammar(&g2, 8), 4, 8, ParentPolicy::default())
                .unwrap();
        assert!(out.contains(&"aba".into()));
        assert!(out.contains(&"aaba".into()));
        assert!(out.contains(&"abba".into()));
        assert!(!out.contains(&"abab".into()));
        let exact =
            crossover_nfa(&grammar_to_nfa(&g1).unwrap(), &grammar_to_nfa(&g2).unwrap(), ParentPolicy::default());
        assert_eq!(out, enumerate_nfa(&exact, 4));
    }

    #[test]
    fn finite_languages_match_the_direct_computation() {
        let (l1, l2) = (lang(&["abc", "ca", "@eps"]), lang(&["bcb", "a"]));
        for policy in [ParentPolicy::SharedSymbol, ParentPolicy::Always] {
            let out = gsa_bounded_oracle(&l1, &l2, 6, 6, policy).unwrap();
            assert_eq!(out, gsa_finite_with(&l1, &l2, policy));
        }
    }

    #[test]
    fn grammar_oracle_agrees_with_the_automaton() {
        let (g1, g2) = (a_star_b(), b_star_a());
        let exact =
            crossover_nfa(&grammar_to_nfa(&g1).unwrap(), &grammar_to_nfa(&g2).unwrap(), ParentPolicy::default());
        assert_eq!(gsa_grammar_oracle(&g1, &g2, 6, ParentPolicy::default()).unwrap(), enumerate_nfa(&exact, 6));
    }

    #[test]
    fn grammar_oracle_sees_deep_affixes() {
        let g1 = parse_grammar("start: S\nS -> a S B\nS -> c\nB -> b\n").unwrap();
        let g2 = parse_grammar("start: T\nT -> b T A\nT -> c\nA -> a\n").unwrap();
        let n = 8;
        let exact = gsa_grammar_oracle(&g1, &g2, n, ParentPolicy::default()).unwrap();
        let sliced = gsa_bounded_oracle(
            &enumerate_grammar(&g1, n + 4),
            &enumerate_grammar(&g2, n + 4),
            n,
            n + 4,
            ParentPolicy::default(),
        )
        .unwrap();
        assert!(sliced.is_subset(&exact));
        assert!(exact.contains(&"aaaaaaac".into()));
        assert!(!sliced.contains(&"aaaaaaac".into()));
    }

    #[test]
    fn edge_cases() {
        let l = lang(&["ab"]);
        assert!(gsa_bounded_oracle(&l, &l, 0, 4, ParentPolicy::default()).unwrap().is_empty());
        assert!(gsa_bounded_oracle(&l, &FiniteLanguage::new(), 4, 4, ParentPolicy::default()).unwrap().is_empty());
        assert_eq!(gsa_bounded_oracle(&l, &FiniteLanguage::new(), 4, 4, ParentPolicy::Always).unwrap(), l);
        assert_eq!(
            gsa_bounded_oracle(&l, &l, 5, 4, ParentPolicy::default()),
            Err(AuditError::ParentDepth { n: 5, parent_depth: 4 })
        );
    }
}
