use std::collections::BTreeSet;

use proptest::prelude::*;

use gensplice::automata::format::{parse_nfa, write_nfa};
use gensplice::automata::{crossover_nfa, enumerate_nfa, grammar_to_nfa, nfa_to_grammar, Nfa};
use gensplice::format::{parse_word_list, write_word_list};
use gensplice::grammar::enumerate_grammar;
use gensplice::grammar::format::{parse_grammar, write_grammar};
use gensplice::verify::{gsa_bounded_oracle, gsa_grammar_oracle};
use gensplice::{
    canonical_rules, gs_finite, gsa_finite, gsa_finite_with, gsa_pair, gsa_pair_single_letter, splice, FiniteLanguage,
    ParentPolicy, SplicingRule, Word,
};

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    proptest::string::string_regex(&format!("[abc]{{0,{max_len}}}")).unwrap().prop_map(|s| Word::from(s.as_str()))
}

fn language(max_words: usize, max_len: usize) -> impl Strategy<Value = FiniteLanguage> {
    proptest::collection::vec(word(max_len), 0..=max_words).prop_map(|ws| ws.into_iter().collect())
}

fn policy() -> impl Strategy<Value = ParentPolicy> {
    prop_oneof![Just(ParentPolicy::SharedSymbol), Just(ParentPolicy::Always)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn single_letter_overlaps_suffice(x in word(8), y in word(8)) {
        prop_assert_eq!(gsa_pair(&x, &y), gsa_pair_single_letter(&x, &y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn self_assembly_is_included_in_splicing(l1 in language(5, 4), l2 in language(5, 4)) {
        let gs = gs_finite(&l1, &l2, &canonical_rules(&l1, &l2));
        prop_assert!(gsa_finite(&l1, &l2).is_subset(&gs));
    }

    #[test]
    fn self_assembly_is_symmetric(l1 in language(5, 5), l2 in language(5, 5), p in policy()) {
        prop_assert_eq!(gsa_finite_with(&l1, &l2, p), gsa_finite_with(&l2, &l1, p));
    }

    #[test]
    fn self_assembly_is_monotone(l1 in language(4, 5), extra in language(3, 5), l2 in language(4, 5), p in policy()) {
        let bigger = l1.union(&extra);
        prop_assert!(gsa_finite_with(&l1, &l2, p).is_subset(&gsa_finite_with(&bigger, &l2, p)));
    }

    #[test]
    fn overlap_rules_give_the_crossovers(x in word(6), y in word(6)) {
        let letters: BTreeSet<_> = x.alphabet().intersection(&y.alphabet()).copied().collect();
        let mut spliced = FiniteLanguage::new();
        for a in &letters {
            let rule = SplicingRule::overlap(Word::from_symbols(vec![*a]));
            for (z1, z2) in splice(&rule, &x, &y) {
                spliced.insert(z1);
                spliced.insert(z2);
            }
        }
        if !letters.is_empty() {
            spliced.insert(x.clone());
            spliced.insert(y.clone());
        }
        prop_assert_eq!(spliced, gsa_pair(&x, &y));
    }

    #[test]
    fn bounded_oracle_matches_the_finite_computation(
        l1 in language(5, 5), l2 in language(5, 5), n in 1usize..8, p in policy()
    ) {
        let depth = n.max(5);
        let got = gsa_bounded_oracle(&l1, &l2, n, depth, p).unwrap();
        prop_assert_eq!(got, gsa_finite_with(&l1, &l2, p).restrict_len(n));
    }

    #[test]
    fn grammar_oracle_matches_the_finite_computation(
        l1 in language(4, 5), l2 in language(4, 5), n in 1usize..8, p in policy()
    ) {
        let (g1, g2) = (nfa_to_grammar(&Nfa::from_words(&l1)), nfa_to_grammar(&Nfa::from_words(&l2)));
        let got = gsa_grammar_oracle(&g1, &g2, n, p).unwrap();
        prop_assert_eq!(got, gsa_finite_with(&l1, &l2, p).restrict_len(n));
    }

    #[test]
    fn crossover_automaton_matches_the_finite_computation(l1 in language(4, 4), l2 in language(4, 4), p in policy()) {
        let m = crossover_nfa(&Nfa::from_words(&l1), &Nfa::from_words(&l2), p);
        prop_assert_eq!(enumerate_nfa(&m, 8), gsa_finite_with(&l1, &l2, p));
    }

    #[test]
    fn word_lists_round_trip(l in language(8, 6)) {
        prop_assert_eq!(parse_word_list(&write_word_list(&l)).unwrap(), l);
    }

    #[test]
    fn automata_and_grammars_round_trip(l in language(6, 5)) {
        let m = Nfa::from_words(&l);
        let reparsed = parse_nfa(&write_nfa(&m, &["header".to_string()])).unwrap();
        prop_assert_eq!(&reparsed, &m);
        let g = nfa_to_grammar(&m);
        prop_assert_eq!(parse_grammar(&write_grammar(&g)).unwrap(), g.clone());
        prop_assert_eq!(enumerate_grammar(&g, 6), l.clone());
        prop_assert_eq!(enumerate_nfa(&grammar_to_nfa(&g).unwrap(), 6), l);
    }
}
