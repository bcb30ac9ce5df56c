//! Conversions between right-linear grammars and automata.

use std::collections::BTreeSet;

use super::{fresh_name, Nfa, NfaError, StateId};
use crate::grammar::{GrammarClass, HeadNormalGrammar, Nonterminal, Production};

/// Nonterminals become states; `A → a B` becomes `A -a-> B`, `A → a` an
/// edge into a fresh accepting sink, and `S → ε` makes the start final.
pub fn grammar_to_nfa(g: &HeadNormalGrammar) -> Result<Nfa, NfaError> {
    if !g.satisfies(GrammarClass::RightLinear) {
        return Err(NfaError::NotRightLinear);
    }
    let mut names: Vec<String> = g.nonterminals().iter().map(|n| n.name().to_string()).collect();
    let index = |n: &Nonterminal| names.binary_search_by(|x| x.as_str().cmp(n.name())).expect("declared");
    let start = index(g.start());
    let taken: BTreeSet<String> = names.iter().cloned().collect();
    let sink = names.len();
    let mut transitions = BTreeSet::new();
    let mut finals = BTreeSet::from([sink]);
    for p in g.productions() {
        let from = index(&p.lhs);
        match (p.head, p.tail.as_slice()) {
            (None, _) => {
                finals.insert(from);
            }
            (Some(a), []) => {
                transitions.insert((from, Some(a), sink));
            }
            (Some(a), [b]) => {
                transitions.insert((from, Some(a), index(b)));
            }
            _ => unreachable!("right-linear checked"),
        }
    }
    names.push(fresh_name(&taken, "F"));
    Nfa::new(names, g.terminals().clone(), transitions, start, finals)
}

/// A right-linear grammar with one nonterminal `Q<i>` per useful state and a
/// fresh start `S`. ε-moves are closed away first.
pub fn nfa_to_grammar(m: &Nfa) -> HeadNormalGrammar {
    let m = m.trim();
    let succ = m.successors();
    let state = |q: StateId| Nonterminal::new(format!("Q{q}"));
    let start = Nonterminal::new("S");
    let mut productions = BTreeSet::new();
    let mut nonterminals: BTreeSet<Nonterminal> = (0..m.num_states()).map(state).collect();
    nonterminals.insert(start.clone());
    for p in 0..m.num_states() {
        let reach = super::closure_with(&succ, &BTreeSet::from([p]));
        for &q in &reach {
            for &(l, r) in &succ[q] {
                let Some(a) = l else { continue };
                // every state reachable from r by ε is covered by r's own rules
                let finals_after = super::closure_with(&succ, &BTreeSet::from([r]));
                productions.insert(Production::new(state(p), a, vec![state(r)]));
                if finals_after.iter().any(|f| m.finals().contains(f)) {
                    productions.insert(Production::new(state(p), a, Vec::new()));
                }
            }
        }
    }
    let start_rules: Vec<Production> = productions
        .iter()
        .filter(|p| p.lhs == state(m.start()))
        .map(|p| Production { lhs: start.clone(), ..p.clone() })
        .collect();
    productions.extend(start_rules);
    let start_closure = super::closure_with(&succ, &BTreeSet::from([m.start()]));
    if start_closure.iter().any(|f| m.finals().contains(f)) {
        productions.insert(Production::epsilon(start.clone()));
    }
    HeadNormalGrammar::new(nonterminals, m.alphabet().clone(), start, productions, GrammarClass::RightLinear)
        .expect("construction yields a right-linear grammar")
        .trim()
}

#[cfg(test)]
mod tests {
    use super::super::fixtures;
    use super::super::{assemble_nfas, enumerate_nfa, equivalent, Nfa};
    use super::*;
    use crate::grammar::fixtures::{a_star_b, b_star_a};
    use crate::grammar::{assemble_grammars, enumerate_grammar, AssemblyMode};
    use crate::word::{FiniteLanguage, Symbol};

    #[test]
    fn grammar_to_automaton() {
        let m = grammar_to_nfa(&a_star_b()).unwrap();
        let words: FiniteLanguage = ["b", "ab", "aab"].into_iter().collect();
        assert_eq!(enumerate_nfa(&m, 3), words);
    }

    #[test]
    fn round_trip() {
        for m in [fixtures::a_star_b(), fixtures::b_star_a()] {
            let g = nfa_to_grammar(&m);
            assert_eq!(g.class(), GrammarClass::RightLinear);
            assert_eq!(equivalent(&grammar_to_nfa(&g).unwrap(), &m), Ok(()));
        }
        let a = Symbol::new('a').unwrap();
        let eps = Nfa::new(
            vec!["s".into(), "t".into()],
            BTreeSet::from([a]),
            BTreeSet::from([(0, None, 1), (1, Some(a), 0)]),
            0,
            BTreeSet::from([1]),
        )
        .unwrap();
        let g = nfa_to_grammar(&eps);
        assert_eq!(enumerate_grammar(&g, 3), enumerate_nfa(&eps, 3));
        assert_eq!(equivalent(&grammar_to_nfa(&g).unwrap(), &eps), Ok(()));
    }

    #[test]
    fn paper_mode_assemblies_agree() {
        let g = assemble_grammars(&a_star_b(), &b_star_a(), AssemblyMode::Paper).unwrap();
        let from_grammar = grammar_to_nfa(&g).unwrap();
        let m1 = grammar_to_nfa(&a_star_b()).unwrap();
        let m2 = grammar_to_nfa(&b_star_a()).unwrap();
        let direct = assemble_nfas(&m1, &m2, AssemblyMode::Paper);
        assert_eq!(equivalent(&from_grammar, &direct), Ok(()));
    }

    #[test]
    fn rejects_non_right_linear() {
        let g = crate::grammar::format::parse_grammar("start: S\nS -> a S S\nS -> b\n").unwrap();
        assert_eq!(grammar_to_nfa(&g), Err(NfaError::NotRightLinear));
    }
}
