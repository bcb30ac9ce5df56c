use std::collections::{BTreeMap, BTreeSet};

use super::{Cfg, GrammarClass, GrammarError, GrammarSymbol, HeadNormalGrammar, NameSupply, Nonterminal, Production};

/// What to do when the input grammar generates ε.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EpsilonPolicy {
    #[default]
    Reject,
    /// Keep ε as the single rule `S → ε` on the start symbol.
    AllowAtStart,
}

/// Brings a right-linear grammar (`X → w Y` or `X → w`, `w` a terminal
/// word) into one-letter form `X → a Y | a`, splitting long heads through
/// fresh nonterminals and removing unit and ε rules.
pub fn normalize_right_linear(g: &Cfg, eps: EpsilonPolicy) -> Result<HeadNormalGrammar, GrammarError> {
    let mut names = NameSupply::new(g.nonterminals());
    let mut lettered: BTreeSet<Production> = BTreeSet::new();
    let mut units: BTreeMap<Nonterminal, BTreeSet<Nonterminal>> = BTreeMap::new();
    let mut nullable: BTreeSet<Nonterminal> = BTreeSet::new();

    for p in g.productions() {
        let (word, next) = match p.rhs.split_last() {
            Some((GrammarSymbol::N(n), rest)) => (rest, Some(n.clone())),
            _ => (p.rhs.as_slice(), None),
        };
        let letters = word
            .iter()
            .map(|s| match s {
                GrammarSymbol::T(t) => Ok(*t),
                GrammarSymbol::N(_) => Err(GrammarError::NotRightLinear(p.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        match (letters.as_slice(), next) {
            ([], None) => {
                nullable.insert(p.lhs.clone());
            }
            ([], Some(n)) => {
                units.entry(p.lhs.clone()).or_default().insert(n);
            }
            (letters, next) => {
                let mut lhs = p.lhs.clone();
                for (i, &a) in letters.iter().enumerate() {
                    let last = i + 1 == letters.len();
                    let tail = if last {
                        next.clone().into_iter().collect()
                    } else {
                        vec![names.fresh(&format!("{}_{}", p.lhs, i + 1))]
                    };
                    let following = tail.first().cloned();
                    lettered.insert(Production::new(lhs, a, tail));
                    match following {
                        Some(f) if !last => lhs = f,
                        _ => break,
                    }
                }
            }
        }
    }

    // nullable closure through unit rules
    loop {
        let before = nullable.len();
        for (x, ys) in &units {
            if ys.iter().any(|y| nullable.contains(y)) {
                nullable.insert(x.clone());
            }
        }
        if nullable.len() == before {
            break;
        }
    }

    let shortcuts: Vec<Production> = lettered
        .iter()
        .filter(|p| p.tail.len() == 1 && nullable.contains(&p.tail[0]))
        .map(|p| Production::new(p.lhs.clone(), p.head.unwrap(), Vec::new()))
        .collect();
    lettered.extend(shortcuts);

    let mut nonterminals: BTreeSet<Nonterminal> = g.nonterminals().clone();
    for p in &lettered {
        nonterminals.insert(p.lhs.clone());
        nonterminals.extend(p.tail.iter().cloned());
    }

    let mut productions = BTreeSet::new();
    for x in &nonterminals {
        for y in unit_closure(x, &units) {
            for p in lettered.iter().filter(|p| p.lhs == y) {
                productions.insert(p.with_lhs(x.clone()));
            }
        }
    }

    if nullable.contains(g.start()) {
        match eps {
            EpsilonPolicy::Reject => return Err(GrammarError::GeneratesEpsilon),
            EpsilonPolicy::AllowAtStart => {
                productions.insert(Production::epsilon(g.start().clone()));
            }
        }
    }

    HeadNormalGrammar::new(
        nonterminals,
        g.terminals().clone(),
        g.start().clone(),
        productions,
        GrammarClass::RightLinear,
    )
}

/// `x` together with everything reachable from it through unit rules.
pub(super) fn unit_closure(
    x: &Nonterminal,
    units: &BTreeMap<Nonterminal, BTreeSet<Nonterminal>>,
) -> BTreeSet<Nonterminal> {
    let mut seen = BTreeSet::from([x.clone()]);
    let mut stack = vec![x.clone()];
    while let Some(n) = stack.pop() {
        for m in units.get(&n).into_iter().flatten() {
            if seen.insert(m.clone()) {
                stack.push(m.clone());
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{enumerate_grammar, Cfg};
    use super::*;
    use crate::word::{FiniteLanguage, Word};

    /// Strings of length ≤ n derivable by naive leftmost rewriting of the
    /// general grammar, without any normalization.
    pub(crate) fn cfg_slice(g: &Cfg, n: usize) -> FiniteLanguage {
        crate::grammar::enumerate::tests::brute_force_cfg(g, n)
    }

    #[test]
    fn letterwise_split() {
        let g = Cfg::parse_compact("S -> a b S; S -> c").unwrap();
        let h = normalize_right_linear(&g, EpsilonPolicy::Reject).unwrap();
        assert_eq!(h.class(), GrammarClass::RightLinear);
        let shapes: BTreeSet<(char, usize)> =
            h.productions().iter().map(|p| (p.head.unwrap().as_char(), p.tail.len())).collect();
        assert_eq!(shapes, BTreeSet::from([('a', 1), ('b', 1), ('c', 0)]));
        assert_eq!(h.productions().len(), 3);
        assert!(h.productions().contains(&prod("S", 'c', &[])));
        assert!(h.productions().contains(&prod("S_1", 'b', &["S"])));
        assert!(h.productions().contains(&prod("S", 'a', &["S_1"])));
        assert_eq!(enumerate_grammar(&h, 8), cfg_slice(&g, 8));
    }

    #[test]
    fn normal_input_is_a_fixed_point() {
        let g = a_star_b();
        let h = normalize_right_linear(&g.to_cfg(), EpsilonPolicy::Reject).unwrap();
        assert_eq!(h.productions(), g.productions());
    }

    #[test]
    fn epsilon_handling() {
        let g = Cfg::parse_compact("S -> @eps").unwrap();
        assert_eq!(normalize_right_linear(&g, EpsilonPolicy::Reject), Err(GrammarError::GeneratesEpsilon));
        let h = normalize_right_linear(&g, EpsilonPolicy::AllowAtStart).unwrap();
        assert_eq!(enumerate_grammar(&h, 3), FiniteLanguage::from_iter([Word::empty()]));
    }

    #[test]
    fn units_and_nullables_are_removed() {
        let g = Cfg::parse_compact("S -> A; A -> a A; A -> B; B -> b; B -> @eps; S -> c c").unwrap();
        let h = normalize_right_linear(&g, EpsilonPolicy::AllowAtStart).unwrap();
        assert_eq!(enumerate_grammar(&h, 6), cfg_slice(&g, 6));
        assert!(h.has_epsilon_rule());
    }

    #[test]
    fn rejects_non_right_linear() {
        let g = Cfg::parse_compact("S -> a S b").unwrap();
        assert!(matches!(normalize_right_linear(&g, EpsilonPolicy::Reject), Err(GrammarError::NotRightLinear(_))));
        let g = Cfg::parse_compact("S -> A B").unwrap();
        assert!(normalize_right_linear(&g, EpsilonPolicy::Reject).is_err());
    }
}
