//! Regular operations on NFAs and the exact single-crossover automaton built
//! from them.

use std::collections::{BTreeMap, BTreeSet};

use super::{fresh_name, Nfa, StateId};
use crate::gsa::ParentPolicy;
use crate::word::Symbol;

/// Accepts every prefix of an accepted word: co-accessible states of the
/// accessible part become final.
pub fn prefix_closure(m: &Nfa) -> Nfa {
    let t = m.trim();
    let mut out = t.clone();
    out.finals = t.coaccessible();
    out
}

/// Accepts every suffix of an accepted word: a fresh start with ε-moves to
/// every accessible state.
pub fn suffix_closure(m: &Nfa) -> Nfa {
    let t = m.trim();
    let taken: BTreeSet<String> = t.names.iter().cloned().collect();
    let mut out = t.clone();
    let s = out.names.len();
    out.names.push(fresh_name(&taken, "suf"));
    out.transitions.extend((0..s).map(|q| (s, None, q)));
    out.start = s;
    out
}

/// Union via a fresh start state.
pub fn union_all(parts: &[Nfa], alphabet: &BTreeSet<Symbol>) -> Nfa {
    let mut names = vec!["u".to_string()];
    let mut transitions = BTreeSet::new();
    let mut finals = BTreeSet::new();
    let mut sigma = alphabet.clone();
    for (i, m) in parts.iter().enumerate() {
        let base = names.len();
        names.extend(m.names.iter().map(|n| format!("{i}.{n}")));
        transitions.insert((0, None, base + m.start));
        transitions.extend(m.transitions.iter().map(|&(p, l, q)| (base + p, l, base + q)));
        finals.extend(m.finals.iter().map(|&f| base + f));
        sigma.extend(m.alphabet.iter().copied());
    }
    Nfa { names, alphabet: sigma, transitions, start: 0, finals }
}

/// Concatenation: ε-moves from the finals of `a` to the start of `b`.
pub fn concat(a: &Nfa, b: &Nfa) -> Nfa {
    let base = a.num_states();
    let mut names: Vec<String> = a.names.iter().map(|n| format!("L.{n}")).collect();
    names.extend(b.names.iter().map(|n| format!("R.{n}")));
    let mut transitions = a.transitions.clone();
    transitions.extend(b.transitions.iter().map(|&(p, l, q)| (base + p, l, base + q)));
    transitions.extend(a.finals.iter().map(|&f| (f, None, base + b.start)));
    Nfa {
        names,
        alphabet: a.alphabet.union(&b.alphabet).copied().collect(),
        transitions,
        start: a.start,
        finals: b.finals.iter().map(|&f| base + f).collect(),
    }
}

/// Product automaton for the intersection; ε-moves advance one side alone.
pub fn intersect(a: &Nfa, b: &Nfa) -> Nfa {
    let (sa, sb) = (a.successors(), b.successors());
    let first = (a.start, b.start);
    let mut index: BTreeMap<(StateId, StateId), StateId> = BTreeMap::from([(first, 0)]);
    let mut pairs = vec![first];
    let mut transitions = BTreeSet::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        let mut moves = Vec::new();
        for &(l, p2) in &sa[p] {
            match l {
                None => moves.push((None, (p2, q))),
                Some(x) => moves.extend(sb[q].iter().filter(|(m, _)| *m == Some(x)).map(|&(_, q2)| (l, (p2, q2)))),
            }
        }
        moves.extend(sb[q].iter().filter(|(l, _)| l.is_none()).map(|&(_, q2)| (None, (p, q2))));
        for (l, next) in moves {
            let j = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                pairs.len() - 1
            });
            transitions.insert((i, l, j));
        }
        i += 1;
    }
    Nfa {
        names: pairs.iter().map(|&(p, q)| format!("({},{})", a.names[p], b.names[q])).collect(),
        alphabet: a.alphabet.union(&b.alphabet).copied().collect(),
        transitions,
        start: 0,
        finals: (0..pairs.len())
            .filter(|&k| a.finals.contains(&pairs[k].0) && b.finals.contains(&pairs[k].1))
            .collect(),
    }
}

/// `{ v : a·v ∈ L(m) }`: a fresh start with ε-moves to every state reachable
/// from the start by reading `a`.
pub fn left_quotient(m: &Nfa, a: Symbol) -> Nfa {
    let succ = m.successors();
    let start = super::closure_with(&succ, &BTreeSet::from([m.start]));
    let targets = super::step_with(&succ, &start, a);
    let taken: BTreeSet<String> = m.names.iter().cloned().collect();
    let mut out = m.clone();
    let s = out.names.len();
    out.names.push(fresh_name(&taken, "quo"));
    out.transitions.extend(targets.into_iter().map(|q| (s, None, q)));
    out.start = s;
    out
}

/// Words over `sigma` whose last symbol is `a`.
fn ends_with(a: Symbol, sigma: &BTreeSet<Symbol>) -> Nfa {
    let mut transitions: BTreeSet<_> = sigma.iter().map(|&x| (0, Some(x), 0)).collect();
    transitions.insert((0, Some(a), 1));
    Nfa {
        names: vec!["e0".into(), "e1".into()],
        alphabet: sigma.clone(),
        transitions,
        start: 0,
        finals: BTreeSet::from([1]),
    }
}

/// Words over `sigma` containing at least one symbol of `any`.
fn contains_any(any: &BTreeSet<Symbol>, sigma: &BTreeSet<Symbol>) -> Nfa {
    let mut transitions = BTreeSet::new();
    for &x in sigma {
        transitions.insert((0, Some(x), if any.contains(&x) { 1 } else { 0 }));
        transitions.insert((1, Some(x), 1));
    }
    Nfa {
        names: vec!["c0".into(), "c1".into()],
        alphabet: sigma.clone(),
        transitions,
        start: 0,
        finals: BTreeSet::from([1]),
    }
}

/// The exact self-assembly language of two regular languages, assembled from
/// closures:
///
/// ```text
/// ⋃_{a ∈ V} (Pref(L1) ∩ Σ*a)·a⁻¹Suff(L2)  ∪  (Pref(L2) ∩ Σ*a)·a⁻¹Suff(L1)  ∪  parents
/// ```
///
/// where `V` is the set of symbols occurring in both languages. Under
/// [`ParentPolicy::SharedSymbol`] a parent word is kept iff it contains a
/// symbol of `V`.
pub fn crossover_nfa(m1: &Nfa, m2: &Nfa, policy: ParentPolicy) -> Nfa {
    let sigma: BTreeSet<Symbol> = m1.alphabet.union(&m2.alphabet).copied().collect();
    let shared: BTreeSet<Symbol> = m1.occurring_symbols().intersection(&m2.occurring_symbols()).copied().collect();
    let (p1, p2) = (prefix_closure(m1), prefix_closure(m2));
    let (s1, s2) = (suffix_closure(m1), suffix_closure(m2));
    let mut parts = Vec::new();
    for &a in &shared {
        let last = ends_with(a, &sigma);
        parts.push(concat(&intersect(&p1, &last), &left_quotient(&s2, a)).trim());
        parts.push(concat(&intersect(&p2, &last), &left_quotient(&s1, a)).trim());
    }
    match policy {
        ParentPolicy::Always => {
            parts.push(m1.trim());
            parts.push(m2.trim());
        }
        ParentPolicy::SharedSymbol if !shared.is_empty() => {
            let any = contains_any(&shared, &sigma);
            parts.push(intersect(m1, &any).trim());
            parts.push(intersect(m2, &any).trim());
        }
        ParentPolicy::SharedSymbol => {}
    }
    union_all(&parts, &sigma).trim()
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{enumerate_nfa, equivalent};
    use super::*;
    use crate::gsa::gsa_finite_with;
    use crate::word::{FiniteLanguage, Word};

    fn lang(ws: &[&str]) -> FiniteLanguage {
        ws.iter().copied().collect()
    }

    #[test]
    fn closures() {
        let p = prefix_closure(&a_star_b());
        assert!(p.accepts(&"aa".into()));
        assert!(p.accepts(&Word::empty()));
        assert!(!p.accepts(&"ba".into()));
        let s = suffix_closure(&b_star_a());
        assert!(s.accepts(&"a".into()));
        assert!(s.accepts(&Word::empty()));
        assert!(s.accepts(&"bba".into()));
        assert!(!s.accepts(&"ab".into()));
    }

    #[test]
    fn operations() {
        let m = a_star_b();
        let q = left_quotient(&m, Symbol::new('a').unwrap());
        assert_eq!(equivalent(&q, &m), Ok(()));
        let q = left_quotient(&m, Symbol::new('b').unwrap());
        assert_eq!(enumerate_nfa(&q, 3), FiniteLanguage::from_iter([Word::empty()]));
        let c = concat(&a_star_b(), &b_star_a());
        assert!(c.accepts(&"abba".into()));
        assert!(!c.accepts(&"ab".into()));
        let i = intersect(&a_star_b(), &prefix_closure(&b_star_a()));
        assert_eq!(enumerate_nfa(&i, 5), lang(&["b"]));
    }

    #[test]
    fn crossover_of_the_worked_pair() {
        let x = crossover_nfa(&a_star_b(), &b_star_a(), ParentPolicy::SharedSymbol);
        assert!(x.accepts(&"aaa".into()));
        assert!(x.accepts(&"aba".into()));
        assert!(x.accepts(&"aaba".into()));
        assert!(!x.accepts(&"abab".into()));
        assert!(!x.accepts(&"abb".into()));
    }

    #[test]
    fn crossover_matches_finite_gsa() {
        let cases = [
            (lang(&["ab"]), lang(&["ba"])),
            (lang(&["abc", "ca"]), lang(&["bcb", "a", "cc"])),
            (lang(&["ab"]), lang(&["cd"])),
            (lang(&["@eps", "a"]), lang(&["aa", "b"])),
        ];
        for (l1, l2) in cases {
            for policy in [ParentPolicy::SharedSymbol, ParentPolicy::Always] {
                let x = crossover_nfa(&Nfa::from_words(&l1), &Nfa::from_words(&l2), policy);
                let expected = gsa_finite_with(&l1, &l2, policy);
                let bound = expected.max_word_len() + 2;
                assert_eq!(enumerate_nfa(&x, bound), expected, "{l1:?} {l2:?} {policy:?}");
            }
        }
    }

    #[test]
    fn disjoint_alphabets_give_nothing() {
        let x = crossover_nfa(&star_then('a', 'b', "p"), &star_then('c', 'd', "r"), ParentPolicy::SharedSymbol);
        assert!(x.trim().finals.is_empty());
    }
}
