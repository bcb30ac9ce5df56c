//! Total deterministic automata: subset construction, complement, product,
//! emptiness with shortest witness, and equivalence.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::{closure_with, step_with, Nfa, StateId};
use crate::word::{Symbol, Word};

/// A total DFA over a fixed, sorted alphabet. Every state has exactly one
/// successor per symbol; missing moves go to an explicit sink.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<Symbol>,
    delta: Vec<Vec<StateId>>,
    start: StateId,
    finals: Vec<bool>,
}

/// Which language a distinguishing word belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// A shortest word accepted by exactly one of two automata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distinction {
    pub word: Word,
    /// The automaton that accepts `word`.
    pub accepted_by: Side,
}

/// Subset construction over the automaton's own alphabet.
pub fn determinize(m: &Nfa) -> Dfa {
    Dfa::from_nfa(m, m.alphabet())
}

impl Dfa {
    /// Subset construction over `alphabet`, which should contain the
    /// automaton's alphabet; other symbols lead to the sink.
    pub fn from_nfa(m: &Nfa, alphabet: &BTreeSet<Symbol>) -> Dfa {
        let alphabet: Vec<Symbol> = alphabet.iter().copied().collect();
        let succ = m.successors();
        let first = closure_with(&succ, &BTreeSet::from([m.start()]));
        let mut index: BTreeMap<BTreeSet<StateId>, StateId> = BTreeMap::from([(first.clone(), 0)]);
        let mut sets = vec![first];
        let mut delta: Vec<Vec<StateId>> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let row = alphabet
                .iter()
                .map(|&a| {
                    let next = step_with(&succ, &sets[i], a);
                    *index.entry(next.clone()).or_insert_with(|| {
                        sets.push(next);
                        sets.len() - 1
                    })
                })
                .collect();
            delta.push(row);
            i += 1;
        }
        let finals = sets.iter().map(|s| s.iter().any(|q| m.finals().contains(q))).collect();
        Dfa { alphabet, delta, start: 0, finals }
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let mut q = self.start;
        for s in w.symbols() {
            match self.alphabet.binary_search(s) {
                Ok(i) => q = self.delta[q][i],
                Err(_) => return false,
            }
        }
        self.finals[q]
    }

    /// Complement relative to words over this DFA's alphabet.
    pub fn complement(&self) -> Dfa {
        Dfa { finals: self.finals.iter().map(|f| !f).collect(), ..self.clone() }
    }

    /// Re-expresses the DFA over a larger alphabet; new symbols go to a sink.
    pub fn over(&self, alphabet: &BTreeSet<Symbol>) -> Dfa {
        let mut full: BTreeSet<Symbol> = alphabet.clone();
        full.extend(self.alphabet.iter().copied());
        let full: Vec<Symbol> = full.into_iter().collect();
        if full == self.alphabet {
            return self.clone();
        }
        let sink = self.delta.len();
        let mut delta: Vec<Vec<StateId>> = self
            .delta
            .iter()
            .map(|row| {
                full.iter()
                    .map(|a| match self.alphabet.binary_search(a) {
                        Ok(i) => row[i],
                        Err(_) => sink,
                    })
                    .collect()
            })
            .collect();
        delta.push(vec![sink; full.len()]);
        let mut finals = self.finals.clone();
        finals.push(false);
        Dfa { alphabet: full, delta, start: self.start, finals }
    }

    /// Product automaton accepting the intersection; alphabets are unified
    /// first.
    pub fn intersect(&self, other: &Dfa) -> Dfa {
        self.product(other, |x, y| x && y)
    }

    pub fn union(&self, other: &Dfa) -> Dfa {
        self.product(other, |x, y| x || y)
    }

    fn product(&self, other: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Dfa {
        let sigma: BTreeSet<Symbol> = self.alphabet.iter().chain(&other.alphabet).copied().collect();
        let (d1, d2) = (self.over(&sigma), other.over(&sigma));
        let first = (d1.start, d2.start);
        let mut index = BTreeMap::from([(first, 0)]);
        let mut pairs = vec![first];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let row = (0..d1.alphabet.len())
                .map(|k| {
                    let next = (d1.delta[p][k], d2.delta[q][k]);
                    *index.entry(next).or_insert_with(|| {
                        pairs.push(next);
                        pairs.len() - 1
                    })
                })
                .collect();
            delta.push(row);
            i += 1;
        }
        let finals = pairs.iter().map(|&(p, q)| accept(d1.finals[p], d2.finals[q])).collect();
        Dfa { alphabet: d1.alphabet, delta, start: 0, finals }
    }

    /// The shortlex-least accepted word, found breadth-first with symbols in
    /// order. `None` iff the language is empty.
    pub fn shortest_word(&self) -> Option<Word> {
        let mut pred: Vec<Option<(StateId, Symbol)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        seen[self.start] = true;
        let mut queue = VecDeque::from([self.start]);
        while let Some(q) = queue.pop_front() {
            if self.finals[q] {
                let mut symbols = Vec::new();
                let mut at = q;
                while let Some((p, a)) = pred[at] {
                    symbols.push(a);
                    at = p;
                }
                symbols.reverse();
                return Some(Word::from_symbols(symbols));
            }
            for (k, &r) in self.delta[q].iter().enumerate() {
                if !seen[r] {
                    seen[r] = true;
                    pred[r] = Some((q, self.alphabet[k]));
                    queue.push_back(r);
                }
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_word().is_none()
    }

    pub fn to_nfa(&self) -> Nfa {
        let names = (0..self.num_states()).map(|i| format!("d{i}")).collect();
        let transitions = self
            .delta
            .iter()
            .enumerate()
            .flat_map(|(p, row)| row.iter().enumerate().map(move |(k, &q)| (p, Some(self.alphabet[k]), q)))
            .collect();
        let finals = (0..self.num_states()).filter(|&q| self.finals[q]).collect();
        Nfa::new(names, self.alphabet.iter().copied().collect(), transitions, self.start, finals)
            .expect("a DFA is a well-formed NFA")
    }
}

fn joint_alphabet(m1: &Nfa, m2: &Nfa) -> BTreeSet<Symbol> {
    m1.alphabet().union(m2.alphabet()).copied().collect()
}

/// The shortlex-least word in `L(sub) \ L(sup)`, or `None` when
/// `L(sub) ⊆ L(sup)`.
pub fn inclusion_witness(sub: &Nfa, sup: &Nfa) -> Option<Word> {
    let sigma = joint_alphabet(sub, sup);
    Dfa::from_nfa(sub, &sigma).intersect(&Dfa::from_nfa(sup, &sigma).complement()).shortest_word()
}

/// `Ok(())` when the languages are equal; otherwise the shortlex-least word
/// in the symmetric difference and the side that accepts it.
pub fn equivalent(m1: &Nfa, m2: &Nfa) -> Result<(), Distinction> {
    let left = inclusion_witness(m1, m2).map(|word| Distinction { word, accepted_by: Side::Left });
    let right = inclusion_witness(m2, m1).map(|word| Distinction { word, accepted_by: Side::Right });
    match (left, right) {
        (None, None) => Ok(()),
        (Some(d), None) | (None, Some(d)) => Err(d),
        (Some(l), Some(r)) => Err(if r.word < l.word { r } else { l }),
    }
}

#[cfg(test)]
mod tests {
    use super::super::enumerate_nfa;
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn determinization_preserves_language() {
        let m = a_star_b();
        let d = determinize(&m);
        assert_eq!(equivalent(&m, &d.to_nfa()), Ok(()));
        assert_eq!(enumerate_nfa(&d.to_nfa(), 5), enumerate_nfa(&m, 5));
        assert!(d.accepts(&"aab".into()));
        assert!(!d.accepts(&"c".into()));
    }

    #[test]
    fn distinguishing_word_is_shortest() {
        let err = equivalent(&a_star_b(), &b_star_a()).unwrap_err();
        assert_eq!(err.word, Word::from("a"));
        assert_eq!(err.accepted_by, Side::Right);
    }

    #[test]
    fn algebraic_laws() {
        let d = determinize(&a_star_b());
        assert!(d.intersect(&d.complement()).is_empty());
        assert_eq!(d.complement().complement(), d);
        let e = determinize(&b_star_a());
        // De Morgan: ¬(d ∪ e) = ¬d ∩ ¬e
        let lhs = d.union(&e).complement().to_nfa();
        let rhs = d.complement().intersect(&e.complement()).to_nfa();
        assert_eq!(equivalent(&lhs, &rhs), Ok(()));
    }

    #[test]
    fn widening_the_alphabet() {
        let d = determinize(&a_star_b());
        let sigma = BTreeSet::from([Symbol::new('c').unwrap()]);
        let wide = d.over(&sigma);
        assert_eq!(wide.alphabet().len(), 3);
        assert!(wide.complement().accepts(&"c".into()));
        assert!(!wide.accepts(&"ac".into()));
    }

    #[test]
    fn inclusion() {
        assert_eq!(inclusion_witness(&a_star_b(), &a_star_b()), None);
        assert_eq!(inclusion_witness(&a_star_b(), &b_star_a()), Some("b".into()));
    }
}
