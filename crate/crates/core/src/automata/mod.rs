//! Nondeterministic finite automata with ε-moves and the regular-language
//! algebra used for exact verification.

mod assemble;
mod closure;
mod convert;
mod dfa;
pub mod format;

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::word::{FiniteLanguage, Symbol, Word};

pub use assemble::{assemble_nfas, single_crossover_nfa};
pub use closure::{crossover_nfa, prefix_closure, suffix_closure};
pub use convert::{grammar_to_nfa, nfa_to_grammar};
pub use dfa::{determinize, equivalent, inclusion_witness, Dfa, Distinction, Side};

/// Index of a state inside one automaton.
pub type StateId = usize;

/// A transition label: a symbol, or `None` for ε.
pub type Label = Option<Symbol>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NfaError {
    #[error("automaton has no states")]
    NoStates,
    #[error("state {0} is out of range")]
    UnknownState(StateId),
    #[error("duplicate state name {0:?}")]
    DuplicateName(String),
    #[error("transition label {0} is not in the alphabet")]
    UnknownSymbol(Symbol),
    #[error("the grammar is not right-linear")]
    NotRightLinear,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    names: Vec<String>,
    alphabet: BTreeSet<Symbol>,
    transitions: BTreeSet<(StateId, Label, StateId)>,
    start: StateId,
    finals: BTreeSet<StateId>,
}

impl Nfa {
    pub fn new(
        names: Vec<String>,
        alphabet: BTreeSet<Symbol>,
        transitions: BTreeSet<(StateId, Label, StateId)>,
        start: StateId,
        finals: BTreeSet<StateId>,
    ) -> Result<Self, NfaError> {
        if names.is_empty() {
            return Err(NfaError::NoStates);
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(NfaError::DuplicateName(n.clone()));
            }
        }
        let n = names.len();
        if start >= n {
            return Err(NfaError::UnknownState(start));
        }
        if let Some(&f) = finals.iter().find(|&&f| f >= n) {
            return Err(NfaError::UnknownState(f));
        }
        for &(p, label, q) in &transitions {
            if p >= n {
                return Err(NfaError::UnknownState(p));
            }
            if q >= n {
                return Err(NfaError::UnknownState(q));
            }
            if let Some(a) = label {
                if !alphabet.contains(&a) {
                    return Err(NfaError::UnknownSymbol(a));
                }
            }
        }
        Ok(Nfa { names, alphabet, transitions, start, finals })
    }

    /// The one-state automaton accepting nothing.
    pub fn empty_language(alphabet: BTreeSet<Symbol>) -> Self {
        Nfa { names: vec!["q0".into()], alphabet, transitions: BTreeSet::new(), start: 0, finals: BTreeSet::new() }
    }

    /// Accepts exactly the given words (a trie).
    pub fn from_words(l: &FiniteLanguage) -> Self {
        let mut names = vec!["t".to_string()];
        let mut transitions = BTreeSet::new();
        let mut finals = BTreeSet::new();
        let mut children: BTreeMap<(StateId, Symbol), StateId> = BTreeMap::new();
        for w in l.iter() {
            let mut at = 0;
            for &s in w.symbols() {
                at = *children.entry((at, s)).or_insert_with(|| {
                    names.push(format!("t{}", names.len()));
                    transitions.insert((at, Some(s), names.len() - 1));
                    names.len() - 1
                });
            }
            finals.insert(at);
        }
        Nfa { names, alphabet: l.alphabet().clone(), transitions, start: 0, finals }
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    pub fn transitions(&self) -> &BTreeSet<(StateId, Label, StateId)> {
        &self.transitions
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn finals(&self) -> &BTreeSet<StateId> {
        &self.finals
    }

    pub fn with_alphabet(mut self, extra: impl IntoIterator<Item = Symbol>) -> Self {
        self.alphabet.extend(extra);
        self
    }

    fn successors(&self) -> Vec<Vec<(Label, StateId)>> {
        let mut out = vec![Vec::new(); self.num_states()];
        for &(p, l, q) in &self.transitions {
            out[p].push((l, q));
        }
        out
    }

    pub fn epsilon_closure(&self, states: &BTreeSet<StateId>) -> BTreeSet<StateId> {
        closure_with(&self.successors(), states)
    }

    /// Accepts `w` by subset simulation.
    pub fn accepts(&self, w: &Word) -> bool {
        let succ = self.successors();
        let mut current = closure_with(&succ, &BTreeSet::from([self.start]));
        for &a in w.symbols() {
            current = step_with(&succ, &current, a);
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|q| self.finals.contains(q))
    }

    /// An accepting run on `w` as `(from, label, to)` steps, ε-moves
    /// included. Deterministic: the breadth-first search explores states and
    /// transitions in index order.
    pub fn accepting_path(&self, w: &Word) -> Option<Vec<(StateId, Label, StateId)>> {
        let succ = self.successors();
        let syms = w.symbols();
        // states are (position, state); predecessor links rebuild the path
        let mut pred: BTreeMap<(usize, StateId), ((usize, StateId), Label)> = BTreeMap::new();
        let origin = (0, self.start);
        let mut queue = VecDeque::from([origin]);
        let mut seen = BTreeSet::from([origin]);
        while let Some((i, q)) = queue.pop_front() {
            if i == syms.len() && self.finals.contains(&q) {
                let mut path = Vec::new();
                let mut at = (i, q);
                while at != origin {
                    let (prev, label) = pred[&at];
                    path.push((prev.1, label, at.1));
                    at = prev;
                }
                path.reverse();
                return Some(path);
            }
            for &(label, r) in &succ[q] {
                let next = match label {
                    None => (i, r),
                    Some(a) if syms.get(i) == Some(&a) => (i + 1, r),
                    Some(_) => continue,
                };
                if seen.insert(next) {
                    pred.insert(next, ((i, q), label));
                    queue.push_back(next);
                }
            }
        }
        None
    }

    /// Renders a run from [`Nfa::accepting_path`] with state names.
    pub fn describe_path(&self, path: &[(StateId, Label, StateId)]) -> String {
        let mut s = self.names[self.start].clone();
        for &(_, label, q) in path {
            let l = label.map(|a| a.to_string()).unwrap_or_else(|| "ε".into());
            s.push_str(&format!(" -{l}-> {}", self.names[q]));
        }
        s
    }

    /// States reachable from the start.
    pub fn accessible(&self) -> BTreeSet<StateId> {
        let succ = self.successors();
        let mut seen = BTreeSet::from([self.start]);
        let mut stack = vec![self.start];
        while let Some(q) = stack.pop() {
            for &(_, r) in &succ[q] {
                if seen.insert(r) {
                    stack.push(r);
                }
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub fn coaccessible(&self) -> BTreeSet<StateId> {
        let mut pred = vec![Vec::new(); self.num_states()];
        for &(p, _, q) in &self.transitions {
            pred[q].push(p);
        }
        let mut seen: BTreeSet<StateId> = self.finals.clone();
        let mut stack: Vec<StateId> = self.finals.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &p in &pred[q] {
                if seen.insert(p) {
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Restricts to accessible and co-accessible states. The start state is
    /// always kept.
    pub fn trim(&self) -> Nfa {
        let acc = self.accessible();
        let coacc = self.coaccessible();
        let keep: BTreeSet<StateId> = acc.intersection(&coacc).copied().chain(std::iter::once(self.start)).collect();
        self.restrict(&keep)
    }

    fn restrict(&self, keep: &BTreeSet<StateId>) -> Nfa {
        let map: BTreeMap<StateId, StateId> = keep.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        Nfa {
            names: keep.iter().map(|&q| self.names[q].clone()).collect(),
            alphabet: self.alphabet.clone(),
            transitions: self
                .transitions
                .iter()
                .filter_map(|&(p, l, q)| Some((*map.get(&p)?, l, *map.get(&q)?)))
                .collect(),
            start: map[&self.start],
            finals: self.finals.iter().filter_map(|q| map.get(q).copied()).collect(),
        }
    }

    /// Symbols on transitions of the trimmed automaton, i.e. the symbols
    /// that occur in some accepted word.
    pub fn occurring_symbols(&self) -> BTreeSet<Symbol> {
        self.trim().transitions.iter().filter_map(|&(_, l, _)| l).collect()
    }

    /// Renames states through `f`, which must keep names unique.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Nfa {
        Nfa { names: self.names.iter().map(|n| f(n)).collect(), ..self.clone() }
    }
}

impl fmt::Display for Nfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::write_nfa(self, &[]))
    }
}

fn closure_with(succ: &[Vec<(Label, StateId)>], states: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    let mut seen = states.clone();
    let mut stack: Vec<StateId> = states.iter().copied().collect();
    while let Some(q) = stack.pop() {
        for &(l, r) in &succ[q] {
            if l.is_none() && seen.insert(r) {
                stack.push(r);
            }
        }
    }
    seen
}

fn step_with(succ: &[Vec<(Label, StateId)>], states: &BTreeSet<StateId>, a: Symbol) -> BTreeSet<StateId> {
    let moved: BTreeSet<StateId> =
        states.iter().flat_map(|&q| succ[q].iter().filter(move |(l, _)| *l == Some(a)).map(|&(_, r)| r)).collect();
    closure_with(succ, &moved)
}

/// `{ w ∈ L(m) : |w| ≤ max_len }`, breadth-first over ε-closed state sets.
pub fn enumerate_nfa(m: &Nfa, max_len: usize) -> FiniteLanguage {
    let succ = m.successors();
    let useful = m.coaccessible();
    let mut out = FiniteLanguage::new();
    let mut level: Vec<(Word, BTreeSet<StateId>)> =
        vec![(Word::empty(), closure_with(&succ, &BTreeSet::from([m.start])))];
    for len in 0..=max_len {
        let mut next = Vec::new();
        for (w, set) in level {
            if set.iter().any(|q| m.finals.contains(q)) {
                out.insert(w.clone());
            }
            if len == max_len {
                continue;
            }
            for &a in &m.alphabet {
                let moved: BTreeSet<StateId> =
                    step_with(&succ, &set, a).into_iter().filter(|q| useful.contains(q)).collect();
                if !moved.is_empty() {
                    let mut v = w.clone();
                    v.push(a);
                    next.push((v, moved));
                }
            }
        }
        level = next;
    }
    out
}

/// Renames `m2`'s states whose names clash with `m1`'s by appending `_2`
/// (then digits).
pub(crate) fn disjoint_names(m1: &Nfa, m2: &Nfa) -> Nfa {
    let mut taken: BTreeSet<String> = m1.names.iter().chain(&m2.names).cloned().collect();
    let clashing: BTreeSet<&String> = m1.names.iter().filter(|n| m2.names.contains(n)).collect();
    if clashing.is_empty() {
        return m2.clone();
    }
    let mut map = BTreeMap::new();
    for n in clashing {
        let fresh = fresh_name(&taken, &format!("{n}_2"));
        taken.insert(fresh.clone());
        map.insert(n.clone(), fresh);
    }
    m2.rename(|n| map.get(n).cloned().unwrap_or_else(|| n.to_string()))
}

pub(crate) fn fresh_name(taken: &BTreeSet<String>, base: &str) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}{i}")).find(|c| !taken.contains(c)).unwrap()
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    fn sym(c: char) -> Symbol {
        Symbol::new(c).unwrap()
    }

    /// Two states, `x* y`.
    pub fn star_then(x: char, y: char, prefix: &str) -> Nfa {
        Nfa::new(
            vec![format!("{prefix}0"), format!("{prefix}1")],
            BTreeSet::from([sym(x), sym(y)]),
            BTreeSet::from([(0, Some(sym(x)), 0), (0, Some(sym(y)), 1)]),
            0,
            BTreeSet::from([1]),
        )
        .unwrap()
    }

    pub fn a_star_b() -> Nfa {
        star_then('a', 'b', "p")
    }

    pub fn b_star_a() -> Nfa {
        star_then('b', 'a', "r")
    }
}
