//! Bounded enumeration, membership and derivation search.
//!
//! Every head-normal step emits exactly one terminal (the start-only `S → ε`
//! emits none and ends the derivation), so searching leftmost derivations
//! by emitted prefix is exact once sentential forms that cannot fit the
//! length budget are pruned. The pruning bound is the shortest yield of each
//! nonterminal, computed by fixed-point iteration.

use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{cfg_to_gnf, Cfg, CfgProduction, GrammarError, GrammarSymbol, HeadNormalGrammar, Nonterminal, Production};
use crate::word::{FiniteLanguage, Symbol, Word};

/// Shortest terminal yield per nonterminal; `None` for unproductive ones.
pub fn min_yields(g: &HeadNormalGrammar) -> HashMap<Nonterminal, Option<usize>> {
    let idx = Indexed::new(g);
    idx.names.iter().cloned().zip(idx.min_yield.iter().map(|&m| (m != usize::MAX).then_some(m))).collect()
}

/// `{ w ∈ L(g) : |w| ≤ max_len }`.
pub fn enumerate_grammar(g: &HeadNormalGrammar, max_len: usize) -> FiniteLanguage {
    let idx = Indexed::new(g);
    let mut out = FiniteLanguage::new();
    if idx.min_yield[idx.start] > max_len {
        return out;
    }
    // stack top is the last element
    let mut seen: HashSet<(Vec<Symbol>, Vec<usize>)> = HashSet::new();
    let mut frontier: Vec<(Vec<Symbol>, Vec<usize>)> = vec![(Vec::new(), vec![idx.start])];
    while let Some((prefix, mut stack)) = frontier.pop() {
        let Some(top) = stack.pop() else {
            out.insert(Word::from_symbols(prefix));
            continue;
        };
        let rest_min: usize = stack.iter().map(|&n| idx.min_yield[n]).sum();
        for (head, tail) in &idx.rules[top] {
            let tail_min: usize = tail.iter().map(|&n| idx.min_yield[n]).sum();
            let emitted = prefix.len() + usize::from(head.is_some());
            if emitted + rest_min + tail_min > max_len {
                continue;
            }
            let mut p = prefix.clone();
            p.extend(head);
            let mut s = stack.clone();
            s.extend(tail.iter().rev());
            let key = (p, s);
            if seen.insert(key.clone()) {
                frontier.push(key);
            }
        }
    }
    out
}

/// Nonempty prefixes of length ≤ `max_len` of words of `L(g)`. Exact: after
/// trimming, every sentential form of a leftmost derivation completes, so
/// each emitted prefix is a real prefix.
pub fn enumerate_prefixes(g: &HeadNormalGrammar, max_len: usize) -> FiniteLanguage {
    let g = g.trim();
    let idx = Indexed::new(&g);
    let mut out = FiniteLanguage::new();
    if idx.min_yield[idx.start] == usize::MAX {
        return out;
    }
    let mut seen: HashSet<(Vec<Symbol>, Vec<usize>)> = HashSet::new();
    let mut frontier: Vec<(Vec<Symbol>, Vec<usize>)> = vec![(Vec::new(), vec![idx.start])];
    while let Some((prefix, mut stack)) = frontier.pop() {
        if !prefix.is_empty() {
            out.insert(Word::from_symbols(prefix.clone()));
        }
        if prefix.len() == max_len {
            continue;
        }
        let Some(top) = stack.pop() else { continue };
        for (head, tail) in &idx.rules[top] {
            let mut p = prefix.clone();
            p.extend(head);
            let mut s = stack.clone();
            s.extend(tail.iter().rev());
            let key = (p, s);
            if seen.insert(key.clone()) {
                frontier.push(key);
            }
        }
    }
    out
}

/// Nonempty suffixes of length ≤ `max_len` of words of `L(g)`, as prefixes of
/// the reversed grammar brought back to head-normal form.
pub fn enumerate_suffixes(g: &HeadNormalGrammar, max_len: usize) -> Result<FiniteLanguage, GrammarError> {
    let g = g.trim().isolate_epsilon();
    let reversed = g.productions().iter().filter_map(|p| {
        let head = p.head?;
        let mut rhs: Vec<GrammarSymbol> = p.tail.iter().rev().cloned().map(GrammarSymbol::N).collect();
        rhs.push(GrammarSymbol::T(head));
        Some(CfgProduction { lhs: p.lhs.clone(), rhs })
    });
    let cfg = Cfg::from_productions(g.start().clone(), reversed)?;
    let rev = match cfg_to_gnf(&cfg) {
        Ok(rev) => rev,
        Err(GrammarError::EmptyLanguage) => return Ok(FiniteLanguage::new()),
        Err(e) => return Err(e),
    };
    Ok(enumerate_prefixes(&rev, max_len)
        .iter()
        .map(|w| Word::from_symbols(w.symbols().iter().rev().copied().collect()))
        .collect())
}

/// Exact membership by length-bounded derivation search.
pub fn gnf_membership(g: &HeadNormalGrammar, w: &Word) -> bool {
    derivation(g, w).is_some()
}

/// A leftmost derivation, as the sequence of productions applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub start: Nonterminal,
    pub steps: Vec<Production>,
}

impl fmt::Display for Derivation {
    /// `S ⇒ a A ⇒ a b` style, one sentential form per step.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut prefix = String::new();
        let mut stack: Vec<Nonterminal> = vec![self.start.clone()];
        write!(f, "{}", self.start)?;
        for p in &self.steps {
            stack.pop();
            if let Some(h) = p.head {
                prefix.push(h.as_char());
            }
            stack.extend(p.tail.iter().rev().cloned());
            let form: Vec<String> = stack.iter().rev().map(|n| n.to_string()).collect();
            let shown = match (prefix.is_empty(), form.is_empty()) {
                (true, true) => "ε".to_string(),
                (false, true) => prefix.clone(),
                (true, false) => form.join(" "),
                (false, false) => format!("{prefix} {}", form.join(" ")),
            };
            write!(f, " ⇒ {shown}")?;
        }
        Ok(())
    }
}

/// Some leftmost derivation of `w`, or `None` if `w ∉ L(g)`. The search
/// tries productions in canonical order, so the answer is deterministic.
pub fn derivation(g: &HeadNormalGrammar, w: &Word) -> Option<Derivation> {
    let idx = Indexed::new(g);
    let mut failed: HashSet<(usize, Vec<usize>)> = HashSet::new();
    let mut steps = Vec::new();
    if search(&idx, w.symbols(), 0, vec![idx.start], &mut failed, &mut steps) {
        Some(Derivation {
            start: g.start().clone(),
            steps: steps.into_iter().map(|(n, r)| idx.production(n, r)).collect(),
        })
    } else {
        None
    }
}

fn search(
    idx: &Indexed,
    w: &[Symbol],
    pos: usize,
    mut stack: Vec<usize>,
    failed: &mut HashSet<(usize, Vec<usize>)>,
    steps: &mut Vec<(usize, usize)>,
) -> bool {
    let Some(top) = stack.pop() else {
        return pos == w.len();
    };
    let key = (pos, {
        let mut k = stack.clone();
        k.push(top);
        k
    });
    if failed.contains(&key) {
        return false;
    }
    let rest_min: usize = stack.iter().map(|&n| idx.min_yield[n]).sum();
    for (r, (head, tail)) in idx.rules[top].iter().enumerate() {
        let next = match head {
            Some(h) if w.get(pos) == Some(h) => pos + 1,
            Some(_) => continue,
            None => pos,
        };
        let tail_min: usize = tail.iter().map(|&n| idx.min_yield[n]).sum();
        if next + rest_min + tail_min > w.len() {
            continue;
        }
        let mut s = stack.clone();
        s.extend(tail.iter().rev());
        steps.push((top, r));
        if search(idx, w, next, s, failed, steps) {
            return true;
        }
        steps.pop();
    }
    failed.insert(key);
    false
}

/// Grammar with nonterminals numbered for the search loops.
struct Indexed {
    names: Vec<Nonterminal>,
    start: usize,
    rules: Vec<Vec<(Option<Symbol>, Vec<usize>)>>,
    min_yield: Vec<usize>,
}

impl Indexed {
    fn new(g: &HeadNormalGrammar) -> Self {
        let names: Vec<Nonterminal> = g.nonterminals().iter().cloned().collect();
        let pos: HashMap<&Nonterminal, usize> = names.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let mut rules = vec![Vec::new(); names.len()];
        for p in g.productions() {
            rules[pos[&p.lhs]].push((p.head, p.tail.iter().map(|n| pos[n]).collect::<Vec<_>>()));
        }
        let mut min_yield = vec![usize::MAX; names.len()];
        loop {
            let mut changed = false;
            for (a, rs) in rules.iter().enumerate() {
                for (head, tail) in rs {
                    let total = tail.iter().try_fold(usize::from(head.is_some()), |acc, &n| {
                        (min_yield[n] != usize::MAX).then(|| acc + min_yield[n])
                    });
                    if let Some(t) = total {
                        if t < min_yield[a] {
                            min_yield[a] = t;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Indexed { start: pos[g.start()], names, rules, min_yield }
    }

    fn production(&self, n: usize, r: usize) -> Production {
        let (head, tail) = &self.rules[n][r];
        Production {
            lhs: self.names[n].clone(),
            head: *head,
            tail: tail.iter().map(|&t| self.names[t].clone()).collect(),
        }
    }
}


#[cfg(test)]
mod affix_tests {
    use super::*;
    use crate::grammar::format::parse_grammar;

    fn affixes_of(l: &FiniteLanguage, n: usize) -> (FiniteLanguage, FiniteLanguage) {
        let (mut pre, mut suf) = (FiniteLanguage::new(), FiniteLanguage::new());
        for w in l.iter() {
            for i in 1..=w.len().min(n) {
                pre.insert(w.slice(0, i));
                suf.insert(w.slice(w.len() - i, w.len()));
            }
        }
        (pre, suf)
    }

    #[test]
    fn affixes_match_a_deep_slice() {
        let sources = [
            "start: D\nD -> a B\nD -> a B D\nB -> b\nB -> a B B\n",
            "start: T\nT -> a T C\nT -> a C\nC -> b\n",
            "start: S\nS -> @eps\nS -> a A\nA -> b\nA -> a A\n",
        ];
        for src in sources {
            let g = parse_grammar(src).unwrap();
            let (pre, suf) = affixes_of(&enumerate_grammar(&g, 14), 5);
            assert_eq!(enumerate_prefixes(&g, 5), pre, "{src}");
            assert_eq!(enumerate_suffixes(&g, 5).unwrap(), suf, "{src}");
        }
    }

    #[test]
    fn deep_prefixes_need_no_parent_bound() {
        // a^7 c is a prefix only of a^7 c b^7, far beyond twice its length
        let g = parse_grammar("start: S\nS -> a S B\nS -> c\nB -> b\n").unwrap();
        assert!(enumerate_prefixes(&g, 8).contains(&"aaaaaaac".into()));
        assert!(enumerate_suffixes(&g, 8).unwrap().contains(&"cbbbbbbb".into()));
    }

    #[test]
    fn empty_language_has_no_affixes() {
        let g = parse_grammar("start: S\nS -> a S\n").unwrap();
        assert!(enumerate_prefixes(&g, 4).is_empty());
        assert!(enumerate_suffixes(&g, 4).unwrap().is_empty());
    }
}
