//! Generalized self-assembly of words and finite languages.
//!
//! Two words `u1·x·v1` and `u2·x·v2` assemble over a shared nonempty factor
//! `x` into `u1·x·v2` and `u2·x·v1`; the parents themselves are kept in the
//! result whenever such a factor exists.
//!
//! Any crossover over a long factor `x` is also a crossover over the first
//! symbol of `x` (the remainder of `x` rides along in `v1`/`v2`), so a
//! single shared letter is all the bookkeeping the oracles need. The
//! all-factors definition lives in [`gsa_pair`]; the one-letter form lives in
//! [`gsa_pair_single_letter`] and [`join_on_letter`], and tests keep the two
//! in agreement.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::par;
use crate::word::{FiniteLanguage, Symbol, Word};

/// When parent words belong to an assembly result.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParentPolicy {
    /// A parent is kept only if it shares a nonempty factor (equivalently a
    /// symbol) with some word of the other operand.
    #[default]
    SharedSymbol,
    /// Every parent is kept.
    Always,
}

impl std::str::FromStr for ParentPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shared" | "shared-symbol" | "shared_symbol" => Ok(ParentPolicy::SharedSymbol),
            "always" => Ok(ParentPolicy::Always),
            other => Err(format!("unknown parent policy {other:?} (expected shared|always)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("self-assembly needs a nonempty overlap factor")]
pub struct EmptyOverlap;

/// Assembly of `w1` and `w2` over every occurrence pair of the factor `x`.
pub fn gsa_x(w1: &Word, w2: &Word, x: &Word) -> Result<FiniteLanguage, EmptyOverlap> {
    if x.is_empty() {
        return Err(EmptyOverlap);
    }
    let mut out = FiniteLanguage::new();
    let at1 = w1.occurrences(x.symbols());
    let at2 = w2.occurrences(x.symbols());
    for &i in &at1 {
        for &j in &at2 {
            let (e1, e2) = (i + x.len(), j + x.len());
            out.insert(w1.clone());
            out.insert(w2.clone());
            out.insert(w1.join_at(e1, w2, e2));
            out.insert(w2.join_at(e2, w1, e1));
        }
    }
    Ok(out)
}

/// Union of [`gsa_x`] over every nonempty common factor, straight from the
/// definition: each matching pair of factor occurrences is visited.
pub fn gsa_pair(w1: &Word, w2: &Word) -> FiniteLanguage {
    let (a, b) = (w1.symbols(), w2.symbols());
    let mut out = FiniteLanguage::new();
    for i in 0..a.len() {
        for j in 0..b.len() {
            let mut len = 0;
            while i + len < a.len() && j + len < b.len() && a[i + len] == b[j + len] {
                len += 1;
                let (e1, e2) = (i + len, j + len);
                out.insert(w1.clone());
                out.insert(w2.clone());
                out.insert(w1.join_at(e1, w2, e2));
                out.insert(w2.join_at(e2, w1, e1));
            }
        }
    }
    out
}

/// The same set as [`gsa_pair`], computed from single shared letters only.
pub fn gsa_pair_single_letter(w1: &Word, w2: &Word) -> FiniteLanguage {
    let shared = !w1.alphabet().is_disjoint(&w2.alphabet());
    let mut out = FiniteLanguage::new();
    if !shared {
        return out;
    }
    out.insert(w1.clone());
    out.insert(w2.clone());
    for (i, &a) in w1.symbols().iter().enumerate() {
        for (j, &b) in w2.symbols().iter().enumerate() {
            if a == b {
                out.insert(w1.join_at(i, w2, j));
                out.insert(w2.join_at(j, w1, i));
            }
        }
    }
    out
}

/// Assembly of two finite languages: the union of [`gsa_pair`] over all
/// word pairs.
pub fn gsa_finite(l1: &FiniteLanguage, l2: &FiniteLanguage) -> FiniteLanguage {
    gsa_finite_with(l1, l2, ParentPolicy::SharedSymbol)
}

pub fn gsa_finite_with(l1: &FiniteLanguage, l2: &FiniteLanguage, policy: ParentPolicy) -> FiniteLanguage {
    let lefts: Vec<&Word> = l1.iter().collect();
    let produced = par::flat_map(&lefts, |w1| l2.iter().flat_map(|w2| gsa_pair(w1, w2)).collect::<Vec<_>>());
    let mut out: FiniteLanguage = produced.into_iter().collect();
    if policy == ParentPolicy::Always {
        out.extend(l1.iter().cloned());
        out.extend(l2.iter().cloned());
    }
    out
}

/// `{ p·v : p ∈ prefixes ends in a, a·v ∈ suffixes }` over every letter `a`,
/// keeping only results of length at most `max_len` when given.
pub fn join_on_letter(prefixes: &BTreeSet<Word>, suffixes: &BTreeSet<Word>, max_len: Option<usize>) -> BTreeSet<Word> {
    let mut by_head: BTreeMap<Symbol, Vec<&Word>> = BTreeMap::new();
    for s in suffixes {
        if let Some(&a) = s.symbols().first() {
            by_head.entry(a).or_default().push(s);
        }
    }
    // suffixes are iterated in canonical (length-first) order, so each bucket
    // is sorted by length and can be cut off early
    let heads: Vec<&Word> = prefixes.iter().filter(|p| !p.is_empty()).collect();
    let joined = par::flat_map(&heads, |p| {
        let a = *p.symbols().last().unwrap();
        let mut acc = Vec::new();
        for s in by_head.get(&a).map(Vec::as_slice).unwrap_or(&[]) {
            let len = p.len() + s.len() - 1;
            if max_len.is_some_and(|n| len > n) {
                break;
            }
            acc.push(p.join_at(p.len(), s, 1));
        }
        acc
    });
    joined.into_iter().collect()
}

/// Parents of `l1` that qualify under `policy` given the other operand's
/// occurring symbols.
pub fn qualifying_parents<'a>(
    l1: impl IntoIterator<Item = &'a Word>,
    other_symbols: &BTreeSet<Symbol>,
    policy: ParentPolicy,
) -> impl Iterator<Item = &'a Word> {
    let other_symbols = other_symbols.clone();
    l1.into_iter().filter(move |w| match policy {
        ParentPolicy::Always => true,
        ParentPolicy::SharedSymbol => w.symbols().iter().any(|s| other_symbols.contains(s)),
    })
}
