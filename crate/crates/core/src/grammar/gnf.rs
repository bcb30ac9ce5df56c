//! Conversion of ε-free context-free grammars to Greibach normal form.
//!
//! Pipeline: useless-symbol removal, unit-rule elimination, ordered
//! substitution with immediate left-recursion removal, back-substitution of
//! leading nonterminals, and finally fresh nonterminals for terminals left in
//! non-head positions.

use std::collections::{BTreeMap, BTreeSet};

use super::normalize::unit_closure;
use super::{Cfg, GrammarClass, GrammarError, GrammarSymbol, HeadNormalGrammar, NameSupply, Nonterminal, Production};
use crate::word::Symbol;

type Rhs = Vec<GrammarSymbol>;
type Rules = BTreeMap<Nonterminal, BTreeSet<Rhs>>;

/// Rejects ε-productions up front; an unproductive start symbol is reported
/// as [`GrammarError::EmptyLanguage`].
pub fn cfg_to_gnf(g: &Cfg) -> Result<HeadNormalGrammar, GrammarError> {
    if let Some(p) = g.productions().iter().find(|p| p.rhs.is_empty()) {
        return Err(GrammarError::EpsilonProduction(p.to_string()));
    }
    let g = g.trim().ok_or(GrammarError::EmptyLanguage)?;
    let mut names = NameSupply::new(g.nonterminals());

    let mut rules = eliminate_units(&g);
    let mut order: Vec<Nonterminal> = vec![g.start().clone()];
    order.extend(g.nonterminals().iter().filter(|n| *n != g.start()).cloned());
    let rank: BTreeMap<Nonterminal, usize> = order.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
    let mut recursion_helpers: Vec<Nonterminal> = Vec::new();

    for (i, ai) in order.iter().enumerate() {
        // make every Ai production start with a terminal or some Ak, k ≥ i
        loop {
            let current = rules.get(ai).cloned().unwrap_or_default();
            let mut next = BTreeSet::new();
            let mut substituted = false;
            for rhs in current {
                match rhs.first() {
                    Some(GrammarSymbol::N(aj)) if rank.get(aj).is_some_and(|&j| j < i) => {
                        substituted = true;
                        for sub in rules.get(aj).into_iter().flatten() {
                            next.insert(splice_front(sub, &rhs[1..]));
                        }
                    }
                    _ => {
                        next.insert(rhs);
                    }
                }
            }
            rules.insert(ai.clone(), next);
            if !substituted {
                break;
            }
        }

        let (recursive, base): (BTreeSet<Rhs>, BTreeSet<Rhs>) =
            rules[ai].iter().cloned().partition(|rhs| matches!(rhs.first(), Some(GrammarSymbol::N(n)) if n == ai));
        if recursive.is_empty() {
            continue;
        }
        let z = names.fresh(&format!("{ai}_R"));
        recursion_helpers.push(z.clone());
        let zsym = GrammarSymbol::N(z.clone());
        let mut ai_rules = BTreeSet::new();
        for b in &base {
            ai_rules.insert(b.clone());
            ai_rules.insert(with_suffix(b, &zsym));
        }
        let mut z_rules = BTreeSet::new();
        for r in &recursive {
            let alpha: Rhs = r[1..].to_vec();
            if alpha.is_empty() {
                // A → A contributes nothing
                continue;
            }
            z_rules.insert(with_suffix(&alpha, &zsym));
            z_rules.insert(alpha);
        }
        rules.insert(ai.clone(), ai_rules);
        rules.insert(z, z_rules);
    }

    // heads are now terminals or higher-ranked nonterminals; resolve from the
    // top rank down, then the recursion helpers
    for ai in order.iter().rev().chain(recursion_helpers.iter()) {
        resolve_heads(&mut rules, ai)?;
    }

    let mut terminal_names: BTreeMap<Symbol, Nonterminal> = BTreeMap::new();
    let mut productions = BTreeSet::new();
    for (lhs, rhss) in &rules {
        for rhs in rhss {
            let Some((GrammarSymbol::T(head), rest)) = rhs.split_first() else {
                unreachable!("all heads resolved to terminals");
            };
            let tail = rest
                .iter()
                .map(|s| match s {
                    GrammarSymbol::N(n) => n.clone(),
                    GrammarSymbol::T(t) => {
                        terminal_names.entry(*t).or_insert_with(|| names.fresh(&terminal_name(*t))).clone()
                    }
                })
                .collect();
            productions.insert(Production::new(lhs.clone(), *head, tail));
        }
    }
    for (t, n) in &terminal_names {
        productions.insert(Production::new(n.clone(), *t, Vec::new()));
    }

    let mut nonterminals: BTreeSet<Nonterminal> = rules.keys().cloned().collect();
    nonterminals.extend(terminal_names.values().cloned());
    let out =
        HeadNormalGrammar::new(nonterminals, g.terminals().clone(), g.start().clone(), productions, GrammarClass::Gnf)?;
    Ok(out.trim())
}

fn eliminate_units(g: &Cfg) -> Rules {
    let mut units: BTreeMap<Nonterminal, BTreeSet<Nonterminal>> = BTreeMap::new();
    let mut proper: Rules = g.nonterminals().iter().map(|n| (n.clone(), BTreeSet::new())).collect();
    for p in g.productions() {
        match p.rhs.as_slice() {
            [GrammarSymbol::N(n)] => {
                units.entry(p.lhs.clone()).or_default().insert(n.clone());
            }
            rhs => {
                proper.get_mut(&p.lhs).unwrap().insert(rhs.to_vec());
            }
        }
    }
    let mut out = Rules::new();
    for x in g.nonterminals() {
        let mut set = BTreeSet::new();
        for y in unit_closure(x, &units) {
            set.extend(proper[&y].iter().cloned());
        }
        out.insert(x.clone(), set);
    }
    out
}

/// Substitutes leading nonterminals of `lhs`'s rules until every rule starts
/// with a terminal. Callers order the work so the substituted rules are
/// already terminal-headed; the iteration cap only guards that assumption.
fn resolve_heads(rules: &mut Rules, lhs: &Nonterminal) -> Result<(), GrammarError> {
    for _ in 0..64 {
        let current = rules.get(lhs).cloned().unwrap_or_default();
        let mut next = BTreeSet::new();
        let mut pending = false;
        for rhs in current {
            match rhs.first() {
                Some(GrammarSymbol::N(m)) => {
                    pending = true;
                    for sub in rules.get(m).into_iter().flatten() {
                        next.insert(splice_front(sub, &rhs[1..]));
                    }
                }
                _ => {
                    next.insert(rhs);
                }
            }
        }
        rules.insert(lhs.clone(), next);
        if !pending {
            return Ok(());
        }
    }
    Err(GrammarError::NotHeadNormal(format!("could not resolve leading nonterminals of {lhs}")))
}

fn splice_front(front: &[GrammarSymbol], rest: &[GrammarSymbol]) -> Rhs {
    let mut v = front.to_vec();
    v.extend_from_slice(rest);
    v
}

fn with_suffix(rhs: &[GrammarSymbol], s: &GrammarSymbol) -> Rhs {
    let mut v = rhs.to_vec();
    v.push(s.clone());
    v
}

fn terminal_name(t: Symbol) -> String {
    let c = t.as_char();
    if c.is_ascii_alphanumeric() {
        format!("T_{c}")
    } else {
        format!("T_u{:x}", c as u32)
    }
}
