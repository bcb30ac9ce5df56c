//! Self-assembly of two automata.

use std::collections::BTreeSet;

use super::{disjoint_names, fresh_name, Nfa, StateId};
use crate::grammar::AssemblyMode;
use crate::gsa::ParentPolicy;
use crate::word::Symbol;

/// Assembles two automata. `Paper` is the literal construction: a fresh
/// start with ε-moves to both starts, all original transitions, and for
/// every pair of equally labelled transitions `p -a-> q` in `m1` and
/// `p' -a-> q'` in `m2` the cross transitions `p -a-> q'` and `p' -a-> q`;
/// finals are `F1 ∪ F2`. `SingleCrossover` is [`single_crossover_nfa`] with
/// the default parent policy.
pub fn assemble_nfas(m1: &Nfa, m2: &Nfa, mode: AssemblyMode) -> Nfa {
    match mode {
        AssemblyMode::Paper => paper(m1, m2),
        AssemblyMode::SingleCrossover => single_crossover_nfa(m1, m2, ParentPolicy::default()),
    }
}

fn paper(m1: &Nfa, m2: &Nfa) -> Nfa {
    let m2 = disjoint_names(m1, m2);
    let base = m1.num_states();
    let mut names: Vec<String> = m1.names.iter().chain(&m2.names).cloned().collect();
    let start_name = fresh_name(&names.iter().cloned().collect(), "q0");
    names.push(start_name);
    let start = names.len() - 1;

    let mut transitions: BTreeSet<(StateId, Option<Symbol>, StateId)> = m1.transitions.clone();
    transitions.extend(m2.transitions.iter().map(|&(p, l, q)| (base + p, l, base + q)));
    transitions.insert((start, None, m1.start));
    transitions.insert((start, None, base + m2.start));
    for &(p, l, q) in &m1.transitions {
        let Some(a) = l else { continue };
        for &(p2, l2, q2) in &m2.transitions {
            if l2 == Some(a) {
                transitions.insert((p, l, base + q2));
                transitions.insert((base + p2, l, q));
            }
        }
    }
    Nfa {
        names,
        alphabet: m1.alphabet.union(&m2.alphabet).copied().collect(),
        transitions,
        start,
        finals: m1.finals.iter().copied().chain(m2.finals.iter().map(|&f| base + f)).collect(),
    }
}

/// Assembly that allows exactly one switch between the machines, so its
/// language is exactly the self-assembly of the two languages.
///
/// Both inputs are trimmed first. Each machine then appears three times: a
/// pre-switch copy tagged with whether a shared symbol has been read yet, and
/// a post-switch copy. A switch reads `a` along `p -a-> q` in one machine
/// while jumping to `q'` of some `p' -a-> q'` in the other, from that
/// machine's pre copy into the other's post copy. Post-copy finals accept
/// crossovers; pre-copy finals accept parents (only tagged ones under
/// [`ParentPolicy::SharedSymbol`]).
pub fn single_crossover_nfa(m1: &Nfa, m2: &Nfa, policy: ParentPolicy) -> Nfa {
    let (t1, t2) = (m1.trim(), m2.trim());
    let shared: BTreeSet<Symbol> = t1.occurring_symbols().intersection(&t2.occurring_symbols()).copied().collect();
    let machines = [&t1, &t2];
    let sizes = [t1.num_states(), t2.num_states()];
    // layout: [post1 | post2 | pre1 untagged | pre1 tagged | pre2 untagged | pre2 tagged | start]
    let post = |m: usize, q: StateId| if m == 0 { q } else { sizes[0] + q };
    let pre_base = sizes[0] + sizes[1];
    let pre = |m: usize, q: StateId, tagged: bool| {
        let offset = if m == 0 { 0 } else { 2 * sizes[0] };
        pre_base + offset + usize::from(tagged) * sizes[m] + q
    };
    let start = pre_base + 2 * (sizes[0] + sizes[1]);

    let mut names = vec![String::new(); start + 1];
    for (m, t) in machines.iter().enumerate() {
        for (q, n) in t.names.iter().enumerate() {
            let side = m + 1;
            names[post(m, q)] = format!("{n}.post{side}");
            names[pre(m, q, false)] = format!("{n}.pre{side}");
            names[pre(m, q, true)] = format!("{n}.pre{side}*");
        }
    }
    names[start] = "q0".into();

    let mut transitions = BTreeSet::new();
    transitions.insert((start, None, pre(0, t1.start, false)));
    transitions.insert((start, None, pre(1, t2.start, false)));
    for (m, t) in machines.iter().enumerate() {
        let other = machines[1 - m];
        for &(p, l, q) in &t.transitions {
            transitions.insert((post(m, p), l, post(m, q)));
            for tagged in [false, true] {
                let now = tagged || l.is_some_and(|a| shared.contains(&a));
                transitions.insert((pre(m, p, tagged), l, pre(m, q, now)));
            }
            let Some(a) = l else { continue };
            for &(_, l2, q2) in &other.transitions {
                if l2 == Some(a) {
                    for tagged in [false, true] {
                        transitions.insert((pre(m, p, tagged), l, post(1 - m, q2)));
                    }
                }
            }
        }
    }

    let mut finals = BTreeSet::new();
    for (m, t) in machines.iter().enumerate() {
        for &f in &t.finals {
            finals.insert(post(m, f));
            finals.insert(pre(m, f, true));
            if policy == ParentPolicy::Always {
                finals.insert(pre(m, f, false));
            }
        }
    }
    let out = Nfa { names, alphabet: t1.alphabet.union(&t2.alphabet).copied().collect(), transitions, start, finals };
    out.trim()
}
