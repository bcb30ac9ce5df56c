//! Self-assembly of two head-normal grammars.
//!
//! [`AssemblyMode::Paper`] is the literal cross-production construction:
//! for every pair `A → a γ1` and `A' → a γ2` on a shared terminal, add
//! `A → a γ2` and `A' → a γ1`. A derivation may cross back and forth any
//! number of times.
//!
//! [`AssemblyMode::SingleCrossover`] ([`crossover_grammar`]) switches
//! exactly once. A leftmost derivation of `u·a·v` runs down the first
//! grammar's tree while emitting `u` (siblings right of the path are
//! dropped), emits `a` with a production of the first grammar, and then
//! finishes with the tail `γ2` of an `a`-production `A' → a γ2` of the
//! second grammar followed by a right context of `A'` in that grammar.
//! Right contexts (what can follow `A'` on a leftmost-derivation stack) are
//! generated by dedicated nonterminals, so the output stays head-normal and
//! right-linear inputs give a right-linear result.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{GrammarClass, GrammarError, HeadNormalGrammar, NameSupply, Nonterminal, Production};
use crate::gsa::ParentPolicy;
use crate::word::Symbol;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AssemblyMode {
    #[default]
    Paper,
    SingleCrossover,
}

impl std::fmt::Display for AssemblyMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AssemblyMode::Paper => "PAPER",
            AssemblyMode::SingleCrossover => "SINGLE_CROSSOVER",
        })
    }
}

impl std::str::FromStr for AssemblyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(AssemblyMode::Paper),
            "single" | "single_crossover" | "single-crossover" => Ok(AssemblyMode::SingleCrossover),
            other => Err(format!("unknown mode {other:?} (expected paper|single)")),
        }
    }
}

pub(crate) const START_ALIAS_NOTE: &str =
    "start aliasing: the fresh start carries copies of both parent starts' productions instead of unit rules";

/// Assembles `g1` and `g2`. Nonterminals of `g2` that clash with `g1` are
/// renamed first. The result is right-linear when both inputs are.
pub fn assemble_grammars(
    g1: &HeadNormalGrammar,
    g2: &HeadNormalGrammar,
    mode: AssemblyMode,
) -> Result<HeadNormalGrammar, GrammarError> {
    match mode {
        AssemblyMode::Paper => paper(g1, g2),
        AssemblyMode::SingleCrossover => crossover_grammar(g1, g2, ParentPolicy::default()),
    }
}

fn output_class(g1: &HeadNormalGrammar, g2: &HeadNormalGrammar) -> GrammarClass {
    if g1.class() == GrammarClass::RightLinear && g2.class() == GrammarClass::RightLinear {
        GrammarClass::RightLinear
    } else {
        GrammarClass::Gnf
    }
}

fn check_inputs(g1: &HeadNormalGrammar, g2: &HeadNormalGrammar) -> Result<(), GrammarError> {
    for g in [g1, g2] {
        if let Some(p) = g.productions().iter().find(|p| !g.satisfies_production(p)) {
            return Err(GrammarError::Shape { production: p.to_string(), class: g.class() });
        }
    }
    if output_class(g1, g2) == GrammarClass::Gnf {
        if let Some(p) = g1.productions().iter().chain(g2.productions()).find(|p| p.head.is_none()) {
            return Err(GrammarError::EpsilonProduction(p.to_string()));
        }
    }
    Ok(())
}

/// Renames `g2`'s nonterminals that also occur in `g1`, appending `_2`
/// (then digits) until unique.
fn disjoint(g1: &HeadNormalGrammar, g2: &HeadNormalGrammar) -> HeadNormalGrammar {
    let clashes: BTreeSet<&Nonterminal> = g1.nonterminals().intersection(g2.nonterminals()).collect();
    if clashes.is_empty() {
        return g2.clone();
    }
    let mut names = NameSupply::new(g1.nonterminals().iter().chain(g2.nonterminals()));
    let map: BTreeMap<Nonterminal, Nonterminal> =
        clashes.into_iter().map(|n| (n.clone(), names.fresh(&format!("{n}_2")))).collect();
    g2.rename(|n| map.get(n).cloned().unwrap_or_else(|| n.clone()))
}

fn paper(g1: &HeadNormalGrammar, g2: &HeadNormalGrammar) -> Result<HeadNormalGrammar, GrammarError> {
    check_inputs(g1, g2)?;
    let g1 = g1.isolate_epsilon();
    let g2 = disjoint(&g1, &g2.isolate_epsilon());
    let mut names = NameSupply::new(g1.nonterminals().iter().chain(g2.nonterminals()));
    let start = names.fresh("S");

    let mut productions: BTreeSet<Production> =
        g1.productions().iter().chain(g2.productions()).filter(|p| p.head.is_some()).cloned().collect();
    for p1 in g1.productions() {
        for p2 in g2.productions().iter().filter(|p2| p2.head.is_some() && p2.head == p1.head) {
            productions.insert(Production { lhs: p1.lhs.clone(), head: p1.head, tail: p2.tail.clone() });
            productions.insert(Production { lhs: p2.lhs.clone(), head: p2.head, tail: p1.tail.clone() });
        }
    }
    let aliased: Vec<Production> = productions
        .iter()
        .filter(|p| &p.lhs == g1.start() || &p.lhs == g2.start())
        .map(|p| p.with_lhs(start.clone()))
        .collect();
    productions.extend(aliased);
    if g1.has_epsilon_rule() || g2.has_epsilon_rule() {
        productions.insert(Production::epsilon(start.clone()));
    }

    let mut nonterminals: BTreeSet<Nonterminal> = g1.nonterminals().union(g2.nonterminals()).cloned().collect();
    nonterminals.insert(start.clone());
    let terminals: BTreeSet<Symbol> = g1.terminals().union(g2.terminals()).cloned().collect();
    Ok(HeadNormalGrammar::new(nonterminals, terminals, start, productions, output_class(&g1, &g2))?
        .with_note("mode: PAPER")
        .with_note(START_ALIAS_NOTE))
}

/// Exact single-crossover assembly: the result generates precisely the
/// self-assembly language of `L(g1)` and `L(g2)`, with parents admitted
/// according to `policy`.
pub fn crossover_grammar(
    g1: &HeadNormalGrammar,
    g2: &HeadNormalGrammar,
    policy: ParentPolicy,
) -> Result<HeadNormalGrammar, GrammarError> {
    check_inputs(g1, g2)?;
    let g1 = g1.trim().isolate_epsilon();
    let g2 = disjoint(&g1, &g2.trim().isolate_epsilon());
    let class = output_class(&g1, &g2);
    let shared: BTreeSet<Symbol> = g1.occurring_terminals().intersection(&g2.occurring_terminals()).copied().collect();

    let mut b =
        Builder { names: NameSupply::new(g1.nonterminals().iter().chain(g2.nonterminals())), out: BTreeSet::new() };
    let start = b.names.fresh("S");
    let mut roots: Vec<Nonterminal> = Vec::new();

    for (first, second) in [(&g1, &g2), (&g2, &g1)] {
        let contexts = b.contexts(second);
        roots.push(b.prefixes(first, second, &contexts));
    }
    match policy {
        ParentPolicy::Always => {
            roots.push(g1.start().clone());
            roots.push(g2.start().clone());
        }
        ParentPolicy::SharedSymbol => {
            roots.push(b.with_shared(&g1, &shared));
            roots.push(b.with_shared(&g2, &shared));
        }
    }

    // originals serve the fully derived parts
    b.out.extend(g1.productions().iter().chain(g2.productions()).filter(|p| p.head.is_some()).cloned());
    let aliased: Vec<Production> =
        b.out.iter().filter(|p| roots.contains(&p.lhs)).map(|p| p.with_lhs(start.clone())).collect();
    b.out.extend(aliased);
    if policy == ParentPolicy::Always && (g1.has_epsilon_rule() || g2.has_epsilon_rule()) {
        b.out.insert(Production::epsilon(start.clone()));
    }

    let mut nonterminals: BTreeSet<Nonterminal> = g1.nonterminals().union(g2.nonterminals()).cloned().collect();
    for p in &b.out {
        nonterminals.insert(p.lhs.clone());
        nonterminals.extend(p.tail.iter().cloned());
    }
    nonterminals.insert(start.clone());
    let terminals: BTreeSet<Symbol> = g1.terminals().union(g2.terminals()).cloned().collect();
    // empty right contexts (always the case for right-linear inputs) must go
    // before the shape check
    let g = HeadNormalGrammar::new(nonterminals, terminals, start, productive_only(b.out), class)?;
    Ok(g.trim().with_note("mode: SINGLE_CROSSOVER").with_note(START_ALIAS_NOTE).with_note(match policy {
        ParentPolicy::SharedSymbol => "parents: kept when they share a symbol with the other language",
        ParentPolicy::Always => "parents: always kept",
    }))
}

/// Right-context generators for one grammar: `ctx[X]` derives the nonempty
/// words that can follow a leftmost occurrence of `X`, and `nullable[X]`
/// says whether nothing may follow.
struct Contexts {
    ctx: BTreeMap<Nonterminal, Nonterminal>,
    nullable: BTreeSet<Nonterminal>,
}

struct Builder {
    names: NameSupply,
    out: BTreeSet<Production>,
}

impl Builder {
    fn contexts(&mut self, g: &HeadNormalGrammar) -> Contexts {
        // X ← (δ, C): X occurs in a tail of a C-production with δ after it
        let mut links: BTreeMap<&Nonterminal, Vec<(&[Nonterminal], &Nonterminal)>> = BTreeMap::new();
        for p in g.productions() {
            for (t, x) in p.tail.iter().enumerate() {
                links.entry(x).or_default().push((&p.tail[t + 1..], &p.lhs));
            }
        }
        let up_through_empty = |x: &Nonterminal| {
            let mut seen = BTreeSet::from([x.clone()]);
            let mut stack = vec![x.clone()];
            while let Some(y) = stack.pop() {
                for (delta, c) in links.get(&y).into_iter().flatten() {
                    if delta.is_empty() && seen.insert((*c).clone()) {
                        stack.push((*c).clone());
                    }
                }
            }
            seen
        };

        let ctx: BTreeMap<Nonterminal, Nonterminal> =
            g.nonterminals().iter().map(|x| (x.clone(), self.names.fresh(&format!("{x}_ctx")))).collect();
        let mut nullable = BTreeSet::new();
        let mut closures = BTreeMap::new();
        for x in g.nonterminals() {
            let up = up_through_empty(x);
            if up.contains(g.start()) {
                nullable.insert(x.clone());
            }
            closures.insert(x.clone(), up);
        }
        for x in g.nonterminals() {
            for y in &closures[x] {
                for (delta, c) in links.get(y).into_iter().flatten() {
                    let Some((d1, rest)) = delta.split_first() else { continue };
                    for p in g.productions_of(d1).filter(|p| p.head.is_some()) {
                        let mut tail = p.tail.clone();
                        tail.extend(rest.iter().cloned());
                        if nullable.contains(*c) {
                            self.out.insert(Production { lhs: ctx[x].clone(), head: p.head, tail: tail.clone() });
                        }
                        tail.push(ctx[*c].clone());
                        self.out.insert(Production { lhs: ctx[x].clone(), head: p.head, tail });
                    }
                }
            }
        }
        Contexts { ctx, nullable }
    }

    /// Nonterminals `X_pre` for `first` that emit a prefix down one path and
    /// switch to `second` on a shared terminal. Returns the start's copy.
    /// `nullable` is computed over the whole closure before any context
    /// production is emitted, so ordering does not matter.
    fn prefixes(&mut self, first: &HeadNormalGrammar, second: &HeadNormalGrammar, contexts: &Contexts) -> Nonterminal {
        let pre: BTreeMap<Nonterminal, Nonterminal> =
            first.nonterminals().iter().map(|x| (x.clone(), self.names.fresh(&format!("{x}_pre")))).collect();
        for p in first.productions().iter().filter(|p| p.head.is_some()) {
            for i in 0..p.tail.len() {
                let mut tail = p.tail[..i].to_vec();
                tail.push(pre[&p.tail[i]].clone());
                self.out.insert(Production { lhs: pre[&p.lhs].clone(), head: p.head, tail });
            }
            for q in second.productions().iter().filter(|q| q.head == p.head) {
                if contexts.nullable.contains(&q.lhs) {
                    self.out.insert(Production { lhs: pre[&p.lhs].clone(), head: p.head, tail: q.tail.clone() });
                }
                let mut tail = q.tail.clone();
                tail.push(contexts.ctx[&q.lhs].clone());
                self.out.insert(Production { lhs: pre[&p.lhs].clone(), head: p.head, tail });
            }
        }
        pre[first.start()].clone()
    }

    /// Copy of `g` restricted to words containing a symbol of `shared`.
    fn with_shared(&mut self, g: &HeadNormalGrammar, shared: &BTreeSet<Symbol>) -> Nonterminal {
        let has: BTreeMap<Nonterminal, Nonterminal> =
            g.nonterminals().iter().map(|x| (x.clone(), self.names.fresh(&format!("{x}_has")))).collect();
        let free: BTreeMap<Nonterminal, Nonterminal> =
            g.nonterminals().iter().map(|x| (x.clone(), self.names.fresh(&format!("{x}_free")))).collect();
        for p in g.productions() {
            let Some(h) = p.head else { continue };
            if shared.contains(&h) {
                self.out.insert(Production { lhs: has[&p.lhs].clone(), head: p.head, tail: p.tail.clone() });
                continue;
            }
            self.out.insert(Production {
                lhs: free[&p.lhs].clone(),
                head: p.head,
                tail: p.tail.iter().map(|n| free[n].clone()).collect(),
            });
            for i in 0..p.tail.len() {
                let mut tail: Vec<Nonterminal> = p.tail[..i].iter().map(|n| free[n].clone()).collect();
                tail.push(has[&p.tail[i]].clone());
                tail.extend(p.tail[i + 1..].iter().cloned());
                self.out.insert(Production { lhs: has[&p.lhs].clone(), head: p.head, tail });
            }
        }
        has[g.start()].clone()
    }
}

/// Drops productions that mention a nonterminal deriving no terminal word.
fn productive_only(productions: BTreeSet<Production>) -> BTreeSet<Production> {
    let mut productive: BTreeSet<&Nonterminal> = BTreeSet::new();
    loop {
        let before = productive.len();
        for p in &productions {
            if p.tail.iter().all(|n| productive.contains(n)) {
                productive.insert(&p.lhs);
            }
        }
        if productive.len() == before {
            break;
        }
    }
    let keep: BTreeSet<Nonterminal> = productive.into_iter().cloned().collect();
    productions.into_iter().filter(|p| p.tail.iter().all(|n| keep.contains(n))).collect()
}

impl HeadNormalGrammar {
    fn satisfies_production(&self, p: &Production) -> bool {
        match (self.class(), p.head) {
            (GrammarClass::RightLinear, Some(_)) => p.tail.len() <= 1,
            (GrammarClass::RightLinear, None) => p.tail.is_empty() && &p.lhs == self.start(),
            (GrammarClass::Gnf, h) => h.is_some(),
        }
    }

    /// Makes the start-only `S → ε` rule matter only at the top level: every
    /// production ending in `S` gets a copy without it.
    pub(crate) fn isolate_epsilon(&self) -> HeadNormalGrammar {
        if !self.has_epsilon_rule() {
            return self.clone();
        }
        let start = self.start().clone();
        let mut productions = self.productions().clone();
        for p in self.productions() {
            if p.tail.last() == Some(&start) && p.head.is_some() {
                let mut q = p.clone();
                q.tail.pop();
                productions.insert(q);
            }
        }
        HeadNormalGrammar { productions, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{enumerate_grammar, Cfg};
    use super::*;
    use crate::gsa::gsa_finite;
    use crate::word::FiniteLanguage;

    fn rules_of(g: &HeadNormalGrammar, lhs: &str) -> BTreeSet<String> {
        g.productions_of(&nt(lhs)).map(|p| p.to_string()).collect()
    }

    #[test]
    fn worked_example_productions() {
        let g = assemble_grammars(&a_star_b(), &b_star_a(), AssemblyMode::Paper).unwrap();
        assert_eq!(g.start(), &nt("S"));
        assert_eq!(g.class(), GrammarClass::RightLinear);
        let s1: BTreeSet<String> = ["S1 -> a S1", "S1 -> b", "S1 -> b S2", "S1 -> a"].map(String::from).into();
        let s2: BTreeSet<String> = ["S2 -> a S1", "S2 -> b S2", "S2 -> a", "S2 -> b"].map(String::from).into();
        assert_eq!(rules_of(&g, "S1"), s1);
        assert_eq!(rules_of(&g, "S2"), s2);
        let s: BTreeSet<String> = ["S -> a S1", "S -> b", "S -> b S2", "S -> a"].map(String::from).into();
        assert_eq!(rules_of(&g, "S"), s);
        assert_eq!(g.productions().len(), 12);
        assert!(g.notes().iter().any(|n| n.contains("start aliasing")));
    }

    #[test]
    fn disjoint_terminals_give_no_cross_rules() {
        let g2 = HeadNormalGrammar::from_productions(nt("T"), [prod("T", 'c', &["T"]), prod("T", 'd', &[])]).unwrap();
        let g = assemble_grammars(&a_star_b(), &g2, AssemblyMode::Paper).unwrap();
        // 2 + 2 originals and 4 aliased copies
        assert_eq!(g.productions().len(), 8);
        let expected = enumerate_grammar(&a_star_b(), 6).union(&enumerate_grammar(&g2, 6));
        assert_eq!(enumerate_grammar(&g, 6), expected);
    }

    #[test]
    fn name_clashes_are_renamed() {
        let g = assemble_grammars(&a_star_b(), &a_star_b(), AssemblyMode::Paper).unwrap();
        assert!(g.nonterminals().contains(&nt("S1_2")));
        assert_eq!(enumerate_grammar(&g, 5), enumerate_grammar(&a_star_b(), 5));
    }

    #[test]
    fn paper_mode_generates_multi_crossovers() {
        let g = assemble_grammars(&a_star_b(), &b_star_a(), AssemblyMode::Paper).unwrap();
        let words = enumerate_grammar(&g, 4);
        assert!(words.contains(&"abab".into()));
        assert!(words.contains(&"abb".into()));
    }

    /// GSA of the length-≤depth slices restricted to length ≤ n.
    fn sliced_oracle(g1: &HeadNormalGrammar, g2: &HeadNormalGrammar, n: usize, depth: usize) -> FiniteLanguage {
        gsa_finite(&enumerate_grammar(g1, depth), &enumerate_grammar(g2, depth)).restrict_len(n)
    }

    #[test]
    fn single_crossover_matches_sliced_gsa() {
        let g = assemble_grammars(&a_star_b(), &b_star_a(), AssemblyMode::SingleCrossover).unwrap();
        assert_eq!(g.class(), GrammarClass::RightLinear);
        let words = enumerate_grammar(&g, 7);
        assert!(!words.contains(&"abab".into()));
        assert!(words.contains(&"aaa".into()));
        assert_eq!(words, sliced_oracle(&a_star_b(), &b_star_a(), 7, 14));
    }

    #[test]
    fn single_crossover_context_free() {
        let g1 = HeadNormalGrammar::try_from(Cfg::parse_compact("S -> a S B; S -> c; B -> b").unwrap()).unwrap();
        let g2 =
            HeadNormalGrammar::try_from(Cfg::parse_compact("T -> b T A; T -> c; A -> a; A -> c").unwrap()).unwrap();
        let g = assemble_grammars(&g1, &g2, AssemblyMode::SingleCrossover).unwrap();
        assert_eq!(g.class(), GrammarClass::Gnf);
        assert_eq!(enumerate_grammar(&g, 7), sliced_oracle(&g1, &g2, 7, 14));
    }

    #[test]
    fn single_crossover_parent_policy() {
        let g2 = HeadNormalGrammar::from_productions(nt("T"), [prod("T", 'c', &["T"]), prod("T", 'b', &[])]).unwrap();
        // shares only b; parents c^k b and a^k b both contain it
        let g = crossover_grammar(&a_star_b(), &g2, ParentPolicy::SharedSymbol).unwrap();
        assert_eq!(enumerate_grammar(&g, 6), sliced_oracle(&a_star_b(), &g2, 6, 12));
        let g3 = HeadNormalGrammar::from_productions(nt("T"), [prod("T", 'c', &["T"]), prod("T", 'd', &[])]).unwrap();
        let none = crossover_grammar(&a_star_b(), &g3, ParentPolicy::SharedSymbol).unwrap();
        assert!(enumerate_grammar(&none, 6).is_empty());
        let all = crossover_grammar(&a_star_b(), &g3, ParentPolicy::Always).unwrap();
        assert_eq!(enumerate_grammar(&all, 6), enumerate_grammar(&a_star_b(), 6).union(&enumerate_grammar(&g3, 6)));
    }
}
