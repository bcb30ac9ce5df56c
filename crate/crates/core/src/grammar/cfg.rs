use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{GrammarError, Nonterminal};
use crate::word::{FiniteLanguage, Symbol, Word};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GrammarSymbol {
    T(Symbol),
    N(Nonterminal),
}

impl fmt::Display for GrammarSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarSymbol::T(s) => write!(f, "{s}"),
            GrammarSymbol::N(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CfgProduction {
    pub lhs: Nonterminal,
    pub rhs: Vec<GrammarSymbol>,
}

impl fmt::Display for CfgProduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        if self.rhs.is_empty() {
            return write!(f, " @eps");
        }
        for s in &self.rhs {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}

/// A general context-free grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfg {
    nonterminals: BTreeSet<Nonterminal>,
    terminals: BTreeSet<Symbol>,
    start: Nonterminal,
    productions: BTreeSet<CfgProduction>,
}

impl Cfg {
    pub fn new(
        nonterminals: BTreeSet<Nonterminal>,
        terminals: BTreeSet<Symbol>,
        start: Nonterminal,
        productions: BTreeSet<CfgProduction>,
    ) -> Result<Self, GrammarError> {
        if !nonterminals.contains(&start) {
            return Err(GrammarError::UnknownStart(start));
        }
        for p in &productions {
            if !nonterminals.contains(&p.lhs) {
                return Err(GrammarError::UnknownNonterminal(p.to_string()));
            }
            for s in &p.rhs {
                match s {
                    GrammarSymbol::N(n) if !nonterminals.contains(n) => {
                        return Err(GrammarError::UnknownNonterminal(p.to_string()))
                    }
                    GrammarSymbol::T(t) if !terminals.contains(t) => {
                        return Err(GrammarError::UnknownTerminal(p.to_string()))
                    }
                    _ => {}
                }
            }
        }
        Ok(Cfg { nonterminals, terminals, start, productions })
    }

    /// Declares exactly the symbols the productions mention.
    pub fn from_productions(
        start: Nonterminal,
        productions: impl IntoIterator<Item = CfgProduction>,
    ) -> Result<Self, GrammarError> {
        let productions: BTreeSet<CfgProduction> = productions.into_iter().collect();
        let mut nonterminals = BTreeSet::from([start.clone()]);
        let mut terminals = BTreeSet::new();
        for p in &productions {
            nonterminals.insert(p.lhs.clone());
            for s in &p.rhs {
                match s {
                    GrammarSymbol::N(n) => {
                        nonterminals.insert(n.clone());
                    }
                    GrammarSymbol::T(t) => {
                        terminals.insert(*t);
                    }
                }
            }
        }
        Cfg::new(nonterminals, terminals, start, productions)
    }

    /// Parses a compact rule list such as `"S -> a S b; S -> c"`, splitting
    /// right-hand sides into single characters. Uppercase ASCII letters are
    /// nonterminals; `@eps` (or nothing) is ε. The first rule's left-hand
    /// side is the start symbol.
    pub fn parse_compact(src: &str) -> Result<Self, GrammarError> {
        let mut start = None;
        let mut productions = Vec::new();
        for rule in src.split(';').map(str::trim).filter(|r| !r.is_empty()) {
            let (lhs, rhs) = rule.split_once("->").ok_or_else(|| GrammarError::NotHeadNormal(rule.to_string()))?;
            let lhs = Nonterminal::new(lhs.trim());
            start.get_or_insert_with(|| lhs.clone());
            let rhs = rhs.trim();
            let rhs: Vec<GrammarSymbol> = if rhs == "@eps" {
                Vec::new()
            } else {
                rhs.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| {
                        if c.is_ascii_uppercase() {
                            GrammarSymbol::N(Nonterminal::new(c.to_string()))
                        } else {
                            GrammarSymbol::T(Symbol::new(c).expect("non-whitespace"))
                        }
                    })
                    .collect()
            };
            productions.push(CfgProduction { lhs, rhs });
        }
        let start = start.ok_or(GrammarError::EmptyLanguage)?;
        Cfg::from_productions(start, productions)
    }

    pub fn nonterminals(&self) -> &BTreeSet<Nonterminal> {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &BTreeSet<Symbol> {
        &self.terminals
    }

    pub fn start(&self) -> &Nonterminal {
        &self.start
    }

    pub fn productions(&self) -> &BTreeSet<CfgProduction> {
        &self.productions
    }

    pub fn productions_of<'a>(&'a self, lhs: &'a Nonterminal) -> impl Iterator<Item = &'a CfgProduction> + 'a {
        self.productions.iter().filter(move |p| &p.lhs == lhs)
    }

    /// Nonterminals that derive some terminal word.
    pub fn productive(&self) -> BTreeSet<Nonterminal> {
        let mut productive = BTreeSet::new();
        loop {
            let before = productive.len();
            for p in &self.productions {
                let ok = p.rhs.iter().all(|s| match s {
                    GrammarSymbol::N(n) => productive.contains(n),
                    GrammarSymbol::T(_) => true,
                });
                if ok {
                    productive.insert(p.lhs.clone());
                }
            }
            if productive.len() == before {
                return productive;
            }
        }
    }

    /// Drops unproductive, then unreachable, nonterminals. Returns `None`
    /// when the start symbol is unproductive.
    pub fn trim(&self) -> Option<Cfg> {
        let productive = self.productive();
        if !productive.contains(&self.start) {
            return None;
        }
        let usable = |p: &CfgProduction| {
            p.rhs.iter().all(|s| match s {
                GrammarSymbol::N(n) => productive.contains(n),
                GrammarSymbol::T(_) => true,
            })
        };
        let mut reach = BTreeSet::from([self.start.clone()]);
        let mut stack = vec![self.start.clone()];
        while let Some(n) = stack.pop() {
            for p in self.productions_of(&n).filter(|p| usable(p)) {
                for s in &p.rhs {
                    if let GrammarSymbol::N(m) = s {
                        if reach.insert(m.clone()) {
                            stack.push(m.clone());
                        }
                    }
                }
            }
        }
        let productions = self.productions.iter().filter(|p| reach.contains(&p.lhs) && usable(p)).cloned().collect();
        Some(Cfg { nonterminals: reach, terminals: self.terminals.clone(), start: self.start.clone(), productions })
    }
}

/// `{ w ∈ L(g) : |w| ≤ n }` by Kleene iteration of length-truncated
/// languages per nonterminal. Works for any context-free grammar, ε and
/// unit rules included, and shares nothing with the head-normal derivation
/// search, so it serves as an independent oracle.
pub fn enumerate_cfg(g: &Cfg, n: usize) -> FiniteLanguage {
    let mut lang: BTreeMap<Nonterminal, BTreeSet<Word>> =
        g.nonterminals().iter().map(|a| (a.clone(), BTreeSet::new())).collect();
    loop {
        let mut changed = false;
        for p in g.productions() {
            let mut acc: BTreeSet<Word> = BTreeSet::from([Word::empty()]);
            for s in &p.rhs {
                let part: BTreeSet<Word> = match s {
                    GrammarSymbol::T(t) => BTreeSet::from([Word::from_symbols(vec![*t])]),
                    GrammarSymbol::N(m) => lang[m].clone(),
                };
                acc = acc.iter().flat_map(|x| part.iter().map(move |y| x.concat(y))).filter(|w| w.len() <= n).collect();
            }
            let entry = lang.get_mut(&p.lhs).unwrap();
            for w in acc {
                changed |= entry.insert(w);
            }
        }
        if !changed {
            break;
        }
    }
    lang[g.start()].iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_parse() {
        let g = Cfg::parse_compact("S -> a S b; S -> c; A -> @eps").unwrap();
        assert_eq!(g.start(), &Nonterminal::new("S"));
        assert_eq!(g.productions().len(), 3);
        assert!(g.productions().iter().any(|p| p.rhs.is_empty()));
    }

    #[test]
    fn trim_reports_empty_language() {
        assert!(Cfg::parse_compact("S -> A; A -> S").unwrap().trim().is_none());
        let g = Cfg::parse_compact("S -> a; S -> B; B -> b B; C -> c").unwrap().trim().unwrap();
        assert_eq!(g.nonterminals().len(), 1);
    }
}
