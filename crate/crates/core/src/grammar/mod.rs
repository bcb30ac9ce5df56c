//! Head-normal grammars and the transformations around them.
//!
//! A head-normal production has the shape `A → a B1 … Bk`: one terminal
//! head followed by a (possibly empty) tail of nonterminals. Right-linear
//! grammars (`k ≤ 1`) and Greibach normal form (any `k`) are both instances,
//! so one type carries regular, linear and context-free inputs through the
//! same assembly code.

mod assemble;
mod cfg;
mod enumerate;
pub mod format;
mod gnf;
mod normalize;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::word::Symbol;

pub use assemble::{assemble_grammars, crossover_grammar, AssemblyMode};
pub use cfg::{enumerate_cfg, Cfg, CfgProduction, GrammarSymbol};
pub use enumerate::{
    derivation, enumerate_grammar, enumerate_prefixes, enumerate_suffixes, gnf_membership, min_yields, Derivation,
};
pub use gnf::cfg_to_gnf;
pub use normalize::{normalize_right_linear, EpsilonPolicy};

/// A nonterminal name. Files require `[A-Z][A-Za-z0-9_]*`; nothing else in
/// the crate depends on that shape.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nonterminal(String);

impl Nonterminal {
    pub fn new(name: impl Into<String>) -> Self {
        Nonterminal(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Whether `s` is spelled like a nonterminal in the grammar file format.
    pub fn is_valid_name(s: &str) -> bool {
        let mut chars = s.chars();
        chars.next().is_some_and(|c| c.is_ascii_uppercase()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl fmt::Display for Nonterminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Nonterminal {
    fn from(s: &str) -> Self {
        Nonterminal::new(s)
    }
}

/// `lhs → head tail`. A missing head is the empty word and only appears in
/// the degenerate start rule `S → ε`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Production {
    pub lhs: Nonterminal,
    pub head: Option<Symbol>,
    pub tail: Vec<Nonterminal>,
}

impl Production {
    pub fn new(lhs: Nonterminal, head: Symbol, tail: Vec<Nonterminal>) -> Self {
        Production { lhs, head: Some(head), tail }
    }

    pub fn epsilon(lhs: Nonterminal) -> Self {
        Production { lhs, head: None, tail: Vec::new() }
    }

    fn with_lhs(&self, lhs: Nonterminal) -> Self {
        Production { lhs, ..self.clone() }
    }
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        match self.head {
            None => write!(f, " @eps")?,
            Some(h) => write!(f, " {h}")?,
        }
        for n in &self.tail {
            write!(f, " {n}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GrammarClass {
    RightLinear,
    Gnf,
}

impl fmt::Display for GrammarClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrammarClass::RightLinear => "RIGHT_LINEAR",
            GrammarClass::Gnf => "GNF",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error("start symbol {0} is not a declared nonterminal")]
    UnknownStart(Nonterminal),
    #[error("production `{0}` refers to an undeclared nonterminal")]
    UnknownNonterminal(String),
    #[error("production `{0}` uses an undeclared terminal")]
    UnknownTerminal(String),
    #[error("production `{production}` violates the {class} shape")]
    Shape { production: String, class: GrammarClass },
    #[error("production `{0}` has an empty right-hand side")]
    EpsilonProduction(String),
    #[error("the grammar generates the empty language")]
    EmptyLanguage,
    #[error("the grammar generates the empty word, which is not allowed here")]
    GeneratesEpsilon,
    #[error("production `{0}` is not right-linear")]
    NotRightLinear(String),
    #[error("production `{0}` is not in head-normal form")]
    NotHeadNormal(String),
}

/// A grammar whose productions all have the shape `A → a B1 … Bk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadNormalGrammar {
    nonterminals: BTreeSet<Nonterminal>,
    terminals: BTreeSet<Symbol>,
    start: Nonterminal,
    productions: BTreeSet<Production>,
    class: GrammarClass,
    notes: Vec<String>,
}

impl HeadNormalGrammar {
    /// Checks every structural invariant, including the shape `class`
    /// demands. `S → ε` is accepted only for the start symbol of a
    /// right-linear grammar.
    pub fn new(
        nonterminals: BTreeSet<Nonterminal>,
        terminals: BTreeSet<Symbol>,
        start: Nonterminal,
        productions: BTreeSet<Production>,
        class: GrammarClass,
    ) -> Result<Self, GrammarError> {
        if !nonterminals.contains(&start) {
            return Err(GrammarError::UnknownStart(start));
        }
        for p in &productions {
            if !nonterminals.contains(&p.lhs) || p.tail.iter().any(|n| !nonterminals.contains(n)) {
                return Err(GrammarError::UnknownNonterminal(p.to_string()));
            }
            if let Some(h) = p.head {
                if !terminals.contains(&h) {
                    return Err(GrammarError::UnknownTerminal(p.to_string()));
                }
            }
            let shape_ok = match (class, p.head) {
                (GrammarClass::RightLinear, Some(_)) => p.tail.len() <= 1,
                (GrammarClass::RightLinear, None) => p.tail.is_empty() && p.lhs == start,
                (GrammarClass::Gnf, Some(_)) => true,
                (GrammarClass::Gnf, None) => false,
            };
            if !shape_ok {
                return Err(GrammarError::Shape { production: p.to_string(), class });
            }
        }
        Ok(HeadNormalGrammar { nonterminals, terminals, start, productions, class, notes: Vec::new() })
    }

    /// Builds from productions alone, declaring exactly the symbols they use
    /// plus the start symbol. The class is the tightest one that fits.
    pub fn from_productions(
        start: Nonterminal,
        productions: impl IntoIterator<Item = Production>,
    ) -> Result<Self, GrammarError> {
        let productions: BTreeSet<Production> = productions.into_iter().collect();
        let mut nonterminals = BTreeSet::from([start.clone()]);
        let mut terminals = BTreeSet::new();
        for p in &productions {
            nonterminals.insert(p.lhs.clone());
            nonterminals.extend(p.tail.iter().cloned());
            terminals.extend(p.head);
        }
        let class =
            if productions.iter().all(|p| p.tail.len() <= 1) { GrammarClass::RightLinear } else { GrammarClass::Gnf };
        Self::new(nonterminals, terminals, start, productions, class)
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

    pub fn productions(&self) -> &BTreeSet<Production> {
        &self.productions
    }

    pub fn class(&self) -> GrammarClass {
        self.class
    }

    /// Free-form remarks carried into emitted files.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn productions_of<'a>(&'a self, lhs: &'a Nonterminal) -> impl Iterator<Item = &'a Production> + 'a {
        self.productions.iter().filter(move |p| &p.lhs == lhs)
    }

    pub fn has_epsilon_rule(&self) -> bool {
        self.productions.iter().any(|p| p.head.is_none())
    }

    /// Whether every production satisfies `class` (independent of the tag).
    pub fn satisfies(&self, class: GrammarClass) -> bool {
        self.productions.iter().all(|p| match (class, p.head) {
            (GrammarClass::RightLinear, Some(_)) => p.tail.len() <= 1,
            (GrammarClass::RightLinear, None) => p.tail.is_empty() && p.lhs == self.start,
            (GrammarClass::Gnf, h) => h.is_some(),
        })
    }

    /// Productions grouped by left-hand side, in canonical order.
    pub fn by_lhs(&self) -> BTreeMap<&Nonterminal, Vec<&Production>> {
        let mut m: BTreeMap<&Nonterminal, Vec<&Production>> =
            self.nonterminals.iter().map(|n| (n, Vec::new())).collect();
        for p in &self.productions {
            m.get_mut(&p.lhs).expect("validated").push(p);
        }
        m
    }

    /// The same grammar as a general context-free grammar.
    pub fn to_cfg(&self) -> Cfg {
        let productions = self
            .productions
            .iter()
            .map(|p| {
                let mut rhs: Vec<GrammarSymbol> = p.head.map(GrammarSymbol::T).into_iter().collect();
                rhs.extend(p.tail.iter().cloned().map(GrammarSymbol::N));
                CfgProduction { lhs: p.lhs.clone(), rhs }
            })
            .collect();
        Cfg::new(self.nonterminals.clone(), self.terminals.clone(), self.start.clone(), productions)
            .expect("head-normal grammars are well-formed")
    }

    /// Removes nonterminals that are unproductive or unreachable. The start
    /// symbol is always kept, so an empty language yields a grammar with no
    /// productions.
    pub fn trim(&self) -> HeadNormalGrammar {
        let productive = self.productive();
        let mut keep: BTreeSet<Nonterminal> = BTreeSet::from([self.start.clone()]);
        let mut stack = vec![self.start.clone()];
        let usable = |p: &Production| productive.contains(&p.lhs) && p.tail.iter().all(|n| productive.contains(n));
        while let Some(n) = stack.pop() {
            for p in self.productions_of(&n) {
                if usable(p) {
                    for t in &p.tail {
                        if keep.insert(t.clone()) {
                            stack.push(t.clone());
                        }
                    }
                }
            }
        }
        let productions = self.productions.iter().filter(|p| keep.contains(&p.lhs) && usable(p)).cloned().collect();
        HeadNormalGrammar {
            nonterminals: keep,
            terminals: self.terminals.clone(),
            start: self.start.clone(),
            productions,
            class: self.class,
            notes: self.notes.clone(),
        }
    }

    fn productive(&self) -> BTreeSet<Nonterminal> {
        let mut productive = BTreeSet::new();
        loop {
            let before = productive.len();
            for p in &self.productions {
                if p.tail.iter().all(|n| productive.contains(n)) {
                    productive.insert(p.lhs.clone());
                }
            }
            if productive.len() == before {
                return productive;
            }
        }
    }

    /// Terminals that occur in some word of the language.
    pub fn occurring_terminals(&self) -> BTreeSet<Symbol> {
        self.trim().productions.iter().filter_map(|p| p.head).collect()
    }

    /// Renames nonterminals through `f`, which must be injective.
    pub fn rename(&self, f: impl Fn(&Nonterminal) -> Nonterminal) -> HeadNormalGrammar {
        let productions = self
            .productions
            .iter()
            .map(|p| Production { lhs: f(&p.lhs), head: p.head, tail: p.tail.iter().map(&f).collect() })
            .collect();
        HeadNormalGrammar {
            nonterminals: self.nonterminals.iter().map(&f).collect(),
            terminals: self.terminals.clone(),
            start: f(&self.start),
            productions,
            class: self.class,
            notes: self.notes.clone(),
        }
    }
}

impl fmt::Display for HeadNormalGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::write_grammar(self))
    }
}

impl TryFrom<Cfg> for HeadNormalGrammar {
    type Error = GrammarError;

    /// Accepts a general grammar whose productions are already head-normal.
    fn try_from(g: Cfg) -> Result<Self, Self::Error> {
        let mut productions = BTreeSet::new();
        for p in g.productions() {
            let hp = match p.rhs.split_first() {
                None if p.lhs == *g.start() => Production::epsilon(p.lhs.clone()),
                Some((GrammarSymbol::T(a), rest)) => {
                    let tail = rest
                        .iter()
                        .map(|s| match s {
                            GrammarSymbol::N(n) => Ok(n.clone()),
                            GrammarSymbol::T(_) => Err(GrammarError::NotHeadNormal(p.to_string())),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Production::new(p.lhs.clone(), *a, tail)
                }
                _ => return Err(GrammarError::NotHeadNormal(p.to_string())),
            };
            productions.insert(hp);
        }
        let class =
            if productions.iter().all(|p| p.tail.len() <= 1) { GrammarClass::RightLinear } else { GrammarClass::Gnf };
        HeadNormalGrammar::new(g.nonterminals().clone(), g.terminals().clone(), g.start().clone(), productions, class)
    }
}

/// Hands out nonterminal names that do not clash with a given set.
#[derive(Debug, Clone)]
pub(crate) struct NameSupply {
    taken: BTreeSet<String>,
}

impl NameSupply {
    pub(crate) fn new<'a>(taken: impl IntoIterator<Item = &'a Nonterminal>) -> Self {
        NameSupply { taken: taken.into_iter().map(|n| n.0.clone()).collect() }
    }

    /// `base` itself if free, else `base1`, `base2`, ….
    pub(crate) fn fresh(&mut self, base: &str) -> Nonterminal {
        let name = if self.taken.contains(base) {
            (1..).map(|i| format!("{base}{i}")).find(|c| !self.taken.contains(c)).unwrap()
        } else {
            base.to_string()
        };
        self.taken.insert(name.clone());
        Nonterminal(name)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn sym(c: char) -> Symbol {
        Symbol::new(c).unwrap()
    }

    pub fn nt(s: &str) -> Nonterminal {
        Nonterminal::new(s)
    }

    /// `lhs → head tail…` from a compact spec like `("S1", 'a', &["S1"])`.
    pub fn prod(lhs: &str, head: char, tail: &[&str]) -> Production {
        Production::new(nt(lhs), sym(head), tail.iter().map(|t| nt(t)).collect())
    }

    /// S1 → a S1 | b, generating a*b.
    pub fn a_star_b() -> HeadNormalGrammar {
        HeadNormalGrammar::from_productions(nt("S1"), [prod("S1", 'a', &["S1"]), prod("S1", 'b', &[])]).unwrap()
    }

    /// S2 → b S2 | a, generating b*a.
    pub fn b_star_a() -> HeadNormalGrammar {
        HeadNormalGrammar::from_productions(nt("S2"), [prod("S2", 'b', &["S2"]), prod("S2", 'a', &[])]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn class_is_inferred_and_checked() {
        assert_eq!(a_star_b().class(), GrammarClass::RightLinear);
        let g =
            HeadNormalGrammar::from_productions(nt("S"), [prod("S", 'a', &["S", "S"]), prod("S", 'b', &[])]).unwrap();
        assert_eq!(g.class(), GrammarClass::Gnf);
        let bad = HeadNormalGrammar::new(
            g.nonterminals().clone(),
            g.terminals().clone(),
            nt("S"),
            g.productions().clone(),
            GrammarClass::RightLinear,
        );
        assert!(matches!(bad, Err(GrammarError::Shape { .. })));
    }

    #[test]
    fn epsilon_only_on_right_linear_start() {
        let ok = HeadNormalGrammar::from_productions(nt("S"), [Production::epsilon(nt("S")), prod("S", 'a', &["S"])]);
        assert!(ok.is_ok());
        let bad = HeadNormalGrammar::from_productions(nt("S"), [Production::epsilon(nt("A")), prod("S", 'a', &["A"])]);
        assert!(matches!(bad, Err(GrammarError::Shape { .. })));
    }

    #[test]
    fn unknown_symbols_are_rejected() {
        let err = HeadNormalGrammar::new(
            BTreeSet::from([nt("S")]),
            BTreeSet::from([sym('a')]),
            nt("S"),
            BTreeSet::from([prod("S", 'a', &["X"])]),
            GrammarClass::RightLinear,
        );
        assert!(matches!(err, Err(GrammarError::UnknownNonterminal(_))));
        let err = HeadNormalGrammar::new(
            BTreeSet::from([nt("S")]),
            BTreeSet::from([sym('a')]),
            nt("T"),
            BTreeSet::new(),
            GrammarClass::RightLinear,
        );
        assert!(matches!(err, Err(GrammarError::UnknownStart(_))));
    }

    #[test]
    fn trim_drops_useless() {
        let g = HeadNormalGrammar::from_productions(
            nt("S"),
            [prod("S", 'a', &[]), prod("S", 'b', &["D"]), prod("D", 'b', &["D"]), prod("U", 'c', &[])],
        )
        .unwrap();
        let t = g.trim();
        assert_eq!(t.nonterminals(), &BTreeSet::from([nt("S")]));
        assert_eq!(t.productions().len(), 1);
        assert_eq!(g.occurring_terminals(), BTreeSet::from([sym('a')]));
    }

    #[test]
    fn name_supply_avoids_collisions() {
        let mut s = NameSupply::new(&[nt("S"), nt("S1")]);
        assert_eq!(s.fresh("S"), nt("S2"));
        assert_eq!(s.fresh("T"), nt("T"));
        assert_eq!(s.fresh("T"), nt("T1"));
    }
}
