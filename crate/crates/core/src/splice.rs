//! Splicing rules and generalized splicing over two operand languages.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::par;
use crate::word::{FiniteLanguage, Symbol, Word};

/// A rule `alpha#beta$alpha2#beta2`: cut the first word between `alpha` and
/// `beta`, the second between `alpha2` and `beta2`, and recombine crosswise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplicingRule {
    pub alpha: Word,
    pub beta: Word,
    pub alpha2: Word,
    pub beta2: Word,
}

impl SplicingRule {
    pub fn new(alpha: Word, beta: Word, alpha2: Word, beta2: Word) -> Self {
        SplicingRule { alpha, beta, alpha2, beta2 }
    }

    /// `x#ε$x#ε`, the rule equivalent to self-assembly over `x`.
    pub fn overlap(x: Word) -> Self {
        SplicingRule::new(x.clone(), Word::empty(), x, Word::empty())
    }

    /// `w1#ε$w2#ε`: cut each word right after the given factor.
    pub fn cut_after(w1: Word, w2: Word) -> Self {
        SplicingRule::new(w1, Word::empty(), w2, Word::empty())
    }

    fn first_site(&self) -> Word {
        self.alpha.concat(&self.beta)
    }

    fn second_site(&self) -> Word {
        self.alpha2.concat(&self.beta2)
    }
}

impl fmt::Display for SplicingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}${}#{}", self.alpha, self.beta, self.alpha2, self.beta2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleParseError {
    #[error("rule must have the shape alpha#beta$alpha2#beta2, got {0:?}")]
    Shape(String),
    #[error("invalid symbol {0:?} in rule")]
    Symbol(char),
}

impl FromStr for SplicingRule {
    type Err = RuleParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let shape = || RuleParseError::Shape(s.to_string());
        let (left, right) = s.split_once('$').ok_or_else(shape)?;
        let (alpha, beta) = left.split_once('#').ok_or_else(shape)?;
        let (alpha2, beta2) = right.split_once('#').ok_or_else(shape)?;
        let parts = [alpha, beta, alpha2, beta2];
        if parts.iter().any(|p| p.contains(['#', '$'])) {
            return Err(shape());
        }
        let [a, b, c, d] = parts.map(|p| p.parse::<Word>().map_err(|e| RuleParseError::Symbol(e.0)));
        Ok(SplicingRule::new(a?, b?, c?, d?))
    }
}

/// All results of applying `rule` to the ordered pair `(x, y)`, at every
/// pair of cut sites.
pub fn splice(rule: &SplicingRule, x: &Word, y: &Word) -> BTreeSet<(Word, Word)> {
    let site1 = rule.first_site();
    let site2 = rule.second_site();
    let cuts_x: Vec<usize> = x.occurrences(site1.symbols()).into_iter().map(|i| i + rule.alpha.len()).collect();
    let cuts_y: Vec<usize> = y.occurrences(site2.symbols()).into_iter().map(|j| j + rule.alpha2.len()).collect();
    let mut out = BTreeSet::new();
    for &i in &cuts_x {
        for &j in &cuts_y {
            out.insert((x.join_at(i, y, j), y.join_at(j, x, i)));
        }
    }
    out
}

/// Every `z1` and `z2` obtained by splicing some `x ∈ l1` with some `y ∈ l2`
/// under some rule.
pub fn gs_finite<'r>(
    l1: &FiniteLanguage,
    l2: &FiniteLanguage,
    rules: impl IntoIterator<Item = &'r SplicingRule>,
) -> FiniteLanguage {
    let rules: Vec<&SplicingRule> = rules.into_iter().collect();
    let lefts: Vec<&Word> = l1.iter().collect();
    let produced = par::flat_map(&lefts, |x| {
        let mut acc = Vec::new();
        for y in l2.iter() {
            for r in &rules {
                for (z1, z2) in splice(r, x, y) {
                    acc.push(z1);
                    acc.push(z2);
                }
            }
        }
        acc
    });
    produced.into_iter().collect()
}

/// One way a word arises in [`gs_finite`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpliceProvenance {
    pub rule: SplicingRule,
    pub x: Word,
    pub y: Word,
    /// Cut positions in `x` and `y`.
    pub cuts: (usize, usize),
}

impl fmt::Display for SpliceProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "splice({}) on x={} (cut {}) y={} (cut {})",
            self.rule,
            self.x.to_token(),
            self.cuts.0,
            self.y.to_token(),
            self.cuts.1
        )
    }
}

/// First derivation of `target` in [`gs_finite`], scanning `l1`, `l2` and
/// `rules` in canonical order.
pub fn gs_provenance<'r>(
    l1: &FiniteLanguage,
    l2: &FiniteLanguage,
    rules: impl IntoIterator<Item = &'r SplicingRule>,
    target: &Word,
) -> Option<SpliceProvenance> {
    let rules: Vec<&SplicingRule> = rules.into_iter().collect();
    for x in l1.iter() {
        for y in l2.iter() {
            for r in &rules {
                let site1 = r.first_site();
                let site2 = r.second_site();
                for i in x.occurrences(site1.symbols()) {
                    let i = i + r.alpha.len();
                    for j in y.occurrences(site2.symbols()) {
                        let j = j + r.alpha2.len();
                        if &x.join_at(i, y, j) == target || &y.join_at(j, x, i) == target {
                            return Some(SpliceProvenance {
                                rule: (*r).clone(),
                                x: x.clone(),
                                y: y.clone(),
                                cuts: (i, j),
                            });
                        }
                    }
                }
            }
        }
    }
    None
}

/// The finite stand-in for `V⁺ ∪ {(w1, w2)}`: one overlap rule per symbol
/// occurring in both languages, plus `w1#$w2#` for every word pair.
pub fn canonical_rules(l1: &FiniteLanguage, l2: &FiniteLanguage) -> BTreeSet<SplicingRule> {
    let shared: BTreeSet<Symbol> = l1.occurring_symbols().intersection(&l2.occurring_symbols()).copied().collect();
    let mut rules: BTreeSet<SplicingRule> =
        shared.into_iter().map(|a| SplicingRule::overlap(Word::from_symbols(vec![a]))).collect();
    for w1 in l1.iter() {
        for w2 in l2.iter() {
            rules.insert(SplicingRule::cut_after(w1.clone(), w2.clone()));
        }
    }
    rules
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rule {rule} uses symbol {symbol} outside the alphabet of its {side} operand")]
pub struct SchemeError {
    pub rule: SplicingRule,
    pub symbol: Symbol,
    pub side: &'static str,
}

/// A generalized splicing scheme `(V1, V2, R)` with a finite rule set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsScheme {
    v1: BTreeSet<Symbol>,
    v2: BTreeSet<Symbol>,
    rules: BTreeSet<SplicingRule>,
}

impl GsScheme {
    pub fn new(v1: BTreeSet<Symbol>, v2: BTreeSet<Symbol>, rules: BTreeSet<SplicingRule>) -> Result<Self, SchemeError> {
        for r in &rules {
            let check = |w: &Word, alphabet: &BTreeSet<Symbol>, side| match w
                .symbols()
                .iter()
                .find(|s| !alphabet.contains(s))
            {
                Some(&symbol) => Err(SchemeError { rule: r.clone(), symbol, side }),
                None => Ok(()),
            };
            check(&r.alpha, &v1, "first")?;
            check(&r.beta, &v1, "first")?;
            check(&r.alpha2, &v2, "second")?;
            check(&r.beta2, &v2, "second")?;
        }
        Ok(GsScheme { v1, v2, rules })
    }

    /// The scheme `canonical_rules` induces for a pair of languages.
    pub fn canonical(l1: &FiniteLanguage, l2: &FiniteLanguage) -> Self {
        GsScheme { v1: l1.alphabet().clone(), v2: l2.alphabet().clone(), rules: canonical_rules(l1, l2) }
    }

    pub fn rules(&self) -> &BTreeSet<SplicingRule> {
        &self.rules
    }

    pub fn alphabets(&self) -> (&BTreeSet<Symbol>, &BTreeSet<Symbol>) {
        (&self.v1, &self.v2)
    }

    pub fn apply(&self, l1: &FiniteLanguage, l2: &FiniteLanguage) -> FiniteLanguage {
        gs_finite(l1, l2, &self.rules)
    }
}
