//! Symbols, words and finite languages.
//!
//! Every set-valued result in this crate is ordered canonically: shorter
//! words first, then lexicographically by symbol. [`Word`]'s `Ord` is that
//! order, so a `BTreeSet<Word>` iterates canonically.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// Token written in word lists for the empty word.
pub const EPSILON_TOKEN: &str = "@eps";

/// A single alphabet symbol.
///
/// The file formats restrict symbols to one printable, non-whitespace
/// character, so a `char` is the whole representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(char);

impl Symbol {
    /// Returns `None` for whitespace and control characters.
    pub fn new(c: char) -> Option<Self> {
        if c.is_whitespace() || c.is_control() {
            None
        } else {
            Some(Symbol(c))
        }
    }

    pub fn as_char(self) -> char {
        self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite, possibly empty, sequence of symbols.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `self[..i] ++ other[j..]`, the shape of every crossover.
    pub fn join_at(&self, i: usize, other: &Word, j: usize) -> Word {
        let mut v = Vec::with_capacity(i + other.len() - j);
        v.extend_from_slice(&self.0[..i]);
        v.extend_from_slice(&other.0[j..]);
        Word(v)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    /// Start positions of every (possibly overlapping) occurrence of
    /// `needle`. The empty needle occurs at every position `0..=len`.
    pub fn occurrences(&self, needle: &[Symbol]) -> Vec<usize> {
        if needle.len() > self.len() {
            return Vec::new();
        }
        (0..=self.len() - needle.len()).filter(|&i| &self.0[i..i + needle.len()] == needle).collect()
    }

    pub fn contains_symbol(&self, s: Symbol) -> bool {
        self.0.contains(&s)
    }

    pub fn alphabet(&self) -> BTreeSet<Symbol> {
        self.0.iter().copied().collect()
    }

    /// Prefixes from ε up to the word itself.
    pub fn prefixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.len()).map(move |i| self.slice(0, i))
    }

    /// Suffixes from the word itself down to ε.
    pub fn suffixes(&self) -> impl Iterator<Item = Word> + '_ {
        (0..=self.len()).map(move |i| self.slice(i, self.len()))
    }

    /// The word as written in word-list files (`@eps` for ε).
    pub fn to_token(&self) -> String {
        if self.is_empty() {
            EPSILON_TOKEN.to_string()
        } else {
            self.to_string()
        }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Prints the bare symbols; ε prints as the empty string.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{:?}", self.to_string())
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid symbol {0:?} at column {1}")]
pub struct InvalidSymbol(pub char, pub usize);

/// Parses the bare symbols of a word; `""` and `"@eps"` are both ε.
impl FromStr for Word {
    type Err = InvalidSymbol;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == EPSILON_TOKEN {
            return Ok(Word::empty());
        }
        s.chars()
            .enumerate()
            .map(|(i, c)| Symbol::new(c).ok_or(InvalidSymbol(c, i + 1)))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl From<&str> for Word {
    /// Panics on whitespace; meant for literals in code and tests.
    fn from(s: &str) -> Self {
        s.parse().expect("word literal contains whitespace")
    }
}

/// A finite set of words together with an alphabet covering them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FiniteLanguage {
    words: BTreeSet<Word>,
    alphabet: BTreeSet<Symbol>,
}

impl FiniteLanguage {
    pub fn new() -> Self {
        Self::default()
    }

    /// Extends the declared alphabet beyond the symbols that occur.
    pub fn with_alphabet(mut self, alphabet: impl IntoIterator<Item = Symbol>) -> Self {
        self.alphabet.extend(alphabet);
        self
    }

    pub fn insert(&mut self, w: Word) -> bool {
        self.alphabet.extend(w.symbols().iter().copied());
        self.words.insert(w)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn alphabet(&self) -> &BTreeSet<Symbol> {
        &self.alphabet
    }

    /// Symbols that actually occur in some word, as opposed to the declared
    /// alphabet.
    pub fn occurring_symbols(&self) -> BTreeSet<Symbol> {
        self.words.iter().flat_map(|w| w.symbols().iter().copied()).collect()
    }

    pub fn is_subset(&self, other: &FiniteLanguage) -> bool {
        self.words.is_subset(&other.words)
    }

    pub fn union(&self, other: &FiniteLanguage) -> FiniteLanguage {
        let mut out = self.clone();
        out.alphabet.extend(other.alphabet.iter().copied());
        out.words.extend(other.words.iter().cloned());
        out
    }

    /// Words of `self` missing from `other`, canonically ordered.
    pub fn difference(&self, other: &FiniteLanguage) -> Vec<Word> {
        self.words.difference(&other.words).cloned().collect()
    }

    pub fn max_word_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn restrict_len(&self, max_len: usize) -> FiniteLanguage {
        self.words.iter().filter(|w| w.len() <= max_len).cloned().collect()
    }
}

impl FromIterator<Word> for FiniteLanguage {
    fn from_iter<I: IntoIterator<Item = Word>>(iter: I) -> Self {
        let mut l = FiniteLanguage::new();
        for w in iter {
            l.insert(w);
        }
        l
    }
}

impl<'a> FromIterator<&'a str> for FiniteLanguage {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        iter.into_iter().map(Word::from).collect()
    }
}

impl Extend<Word> for FiniteLanguage {
    fn extend<I: IntoIterator<Item = Word>>(&mut self, iter: I) {
        for w in iter {
            self.insert(w);
        }
    }
}

impl IntoIterator for FiniteLanguage {
    type Item = Word;
    type IntoIter = std::collections::btree_set::IntoIter<Word>;

    fn into_iter(self) -> Self::IntoIter {
        self.words.into_iter()
    }
}
