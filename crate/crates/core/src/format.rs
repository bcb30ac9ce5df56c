//! Shared pieces of the text formats: parse errors, comments, digests, and
//! the word-list format.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::word::{FiniteLanguage, Word, EPSILON_TOKEN};

/// A parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

/// Lines with comments stripped, paired with their 1-based numbers; blank
/// lines are skipped.
pub(crate) fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter_map(|(i, line)| {
        let body = match line.find('#') {
            Some(at) => &line[..at],
            None => line,
        };
        (!body.trim().is_empty()).then_some((i + 1, body))
    })
}

/// 1-based column of `token` inside `line` (which it must borrow from).
pub(crate) fn column_of(line: &str, token: &str) -> usize {
    let offset = token.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

/// First 16 hex digits of the SHA-256 of `text`.
pub fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Parses a word list: one word per line, `@eps` for ε, `#` comments.
pub fn parse_word_list(src: &str) -> Result<FiniteLanguage, ParseError> {
    let mut out = FiniteLanguage::new();
    for (n, line) in src.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed == EPSILON_TOKEN {
            out.insert(Word::empty());
            continue;
        }
        let w: Word = trimmed.parse().map_err(|e: crate::word::InvalidSymbol| {
            ParseError::new(n + 1, column_of(line, trimmed) + e.1 - 1, "words may not contain whitespace")
        })?;
        out.insert(w);
    }
    Ok(out)
}

/// One word per line in canonical order.
pub fn write_word_list(l: &FiniteLanguage) -> String {
    l.iter().map(|w| format!("{}\n", w.to_token())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_list_round_trip() {
        let src = "# slice\nab\n@eps\n\nb\nab\n";
        let l = parse_word_list(src).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(write_word_list(&l), "@eps\nb\nab\n");
        assert_eq!(parse_word_list(&write_word_list(&l)).unwrap(), l);
    }

    #[test]
    fn word_list_error_position() {
        let err = parse_word_list("ab\n  a b\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 4));
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest("abc"), "ba7816bf8f01cfea");
    }
}
