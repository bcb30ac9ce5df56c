//! Grammar files.
//!
//! ```text
//! # comment
//! start: S
//! S -> a S
//! S -> b
//! A -> @eps
//! ```
//!
//! Right-hand side tokens are separated by whitespace. Tokens spelled like
//! `[A-Z][A-Za-z0-9_]*` are nonterminals; any other single character is a
//! terminal. One production per line.

use std::collections::BTreeSet;

use super::{Cfg, CfgProduction, GrammarSymbol, HeadNormalGrammar, Nonterminal};
use crate::format::{column_of, content_lines, ParseError};
use crate::word::Symbol;

pub fn parse_cfg(src: &str) -> Result<Cfg, ParseError> {
    let mut start: Option<(Nonterminal, usize)> = None;
    let mut productions = BTreeSet::new();
    let mut nonterminals = BTreeSet::new();
    let mut terminals = BTreeSet::new();

    for (n, line) in content_lines(src) {
        let body = line.trim();
        if let Some(rest) = body.strip_prefix("start:") {
            let name = rest.trim();
            if start.is_some() {
                return Err(ParseError::new(n, column_of(line, body), "duplicate `start:` line"));
            }
            if !Nonterminal::is_valid_name(name) {
                let col = if name.is_empty() { column_of(line, body) } else { column_of(line, name) };
                return Err(ParseError::new(n, col, format!("invalid start symbol {name:?}")));
            }
            start = Some((Nonterminal::new(name), n));
            continue;
        }
        let Some((lhs, rhs)) = body.split_once("->") else {
            return Err(ParseError::new(n, column_of(line, body), "expected `start: <N>` or `<N> -> <rhs>`"));
        };
        let lhs_name = lhs.trim();
        if !Nonterminal::is_valid_name(lhs_name) {
            let col = if lhs_name.is_empty() { column_of(line, body) } else { column_of(line, lhs_name) };
            return Err(ParseError::new(n, col, format!("invalid nonterminal {lhs_name:?}")));
        }
        let lhs = Nonterminal::new(lhs_name);
        nonterminals.insert(lhs.clone());
        let tokens: Vec<&str> = rhs.split_whitespace().collect();
        let mut symbols = Vec::new();
        match tokens.as_slice() {
            [] => return Err(ParseError::new(n, line.len() + 1, "empty right-hand side (write @eps for ε)")),
            ["@eps"] => {}
            _ => {
                for tok in tokens {
                    if tok == "|" {
                        return Err(ParseError::new(
                            n,
                            column_of(line, tok),
                            "`|` is not supported; one production per line",
                        ));
                    }
                    if Nonterminal::is_valid_name(tok) {
                        let nt = Nonterminal::new(tok);
                        nonterminals.insert(nt.clone());
                        symbols.push(GrammarSymbol::N(nt));
                        continue;
                    }
                    let mut chars = tok.chars();
                    match (chars.next().and_then(Symbol::new), chars.next()) {
                        (Some(s), None) if tok != "@eps" => {
                            terminals.insert(s);
                            symbols.push(GrammarSymbol::T(s));
                        }
                        _ => {
                            return Err(ParseError::new(
                                n,
                                column_of(line, tok),
                                format!("{tok:?} is neither a nonterminal nor a single-character terminal"),
                            ))
                        }
                    }
                }
            }
        }
        productions.insert(CfgProduction { lhs, rhs: symbols });
    }

    let Some((start, start_line)) = start else {
        return Err(ParseError::new(1, 1, "missing `start:` line"));
    };
    nonterminals.insert(start.clone());
    Cfg::new(nonterminals, terminals, start, productions).map_err(|e| ParseError::new(start_line, 1, e.to_string()))
}

/// Parses a grammar file whose productions are already head-normal.
pub fn parse_grammar(src: &str) -> Result<HeadNormalGrammar, ParseError> {
    let cfg = parse_cfg(src)?;
    HeadNormalGrammar::try_from(cfg).map_err(|e| {
        let line = offending_line(src, &e.to_string()).unwrap_or(1);
        ParseError::new(line, 1, e.to_string())
    })
}

fn offending_line(src: &str, message: &str) -> Option<usize> {
    let quoted = message.split('`').nth(1)?;
    let (lhs, rhs) = quoted.split_once("->")?;
    content_lines(src).find_map(|(n, line)| {
        let (l, r) = line.split_once("->")?;
        let same = l.trim() == lhs.trim()
            && r.split_whitespace().collect::<Vec<_>>() == rhs.split_whitespace().collect::<Vec<_>>();
        same.then_some(n)
    })
}

pub fn write_cfg(g: &Cfg) -> String {
    let mut out = format!("start: {}\n", g.start());
    for p in g.productions() {
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

/// Canonical text: class and notes as comments, then `start:`, then the
/// productions in canonical order.
pub fn write_grammar(g: &HeadNormalGrammar) -> String {
    let mut out = format!("# class: {}\n", g.class());
    for note in g.notes() {
        out.push_str(&format!("# {note}\n"));
    }
    out.push_str(&format!("start: {}\n", g.start()));
    for p in g.productions() {
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}
