//! Automaton files.
//!
//! ```text
//! # comment
//! states: p0 p1
//! start: p0
//! final: p1
//! p0 a p0
//! p0 b p1
//! p1 eps p0
//! ```
//!
//! An optional `alphabet:` line declares symbols that label no transition.

use std::collections::{BTreeMap, BTreeSet};

use super::{Nfa, StateId};
use crate::format::{column_of, content_lines, ParseError};
use crate::word::Symbol;

const EPS: &str = "eps";

/// A token with its line and column.
type Located = (String, usize, usize);

pub fn parse_nfa(src: &str) -> Result<Nfa, ParseError> {
    let mut states: Option<(Vec<Located>, usize)> = None;
    let mut start: Option<Located> = None;
    let mut finals: Option<Vec<Located>> = None;
    let mut alphabet = BTreeSet::new();
    let mut edges = Vec::new();

    for (n, line) in content_lines(src) {
        let body = line.trim();
        let header = ["states:", "start:", "final:", "alphabet:"]
            .into_iter()
            .find_map(|h| body.strip_prefix(h).map(|rest| (h, rest)));
        if let Some((h, rest)) = header {
            let tokens: Vec<Located> =
                rest.split_whitespace().map(|t| (t.to_string(), n, column_of(line, t))).collect();
            let duplicate = match h {
                "states:" => states.replace((tokens, n)).is_some(),
                "final:" => finals.replace(tokens).is_some(),
                "start:" => match tokens.as_slice() {
                    [one] => start.replace(one.clone()).is_some(),
                    _ => return Err(ParseError::new(n, column_of(line, body), "`start:` takes exactly one state")),
                },
                _ => {
                    for (t, l, c) in tokens {
                        alphabet.insert(
                            single_symbol(&t).ok_or_else(|| ParseError::new(l, c, format!("invalid symbol {t:?}")))?,
                        );
                    }
                    false
                }
            };
            if duplicate {
                return Err(ParseError::new(n, column_of(line, body), format!("duplicate `{h}` line")));
            }
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let [p, label, q] = tokens.as_slice() else {
            return Err(ParseError::new(
                n,
                column_of(line, body),
                "expected a header line or `<state> <symbol|eps> <state>`",
            ));
        };
        let label = if *label == EPS {
            None
        } else {
            let s = single_symbol(label)
                .ok_or_else(|| ParseError::new(n, column_of(line, label), format!("invalid symbol {label:?}")))?;
            alphabet.insert(s);
            Some(s)
        };
        edges.push(((p.to_string(), n, column_of(line, p)), label, (q.to_string(), n, column_of(line, q))));
    }

    let Some((states, states_line)) = states else {
        return Err(ParseError::new(1, 1, "missing `states:` line"));
    };
    let mut index: BTreeMap<String, StateId> = BTreeMap::new();
    for (i, (name, l, c)) in states.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(ParseError::new(*l, *c, format!("duplicate state {name:?}")));
        }
    }
    if states.is_empty() {
        return Err(ParseError::new(states_line, 1, "no states declared"));
    }
    let lookup = |(name, l, c): &Located| {
        index.get(name).copied().ok_or_else(|| ParseError::new(*l, *c, format!("undeclared state {name:?}")))
    };
    let Some(start) = start else {
        return Err(ParseError::new(1, 1, "missing `start:` line"));
    };
    let start = lookup(&start)?;
    let finals = finals.unwrap_or_default().iter().map(lookup).collect::<Result<BTreeSet<_>, _>>()?;
    let mut transitions = BTreeSet::new();
    for (p, label, q) in &edges {
        transitions.insert((lookup(p)?, *label, lookup(q)?));
    }
    let names = states.into_iter().map(|(name, _, _)| name).collect();
    Nfa::new(names, alphabet, transitions, start, finals).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

fn single_symbol(token: &str) -> Option<Symbol> {
    let mut chars = token.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Symbol::new(c),
        _ => None,
    }
}

/// Canonical text. `header` lines are emitted as comments first.
pub fn write_nfa(m: &Nfa, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        out.push_str(&format!("# {h}\n"));
    }
    out.push_str(&format!("states: {}\n", m.names.join(" ")));
    out.push_str(&format!("start: {}\n", m.names[m.start]));
    let finals: Vec<&str> = m.finals.iter().map(|&f| m.names[f].as_str()).collect();
    out.push_str(&format!("final: {}\n", finals.join(" ")).replace(": \n", ":\n"));
    let labelled: BTreeSet<Symbol> = m.transitions.iter().filter_map(|&(_, l, _)| l).collect();
    if m.alphabet.iter().any(|a| !labelled.contains(a)) {
        let syms: Vec<String> = m.alphabet.iter().map(|a| a.to_string()).collect();
        out.push_str(&format!("alphabet: {}\n", syms.join(" ")));
    }
    for &(p, l, q) in &m.transitions {
        let label = l.map(|a| a.to_string()).unwrap_or_else(|| EPS.into());
        out.push_str(&format!("{} {label} {}\n", m.names[p], m.names[q]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn round_trip() {
        let m = a_star_b();
        let text = write_nfa(&m, &["mode: test".into()]);
        assert_eq!(text, "# mode: test\nstates: p0 p1\nstart: p0\nfinal: p1\np0 a p0\np0 b p1\n");
        assert_eq!(parse_nfa(&text).unwrap(), m);
    }

    #[test]
    fn epsilon_and_extra_alphabet() {
        let src = "states: s t\nstart: s\nfinal:\nalphabet: z\ns eps t\n";
        let m = parse_nfa(src).unwrap();
        assert!(m.finals().is_empty());
        assert_eq!(m.transitions().len(), 1);
        assert_eq!(parse_nfa(&write_nfa(&m, &[])).unwrap(), m);
        assert_eq!(write_nfa(&m, &[]), src);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_nfa("states: p\nstart: p\np a q\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 5));
        let e = parse_nfa("states: p\nstart: p\np ab p\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = parse_nfa("states: p p\nstart: p\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 11));
        let e = parse_nfa("start: p\n").unwrap_err();
        assert!(e.message.contains("states"));
        let e = parse_nfa("states: p\nstart: p\np a\n").unwrap_err();
        assert_eq!(e.line, 3);
    }
}
