//! Plain-text rendering of configuration echoes and audit reports.

use std::fmt::Write as _;

use gensplice::verify::{AuditReport, Index};

use crate::Echo;

/// Configuration echo as comment bodies, one per line.
pub fn echo_lines(e: &Echo) -> Vec<String> {
    let mut config = format!("config: command={}", e.command);
    if let Some(mode) = e.mode {
        let _ = write!(config, " mode={mode}");
    }
    let parents = serde_json::to_value(e.parents).expect("policy serializes");
    let format = serde_json::to_value(e.format).expect("format serializes");
    let _ = write!(
        config,
        " parents={} max_len={} parent_depth={} seed={} format={} timings={}",
        parents.as_str().unwrap_or_default(),
        e.max_len,
        e.parent_depth,
        e.seed,
        format.as_str().unwrap_or_default(),
        e.timings
    );
    let mut lines = vec![config];
    lines.extend(e.inputs.iter().map(|i| format!("input: {} sha256:{}", i.path, i.digest)));
    lines
}

/// The echo as `#` comment lines, valid in every file format.
pub fn echo_header(e: &Echo) -> String {
    echo_lines(e).iter().map(|l| format!("# {l}\n")).collect()
}

pub fn index(ix: &Index) -> String {
    let mut out = format!("reports: {}\n", ix.reports);
    for (claim, t) in &ix.tallies {
        let _ = writeln!(
            out,
            "{claim}: holds_exactly={} holds_within_bounds={} fails={}",
            t.holds_exactly, t.holds_within_bounds, t.fails
        );
    }
    out
}

pub fn report(r: &AuditReport) -> String {
    let mut out = format!("{} {}", r.claim, r.label);
    if let Some(mode) = r.mode {
        let _ = write!(out, " [{mode}]");
    }
    let method = serde_json::to_value(r.method).expect("method serializes");
    let _ = write!(out, ": {} by {}", r.verdict, method.as_str().unwrap_or_default());
    if let Some(n) = r.bounds.max_len {
        let _ = write!(out, " max_len={n}");
    }
    if let Some(p) = r.bounds.parent_depth {
        let _ = write!(out, " parent_depth={p}");
    }
    if let Some(s) = r.bounds.seed {
        let _ = write!(out, " seed={s}");
    }
    out.push('\n');
    if !r.flags.is_empty() {
        let _ = writeln!(out, "  flags: {}", r.flags.join(", "));
    }
    for c in &r.counterexamples {
        let _ = writeln!(out, "  {} {}: {}", c.side, c.word.to_token(), c.trace);
    }
    out
}
