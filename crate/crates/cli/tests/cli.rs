use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gensplice::automata::format::parse_nfa;
use gensplice::grammar::format::parse_grammar;
use tempfile::TempDir;

const G1: &str = "start: S1\nS1 -> a S1\nS1 -> b\n";
const G2: &str = "start: S2\nS2 -> b S2\nS2 -> a\n";
const M1: &str = "states: p0 p1\nstart: p0\nfinal: p1\np0 a p0\np0 b p1\n";
const M2: &str = "states: r0 r1\nstart: r0\nfinal: r1\nr0 b r0\nr0 a r1\n";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: TempDir::new().unwrap() }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn gensplice(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gensplice")).args(args).current_dir(cwd).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn content(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn paper_mode_assembly_lists_the_worked_productions() {
    let ws = Workspace::new();
    ws.file("g1.gr", G1);
    ws.file("g2.gr", G2);
    let o = gensplice(&["assemble-grammar", "g1.gr", "g2.gr", "--mode", "paper", "-o", "out.gr"], ws.dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(ws.path("out.gr")).unwrap();
    assert!(text.contains("# config: command=assemble-grammar mode=PAPER"));
    assert!(text.contains("# input: g1.gr sha256:"));
    assert!(text.contains("start aliasing"));
    let g = parse_grammar(&text).unwrap();
    let rules: Vec<String> = g.productions().iter().map(|p| p.to_string()).collect();
    for lhs in ["S1", "S2"] {
        let rhs: Vec<&str> = rules.iter().filter_map(|r| r.strip_prefix(&format!("{lhs} -> "))).collect();
        assert_eq!(rhs, ["a", "a S1", "b", "b S2"], "{lhs}");
    }
}

#[test]
fn enumerate_lists_words_in_canonical_order() {
    let ws = Workspace::new();
    ws.file("g1.gr", G1);
    let o = gensplice(&["enumerate", "g1.gr", "--max-len", "3"], ws.dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(content(&stdout(&o)), ["b", "ab", "aab"]);
}

#[test]
fn enumerate_reads_automata_and_general_grammars() {
    let ws = Workspace::new();
    ws.file("m1.nfa", M1);
    ws.file("lr.cfg", "start: E\nE -> E + T\nE -> T\nT -> x\n");
    let o = gensplice(&["enumerate", "m1.nfa", "--max-len", "2"], ws.dir.path());
    assert_eq!(content(&stdout(&o)), ["b", "ab"]);
    let o = gensplice(&["enumerate", "lr.cfg", "--max-len", "5"], ws.dir.path());
    assert_eq!(content(&stdout(&o)), ["x", "x+x", "x+x+x"]);
}

#[test]
fn paper_mode_audit_fails_with_the_multi_crossover_witness() {
    let ws = Workspace::new();
    ws.file("g1.gr", G1);
    ws.file("g2.gr", G2);
    let args = ["audit", "--g1", "g1.gr", "--g2", "g2.gr", "--max-len", "10", "--format", "json"];
    let o = gensplice(&args, ws.dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["config"]["parent_depth"], 14);
    assert_eq!(doc["config"]["seed"], 0);
    let report = &doc["reports"][0];
    assert_eq!(report["claim"], "THM_GRAMMAR_EQ");
    assert_eq!(report["verdict"], "FAILS");
    let words: Vec<&str> =
        report["counterexamples"].as_array().unwrap().iter().map(|c| c["word"].as_str().unwrap()).collect();
    assert!(words.contains(&"abab"), "{words:?}");
}

#[test]
fn single_crossover_audit_succeeds() {
    let ws = Workspace::new();
    ws.file("g1.gr", G1);
    ws.file("g2.gr", G2);
    let o = gensplice(&["audit", "--g1", "g1.gr", "--g2", "g2.gr", "--mode", "single"], ws.dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("THM_GRAMMAR_EQ g1.gr|g2.gr [SINGLE_CROSSOVER]: HOLDS_WITHIN_BOUNDS"));
}

#[test]
fn automata_assembly_and_audit() {
    let ws = Workspace::new();
    ws.file("m1.nfa", M1);
    ws.file("m2.nfa", M2);
    let o = gensplice(&["assemble-nfa", "m1.nfa", "m2.nfa", "--mode", "single", "-o", "out.nfa"], ws.dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(ws.path("out.nfa")).unwrap();
    assert!(text.starts_with("# config: command=assemble-nfa mode=SINGLE_CROSSOVER"));
    let m = parse_nfa(&text).unwrap();
    assert!(m.accepts(&"aaba".into()));
    assert!(!m.accepts(&"abab".into()));

    let o = gensplice(&["audit", "--m1", "m1.nfa", "--m2", "m2.nfa", "--format", "json"], ws.dir.path());
    assert_eq!(o.status.code(), Some(2));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["reports"][0]["counterexamples"][0]["word"], "abb");
}

#[test]
fn word_list_commands() {
    let ws = Workspace::new();
    ws.file("l1.txt", "ab\n");
    ws.file("l2.txt", "# second\nba\n");
    let o = gensplice(&["gsa", "l1.txt", "l2.txt"], ws.dir.path());
    assert_eq!(content(&stdout(&o)), ["a", "b", "ab", "ba", "aba", "bab"]);
    let o = gensplice(&["splice", "l1.txt", "l2.txt", "--rule", "a#b$b#a"], ws.dir.path());
    assert_eq!(content(&stdout(&o)), ["aa", "bb"]);
    let o = gensplice(&["audit", "--l1", "l1.txt", "--l2", "l2.txt"], ws.dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("THM1_GS_EQ_GSA l1.txt|l2.txt: HOLDS_EXACTLY"));
}

#[test]
fn gnf_conversion_emits_greibach_form() {
    let ws = Workspace::new();
    ws.file("lr.cfg", "start: E\nE -> E + T\nE -> T\nT -> x\n");
    let o = gensplice(&["gnf", "lr.cfg"], ws.dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("# class: GNF"));
    parse_grammar(&text).unwrap();
}

#[test]
fn parse_errors_name_file_line_and_column() {
    let ws = Workspace::new();
    ws.file("bad.gr", "start: S\nS -> a S\nS - b\n");
    ws.file("bad.nfa", "states: p\nstart: p\nfinal: p\np a q\n");
    let o = gensplice(&["enumerate", "bad.gr"], ws.dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.gr:3:1:"), "{}", stderr(&o));
    let o = gensplice(&["enumerate", "bad.nfa"], ws.dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.nfa:4:5:"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_with_one() {
    let ws = Workspace::new();
    ws.file("g1.gr", G1);
    assert_eq!(gensplice(&["--help"], ws.dir.path()).status.code(), Some(0));
    assert_eq!(gensplice(&["frobnicate"], ws.dir.path()).status.code(), Some(1));
    assert_eq!(gensplice(&["audit"], ws.dir.path()).status.code(), Some(1));
    let o = gensplice(&["enumerate", "g1.gr", "--max-len", "0"], ws.dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--max-len"));
    let o = gensplice(&["enumerate", "g1.gr", "--max-len", "5", "--parent-depth", "3"], ws.dir.path());
    assert!(stderr(&o).contains("--parent-depth"));
    assert_eq!(gensplice(&["enumerate", "missing.gr"], ws.dir.path()).status.code(), Some(1));
}

#[test]
fn suite_reruns_are_byte_identical() {
    let ws = Workspace::new();
    let args = ["audit", "--suite", "--format", "json", "--max-len", "6", "--seed", "7"];
    let (a, b) = (gensplice(&args, ws.dir.path()), gensplice(&args, ws.dir.path()));
    assert_eq!(a.status.code(), Some(2));
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["config"]["seed"], 7);
    assert!(doc["index"]["tallies"]["THM1_GS_EQ_GSA"].is_object());
    assert!(doc["reports"].as_array().unwrap().iter().all(|r| r["elapsed_ms"].is_null()));
}
