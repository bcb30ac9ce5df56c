//! `gensplice` command-line front end.
//!
//! Exit status: 0 on success, 1 on usage or parse errors, 2 when an audit ran
//! and some claim FAILS.

mod render;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use gensplice::automata::format::{parse_nfa, write_nfa};
use gensplice::automata::{assemble_nfas, enumerate_nfa, single_crossover_nfa, Nfa};
use gensplice::format::{digest, parse_word_list, write_word_list, ParseError};
use gensplice::grammar::format::{parse_cfg, parse_grammar, write_grammar};
use gensplice::grammar::{
    assemble_grammars, cfg_to_gnf, crossover_grammar, enumerate_cfg, enumerate_grammar, AssemblyMode, GrammarClass,
    HeadNormalGrammar,
};
use gensplice::verify::{
    audit_automata_assembly, audit_fin_fin, audit_grammar_assembly, audit_gs_eq_gsa, audit_observation, run_suite,
    AuditConfig, AuditError, AuditReport, Index, DEFAULT_MAX_LEN, DEFAULT_SEED, DEFAULT_SLACK,
};
use gensplice::{canonical_rules, gs_finite, gsa_finite_with, FiniteLanguage, ParentPolicy, SplicingRule};

#[derive(Parser, Debug)]
#[command(
    name = "gensplice",
    version,
    about = "Generalized splicing and self-assembly of words, grammars and automata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Debug)]
struct Options {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Assembly mode.
    #[arg(long, value_enum, global = true)]
    mode: Option<Mode>,
    /// Seed for randomized suites.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    /// Word-length bound for enumerations and audits.
    #[arg(long, default_value_t = DEFAULT_MAX_LEN, global = true)]
    max_len: usize,
    /// Parent-slice depth for audits [default: max-len + 4].
    #[arg(long, global = true)]
    parent_depth: Option<usize>,
    /// When parent words belong to a self-assembly.
    #[arg(long, value_enum, default_value_t = Parents::Shared, global = true)]
    parents: Parents,
    /// Record wall time in reports (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timings: bool,
    /// Write to this file instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Self-assembly of two word lists.
    Gsa { l1: PathBuf, l2: PathBuf },
    /// Splicing of two word lists under the given rules (canonical rules if none).
    Splice {
        l1: PathBuf,
        l2: PathBuf,
        /// Rule literal `alpha#beta$alpha2#beta2`; repeatable.
        #[arg(long = "rule")]
        rules: Vec<String>,
    },
    /// Assemble two head-normal grammars.
    AssembleGrammar { g1: PathBuf, g2: PathBuf },
    /// Assemble two NFAs.
    AssembleNfa { m1: PathBuf, m2: PathBuf },
    /// Words of a grammar or NFA file up to --max-len.
    Enumerate { input: PathBuf },
    /// Convert an ε-free context-free grammar to Greibach normal form.
    Gnf { input: PathBuf },
    /// Audit claims on word lists, grammars, NFAs, or the built-in suite.
    Audit(AuditArgs),
}

#[derive(Args, Debug)]
struct AuditArgs {
    /// First word list.
    #[arg(long, requires = "l2", conflicts_with_all = ["g1", "m1", "suite"])]
    l1: Option<PathBuf>,
    /// Second word list.
    #[arg(long, requires = "l1")]
    l2: Option<PathBuf>,
    /// First head-normal grammar.
    #[arg(long, requires = "g2", conflicts_with_all = ["m1", "suite"])]
    g1: Option<PathBuf>,
    /// Second head-normal grammar.
    #[arg(long, requires = "g1")]
    g2: Option<PathBuf>,
    /// First NFA.
    #[arg(long, requires = "m2", conflicts_with = "suite")]
    m1: Option<PathBuf>,
    /// Second NFA.
    #[arg(long, requires = "m1")]
    m2: Option<PathBuf>,
    /// Run every claim audit over the curated and seeded random inputs.
    #[arg(long)]
    suite: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Paper,
    Single,
}

impl From<Mode> for AssemblyMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Paper => AssemblyMode::Paper,
            Mode::Single => AssemblyMode::SingleCrossover,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Parents {
    Shared,
    Always,
}

impl From<Parents> for ParentPolicy {
    fn from(p: Parents) -> Self {
        match p {
            Parents::Shared => ParentPolicy::SharedSymbol,
            Parents::Always => ParentPolicy::Always,
        }
    }
}

/// The fully resolved configuration echoed at the top of every output.
#[derive(Serialize, Debug)]
struct Echo {
    command: &'static str,
    inputs: Vec<InputEcho>,
    /// `None` only for suite runs without `--mode`, which cover both modes.
    mode: Option<AssemblyMode>,
    parents: ParentPolicy,
    max_len: usize,
    parent_depth: usize,
    seed: u64,
    format: Format,
    timings: bool,
}

#[derive(Serialize, Debug)]
struct InputEcho {
    path: String,
    digest: String,
}

/// A parsed input file with its echo entry.
struct Input {
    label: String,
    text: String,
    echo: InputEcho,
}

enum Outcome {
    Success,
    ClaimFails,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ClaimFails) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            let falsified = matches!(e.downcast_ref::<AuditError>(), Some(AuditError::HardInvariant { .. }));
            ExitCode::from(if falsified { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let opts = &cli.opts;
    if opts.max_len == 0 {
        bail!("--max-len must be at least 1");
    }
    let parent_depth = opts.parent_depth.unwrap_or(opts.max_len + DEFAULT_SLACK);
    if parent_depth < opts.max_len {
        bail!("--parent-depth {parent_depth} is below --max-len {}", opts.max_len);
    }
    let audit_cfg = AuditConfig {
        max_len: opts.max_len,
        parent_depth,
        seed: opts.seed,
        parents: opts.parents.into(),
        timings: opts.timings,
    };
    let echo = |command: &'static str, inputs: &[&Input], mode: Option<AssemblyMode>| Echo {
        command,
        inputs: inputs.iter().map(|i| InputEcho { path: i.echo.path.clone(), digest: i.echo.digest.clone() }).collect(),
        mode,
        parents: audit_cfg.parents,
        max_len: opts.max_len,
        parent_depth,
        seed: opts.seed,
        format: opts.format,
        timings: opts.timings,
    };
    let mode: AssemblyMode = opts.mode.map(Into::into).unwrap_or_default();

    match &cli.command {
        Command::Gsa { l1, l2 } => {
            let (i1, i2) = (read(l1)?, read(l2)?);
            let (w1, w2) = (words(&i1)?, words(&i2)?);
            let out = gsa_finite_with(&w1, &w2, audit_cfg.parents);
            let e = echo("gsa", &[&i1, &i2], None);
            emit_words(opts, &e, &out, json!({}))?;
        }
        Command::Splice { l1, l2, rules } => {
            let (i1, i2) = (read(l1)?, read(l2)?);
            let (w1, w2) = (words(&i1)?, words(&i2)?);
            let rules: Vec<SplicingRule> = if rules.is_empty() {
                canonical_rules(&w1, &w2).into_iter().collect()
            } else {
                rules.iter().map(|r| r.parse().with_context(|| format!("--rule {r:?}"))).collect::<Result<_>>()?
            };
            let out = gs_finite(&w1, &w2, &rules);
            let e = echo("splice", &[&i1, &i2], None);
            let shown: Vec<String> = rules.iter().map(ToString::to_string).collect();
            emit_words(opts, &e, &out, json!({ "rules": shown }))?;
        }
        Command::AssembleGrammar { g1, g2 } => {
            let (i1, i2) = (read(g1)?, read(g2)?);
            let (h1, h2) = (head_normal(&i1)?, head_normal(&i2)?);
            let g = match mode {
                AssemblyMode::Paper => assemble_grammars(&h1, &h2, mode)?,
                AssemblyMode::SingleCrossover => crossover_grammar(&h1, &h2, audit_cfg.parents)?,
            };
            let e = echo("assemble-grammar", &[&i1, &i2], Some(mode));
            emit_grammar(opts, &e, &g)?;
        }
        Command::AssembleNfa { m1, m2 } => {
            let (i1, i2) = (read(m1)?, read(m2)?);
            let (n1, n2) = (nfa(&i1)?, nfa(&i2)?);
            let m = match mode {
                AssemblyMode::Paper => assemble_nfas(&n1, &n2, mode),
                AssemblyMode::SingleCrossover => single_crossover_nfa(&n1, &n2, audit_cfg.parents),
            };
            let e = echo("assemble-nfa", &[&i1, &i2], Some(mode));
            emit_nfa(opts, &e, &m)?;
        }
        Command::Enumerate { input } => {
            let i = read(input)?;
            let out = if looks_like_nfa(&i.text) {
                enumerate_nfa(&nfa(&i)?, opts.max_len)
            } else {
                enumerate_any_grammar(&i, opts.max_len)?
            };
            let e = echo("enumerate", &[&i], None);
            emit_words(opts, &e, &out, json!({}))?;
        }
        Command::Gnf { input } => {
            let i = read(input)?;
            let cfg = parse_cfg(&i.text).map_err(|err| located(&i, err))?;
            let g = cfg_to_gnf(&cfg).with_context(|| format!("{}: GNF conversion", i.label))?;
            let e = echo("gnf", &[&i], None);
            emit_grammar(opts, &e, &g)?;
        }
        Command::Audit(args) => return audit(opts, args, &audit_cfg, mode, echo),
    }
    Ok(Outcome::Success)
}

fn audit<'a>(
    opts: &Options,
    args: &AuditArgs,
    cfg: &AuditConfig,
    mode: AssemblyMode,
    echo: impl Fn(&'static str, &[&Input], Option<AssemblyMode>) -> Echo + 'a,
) -> Result<Outcome> {
    let pair = |a: &Input, b: &Input| format!("{}|{}", a.label, b.label);
    let (e, reports, index) = if let (Some(l1), Some(l2)) = (&args.l1, &args.l2) {
        let (i1, i2) = (read(l1)?, read(l2)?);
        let (w1, w2) = (words(&i1)?, words(&i2)?);
        let label = pair(&i1, &i2);
        let mut reports = vec![audit_gs_eq_gsa(&w1, &w2, cfg)?, audit_fin_fin(&w1, &w2, cfg)?];
        reports.iter_mut().for_each(|r| r.label = label.clone());
        (echo("audit", &[&i1, &i2], None), reports, None)
    } else if let (Some(g1), Some(g2)) = (&args.g1, &args.g2) {
        let (i1, i2) = (read(g1)?, read(g2)?);
        let (h1, h2) = (head_normal(&i1)?, head_normal(&i2)?);
        let label = pair(&i1, &i2);
        let mut reports = vec![audit_grammar_assembly(&h1, &h2, mode, cfg)?];
        if h1.satisfies(GrammarClass::RightLinear) && h2.satisfies(GrammarClass::RightLinear) {
            reports.push(audit_observation(&h1, &h2, mode, cfg)?);
        }
        reports.iter_mut().for_each(|r| r.label = label.clone());
        (echo("audit", &[&i1, &i2], Some(mode)), reports, None)
    } else if let (Some(m1), Some(m2)) = (&args.m1, &args.m2) {
        let (i1, i2) = (read(m1)?, read(m2)?);
        let (n1, n2) = (nfa(&i1)?, nfa(&i2)?);
        let mut report = audit_automata_assembly(&n1, &n2, mode, cfg)?;
        report.label = pair(&i1, &i2);
        (echo("audit", &[&i1, &i2], Some(mode)), vec![report], None)
    } else if args.suite {
        let run = run_suite(cfg)?;
        let wanted: Option<AssemblyMode> = opts.mode.map(Into::into);
        let reports: Vec<AuditReport> =
            run.reports.into_iter().filter(|r| wanted.is_none() || r.mode.is_none() || r.mode == wanted).collect();
        let index = Index::of(&reports);
        (echo("audit", &[], wanted), reports, Some(index))
    } else {
        bail!("audit needs one of --l1/--l2, --g1/--g2, --m1/--m2 or --suite");
    };

    let fails = reports.iter().any(|r| r.verdict == gensplice::verify::Verdict::Fails);
    let body = match opts.format {
        Format::Json => {
            let mut doc = json!({ "config": e, "reports": reports });
            if let Some(index) = &index {
                doc["index"] = serde_json::to_value(index)?;
            }
            pretty(&doc)
        }
        Format::Text => {
            let mut out = render::echo_header(&e);
            if let Some(index) = &index {
                out.push_str(&render::index(index));
            }
            for r in &reports {
                out.push_str(&render::report(r));
            }
            out
        }
    };
    write_out(opts, &body)?;
    Ok(if fails { Outcome::ClaimFails } else { Outcome::Success })
}

fn read(path: &Path) -> Result<Input> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let label =
        path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string());
    let echo = InputEcho { path: path.display().to_string(), digest: digest(&text) };
    Ok(Input { label, text, echo })
}

/// `file:line:column: message`.
fn located(input: &Input, err: ParseError) -> anyhow::Error {
    anyhow!("{}:{}:{}: {}", input.echo.path, err.line, err.column, err.message)
}

fn words(i: &Input) -> Result<FiniteLanguage> {
    parse_word_list(&i.text).map_err(|e| located(i, e))
}

fn head_normal(i: &Input) -> Result<HeadNormalGrammar> {
    parse_grammar(&i.text).map_err(|e| located(i, e))
}

fn nfa(i: &Input) -> Result<Nfa> {
    parse_nfa(&i.text).map_err(|e| located(i, e))
}

/// Head-normal grammars use the derivation search; other context-free
/// grammars fall back to fixed-point enumeration.
fn enumerate_any_grammar(i: &Input, max_len: usize) -> Result<FiniteLanguage> {
    match parse_grammar(&i.text) {
        Ok(g) => Ok(enumerate_grammar(&g, max_len)),
        Err(_) => Ok(enumerate_cfg(&parse_cfg(&i.text).map_err(|e| located(i, e))?, max_len)),
    }
}

fn looks_like_nfa(text: &str) -> bool {
    text.lines().map(str::trim_start).any(|l| l.starts_with("states:"))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn emit_words(opts: &Options, e: &Echo, l: &FiniteLanguage, extra: Value) -> Result<()> {
    let body = match opts.format {
        Format::Json => {
            let mut doc =
                json!({ "config": e, "size": l.len(), "words": l.iter().map(|w| w.to_token()).collect::<Vec<_>>() });
            if let (Value::Object(doc), Value::Object(extra)) = (&mut doc, extra) {
                doc.extend(extra);
            }
            pretty(&doc)
        }
        Format::Text => render::echo_header(e) + &write_word_list(l),
    };
    write_out(opts, &body)
}

fn emit_grammar(opts: &Options, e: &Echo, g: &HeadNormalGrammar) -> Result<()> {
    let text = render::echo_header(e) + &write_grammar(g);
    let body = match opts.format {
        Format::Json => pretty(&json!({ "config": e, "class": g.class(), "grammar": text })),
        Format::Text => text,
    };
    write_out(opts, &body)
}

fn emit_nfa(opts: &Options, e: &Echo, m: &Nfa) -> Result<()> {
    let text = write_nfa(m, &render::echo_lines(e));
    let body = match opts.format {
        Format::Json => pretty(&json!({ "config": e, "states": m.num_states(), "nfa": text })),
        Format::Text => text,
    };
    write_out(opts, &body)
}

fn write_out(opts: &Options, body: &str) -> Result<()> {
    match &opts.output {
        Some(path) => fs::write(path, body).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).context("cannot write to standard output")
        }
    }
}
