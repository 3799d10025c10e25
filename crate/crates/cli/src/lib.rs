//! Command-line front end for the `partseq` library.
//!
//! Exit codes: 0 success, 1 semantic negative (no extension, no stable
//! expansion, inconsistent statement set, failed threshold or check,
//! undefined conditional), 2 parse error, 3 usage or resource error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use partseq::ael::AelPremises;
use partseq::default_logic::DefaultTheory;
use partseq::logic::enumerate_worlds;
use partseq::poss::{build_poss_sequence, check_poss_sequence, necessity, possibility, PossBuild, PossibilisticKB};
use partseq::prob::{cond_prob, condition, threshold, threshold_ratios, SampleSpace};
use partseq::syntax::{parse_formula, parse_kb, Kb, KbDocument, KbKind};
use partseq::{
    preference_view, CheckReport, Error, Formula, Limits, Mode, PartitionSequence, Vocabulary, Weight, World,
};

#[derive(Parser, Debug)]
#[command(name = "partseq", version, about = "Partition-sequence semantics for nonmonotonic and uncertain reasoning")]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Evaluate sequence conditions against the class being formed and divide
    /// threshold ratios by the total weight.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Default theories (`.dl`).
    #[command(subcommand)]
    Default(LogicCommand),
    /// Autoepistemic premises (`.ael`).
    #[command(subcommand)]
    Ael(AelCommand),
    /// Weighted sample spaces (`.prob`).
    #[command(subcommand)]
    Prob(ProbCommand),
    /// Possibilistic statement sets (`.poss`).
    #[command(subcommand)]
    Poss(PossCommand),
    /// List the worlds of a knowledge base (kind taken from the extension).
    Worlds { kb: PathBuf },
    /// Pretty-print a sequence document with provenance and preference chain.
    Explain { sequence: PathBuf },
}

#[derive(Subcommand, Debug)]
enum LogicCommand {
    /// List the extensions.
    Extensions { kb: PathBuf },
    /// Build one partition sequence per extension and rule order.
    Sequences { kb: PathBuf },
    /// Check a sequence document against the theory.
    Check { kb: PathBuf, sequence: PathBuf },
}

#[derive(Subcommand, Debug)]
enum AelCommand {
    /// List the consistent stable expansions.
    Expansions { kb: PathBuf },
    /// Build one partition sequence per expansion and premise order.
    Sequences { kb: PathBuf },
    /// Check a sequence document against the premises.
    Check { kb: PathBuf, sequence: PathBuf },
}

#[derive(Args, Debug)]
struct Conditions {
    kb: PathBuf,
    /// A condition; repeat in order.
    #[arg(long = "on", value_name = "FORMULA", required = true)]
    on: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum ProbCommand {
    /// Condition on the given formulas in order.
    Condition(Conditions),
    /// Threshold on the given formulas in order.
    Threshold {
        #[command(flatten)]
        conds: Conditions,
        #[arg(long, value_name = "EPSILON")]
        eps: String,
    },
    /// Conditional (or, with --eps, thresholded) probability of a formula.
    Query {
        #[command(flatten)]
        conds: Conditions,
        #[arg(long, value_name = "EPSILON")]
        eps: Option<String>,
        #[arg(long, value_name = "FORMULA")]
        query: String,
    },
}

#[derive(Subcommand, Debug)]
enum PossCommand {
    /// Build the possibility partition sequence.
    Build { kb: PathBuf },
    /// Possibility and necessity of formulas.
    Query {
        kb: PathBuf,
        #[arg(long, value_name = "FORMULA", required = true)]
        query: Vec<String>,
    },
    /// Check a sequence document against the statement set.
    Check { kb: PathBuf, sequence: PathBuf },
}

/// A finished command: exit code plus what to print.
struct Outcome {
    code: i32,
    text: String,
    result: Value,
    sequences: Vec<PartitionSequence>,
}

impl Outcome {
    fn ok(text: String, result: Value, sequences: Vec<PartitionSequence>) -> Self {
        Outcome {
            code: 0,
            text,
            result,
            sequences,
        }
    }

    fn negative(text: String, result: Value, sequences: Vec<PartitionSequence>) -> Self {
        Outcome {
            code: 1,
            text,
            result,
            sequences,
        }
    }
}

/// An error that ends the command before it produces a result.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::Json(_) | Error::UnknownConstant(_) | Error::DuplicateConstant(_) | Error::Invalid(_) => 2,
            Error::UndefinedConditional | Error::BelowThreshold { .. } => 1,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

struct Ctx {
    mode: Mode,
    limits: Limits,
    inputs: serde_json::Map<String, Value>,
}

impl Ctx {
    fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    fn read(&mut self, key: &str, path: &Path) -> Run<String> {
        self.input(key, path.display().to_string());
        std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    }

    fn kb(&mut self, path: &Path, kind: KbKind) -> Run<KbDocument> {
        let text = self.read("kb", path)?;
        parse_kb(&text, kind).map_err(|e| Failure::parse(format!("{}:{e}", path.display())))
    }

    fn sequence(&mut self, path: &Path) -> Run<PartitionSequence> {
        let text = self.read("sequence", path)?;
        PartitionSequence::from_json_str(&text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
    }
}

fn formula(text: &str, vocab: &Arc<Vocabulary>, flag: &str) -> Run<Formula> {
    parse_formula(text, vocab).map_err(|e| Failure::parse(format!("{flag} `{text}`: {e}")))
}

fn weight(text: &str, flag: &str) -> Run<Weight> {
    text.parse()
        .map_err(|e| Failure::parse(format!("{flag}: {e}")))
}

fn default_theory(doc: KbDocument) -> DefaultTheory {
    match doc.body {
        Kb::Default(t) => t,
        _ => unreachable!("parsed as a default theory"),
    }
}

fn ael_premises(doc: KbDocument) -> AelPremises {
    match doc.body {
        Kb::Ael(a) => a,
        _ => unreachable!("parsed as autoepistemic premises"),
    }
}

fn sample_space(doc: KbDocument) -> SampleSpace {
    match doc.body {
        Kb::Prob(s) => s,
        _ => unreachable!("parsed as a sample space"),
    }
}

fn poss_kb(doc: KbDocument) -> PossibilisticKB {
    match doc.body {
        Kb::Poss(p) => p,
        _ => unreachable!("parsed as a statement set"),
    }
}

fn render_worlds(ws: &[World], vocab: &Vocabulary) -> String {
    if ws.is_empty() {
        return "(empty)".into();
    }
    ws.iter().map(|w| w.render(vocab)).collect::<Vec<_>>().join(" ")
}

fn render_sequence(seq: &PartitionSequence) -> String {
    let weighted = seq.worlds().any(|w| !w.weight.is_one());
    let mut s = String::new();
    for (i, class) in seq.classes().iter().enumerate() {
        s.push_str(&format!("  W{i}: {}", render_worlds(class, &seq.vocab)));
        if weighted {
            s.push_str(&format!("  [weight {}]", seq.class_weight(i)));
        }
        if let Some(p) = &seq.provenance()[i] {
            s.push_str(&format!("  <- {p}"));
        }
        s.push('\n');
    }
    s
}

fn render_report(report: &CheckReport) -> String {
    if report.is_ok() {
        return "valid\n".into();
    }
    let mut s = String::from("invalid\n");
    for v in &report.violations {
        s.push_str(&format!("  {v}\n"));
    }
    s
}

fn report_json(report: &CheckReport) -> Value {
    json!({
        "valid": report.is_ok(),
        "violations": report.violations.iter().map(|v| json!({
            "clause": v.clause.to_string(),
            "class": v.class,
            "item": v.item,
            "detail": v.detail,
        })).collect::<Vec<_>>(),
    })
}

fn checked(report: CheckReport) -> Outcome {
    let text = render_report(&report);
    let result = report_json(&report);
    if report.is_ok() {
        Outcome::ok(text, result, vec![])
    } else {
        Outcome::negative(text, result, vec![])
    }
}

fn sequences_text(seqs: &[PartitionSequence], what: &str) -> String {
    let mut s = String::new();
    for (i, seq) in seqs.iter().enumerate() {
        s.push_str(&format!("sequence {} ({what} {})\n", i + 1, render_worlds(seq.last(), &seq.vocab)));
        s.push_str(&render_sequence(seq));
    }
    s
}

fn default_cmd(cmd: LogicCommand, ctx: &mut Ctx) -> Run<Outcome> {
    match cmd {
        LogicCommand::Extensions { kb } => {
            let t = default_theory(ctx.kb(&kb, KbKind::Default)?);
            let ext = t.compile(&ctx.limits)?.extensions();
            if ext.inconsistent_facts {
                return Ok(Outcome::negative(
                    "the facts are inconsistent; the only extension is the inconsistent theory\n".into(),
                    json!({ "extensions": [], "inconsistent_facts": true }),
                    vec![],
                ));
            }
            if ext.kernels.is_empty() {
                return Ok(Outcome::negative(
                    "no extension\n".into(),
                    json!({ "extensions": [], "inconsistent_facts": false }),
                    vec![],
                ));
            }
            let mut text = format!("{} extension(s)\n", ext.kernels.len());
            let mut list = Vec::new();
            for (i, k) in ext.kernels.iter().enumerate() {
                text.push_str(&format!("extension {}: models {}\n", i + 1, k.render()));
                list.push(json!(k.worlds().iter().map(|w| w.assignment.render(&t.vocab)).collect::<Vec<_>>()));
            }
            Ok(Outcome::ok(text, json!({ "extensions": list, "inconsistent_facts": false }), vec![]))
        }
        LogicCommand::Sequences { kb } => {
            let t = default_theory(ctx.kb(&kb, KbKind::Default)?);
            let seqs = t.compile(&ctx.limits)?.build_sequences()?;
            if seqs.is_empty() {
                return Ok(Outcome::negative("no extension, so no sequence\n".into(), json!({ "count": 0 }), vec![]));
            }
            let text = sequences_text(&seqs, "extension");
            Ok(Outcome::ok(text, json!({ "count": seqs.len() }), seqs))
        }
        LogicCommand::Check { kb, sequence } => {
            let t = default_theory(ctx.kb(&kb, KbKind::Default)?);
            let seq = ctx.sequence(&sequence)?;
            Ok(checked(t.compile(&ctx.limits)?.check(&seq, ctx.mode)?))
        }
    }
}

fn ael_cmd(cmd: AelCommand, ctx: &mut Ctx) -> Run<Outcome> {
    match cmd {
        AelCommand::Expansions { kb } => {
            let a = ael_premises(ctx.kb(&kb, KbKind::Ael)?);
            let e = a.compile(&ctx.limits)?.stable_expansions();
            let flag = json!(e.premises_inconsistent);
            if e.kernels.is_empty() {
                let mut text = String::from("no stable expansion\n");
                if e.premises_inconsistent {
                    text.push_str("the premises are propositionally inconsistent\n");
                }
                return Ok(Outcome::negative(
                    text,
                    json!({ "expansions": [], "premises_inconsistent": flag }),
                    vec![],
                ));
            }
            let mut text = format!("{} stable expansion(s)\n", e.kernels.len());
            let mut list = Vec::new();
            for (i, k) in e.kernels.iter().enumerate() {
                text.push_str(&format!("expansion {}: kernel models {}\n", i + 1, k.render()));
                list.push(json!(k.worlds().iter().map(|w| w.assignment.render(&a.vocab)).collect::<Vec<_>>()));
            }
            Ok(Outcome::ok(text, json!({ "expansions": list, "premises_inconsistent": flag }), vec![]))
        }
        AelCommand::Sequences { kb } => {
            let a = ael_premises(ctx.kb(&kb, KbKind::Ael)?);
            let seqs = a.compile(&ctx.limits)?.build_sequences()?;
            if seqs.is_empty() {
                return Ok(Outcome::negative(
                    "no stable expansion, so no sequence\n".into(),
                    json!({ "count": 0 }),
                    vec![],
                ));
            }
            let text = sequences_text(&seqs, "kernel");
            Ok(Outcome::ok(text, json!({ "count": seqs.len() }), seqs))
        }
        AelCommand::Check { kb, sequence } => {
            let a = ael_premises(ctx.kb(&kb, KbKind::Ael)?);
            let seq = ctx.sequence(&sequence)?;
            Ok(checked(a.compile(&ctx.limits)?.check(&seq, ctx.mode)?))
        }
    }
}

fn conditions(c: &Conditions, ctx: &mut Ctx) -> Run<(SampleSpace, Vec<Formula>)> {
    let space = sample_space(ctx.kb(&c.kb, KbKind::Prob)?);
    ctx.input("on", c.on.clone());
    let fs = c
        .on
        .iter()
        .map(|t| formula(t, &space.vocab, "--on"))
        .collect::<Run<Vec<_>>>()?;
    Ok((space, fs))
}

fn threshold_outcome(space: &SampleSpace, eps: &Weight, fs: &[Formula], mode: Mode) -> Run<Result<PartitionSequence, Outcome>> {
    match threshold(space, eps, fs, mode) {
        Ok(seq) => Ok(Ok(seq)),
        Err(Error::BelowThreshold {
            step,
            formula,
            ratio,
            epsilon,
        }) => {
            let text = format!(
                "below threshold at condition {step} (`{formula}`): ratio {ratio} exceeds epsilon {epsilon}\n"
            );
            Ok(Err(Outcome::negative(
                text,
                json!({ "accepted": false, "step": step, "formula": formula, "ratio": ratio, "epsilon": epsilon }),
                vec![],
            )))
        }
        Err(e) => Err(e.into()),
    }
}

fn prob_cmd(cmd: ProbCommand, ctx: &mut Ctx) -> Run<Outcome> {
    match cmd {
        ProbCommand::Condition(c) => {
            let (space, fs) = conditions(&c, ctx)?;
            let seq = condition(&space, &fs)?;
            let text = render_sequence(&seq);
            Ok(Outcome::ok(text, json!({ "classes": seq.classes().len() }), vec![seq]))
        }
        ProbCommand::Threshold { conds, eps } => {
            let (space, fs) = conditions(&conds, ctx)?;
            ctx.input("eps", eps.clone());
            let eps = weight(&eps, "--eps")?;
            let seq = match threshold_outcome(&space, &eps, &fs, ctx.mode)? {
                Ok(seq) => seq,
                Err(neg) => return Ok(neg),
            };
            let ratios: Vec<String> = threshold_ratios(&seq, ctx.mode)
                .into_iter()
                .map(|r| r.map_or_else(|| "undefined".into(), |r| r.to_string()))
                .collect();
            let mut text = render_sequence(&seq);
            text.push_str(&format!("ratios: {}\n", ratios.join(", ")));
            Ok(Outcome::ok(text, json!({ "accepted": true, "ratios": ratios }), vec![seq]))
        }
        ProbCommand::Query { conds, eps, query } => {
            let (space, fs) = conditions(&conds, ctx)?;
            ctx.input("query", query.clone());
            let psi = formula(&query, &space.vocab, "--query")?;
            let seq = match &eps {
                Some(e) => {
                    ctx.input("eps", e.clone());
                    let eps = weight(e, "--eps")?;
                    match threshold_outcome(&space, &eps, &fs, ctx.mode)? {
                        Ok(seq) => seq,
                        Err(neg) => return Ok(neg),
                    }
                }
                None => condition(&space, &fs)?,
            };
            match cond_prob(&seq, &psi) {
                Ok(p) => Ok(Outcome::ok(format!("{p}\n"), json!({ "probability": p.to_string() }), vec![seq])),
                Err(Error::UndefinedConditional) => Ok(Outcome::negative(
                    "undefined: the conditions have probability 0\n".into(),
                    json!({ "probability": Value::Null }),
                    vec![seq],
                )),
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn poss_build(kb: &PossibilisticKB, limits: &Limits) -> Run<Result<PartitionSequence, Outcome>> {
    Ok(match build_poss_sequence(kb, limits)? {
        PossBuild::Sequence(s) => Ok(s),
        PossBuild::Inconsistent(i) => Err(Outcome::negative(
            format!("inconsistent: {i}\n"),
            json!({ "consistent": false, "level": i.level, "formula": i.formula, "detail": i.detail }),
            vec![],
        )),
    })
}

fn poss_cmd(cmd: PossCommand, ctx: &mut Ctx) -> Run<Outcome> {
    match cmd {
        PossCommand::Build { kb } => {
            let p = poss_kb(ctx.kb(&kb, KbKind::Poss)?);
            match poss_build(&p, &ctx.limits)? {
                Ok(seq) => Ok(Outcome::ok(render_sequence(&seq), json!({ "consistent": true }), vec![seq])),
                Err(neg) => Ok(neg),
            }
        }
        PossCommand::Query { kb, query } => {
            let p = poss_kb(ctx.kb(&kb, KbKind::Poss)?);
            ctx.input("query", query.clone());
            let fs = query
                .iter()
                .map(|t| formula(t, &p.vocab, "--query"))
                .collect::<Run<Vec<_>>>()?;
            let seq = match poss_build(&p, &ctx.limits)? {
                Ok(seq) => seq,
                Err(neg) => return Ok(neg),
            };
            let mut text = String::new();
            let mut rows = Vec::new();
            for (t, f) in query.iter().zip(&fs) {
                let pi = possibility(&seq, f)?;
                let n = necessity(&seq, f)?;
                text.push_str(&format!("{t}: possibility {pi}, necessity {n}\n"));
                rows.push(json!({ "formula": t, "possibility": pi.to_string(), "necessity": n.to_string() }));
            }
            Ok(Outcome::ok(text, json!({ "queries": rows }), vec![seq]))
        }
        PossCommand::Check { kb, sequence } => {
            let p = poss_kb(ctx.kb(&kb, KbKind::Poss)?);
            let seq = ctx.sequence(&sequence)?;
            Ok(checked(check_poss_sequence(&p, &seq, &ctx.limits)?))
        }
    }
}

fn worlds_cmd(kb: &Path, ctx: &mut Ctx) -> Run<Outcome> {
    let kind = kb
        .extension()
        .and_then(|e| e.to_str())
        .and_then(KbKind::from_extension)
        .ok_or_else(|| Failure::usage(format!("{}: expected a .dl, .ael, .prob or .poss file", kb.display())))?;
    let doc = ctx.kb(kb, kind)?;
    let ws = match &doc.body {
        Kb::Prob(s) => s.worlds().to_vec(),
        _ => enumerate_worlds(&doc.vocab, &ctx.limits)?,
    };
    let lines: Vec<String> = ws.iter().map(|w| w.render(&doc.vocab)).collect();
    let mut text = lines.join("\n");
    text.push('\n');
    Ok(Outcome::ok(text, json!({ "worlds": lines }), vec![]))
}

fn explain_cmd(path: &Path, ctx: &mut Ctx) -> Run<Outcome> {
    let seq = ctx.sequence(path)?;
    let mut text = format!(
        "{} sequence over {{{}}}, l = {}\n",
        seq.kind,
        seq.vocab.names().join(", "),
        seq.l()
    );
    text.push_str(&render_sequence(&seq));
    text.push_str("preference chain (M_i = W_i and every later class; later is preferred):\n");
    let chain = preference_view(&seq);
    let mut models = Vec::new();
    for (i, m) in chain.models.iter().enumerate() {
        text.push_str(&format!("  M{i}: {}\n", render_worlds(m, &seq.vocab)));
        models.push(json!(m.iter().map(|w| w.assignment.render(&seq.vocab)).collect::<Vec<_>>()));
    }
    text.push_str(&format!("induced theory: models {}\n", render_worlds(seq.last(), &seq.vocab)));
    Ok(Outcome::ok(text, json!({ "preference_chain": models }), vec![seq]))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Default(LogicCommand::Extensions { .. }) => "default extensions",
        Command::Default(LogicCommand::Sequences { .. }) => "default sequences",
        Command::Default(LogicCommand::Check { .. }) => "default check",
        Command::Ael(AelCommand::Expansions { .. }) => "ael expansions",
        Command::Ael(AelCommand::Sequences { .. }) => "ael sequences",
        Command::Ael(AelCommand::Check { .. }) => "ael check",
        Command::Prob(ProbCommand::Condition(_)) => "prob condition",
        Command::Prob(ProbCommand::Threshold { .. }) => "prob threshold",
        Command::Prob(ProbCommand::Query { .. }) => "prob query",
        Command::Poss(PossCommand::Build { .. }) => "poss build",
        Command::Poss(PossCommand::Query { .. }) => "poss query",
        Command::Poss(PossCommand::Check { .. }) => "poss check",
        Command::Worlds { .. } => "worlds",
        Command::Explain { .. } => "explain",
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let name = command_name(&cli.command);
    let mut ctx = Ctx {
        mode: if cli.strict { Mode::Strict } else { Mode::Standard },
        limits: Limits::default(),
        inputs: serde_json::Map::new(),
    };
    if cli.strict {
        ctx.input("strict", true);
    }
    let outcome = match cli.command {
        Command::Default(c) => default_cmd(c, &mut ctx),
        Command::Ael(c) => ael_cmd(c, &mut ctx),
        Command::Prob(c) => prob_cmd(c, &mut ctx),
        Command::Poss(c) => poss_cmd(c, &mut ctx),
        Command::Worlds { kb } => worlds_cmd(&kb, &mut ctx),
        Command::Explain { sequence } => explain_cmd(&sequence, &mut ctx),
    };
    match outcome {
        Ok(o) => {
            let written = if cli.json {
                let doc = json!({
                    "command": name,
                    "inputs": Value::Object(ctx.inputs),
                    "result": o.result,
                    "sequences": o.sequences.iter().map(PartitionSequence::to_json).collect::<Vec<_>>(),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("JSON values serialize"))
            } else {
                write!(out, "{}", o.text)
            };
            if written.is_err() {
                return 3;
            }
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
