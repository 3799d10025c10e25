//! Line-oriented knowledge-base formats.
//!
//! Every format allows `#` comments, blank lines and an optional
//! `vocab: a, b, c` line fixing the constants and their order (required for
//! `.prob`). Without one, constants are numbered by first appearance.
//!
//! ```text
//! # .dl
//! fact: p -> q
//! rule d1: true : M p / p
//! # .ael
//! L p & ~L q -> r
//! # .prob
//! world p, ~q : 0.3
//! # .poss
//! poss 0.7 : p
//! ```

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use super::lexer::{lex, Tok};
use super::parser::{Names, Parser};
use super::ParseError;
use crate::ael::AelPremises;
use crate::default_logic::{DefaultRule, DefaultTheory};
use crate::logic::{Assignment, Formula, Vocabulary, World};
use crate::poss::PossibilisticKB;
use crate::prob::SampleSpace;
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KbKind {
    Default,
    Ael,
    Prob,
    Poss,
}

impl KbKind {
    /// `dl`, `ael`, `prob` or `poss`.
    pub fn from_extension(ext: &str) -> Option<KbKind> {
        match ext {
            "dl" => Some(KbKind::Default),
            "ael" => Some(KbKind::Ael),
            "prob" => Some(KbKind::Prob),
            "poss" => Some(KbKind::Poss),
            _ => None,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            KbKind::Default => "dl",
            KbKind::Ael => "ael",
            KbKind::Prob => "prob",
            KbKind::Poss => "poss",
        }
    }

    fn reserved(self) -> Option<&'static str> {
        match self {
            KbKind::Default => Some("M"),
            KbKind::Ael => Some("L"),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kb {
    Default(DefaultTheory),
    Ael(AelPremises),
    Prob(SampleSpace),
    Poss(PossibilisticKB),
}

/// Source line of each item, in file order. Items are labelled by rule id,
/// `fact N`, or their rendered text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub items: Vec<(String, usize)>,
}

impl SourceMap {
    pub fn line_of(&self, label: &str) -> Option<usize> {
        self.items.iter().find(|(l, _)| l == label).map(|&(_, n)| n)
    }
}

#[derive(Debug, Clone)]
pub struct KbDocument {
    pub kind: KbKind,
    pub vocab: Arc<Vocabulary>,
    pub body: Kb,
    pub source: SourceMap,
}

/// Structural equality; source locations are ignored.
impl PartialEq for KbDocument {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.vocab == other.vocab && self.body == other.body
    }
}

impl Eq for KbDocument {}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl Line<'_> {
    /// Character column of byte offset `at`.
    fn col(&self, at: usize) -> usize {
        self.text[..at].chars().count() + 1
    }

    fn end_col(&self) -> usize {
        self.text.chars().count() + 1
    }

    /// The leading identifier and the byte offset just past it.
    fn keyword(&self) -> Option<(&str, usize)> {
        let start = self.text.len() - self.text.trim_start().len();
        let rest = &self.text[start..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphabetic() || c == '_' || (i > 0 && c.is_ascii_digit())))
            .map_or(rest.len(), |(i, _)| i);
        (len > 0).then(|| (&rest[..len], start + len))
    }

    fn is_vocab(&self) -> bool {
        matches!(self.keyword(), Some(("vocab", end)) if self.text[end..].trim_start().starts_with(':'))
    }

    fn error(&self, at: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(self.no, self.col(at), message)
    }
}

fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let text = raw.split('#').next().unwrap_or("");
            (!text.trim().is_empty()).then_some(Line { no: i + 1, text })
        })
        .collect()
}

fn parse_vocab(line: &Line<'_>, kind: KbKind) -> Result<Vocabulary, ParseError> {
    let colon = line.text.find(':').expect("checked by is_vocab");
    let toks = lex(&line.text[colon + 1..], line.no, line.col(colon + 1))?;
    let mut vocab = Vocabulary::default();
    let mut expect_name = true;
    for t in &toks {
        match &t.tok {
            Tok::Ident(name) => {
                if ["true", "false"].contains(&name.as_str()) || Some(name.as_str()) == kind.reserved() {
                    return Err(ParseError::new(line.no, t.col, format!("`{name}` cannot name a constant")));
                }
                if vocab.insert(name.clone()).is_err() {
                    return Err(ParseError::new(line.no, t.col, format!("constant `{name}` declared twice")));
                }
                expect_name = false;
            }
            Tok::Comma if !expect_name => expect_name = true,
            other => {
                return Err(ParseError::new(
                    line.no,
                    t.col,
                    format!("expected a constant name, found {}", other.describe()),
                ))
            }
        }
    }
    Ok(vocab)
}

/// Parses a knowledge base of the given kind.
pub fn parse_kb(text: &str, kind: KbKind) -> Result<KbDocument, ParseError> {
    let lines = content_lines(text);
    let mut declared = None;
    for line in lines.iter().filter(|l| l.is_vocab()) {
        if declared.is_some() {
            return Err(line.error(0, "duplicate `vocab:` line"));
        }
        declared = Some(Arc::new(parse_vocab(line, kind)?));
    }
    let body: Vec<&Line<'_>> = lines.iter().filter(|l| !l.is_vocab()).collect();
    let mut names = match declared {
        Some(v) => Names::Fixed(v),
        None if kind == KbKind::Prob => {
            return Err(ParseError::new(1, 1, "a `vocab:` line is required"));
        }
        None => Names::Infer(Vocabulary::default()),
    };
    let mut source = SourceMap::default();
    match kind {
        KbKind::Default => {
            let (rules, facts) = parse_default(&body, &mut names, &mut source)?;
            let vocab = names.into_vocab();
            let t = DefaultTheory::new(vocab.clone(), rules, facts).map_err(|e| ParseError::new(1, 1, e.to_string()))?;
            Ok(KbDocument {
                kind,
                vocab,
                body: Kb::Default(t),
                source,
            })
        }
        KbKind::Ael => {
            let mut premises = Vec::new();
            for line in &body {
                let toks = lex(line.text, line.no, 1)?;
                let mut p = Parser::new(&toks, line.no, line.end_col(), &mut names, kind.reserved());
                let m = p.premise()?;
                source.items.push((m.render(names.vocab()), line.no));
                premises.push(m);
            }
            let vocab = names.into_vocab();
            let a = AelPremises::new(vocab.clone(), premises).map_err(|e| ParseError::new(1, 1, e.to_string()))?;
            Ok(KbDocument {
                kind,
                vocab,
                body: Kb::Ael(a),
                source,
            })
        }
        KbKind::Prob => {
            let vocab = names.into_vocab();
            let space = parse_prob(&body, &vocab, &mut source)?;
            Ok(KbDocument {
                kind,
                vocab,
                body: Kb::Prob(space),
                source,
            })
        }
        KbKind::Poss => {
            let mut statements = Vec::new();
            for line in &body {
                let (r, phi) = parse_poss_line(line, &mut names)?;
                source.items.push((phi.display(names.vocab()).to_string(), line.no));
                statements.push((r, phi));
            }
            if statements.is_empty() {
                return Err(ParseError::new(1, 1, "no `poss` statements"));
            }
            let vocab = names.into_vocab();
            let kb = PossibilisticKB::new(vocab.clone(), statements).map_err(|e| ParseError::new(1, 1, e.to_string()))?;
            Ok(KbDocument {
                kind,
                vocab,
                body: Kb::Poss(kb),
                source,
            })
        }
    }
}

fn parse_default(
    body: &[&Line<'_>],
    names: &mut Names,
    source: &mut SourceMap,
) -> Result<(Vec<DefaultRule>, Vec<Formula>), ParseError> {
    let mut rules = Vec::new();
    let mut facts = Vec::new();
    let mut ids = HashSet::new();
    for line in body {
        let (word, end) = match line.keyword() {
            Some((w @ ("fact" | "rule"), end)) => (w, end),
            _ => return Err(line.error(0, "expected `fact:` or `rule <id>:`")),
        };
        let toks = lex(&line.text[end..], line.no, line.col(end))?;
        let mut p = Parser::new(&toks, line.no, line.end_col(), names, Some("M"));
        if word == "fact" {
            p.expect(&Tok::Colon)?;
            let f = p.formula()?;
            p.expect_end()?;
            facts.push(f);
            source.items.push((format!("fact {}", facts.len()), line.no));
            continue;
        }
        let id_col = p.col();
        let id = p.ident()?;
        if !ids.insert(id.clone()) {
            return Err(ParseError::new(line.no, id_col, format!("duplicate rule id `{id}`")));
        }
        p.expect(&Tok::Colon)?;
        let alpha = p.formula()?;
        p.expect(&Tok::Colon)?;
        let mut betas = Vec::new();
        loop {
            if !p.is_keyword("M") {
                return Err(p.error("expected `M` before a justification"));
            }
            p.ident()?;
            betas.push(p.formula()?);
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
        p.expect(&Tok::Slash)?;
        let gamma = p.formula()?;
        p.expect_end()?;
        source.items.push((id.clone(), line.no));
        rules.push(DefaultRule::new(id, alpha, betas, gamma));
    }
    Ok((rules, facts))
}

fn parse_weight(line: &Line<'_>, start: usize, end: usize) -> Result<Weight, ParseError> {
    let raw = &line.text[start..end];
    let lead = raw.len() - raw.trim_start().len();
    let at = start + lead;
    let w = Weight::from_str(raw.trim()).map_err(|e| line.error(at, e.to_string()))?;
    if w.is_negative() {
        return Err(line.error(at, "weights must be non-negative"));
    }
    Ok(w)
}

fn parse_prob(body: &[&Line<'_>], vocab: &Arc<Vocabulary>, source: &mut SourceMap) -> Result<SampleSpace, ParseError> {
    let mut worlds = Vec::new();
    let mut seen = BTreeSet::new();
    let mut total = Weight::zero();
    for line in body {
        let end = match line.keyword() {
            Some(("world", end)) => end,
            _ => return Err(line.error(0, "expected `world <literals> : <weight>`")),
        };
        let colon = line.text[end..]
            .rfind(':')
            .map(|i| end + i)
            .ok_or_else(|| ParseError::new(line.no, line.end_col(), "expected `: <weight>`"))?;
        let toks = lex(&line.text[end..colon], line.no, line.col(end))?;
        let mut trues = Vec::new();
        let mut assigned = vec![false; vocab.len()];
        let mut i = 0;
        while i < toks.len() {
            let negated = toks[i].tok == Tok::Not;
            if negated {
                i += 1;
            }
            let t = toks
                .get(i)
                .ok_or_else(|| ParseError::new(line.no, line.col(colon), "expected a constant"))?;
            let name = match &t.tok {
                Tok::Ident(n) => n,
                other => {
                    return Err(ParseError::new(
                        line.no,
                        t.col,
                        format!("expected a literal, found {}", other.describe()),
                    ))
                }
            };
            let var = vocab
                .get(name)
                .ok_or_else(|| ParseError::new(line.no, t.col, format!("unknown propositional constant `{name}`")))?;
            if std::mem::replace(&mut assigned[var.index()], true) {
                return Err(ParseError::new(line.no, t.col, format!("`{name}` assigned twice")));
            }
            if !negated {
                trues.push(var);
            }
            i += 1;
            if i < toks.len() {
                if toks[i].tok != Tok::Comma {
                    return Err(ParseError::new(line.no, toks[i].col, "expected `,` between literals"));
                }
                i += 1;
            }
        }
        if let Some(missing) = assigned.iter().position(|&a| !a) {
            return Err(line.error(
                end,
                format!("world does not assign `{}`", vocab.names()[missing]),
            ));
        }
        let weight = parse_weight(line, colon + 1, line.text.len())?;
        let world = World::new(Assignment::new(vocab.len(), trues), weight);
        if !seen.insert(world.assignment.clone()) {
            return Err(line.error(0, "world listed twice"));
        }
        total = total + &world.weight;
        source.items.push((world.assignment.render(vocab), line.no));
        worlds.push(world);
    }
    if !total.within(&Weight::one(), &Weight::ratio(1, 1_000_000_000)) {
        let at = body.last().map_or(1, |l| l.no);
        return Err(ParseError::new(at, 1, format!("world weights sum to {total}, not 1")));
    }
    SampleSpace::new(vocab.clone(), worlds).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

fn parse_poss_line(line: &Line<'_>, names: &mut Names) -> Result<(Weight, Formula), ParseError> {
    let end = match line.keyword() {
        Some(("poss", end)) => end,
        _ => return Err(line.error(0, "expected `poss <r> : <formula>`")),
    };
    let colon = line.text[end..]
        .find(':')
        .map(|i| end + i)
        .ok_or_else(|| ParseError::new(line.no, line.end_col(), "expected `: <formula>`"))?;
    let r = parse_weight(line, end, colon)?;
    if r > Weight::one() {
        return Err(line.error(end, "possibility must lie in [0, 1]"));
    }
    let toks = lex(&line.text[colon + 1..], line.no, line.col(colon + 1))?;
    let mut p = Parser::new(&toks, line.no, line.end_col(), names, None);
    let f = p.formula()?;
    p.expect_end()?;
    Ok((r, f))
}

fn vocab_line(vocab: &Vocabulary) -> String {
    format!("vocab: {}\n", vocab.names().join(", "))
}

/// Renders a document in its concrete syntax; [`parse_kb`] reads it back
/// to an equal document.
pub fn serialize_kb(doc: &KbDocument) -> String {
    let v = &doc.vocab;
    let mut out = vocab_line(v);
    match &doc.body {
        Kb::Default(t) => {
            for f in &t.facts {
                let _ = writeln!(out, "fact: {}", f.display(v));
            }
            for r in &t.rules {
                let _ = writeln!(out, "rule {}: {}", r.id, r.render(v));
            }
        }
        Kb::Ael(a) => {
            for m in &a.formulas {
                let _ = writeln!(out, "{}", m.render(v));
            }
        }
        Kb::Prob(s) => {
            for w in s.worlds() {
                let lits: Vec<String> = v
                    .vars()
                    .map(|x| {
                        let name = v.name(x);
                        if w.assignment.get(x) {
                            name.to_string()
                        } else {
                            format!("~{name}")
                        }
                    })
                    .collect();
                let _ = writeln!(out, "world {} : {}", lits.join(", "), w.weight);
            }
        }
        Kb::Poss(kb) => {
            for level in kb.levels() {
                for f in &level.formulas {
                    let _ = writeln!(out, "poss {} : {}", level.r, f.display(v));
                }
            }
        }
    }
    out
}
