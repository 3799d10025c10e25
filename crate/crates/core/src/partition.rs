//! The partition-sequence type shared by every formalism.
//!
//! A sequence `⟨W_0, …, W_l⟩` orders classes of worlds from least to most
//! preferred. Empty classes are kept so that indices line up with the KB
//! items recorded in the provenance list.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::logic::{Assignment, Vocabulary, World};
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Default,
    Autoepistemic,
    Conditional,
    Threshold,
    Possibility,
}

impl SequenceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SequenceKind::Default => "default",
            SequenceKind::Autoepistemic => "autoepistemic",
            SequenceKind::Conditional => "conditional",
            SequenceKind::Threshold => "threshold",
            SequenceKind::Possibility => "possibility",
        }
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which reading of the class conditions a checker applies.
///
/// `Standard` evaluates prerequisites and justification witnesses against
/// the final class (the fixed-point reading), and divides threshold ratios
/// by the weight still in play. `Strict` evaluates them against the class
/// being formed and divides by the total weight.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Standard,
    Strict,
}

#[derive(Clone, PartialEq, Eq)]
pub struct PartitionSequence {
    pub kind: SequenceKind,
    pub vocab: Arc<Vocabulary>,
    classes: Vec<Vec<World>>,
    provenance: Vec<Option<String>>,
}

impl PartitionSequence {
    /// Builds a sequence, sorting each class into world order.
    ///
    /// A single class is padded with a leading empty class so that `l ≥ 1`.
    /// `provenance` must be empty or have one entry per class.
    pub fn new(
        kind: SequenceKind,
        vocab: Arc<Vocabulary>,
        mut classes: Vec<Vec<World>>,
        mut provenance: Vec<Option<String>>,
    ) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Precondition("a partition sequence needs at least one class".into()));
        }
        if provenance.is_empty() {
            provenance = vec![None; classes.len()];
        } else if provenance.len() != classes.len() {
            return Err(Error::Precondition(format!(
                "{} provenance entries for {} classes",
                provenance.len(),
                classes.len()
            )));
        }
        if classes.len() == 1 {
            classes.insert(0, Vec::new());
            provenance.insert(0, None);
        }
        for c in &mut classes {
            c.sort();
        }
        Ok(PartitionSequence {
            kind,
            vocab,
            classes,
            provenance,
        })
    }

    pub fn classes(&self) -> &[Vec<World>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[World] {
        &self.classes[i]
    }

    /// The most preferred class `W_l`.
    pub fn last(&self) -> &[World] {
        self.classes.last().expect("at least two classes")
    }

    /// `l`, the index of the last class.
    pub fn l(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn provenance(&self) -> &[Option<String>] {
        &self.provenance
    }

    pub fn worlds(&self) -> impl Iterator<Item = &World> {
        self.classes.iter().flatten()
    }

    pub fn class_weight(&self, i: usize) -> Weight {
        self.classes[i].iter().map(|w| &w.weight).sum()
    }

    pub fn total_weight(&self) -> Weight {
        self.worlds().map(|w| &w.weight).sum()
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.classes.iter().map(|c| render_class(c, &self.vocab)).collect();
        format!("⟨{}⟩", parts.join(", "))
    }

    pub fn to_json(&self) -> Value {
        let names = self.vocab.names();
        let classes: Vec<Value> = self
            .classes
            .iter()
            .map(|c| {
                c.iter()
                    .map(|w| {
                        let assign: serde_json::Map<String, Value> = self
                            .vocab
                            .vars()
                            .map(|v| (names[v.index()].clone(), Value::from(w.assignment.get(v) as u8)))
                            .collect();
                        serde_json::json!({ "assign": assign, "weight": w.weight.to_string() })
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({
            "kind": self.kind,
            "vocab": names,
            "classes": classes,
            "provenance": self.provenance,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("sequence JSON is always serializable")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let doc: SequenceDoc = serde_json::from_value(v.clone()).map_err(|e| Error::Json(e.to_string()))?;
        let vocab = Arc::new(Vocabulary::new(doc.vocab)?);
        let n = vocab.len();
        let mut classes = Vec::with_capacity(doc.classes.len());
        for (ci, class) in doc.classes.into_iter().enumerate() {
            let mut ws = Vec::with_capacity(class.len());
            for (wi, w) in class.into_iter().enumerate() {
                let at = || format!("class {ci}, world {wi}");
                if w.assign.len() != n {
                    return Err(Error::Json(format!("{}: assignment is not total over the vocabulary", at())));
                }
                let mut trues = Vec::new();
                for (name, bit) in &w.assign {
                    let var = vocab.lookup(name)?;
                    match bit {
                        0 => {}
                        1 => trues.push(var),
                        _ => return Err(Error::Json(format!("{}: truth value must be 0 or 1", at()))),
                    }
                }
                let weight = match w.weight {
                    None => Weight::one(),
                    Some(WeightRepr::Text(s)) => s.parse().map_err(|e| Error::Json(format!("{}: {e}", at())))?,
                    Some(WeightRepr::Number(x)) => x
                        .to_string()
                        .parse()
                        .map_err(|e| Error::Json(format!("{}: {e}", at())))?,
                };
                if weight.is_negative() {
                    return Err(Error::Json(format!("{}: negative weight", at())));
                }
                ws.push(World::new(Assignment::new(n, trues), weight));
            }
            classes.push(ws);
        }
        if classes.len() < 2 {
            return Err(Error::Json("a partition sequence has at least two classes".into()));
        }
        PartitionSequence::new(doc.kind, vocab, classes, doc.provenance)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        Self::from_json(&v)
    }
}

impl fmt::Debug for PartitionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind, self.render())
    }
}

pub(crate) fn render_class(c: &[World], vocab: &Vocabulary) -> String {
    let ws: Vec<String> = c.iter().map(|w| w.render(vocab)).collect();
    format!("{{{}}}", ws.join(", "))
}

#[derive(Deserialize)]
struct SequenceDoc {
    kind: SequenceKind,
    vocab: Vec<String>,
    classes: Vec<Vec<WorldDoc>>,
    #[serde(default)]
    provenance: Vec<Option<String>>,
}

#[derive(Deserialize)]
struct WorldDoc {
    assign: BTreeMap<String, u8>,
    #[serde(default)]
    weight: Option<WeightRepr>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightRepr {
    Text(String),
    Number(f64),
}

/// Which clause of a sequence definition a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    /// The classes do not partition the world set, or `l < 1`.
    Structure,
    /// A numbered condition of the formalism's sequence definition.
    Condition(u8),
    /// `W_l` is empty where a consistent belief set is required.
    EmptyLastClass,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Clause::Structure => f.write_str("structure"),
            Clause::Condition(n) => write!(f, "condition {n}"),
            Clause::EmptyLastClass => f.write_str("non-empty last class"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    pub class: Option<usize>,
    /// Identifier of the rule, premise or formula involved, if any.
    pub item: Option<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.clause)?;
        if let Some(c) = self.class {
            write!(f, ", class {c}")?;
        }
        if let Some(item) = &self.item {
            write!(f, ", `{item}`")?;
        }
        write!(f, ": {}", self.detail)
    }
}

/// Outcome of a structural or formalism-specific check. Violations are
/// data, not errors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, clause: Clause, class: Option<usize>, item: Option<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            clause,
            class,
            item,
            detail: detail.into(),
        });
    }

    pub fn has(&self, clause: Clause) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }
}

/// Checks that the non-empty classes partition `all_worlds` and `l ≥ 1`.
/// Worlds are compared by assignment.
pub fn validate_structure(seq: &PartitionSequence, all_worlds: &[World]) -> CheckReport {
    let mut report = CheckReport::default();
    if seq.classes.len() < 2 {
        report.push(Clause::Structure, None, None, "fewer than two classes (l < 1)");
    }
    let mut seen: BTreeMap<&Assignment, usize> = BTreeMap::new();
    for (i, class) in seq.classes.iter().enumerate() {
        for w in class {
            if let Some(&j) = seen.get(&w.assignment) {
                report.push(
                    Clause::Structure,
                    Some(i),
                    None,
                    format!("world {} also occurs in class {j}", w.assignment.render(&seq.vocab)),
                );
            } else {
                seen.insert(&w.assignment, i);
            }
        }
    }
    let expected: BTreeSet<&Assignment> = all_worlds.iter().map(|w| &w.assignment).collect();
    for a in &expected {
        if !seen.contains_key(a) {
            report.push(
                Clause::Structure,
                None,
                None,
                format!("world {} is in no class", a.render(&seq.vocab)),
            );
        }
    }
    for (a, &i) in &seen {
        if !expected.contains(a) {
            report.push(
                Clause::Structure,
                Some(i),
                None,
                format!("world {} is not in the declared world set", a.render(&seq.vocab)),
            );
        }
    }
    report
}

/// Two sequences are isomorphic iff their last classes hold the same worlds.
pub fn isomorphic(a: &PartitionSequence, b: &PartitionSequence) -> Result<bool> {
    if a.kind != b.kind {
        return Err(Error::KindMismatch {
            left: a.kind.to_string(),
            right: b.kind.to_string(),
        });
    }
    if a.vocab != b.vocab {
        return Err(Error::VocabularyMismatch(format!("{:?} vs {:?}", a.vocab, b.vocab)));
    }
    let la: BTreeSet<&Assignment> = a.last().iter().map(|w| &w.assignment).collect();
    let lb: BTreeSet<&Assignment> = b.last().iter().map(|w| &w.assignment).collect();
    Ok(la == lb)
}

/// Cumulative tail unions `M_i = W_i ∪ … ∪ W_l`; `M_l` is most preferred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceChain {
    pub models: Vec<Vec<World>>,
}

pub fn preference_view(seq: &PartitionSequence) -> PreferenceChain {
    let mut models: Vec<Vec<World>> = Vec::with_capacity(seq.classes.len());
    let mut acc: Vec<World> = Vec::new();
    for class in seq.classes.iter().rev() {
        acc.extend(class.iter().cloned());
        let mut m = acc.clone();
        m.sort();
        models.push(m);
    }
    models.reverse();
    PreferenceChain { models }
}
