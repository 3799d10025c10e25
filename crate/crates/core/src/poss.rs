//! Possibilistic statement sets and their partition sequences.
//!
//! Levels are processed in increasing possibility. Level `i+1` claims, as
//! class `W_i`, every remaining world satisfying one of its formulas; the
//! class receives total weight `r_{i+1} − r_i`. Whatever is left forms the
//! last class with weight `1 − r_n`. `Π(φ)` is the cumulative weight up to
//! the highest class holding a model of `φ`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::logic::{Formula, ModelSet, Universe, Vocabulary, World};
use crate::partition::{validate_structure, CheckReport, Clause, PartitionSequence, SequenceKind};
use crate::weight::Weight;

/// Statements `Π(φ) = r` for every `φ` in `formulas`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub r: Weight,
    pub formulas: Vec<Formula>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossibilisticKB {
    pub vocab: Arc<Vocabulary>,
    levels: Vec<Level>,
}

impl PossibilisticKB {
    /// Groups statements with equal `r` into one level and sorts levels by
    /// `r`. Repeated formulas within a level are kept once.
    pub fn new(vocab: Arc<Vocabulary>, statements: impl IntoIterator<Item = (Weight, Formula)>) -> Result<Self> {
        let mut levels: Vec<Level> = Vec::new();
        for (r, phi) in statements {
            if r.is_negative() || r > Weight::one() {
                return Err(Error::Invalid(format!("possibility {r} is outside [0, 1]")));
            }
            vocab.check(&phi)?;
            match levels.binary_search_by(|l| l.r.cmp(&r)) {
                Ok(i) => {
                    if !levels[i].formulas.contains(&phi) {
                        levels[i].formulas.push(phi);
                    }
                }
                Err(i) => levels.insert(i, Level { r, formulas: vec![phi] }),
            }
        }
        if levels.is_empty() {
            return Err(Error::Invalid("a possibilistic statement set needs at least one statement".into()));
        }
        Ok(PossibilisticKB { vocab, levels })
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// `r_i` with the conventions `r_0 = 0` and `r_{n+1} = 1`.
    fn r(&self, i: usize) -> Weight {
        match i {
            0 => Weight::zero(),
            i if i > self.levels.len() => Weight::one(),
            i => self.levels[i - 1].r.clone(),
        }
    }

    fn label(&self, level: usize) -> String {
        let l = &self.levels[level];
        let fs: Vec<String> = l.formulas.iter().map(|f| f.display(&self.vocab).to_string()).collect();
        format!("{}: {}", l.r, fs.join("; "))
    }
}

/// Why a statement set admits no possibility measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistency {
    /// 1-based level index, or `None` for the final remainder.
    pub level: Option<usize>,
    /// The formula whose remaining models ran out, if any.
    pub formula: Option<String>,
    pub detail: String,
}

impl fmt::Display for Inconsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.level, &self.formula) {
            (Some(l), Some(phi)) => write!(f, "level {l}, `{phi}`: {}", self.detail),
            _ => f.write_str(&self.detail),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PossBuild {
    Sequence(PartitionSequence),
    Inconsistent(Inconsistency),
}

/// `U_φ` for each formula of `level`, taken from `remaining`.
fn level_sets(universe: &Universe, level: &Level, remaining: &ModelSet) -> Vec<ModelSet> {
    level
        .formulas
        .iter()
        .map(|f| universe.compile(f).expect("checked on construction").and(remaining))
        .collect()
}

fn uniform(universe: &Universe, set: &ModelSet, total: &Weight) -> Vec<World> {
    let n = set.len();
    let each = if n == 0 { Weight::zero() } else { total / &Weight::integer(n as i64) };
    set.iter()
        .map(|i| World::new(universe.world(i).assignment, each.clone()))
        .collect()
}

pub fn build_poss_sequence(kb: &PossibilisticKB, limits: &Limits) -> Result<PossBuild> {
    let universe = Universe::new(kb.vocab.clone(), limits)?;
    let n = kb.levels.len();
    let mut remaining = universe.all();
    let mut classes = Vec::with_capacity(n + 1);
    let mut provenance = Vec::with_capacity(n + 1);
    for (i, level) in kb.levels.iter().enumerate() {
        let sets = level_sets(&universe, level, &remaining);
        if !level.r.is_zero() {
            if let Some(j) = sets.iter().position(|u| u.is_empty()) {
                return Ok(PossBuild::Inconsistent(Inconsistency {
                    level: Some(i + 1),
                    formula: Some(level.formulas[j].display(&kb.vocab).to_string()),
                    detail: format!(
                        "no world outside the lower levels satisfies it, so its possibility cannot be {}",
                        level.r
                    ),
                }));
            }
        }
        let mut class = universe.none();
        for u in &sets {
            class.union_with(u);
        }
        remaining.subtract(&class);
        classes.push(uniform(&universe, &class, &(&kb.r(i + 1) - &kb.r(i))));
        provenance.push(Some(kb.label(i)));
    }
    let rest = &Weight::one() - &kb.r(n);
    if remaining.is_empty() && !rest.is_zero() {
        return Ok(PossBuild::Inconsistent(Inconsistency {
            level: None,
            formula: None,
            detail: format!("every world is claimed by a level, leaving weight {rest} undistributable"),
        }));
    }
    classes.push(uniform(&universe, &remaining, &rest));
    provenance.push(None);
    Ok(PossBuild::Sequence(PartitionSequence::new(
        SequenceKind::Possibility,
        kb.vocab.clone(),
        classes,
        provenance,
    )?))
}

/// Checks class membership level by level and class totals within `1e-9`.
/// Any distribution of weight inside a class is accepted.
pub fn check_poss_sequence(kb: &PossibilisticKB, seq: &PartitionSequence, limits: &Limits) -> Result<CheckReport> {
    if seq.vocab != kb.vocab {
        return Err(Error::VocabularyMismatch("sequence and statement set differ".into()));
    }
    if seq.kind != SequenceKind::Possibility {
        return Err(Error::KindMismatch {
            left: seq.kind.to_string(),
            right: SequenceKind::Possibility.to_string(),
        });
    }
    let universe = Universe::new(kb.vocab.clone(), limits)?;
    let mut report = validate_structure(seq, &universe.worlds(&universe.all()));
    let n = kb.levels.len();
    if report.is_ok() && seq.classes().len() != n + 1 {
        report.push(
            Clause::Structure,
            None,
            None,
            format!("{} classes for {n} levels; expected {}", seq.classes().len(), n + 1),
        );
    }
    if !report.is_ok() {
        return Ok(report);
    }
    let mask = |ws: &[World]| {
        ModelSet::from_indices(
            universe.size(),
            ws.iter().filter_map(|w| universe.index_of(&w.assignment)),
        )
    };
    let tol = Weight::ratio(1, 1_000_000_000);
    let mut remaining = universe.all();
    for (i, level) in kb.levels.iter().enumerate() {
        let sets = level_sets(&universe, level, &remaining);
        let mut expected = universe.none();
        for (u, f) in sets.iter().zip(&level.formulas) {
            if u.is_empty() && !level.r.is_zero() {
                report.push(
                    Clause::Condition(1),
                    Some(i),
                    Some(f.display(&kb.vocab).to_string()),
                    "no world of this class or later ones satisfies the formula",
                );
            }
            expected.union_with(u);
        }
        let actual = mask(seq.class(i));
        if actual != expected {
            report.push(
                Clause::Condition(1),
                Some(i),
                None,
                "class is not the union of the level's remaining models",
            );
        }
        remaining.subtract(&actual);
    }
    for i in 0..=n {
        let want = &kb.r(i + 1) - &kb.r(i);
        let got = seq.class_weight(i);
        if !got.within(&want, &tol) {
            report.push(
                Clause::Condition(2),
                Some(i),
                None,
                format!("class weight is {got}, expected {want}"),
            );
        }
    }
    Ok(report)
}

/// `Π(φ)`: cumulative weight through the highest class holding a model of
/// `φ`; 0 when no world satisfies `φ`.
pub fn possibility(seq: &PartitionSequence, phi: &Formula) -> Result<Weight> {
    seq.vocab.check(phi)?;
    let top = seq
        .classes()
        .iter()
        .rposition(|c| c.iter().any(|w| phi.holds(&w.assignment)));
    Ok(match top {
        None => Weight::zero(),
        Some(i) => seq.classes()[..=i].iter().flatten().map(|w| &w.weight).sum(),
    })
}

/// `N(φ) = 1 − Π(¬φ)`.
pub fn necessity(seq: &PartitionSequence, phi: &Formula) -> Result<Weight> {
    Ok(&Weight::one() - &possibility(seq, &Formula::not(phi.clone()))?)
}
