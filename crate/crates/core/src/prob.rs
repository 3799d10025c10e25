//! Conditioning and thresholding on finite weighted sample spaces.
//!
//! Conditioning on `⟨φ₁,…,φₙ⟩` peels off, at step `i`, the worlds still in
//! play that falsify `φ_{i+1}`; the conditional probability of `ψ` is the
//! weighted `ψ`-fraction of the last class. Thresholding additionally
//! requires each peeled class to carry at most an `ε` share of the weight.
//!
//! All arithmetic is exact.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::logic::{Assignment, Formula, Var, Vocabulary, World};
use crate::partition::{Mode, PartitionSequence, SequenceKind};
use crate::weight::Weight;

/// Largest lottery [`lottery_space`] will build.
pub const MAX_LOTTERY: usize = 1_000_000;

/// A finite probability space. Worlds not listed have weight 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSpace {
    pub vocab: Arc<Vocabulary>,
    worlds: Vec<World>,
}

impl SampleSpace {
    /// Checks that weights are non-negative, assignments distinct and total
    /// over `vocab`, and that the weights sum to 1 within `1e-9`.
    pub fn new(vocab: Arc<Vocabulary>, worlds: Vec<World>) -> Result<Self> {
        for w in &worlds {
            if w.assignment.len() != vocab.len() {
                return Err(Error::Invalid(format!(
                    "world {} does not assign every constant",
                    w.render(&vocab)
                )));
            }
            if w.weight.is_negative() {
                return Err(Error::Invalid(format!("world {} has negative weight", w.render(&vocab))));
            }
        }
        let mut sorted: Vec<&Assignment> = worlds.iter().map(|w| &w.assignment).collect();
        sorted.sort();
        if let Some(pair) = sorted.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::Invalid(format!("world {} is listed twice", pair[0].render(&vocab))));
        }
        let total: Weight = worlds.iter().map(|w| &w.weight).sum();
        if !total.within(&Weight::one(), &Weight::ratio(1, 1_000_000_000)) {
            return Err(Error::Invalid(format!("world weights sum to {total}, not 1")));
        }
        Ok(SampleSpace { vocab, worlds })
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    /// `Pr(φ)`: total weight of the listed worlds satisfying `φ`.
    pub fn prob(&self, phi: &Formula) -> Result<Weight> {
        self.vocab.check(phi)?;
        Ok(self
            .worlds
            .iter()
            .filter(|w| phi.holds(&w.assignment))
            .map(|w| &w.weight)
            .sum())
    }
}

/// A query `Pr(ψ | φ₁,…,φₙ)`, thresholded at `ε` when `epsilon` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditioningQuery {
    pub conditions: Vec<Formula>,
    pub epsilon: Option<Weight>,
    pub query: Formula,
}

impl ConditioningQuery {
    /// The sequence used and the resulting probability.
    pub fn run(&self, space: &SampleSpace, mode: Mode) -> Result<(PartitionSequence, Weight)> {
        let seq = match &self.epsilon {
            Some(eps) => threshold(space, eps, &self.conditions, mode)?,
            None => condition(space, &self.conditions)?,
        };
        let p = cond_prob(&seq, &self.query)?;
        Ok((seq, p))
    }
}

/// Index of the first condition `w` falsifies, or `conds.len()`.
fn first_failure(w: &World, conds: &[Formula]) -> usize {
    conds
        .iter()
        .position(|c| !c.holds(&w.assignment))
        .unwrap_or(conds.len())
}

fn build(space: &SampleSpace, conds: &[Formula], kind: SequenceKind) -> Result<PartitionSequence> {
    if conds.is_empty() {
        return Err(Error::Precondition("at least one condition is required".into()));
    }
    for c in conds {
        space.vocab.check(c)?;
    }
    let mut classes = vec![Vec::new(); conds.len() + 1];
    for w in &space.worlds {
        classes[first_failure(w, conds)].push(w.clone());
    }
    let mut provenance: Vec<Option<String>> = conds
        .iter()
        .map(|c| Some(c.display(&space.vocab).to_string()))
        .collect();
    provenance.push(None);
    PartitionSequence::new(kind, space.vocab.clone(), classes, provenance)
}

/// The conditional probability partition sequence for `⟨φ₁,…,φₙ⟩`.
pub fn condition(space: &SampleSpace, conds: &[Formula]) -> Result<PartitionSequence> {
    build(space, conds, SequenceKind::Conditional)
}

/// Conditions an existing sequence on one more formula by splitting its
/// last class.
pub fn extend_condition(seq: &PartitionSequence, phi: &Formula) -> Result<PartitionSequence> {
    seq.vocab.check(phi)?;
    let mut classes = seq.classes().to_vec();
    let last = classes.pop().expect("at least two classes");
    let (keep, drop): (Vec<World>, Vec<World>) = last.into_iter().partition(|w| phi.holds(&w.assignment));
    classes.push(drop);
    classes.push(keep);
    let mut provenance = seq.provenance().to_vec();
    provenance.pop();
    provenance.push(Some(phi.display(&seq.vocab).to_string()));
    provenance.push(None);
    PartitionSequence::new(seq.kind, seq.vocab.clone(), classes, provenance)
}

fn fraction<'a>(worlds: impl Iterator<Item = &'a World>, psi: &Formula) -> Result<Weight> {
    let mut mass = Weight::zero();
    let mut hits = Weight::zero();
    for w in worlds {
        mass = mass + &w.weight;
        if psi.holds(&w.assignment) {
            hits = hits + &w.weight;
        }
    }
    hits.checked_div(&mass).ok_or(Error::UndefinedConditional)
}

/// `Pr(ψ | φ₁,…,φₙ)`: the weighted `ψ`-fraction of the last class.
pub fn cond_prob(seq: &PartitionSequence, psi: &Formula) -> Result<Weight> {
    seq.vocab.check(psi)?;
    fraction(seq.last().iter(), psi)
}

/// `Pr(ψ | φ₁,…,φ_k)` read off a sequence conditioned on a longer list:
/// the `ψ`-fraction of `W_k ∪ … ∪ W_n`.
pub fn cond_prob_prefix(seq: &PartitionSequence, k: usize, psi: &Formula) -> Result<Weight> {
    if k > seq.l() {
        return Err(Error::Precondition(format!("prefix {k} is longer than the condition list")));
    }
    seq.vocab.check(psi)?;
    fraction(seq.classes()[k..].iter().flatten(), psi)
}

/// Per-step ratios `weight(W_i) / weight(W_i ∪ … ∪ W_n)` (`Strict`: over the
/// total weight), `None` where the denominator is zero.
pub fn threshold_ratios(seq: &PartitionSequence, mode: Mode) -> Vec<Option<Weight>> {
    let weights: Vec<Weight> = (0..=seq.l()).map(|i| seq.class_weight(i)).collect();
    let total: Weight = weights.iter().sum();
    let mut tail = total.clone();
    let mut out = Vec::with_capacity(seq.l());
    for w in &weights[..seq.l()] {
        let denom = match mode {
            Mode::Standard => &tail,
            Mode::Strict => &total,
        };
        out.push(w.checked_div(denom));
        tail = &tail - w;
    }
    out
}

fn check_epsilon(eps: &Weight) -> Result<()> {
    if eps.is_negative() || *eps >= Weight::one() {
        return Err(Error::Precondition(format!("epsilon must lie in [0, 1), got {eps}")));
    }
    Ok(())
}

/// The threshold probability partition sequence, or the first step whose
/// peeled class carries more than an `ε` share of the weight still in play.
///
/// A step whose remaining weight is zero is rejected: the conditional
/// probability it would have to exceed is undefined.
pub fn threshold(space: &SampleSpace, eps: &Weight, conds: &[Formula], mode: Mode) -> Result<PartitionSequence> {
    check_epsilon(eps)?;
    let seq = build(space, conds, SequenceKind::Threshold)?;
    for (i, r) in threshold_ratios(&seq, mode).into_iter().enumerate() {
        let ok = r.as_ref().is_some_and(|r| r <= eps);
        if !ok {
            return Err(Error::BelowThreshold {
                step: i + 1,
                formula: conds[i].display(&space.vocab).to_string(),
                ratio: r.map_or_else(|| "undefined".to_string(), |r| r.to_string()),
                epsilon: eps.to_string(),
            });
        }
    }
    Ok(seq)
}

pub fn threshold_prob(
    space: &SampleSpace,
    eps: &Weight,
    conds: &[Formula],
    psi: &Formula,
    mode: Mode,
) -> Result<Weight> {
    cond_prob(&threshold(space, eps, conds, mode)?, psi)
}

/// Every ordering of distinct candidates, of length `1..=maxlen`, that
/// [`threshold`] accepts. Orderings are listed depth-first in candidate
/// order; a rejected prefix prunes all its extensions.
pub fn enumerate_threshold_orders(
    space: &SampleSpace,
    eps: &Weight,
    candidates: &[Formula],
    maxlen: usize,
    mode: Mode,
    limits: &Limits,
) -> Result<Vec<Vec<Formula>>> {
    check_epsilon(eps)?;
    if candidates.len() > limits.max_threshold_candidates {
        return Err(Error::resource(
            "threshold candidate count",
            candidates.len(),
            limits.max_threshold_candidates,
        ));
    }
    for c in candidates {
        space.vocab.check(c)?;
    }
    let total: Weight = space.worlds.iter().map(|w| &w.weight).sum();
    let search = OrderSearch {
        eps,
        candidates,
        maxlen: maxlen.min(candidates.len()),
        mode,
        total,
    };
    let mut out = Vec::new();
    let remaining: Vec<&World> = space.worlds.iter().collect();
    search.extend(&remaining, &mut Vec::new(), &mut out);
    Ok(out)
}

struct OrderSearch<'a> {
    eps: &'a Weight,
    candidates: &'a [Formula],
    maxlen: usize,
    mode: Mode,
    total: Weight,
}

impl OrderSearch<'_> {
    fn extend(&self, remaining: &[&World], prefix: &mut Vec<usize>, out: &mut Vec<Vec<Formula>>) {
        if prefix.len() == self.maxlen {
            return;
        }
        let mass: Weight = remaining.iter().map(|w| &w.weight).sum();
        for (c, phi) in self.candidates.iter().enumerate() {
            if prefix.contains(&c) {
                continue;
            }
            let (keep, drop): (Vec<&World>, Vec<&World>) =
                remaining.iter().partition(|w| phi.holds(&w.assignment));
            let dropped: Weight = drop.iter().map(|w| &w.weight).sum();
            let denom = match self.mode {
                Mode::Standard => &mass,
                Mode::Strict => &self.total,
            };
            let accepted = dropped.checked_div(denom).is_some_and(|r| r <= *self.eps);
            if !accepted {
                continue;
            }
            prefix.push(c);
            out.push(prefix.iter().map(|&i| self.candidates[i].clone()).collect());
            self.extend(&keep, prefix, out);
            prefix.pop();
        }
    }
}

/// The lottery over `n` tickets: constants `p1…pn`, one world per ticket
/// with only its own constant true, each of weight `1/n`.
pub fn lottery_space(n: usize) -> Result<SampleSpace> {
    if n == 0 || n > MAX_LOTTERY {
        return Err(Error::Precondition(format!(
            "lottery size must be between 1 and {MAX_LOTTERY}, got {n}"
        )));
    }
    let vocab = Arc::new(Vocabulary::new((1..=n).map(|i| format!("p{i}")))?);
    let weight = Weight::ratio(1, n as i64);
    let worlds = (0..n)
        .map(|i| World::new(Assignment::new(n, [Var(i as u32)]), weight.clone()))
        .collect();
    Ok(SampleSpace { vocab, worlds })
}

/// `φ` is taken to be false in the sequence: `Pr(φ | …) ≤ ε`.
pub fn reject(seq: &PartitionSequence, phi: &Formula, eps: &Weight) -> Result<bool> {
    Ok(cond_prob(seq, phi)? <= *eps)
}
