//! Reiter default logic over model sets, and default partition sequences.
//!
//! Extensions are computed as fixed points of the Γ operator. Sequences are
//! built by peeling off, one applicable rule at a time, the remaining worlds
//! that falsify the rule's consequent; the class left at the end is the
//! extension's model set.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::logic::{Formula, Kernel, ModelSet, Universe, Vocabulary};
use crate::partition::{validate_structure, CheckReport, Clause, Mode, PartitionSequence, SequenceKind};

/// `α : Mβ₁, …, Mβₙ / γ` with `n ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefaultRule {
    pub id: String,
    pub alpha: Formula,
    pub betas: Vec<Formula>,
    pub gamma: Formula,
}

impl DefaultRule {
    pub fn new(id: impl Into<String>, alpha: Formula, betas: Vec<Formula>, gamma: Formula) -> Self {
        DefaultRule {
            id: id.into(),
            alpha,
            betas,
            gamma,
        }
    }

    pub fn render(&self, vocab: &Vocabulary) -> String {
        let betas: Vec<String> = self
            .betas
            .iter()
            .map(|b| format!("M {}", b.display(vocab)))
            .collect();
        format!(
            "{} : {} / {}",
            self.alpha.display(vocab),
            betas.join(", "),
            self.gamma.display(vocab)
        )
    }
}

/// A default theory `⟨D, F⟩`; the facts are read as one conjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefaultTheory {
    pub vocab: Arc<Vocabulary>,
    pub rules: Vec<DefaultRule>,
    pub facts: Vec<Formula>,
}

impl DefaultTheory {
    pub fn new(vocab: Arc<Vocabulary>, rules: Vec<DefaultRule>, facts: Vec<Formula>) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for r in &rules {
            if r.betas.is_empty() {
                return Err(Error::Invalid(format!("rule `{}` has no justification", r.id)));
            }
            if !ids.insert(r.id.as_str()) {
                return Err(Error::Invalid(format!("duplicate rule id `{}`", r.id)));
            }
            for f in std::iter::once(&r.alpha).chain(&r.betas).chain([&r.gamma]) {
                vocab.check(f)?;
            }
        }
        for f in &facts {
            vocab.check(f)?;
        }
        Ok(DefaultTheory { vocab, rules, facts })
    }

    pub fn compile(&self, limits: &Limits) -> Result<CompiledTheory> {
        if self.rules.len() > limits.max_rules {
            return Err(Error::resource("rule count", self.rules.len(), limits.max_rules));
        }
        let universe = Universe::new(self.vocab.clone(), limits)?;
        let mut facts = universe.all();
        for f in &self.facts {
            facts.intersect_with(&universe.compile(f)?);
        }
        let rules = self
            .rules
            .iter()
            .map(|r| {
                Ok(CompiledRule {
                    alpha: universe.compile(&r.alpha)?,
                    betas: r.betas.iter().map(|b| universe.compile(b)).collect::<Result<_>>()?,
                    gamma: universe.compile(&r.gamma)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(CompiledTheory {
            universe,
            ids: self.rules.iter().map(|r| r.id.clone()).collect(),
            facts,
            rules,
            limits: *limits,
        })
    }
}

#[derive(Debug, Clone)]
struct CompiledRule {
    alpha: ModelSet,
    betas: Vec<ModelSet>,
    gamma: ModelSet,
}

impl CompiledRule {
    /// Every justification is satisfiable in `worlds`.
    fn witnessed_in(&self, worlds: &ModelSet) -> bool {
        self.betas.iter().all(|b| b.intersects(worlds))
    }
}

/// Extensions of a theory. When the facts are inconsistent the single
/// extension is the inconsistent theory (empty model set) and the flag is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extensions {
    pub kernels: Vec<Kernel>,
    pub inconsistent_facts: bool,
}

/// A default theory with every formula compiled to its model set.
#[derive(Debug, Clone)]
pub struct CompiledTheory {
    universe: Universe,
    ids: Vec<String>,
    facts: ModelSet,
    rules: Vec<CompiledRule>,
    limits: Limits,
}

impl CompiledTheory {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Model set of Γ(E): the facts closed under every rule whose
    /// prerequisite is entailed and whose justifications are each consistent
    /// with `e`.
    pub fn gamma(&self, e: &ModelSet) -> ModelSet {
        let justified: Vec<bool> = self.rules.iter().map(|r| r.witnessed_in(e)).collect();
        let mut theory = self.facts.clone();
        let mut fired = vec![false; self.rules.len()];
        loop {
            let mut changed = false;
            for (i, r) in self.rules.iter().enumerate() {
                if justified[i] && !fired[i] && theory.is_subset(&r.alpha) {
                    theory.intersect_with(&r.gamma);
                    fired[i] = true;
                    changed = true;
                }
            }
            if !changed {
                return theory;
            }
        }
    }

    /// Fixed points of Γ, in model-set order.
    ///
    /// Every extension is `Th(F ∪ {γ of its generating rules})`, so trying
    /// each subset of consequents as a candidate and keeping those that Γ
    /// maps to themselves is complete.
    pub fn extensions(&self) -> Extensions {
        if self.facts.is_empty() {
            return Extensions {
                kernels: vec![Kernel::new(self.universe.vocab().clone(), self.facts.clone())],
                inconsistent_facts: true,
            };
        }
        let m = self.rules.len();
        let mut candidates = BTreeSet::new();
        for mask in 0u32..1 << m {
            let mut e = self.facts.clone();
            for (i, r) in self.rules.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    e.intersect_with(&r.gamma);
                }
            }
            candidates.insert(e);
        }
        let kernels = candidates
            .into_iter()
            .filter(|e| self.gamma(e) == *e)
            .map(|e| Kernel::new(self.universe.vocab().clone(), e))
            .collect();
        Extensions {
            kernels,
            inconsistent_facts: false,
        }
    }

    /// Every distinct peel order reaching `extension`, at most
    /// `limits.max_orderings` of them. Each item is the list of classes and
    /// the rule index behind each intermediate class.
    pub fn sequences_for(&self, extension: &ModelSet) -> Vec<(Vec<ModelSet>, Vec<usize>)> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let w0 = self.facts.complement();
        let mut classes = vec![w0];
        let mut used = Vec::new();
        self.peel(extension, self.facts.clone(), &mut classes, &mut used, &mut seen, &mut out);
        out
    }

    fn peel(
        &self,
        extension: &ModelSet,
        remaining: ModelSet,
        classes: &mut Vec<ModelSet>,
        used: &mut Vec<usize>,
        seen: &mut BTreeSet<Vec<ModelSet>>,
        out: &mut Vec<(Vec<ModelSet>, Vec<usize>)>,
    ) {
        if out.len() >= self.limits.max_orderings {
            return;
        }
        let mut any = false;
        for (i, r) in self.rules.iter().enumerate() {
            if remaining.is_subset(&r.alpha) && r.witnessed_in(extension) && !remaining.is_subset(&r.gamma) {
                any = true;
                let class = remaining.minus(&r.gamma);
                let rest = remaining.and(&r.gamma);
                classes.push(class);
                used.push(i);
                self.peel(extension, rest, classes, used, seen, out);
                classes.pop();
                used.pop();
                if out.len() >= self.limits.max_orderings {
                    return;
                }
            }
        }
        if !any {
            debug_assert_eq!(&remaining, extension, "peeling must end at the extension");
            let mut full = classes.clone();
            full.push(remaining);
            if seen.insert(full.clone()) {
                out.push((full, used.clone()));
            }
        }
    }

    fn cond1_ok(&self, classes: &[ModelSet]) -> bool {
        classes[0] == self.facts.complement()
    }

    /// Whether rule `r` produces intermediate class `i`.
    fn produces(&self, classes: &[ModelSet], tails: &[ModelSet], i: usize, r: usize, mode: Mode) -> bool {
        let rule = &self.rules[r];
        let witnesses = match mode {
            Mode::Standard => classes.last().unwrap(),
            Mode::Strict => &classes[i],
        };
        tails[i].is_subset(&rule.alpha)
            && rule.witnessed_in(witnesses)
            && classes[i] == tails[i].minus(&rule.gamma)
    }

    /// Whether the last class is closed under rule `r`.
    fn closed_under(&self, last: &ModelSet, r: usize) -> bool {
        let rule = &self.rules[r];
        !(last.is_subset(&rule.alpha) && rule.witnessed_in(last)) || last.is_subset(&rule.gamma)
    }

    fn tails(classes: &[ModelSet]) -> Vec<ModelSet> {
        let mut tails = classes.to_vec();
        for i in (0..tails.len().saturating_sub(1)).rev() {
            let next = tails[i + 1].clone();
            tails[i].union_with(&next);
        }
        tails
    }

    fn partitions(&self, classes: &[ModelSet]) -> bool {
        let mut acc = self.universe.none();
        for c in classes {
            if acc.intersects(c) {
                return false;
            }
            acc.union_with(c);
        }
        acc == self.universe.all()
    }

    /// Short-circuiting validity test on class bitsets.
    pub fn is_default_sequence(&self, classes: &[ModelSet], mode: Mode) -> bool {
        if classes.len() < 2 || !self.partitions(classes) || !self.cond1_ok(classes) {
            return false;
        }
        let tails = Self::tails(classes);
        let l = classes.len() - 1;
        (1..l).all(|i| (0..self.rules.len()).any(|r| self.produces(classes, &tails, i, r, mode)))
            && (0..self.rules.len()).all(|r| self.closed_under(&classes[l], r))
    }

    /// Full report on class bitsets, citing every failed condition.
    pub fn check_classes(&self, classes: &[ModelSet], mode: Mode) -> CheckReport {
        let mut report = CheckReport::default();
        if classes.len() < 2 || !self.partitions(classes) {
            report.push(Clause::Structure, None, None, "classes do not partition the world set");
            return report;
        }
        if !self.cond1_ok(classes) {
            report.push(
                Clause::Condition(1),
                Some(0),
                None,
                "W_0 is not exactly the set of worlds falsifying the facts",
            );
        }
        let tails = Self::tails(classes);
        let l = classes.len() - 1;
        for i in 1..l {
            if !(0..self.rules.len()).any(|r| self.produces(classes, &tails, i, r, mode)) {
                report.push(
                    Clause::Condition(2),
                    Some(i),
                    None,
                    "no applicable rule has exactly this class as its falsifying remainder",
                );
            }
        }
        for r in 0..self.rules.len() {
            if !self.closed_under(&classes[l], r) {
                report.push(
                    Clause::Condition(3),
                    Some(l),
                    Some(self.ids[r].clone()),
                    "rule applies to the last class but its consequent is not true throughout it",
                );
            }
        }
        report
    }

    fn to_masks(&self, seq: &PartitionSequence) -> Vec<ModelSet> {
        seq.classes()
            .iter()
            .map(|c| {
                ModelSet::from_indices(
                    self.universe.size(),
                    c.iter().filter_map(|w| self.universe.index_of(&w.assignment)),
                )
            })
            .collect()
    }

    pub fn check(&self, seq: &PartitionSequence, mode: Mode) -> Result<CheckReport> {
        if seq.vocab != *self.universe.vocab() {
            return Err(Error::VocabularyMismatch("sequence and theory differ".into()));
        }
        if seq.kind != SequenceKind::Default {
            return Err(Error::KindMismatch {
                left: seq.kind.to_string(),
                right: SequenceKind::Default.to_string(),
            });
        }
        let all = self.universe.worlds(&self.universe.all());
        let structure = validate_structure(seq, &all);
        if !structure.is_ok() {
            return Ok(structure);
        }
        Ok(self.check_classes(&self.to_masks(seq), mode))
    }

    pub fn build_sequences(&self) -> Result<Vec<PartitionSequence>> {
        let ext = self.extensions();
        if ext.inconsistent_facts {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for k in &ext.kernels {
            for (classes, used) in self.sequences_for(&k.models) {
                let l = classes.len() - 1;
                let mut provenance = vec![None];
                provenance.extend(used.iter().map(|&r| Some(self.ids[r].clone())));
                provenance.push(None);
                debug_assert_eq!(provenance.len(), l + 1);
                let worlds = classes.iter().map(|c| self.universe.worlds(c)).collect();
                out.push(PartitionSequence::new(
                    SequenceKind::Default,
                    self.universe.vocab().clone(),
                    worlds,
                    provenance,
                )?);
            }
        }
        Ok(out)
    }
}

/// Model set of Γ(E) for the theory whose models are `e`.
pub fn gamma_operator(theory: &DefaultTheory, e: &Kernel) -> Result<Kernel> {
    let c = theory.compile(&Limits::default())?;
    if e.vocab != theory.vocab {
        return Err(Error::VocabularyMismatch("kernel and theory differ".into()));
    }
    Ok(Kernel::new(theory.vocab.clone(), c.gamma(&e.models)))
}

pub fn extensions(theory: &DefaultTheory) -> Result<Extensions> {
    Ok(theory.compile(&Limits::default())?.extensions())
}

/// One or more default partition sequences per consistent extension.
pub fn build_default_sequences(theory: &DefaultTheory) -> Result<Vec<PartitionSequence>> {
    theory.compile(&Limits::default())?.build_sequences()
}

pub fn check_default_sequence(theory: &DefaultTheory, seq: &PartitionSequence, mode: Mode) -> Result<CheckReport> {
    theory.compile(&Limits::default())?.check(seq, mode)
}
