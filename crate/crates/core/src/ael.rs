//! Autoepistemic logic on normal-form premises.
//!
//! A stable theory is determined by its kernel, held here as a model set.
//! Consistent stable expansions are the fixed points of Ω, which closes the
//! empty kernel under every premise whose belief conditions hold in the
//! candidate kernel.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::logic::{Kernel, ModalFormula, ModelSet, Universe, Vocabulary};
use crate::partition::{validate_structure, CheckReport, Clause, Mode, PartitionSequence, SequenceKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AelPremises {
    pub vocab: Arc<Vocabulary>,
    pub formulas: Vec<ModalFormula>,
}

impl AelPremises {
    pub fn new(vocab: Arc<Vocabulary>, formulas: Vec<ModalFormula>) -> Result<Self> {
        for f in &formulas {
            if let Some(v) = f.max_var() {
                if v.index() >= vocab.len() {
                    return Err(Error::UnknownConstant(format!("#{}", v.0)));
                }
            }
        }
        Ok(AelPremises { vocab, formulas })
    }

    pub fn compile(&self, limits: &Limits) -> Result<CompiledPremises> {
        let universe = Universe::new(self.vocab.clone(), limits)?;
        let premises: Vec<CompiledPremise> = self
            .formulas
            .iter()
            .map(|f| {
                Ok(CompiledPremise {
                    alpha: f.alpha.as_ref().map(|a| universe.compile(a)).transpose()?,
                    betas: f.betas.iter().map(|b| universe.compile(b)).collect::<Result<_>>()?,
                    gamma: universe.compile(&f.gamma)?,
                })
            })
            .collect::<Result<_>>()?;

        // Formulas under L, identified up to logical equivalence.
        let mut believed: Vec<ModelSet> = Vec::new();
        for p in &premises {
            for m in p.alpha.iter().chain(&p.betas) {
                if !believed.contains(m) {
                    believed.push(m.clone());
                }
            }
        }
        if believed.len() > limits.max_modal_atoms {
            return Err(Error::resource(
                "distinct formulas under L",
                believed.len(),
                limits.max_modal_atoms,
            ));
        }
        Ok(CompiledPremises {
            labels: self.formulas.iter().map(|f| f.render(&self.vocab)).collect(),
            universe,
            premises,
            believed,
            limits: *limits,
        })
    }
}

#[derive(Debug, Clone)]
struct CompiledPremise {
    alpha: Option<ModelSet>,
    betas: Vec<ModelSet>,
    gamma: ModelSet,
}

impl CompiledPremise {
    /// `α` holds throughout `worlds`.
    fn alpha_holds(&self, worlds: &ModelSet) -> bool {
        self.alpha.as_ref().is_none_or(|a| worlds.is_subset(a))
    }

    /// Each `¬βⱼ` is true at some world of `worlds`.
    fn betas_refuted(&self, worlds: &ModelSet) -> bool {
        self.betas.iter().all(|b| !worlds.is_subset(b))
    }

    /// `α ∈ T` and every `βⱼ ∉ T` for the theory with models `kernel`.
    fn applies(&self, kernel: &ModelSet) -> bool {
        self.alpha_holds(kernel) && self.betas_refuted(kernel)
    }
}

/// Consistent stable expansions, plus whether the premises are
/// propositionally inconsistent when each `Lφ` is read as a fresh atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansions {
    pub kernels: Vec<Kernel>,
    pub premises_inconsistent: bool,
}

#[derive(Debug, Clone)]
pub struct CompiledPremises {
    universe: Universe,
    labels: Vec<String>,
    premises: Vec<CompiledPremise>,
    believed: Vec<ModelSet>,
    limits: Limits,
}

impl CompiledPremises {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Kernel models of Ω(T) for the consistent theory with models `kernel`.
    pub fn omega(&self, kernel: &ModelSet) -> Result<ModelSet> {
        if kernel.is_empty() {
            return Err(Error::Precondition("Ω is defined for consistent theories only".into()));
        }
        let mut out = self.universe.all();
        for p in &self.premises {
            if p.applies(kernel) {
                out.intersect_with(&p.gamma);
            }
        }
        Ok(out)
    }

    /// Kernel induced by a belief guess: `guess[j]` says whether
    /// `self.believed[j]` is believed.
    fn induced(&self, guess: &[bool]) -> ModelSet {
        let is_believed = |m: &ModelSet| {
            let j = self.believed.iter().position(|b| b == m).expect("collected at compile time");
            guess[j]
        };
        let mut out = self.universe.all();
        for p in &self.premises {
            let fires = p.alpha.as_ref().is_none_or(is_believed) && p.betas.iter().all(|b| !is_believed(b));
            if fires {
                out.intersect_with(&p.gamma);
            }
        }
        out
    }

    /// Guess-and-verify over the belief status of every formula under L.
    pub fn stable_expansions(&self) -> Expansions {
        let k = self.believed.len();
        let mut kernels = BTreeSet::new();
        let mut satisfiable = false;
        let mut guess = vec![false; k];
        for mask in 0u32..1 << k {
            for (j, g) in guess.iter_mut().enumerate() {
                *g = mask >> j & 1 == 1;
            }
            let kernel = self.induced(&guess);
            if kernel.is_empty() {
                continue;
            }
            satisfiable = true;
            let verified = self
                .believed
                .iter()
                .zip(&guess)
                .all(|(m, &g)| kernel.is_subset(m) == g);
            if verified {
                kernels.insert(kernel);
            }
        }
        Expansions {
            kernels: kernels
                .into_iter()
                .map(|m| Kernel::new(self.universe.vocab().clone(), m))
                .collect(),
            premises_inconsistent: !satisfiable,
        }
    }

    /// Distinct peel orders ending at `kernel`, bounded by
    /// `limits.max_orderings`.
    pub fn sequences_for(&self, kernel: &ModelSet) -> Vec<(Vec<ModelSet>, Vec<usize>)> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut classes = vec![self.universe.none()];
        let mut used = Vec::new();
        self.peel(kernel, self.universe.all(), &mut classes, &mut used, &mut seen, &mut out);
        out
    }

    fn peel(
        &self,
        kernel: &ModelSet,
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
        for (i, p) in self.premises.iter().enumerate() {
            if p.applies(kernel) && !remaining.is_subset(&p.gamma) {
                any = true;
                classes.push(remaining.minus(&p.gamma));
                used.push(i);
                self.peel(kernel, remaining.and(&p.gamma), classes, used, seen, out);
                classes.pop();
                used.pop();
                if out.len() >= self.limits.max_orderings {
                    return;
                }
            }
        }
        if !any {
            debug_assert_eq!(&remaining, kernel);
            let mut full = classes.clone();
            full.push(remaining);
            if seen.insert(full.clone()) {
                out.push((full, used.clone()));
            }
        }
    }

    fn produces(&self, classes: &[ModelSet], tails: &[ModelSet], i: usize, p: usize, mode: Mode) -> bool {
        let prem = &self.premises[p];
        let scope = match mode {
            Mode::Standard => classes.last().unwrap(),
            Mode::Strict => &classes[i],
        };
        prem.alpha_holds(scope) && prem.betas_refuted(scope) && classes[i] == tails[i].minus(&prem.gamma)
    }

    fn closed_under(&self, last: &ModelSet, p: usize) -> bool {
        let prem = &self.premises[p];
        !prem.applies(last) || last.is_subset(&prem.gamma)
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

    /// Short-circuiting validity test, including `W_l ≠ ∅`.
    pub fn is_ael_sequence(&self, classes: &[ModelSet], mode: Mode) -> bool {
        if classes.len() < 2 || !self.partitions(classes) || !classes[0].is_empty() {
            return false;
        }
        let l = classes.len() - 1;
        if classes[l].is_empty() {
            return false;
        }
        let tails = Self::tails(classes);
        (1..l).all(|i| (0..self.premises.len()).any(|p| self.produces(classes, &tails, i, p, mode)))
            && (0..self.premises.len()).all(|p| self.closed_under(&classes[l], p))
    }

    pub fn check_classes(&self, classes: &[ModelSet], mode: Mode) -> CheckReport {
        let mut report = CheckReport::default();
        if classes.len() < 2 || !self.partitions(classes) {
            report.push(Clause::Structure, None, None, "classes do not partition the world set");
            return report;
        }
        if !classes[0].is_empty() {
            report.push(Clause::Condition(1), Some(0), None, "W_0 must be empty");
        }
        let l = classes.len() - 1;
        if classes[l].is_empty() {
            report.push(Clause::EmptyLastClass, Some(l), None, "W_l is empty");
        }
        let tails = Self::tails(classes);
        for i in 1..l {
            if !(0..self.premises.len()).any(|p| self.produces(classes, &tails, i, p, mode)) {
                report.push(
                    Clause::Condition(2),
                    Some(i),
                    None,
                    "no applicable premise has exactly this class as its falsifying remainder",
                );
            }
        }
        for p in 0..self.premises.len() {
            if !self.closed_under(&classes[l], p) {
                report.push(
                    Clause::Condition(3),
                    Some(l),
                    Some(self.labels[p].clone()),
                    "premise applies to the last class but its consequent is not true throughout it",
                );
            }
        }
        report
    }

    pub fn check(&self, seq: &PartitionSequence, mode: Mode) -> Result<CheckReport> {
        if seq.vocab != *self.universe.vocab() {
            return Err(Error::VocabularyMismatch("sequence and premises differ".into()));
        }
        if seq.kind != SequenceKind::Autoepistemic {
            return Err(Error::KindMismatch {
                left: seq.kind.to_string(),
                right: SequenceKind::Autoepistemic.to_string(),
            });
        }
        let all = self.universe.worlds(&self.universe.all());
        let structure = validate_structure(seq, &all);
        if !structure.is_ok() {
            return Ok(structure);
        }
        let masks: Vec<ModelSet> = seq
            .classes()
            .iter()
            .map(|c| {
                ModelSet::from_indices(
                    self.universe.size(),
                    c.iter().filter_map(|w| self.universe.index_of(&w.assignment)),
                )
            })
            .collect();
        Ok(self.check_classes(&masks, mode))
    }

    pub fn build_sequences(&self) -> Result<Vec<PartitionSequence>> {
        let mut out = Vec::new();
        for k in self.stable_expansions().kernels {
            for (classes, used) in self.sequences_for(&k.models) {
                let mut provenance = vec![None];
                provenance.extend(used.iter().map(|&p| Some(self.labels[p].clone())));
                provenance.push(None);
                let worlds = classes.iter().map(|c| self.universe.worlds(c)).collect();
                out.push(PartitionSequence::new(
                    SequenceKind::Autoepistemic,
                    self.universe.vocab().clone(),
                    worlds,
                    provenance,
                )?);
            }
        }
        Ok(out)
    }
}

pub fn omega_operator(a: &AelPremises, t: &Kernel) -> Result<Kernel> {
    if t.vocab != a.vocab {
        return Err(Error::VocabularyMismatch("kernel and premises differ".into()));
    }
    let c = a.compile(&Limits::default())?;
    Ok(Kernel::new(a.vocab.clone(), c.omega(&t.models)?))
}

pub fn stable_expansions(a: &AelPremises) -> Result<Expansions> {
    Ok(a.compile(&Limits::default())?.stable_expansions())
}

pub fn build_ael_sequences(a: &AelPremises) -> Result<Vec<PartitionSequence>> {
    a.compile(&Limits::default())?.build_sequences()
}

pub fn check_ael_sequence(a: &AelPremises, seq: &PartitionSequence, mode: Mode) -> Result<CheckReport> {
    a.compile(&Limits::default())?.check(seq, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Formula, Var, World};

    fn vocab(n: usize) -> Arc<Vocabulary> {
        Arc::new(Vocabulary::new(["p", "q"].into_iter().take(n)).unwrap())
    }

    fn p() -> Formula {
        Formula::Atom(Var(0))
    }

    fn q() -> Formula {
        Formula::Atom(Var(1))
    }

    /// `Lp → p`, `¬Lp → q`.
    fn belief_choice() -> AelPremises {
        AelPremises::new(
            vocab(2),
            vec![
                ModalFormula::new(Some(p()), vec![], p()),
                ModalFormula::new(None, vec![p()], q()),
            ],
        )
        .unwrap()
    }

    /// `¬Lp → q`, `¬q`.
    fn no_expansion() -> AelPremises {
        AelPremises::new(
            vocab(2),
            vec![
                ModalFormula::new(None, vec![p()], q()),
                ModalFormula::plain(Formula::not(q())),
            ],
        )
        .unwrap()
    }

    fn kernel(a: &AelPremises, phi: &Formula) -> Kernel {
        let u = Universe::new(a.vocab.clone(), &Limits::default()).unwrap();
        Kernel::new(a.vocab.clone(), u.compile(phi).unwrap())
    }

    fn w(n: usize, trues: &[u32]) -> World {
        World::from_literals(n, &trues.iter().map(|&i| Var(i)).collect::<Vec<_>>())
    }

    fn seq(a: &AelPremises, classes: Vec<Vec<World>>) -> PartitionSequence {
        PartitionSequence::new(SequenceKind::Autoepistemic, a.vocab.clone(), classes, vec![]).unwrap()
    }

    #[test]
    fn omega_examples() {
        let a = belief_choice();
        let kp = kernel(&a, &p());
        let kq = kernel(&a, &q());
        assert_eq!(omega_operator(&a, &kp).unwrap(), kp);
        assert_eq!(omega_operator(&a, &kq).unwrap(), kq);

        let plain = AelPremises::new(vocab(2), vec![ModalFormula::plain(p())]).unwrap();
        assert_eq!(omega_operator(&plain, &kernel(&plain, &Formula::Top)).unwrap(), kernel(&plain, &p()));
    }

    #[test]
    fn omega_requires_consistent_theory() {
        let a = belief_choice();
        assert!(matches!(
            omega_operator(&a, &kernel(&a, &Formula::Bottom)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn belief_choice_expansions() {
        let a = belief_choice();
        let e = stable_expansions(&a).unwrap();
        let mut expected = vec![kernel(&a, &p()), kernel(&a, &q())];
        expected.sort();
        assert_eq!(e.kernels, expected);
        assert!(!e.premises_inconsistent);
    }

    #[test]
    fn no_expansion_has_no_expansion() {
        let a = no_expansion();
        let e = stable_expansions(&a).unwrap();
        assert!(e.kernels.is_empty());
        assert!(!e.premises_inconsistent);
        assert!(build_ael_sequences(&a).unwrap().is_empty());
    }

    #[test]
    fn non_modal_premise() {
        let a = AelPremises::new(vocab(1), vec![ModalFormula::plain(p())]).unwrap();
        assert_eq!(stable_expansions(&a).unwrap().kernels, vec![kernel(&a, &p())]);
        let seqs = build_ael_sequences(&a).unwrap();
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0].classes(), &[vec![], vec![w(1, &[])], vec![w(1, &[0])]]);
    }

    #[test]
    fn inconsistent_premises_flagged() {
        let a = AelPremises::new(vocab(1), vec![ModalFormula::plain(p()), ModalFormula::plain(Formula::not(p()))])
            .unwrap();
        let e = stable_expansions(&a).unwrap();
        assert!(e.kernels.is_empty());
        assert!(e.premises_inconsistent);
    }

    #[test]
    fn belief_choice_reference_sequences_check() {
        let a = belief_choice();
        let s1 = seq(&a, vec![vec![], vec![w(2, &[1]), w(2, &[])], vec![w(2, &[0, 1]), w(2, &[0])]]);
        let s2 = seq(&a, vec![vec![], vec![w(2, &[0]), w(2, &[])], vec![w(2, &[0, 1]), w(2, &[1])]]);
        assert!(check_ael_sequence(&a, &s1, Mode::Standard).unwrap().is_ok());
        assert!(check_ael_sequence(&a, &s2, Mode::Standard).unwrap().is_ok());
        let built = build_ael_sequences(&a).unwrap();
        assert_eq!(built.len(), 2);
        assert!(built.contains(&PartitionSequence::new(
            SequenceKind::Autoepistemic,
            a.vocab.clone(),
            s1.classes().to_vec(),
            vec![None, Some("L p -> p".into()), None],
        )
        .unwrap()));
        // Evaluating α against the peeled class rejects the first one.
        assert!(check_ael_sequence(&a, &s1, Mode::Strict).unwrap().has(Clause::Condition(2)));
    }

    #[test]
    fn nonempty_first_class_violates_condition_one() {
        let a = belief_choice();
        let s = seq(&a, vec![vec![w(2, &[])], vec![w(2, &[1]), w(2, &[0]), w(2, &[0, 1])]]);
        assert!(check_ael_sequence(&a, &s, Mode::Standard).unwrap().has(Clause::Condition(1)));
    }

    #[test]
    fn no_expansion_candidate_violates_condition_three() {
        let a = no_expansion();
        let s = seq(&a, vec![vec![], vec![w(2, &[0, 1]), w(2, &[1])], vec![w(2, &[0]), w(2, &[])]]);
        let r = check_ael_sequence(&a, &s, Mode::Standard).unwrap();
        assert!(
            r.violations
                .iter()
                .any(|v| v.clause == Clause::Condition(3) && v.item.as_deref() == Some("~L p -> q")),
            "{r:?}"
        );
    }

    #[test]
    fn modal_atom_cap() {
        let v = Arc::new(Vocabulary::new((0..17).map(|i| format!("x{i}"))).unwrap());
        let premises = (0..17)
            .map(|i| ModalFormula::new(None, vec![Formula::Atom(Var(i))], Formula::Top))
            .collect();
        let a = AelPremises::new(v, premises).unwrap();
        assert!(matches!(stable_expansions(&a), Err(Error::Resource { cap: 16, .. })));
    }
}
