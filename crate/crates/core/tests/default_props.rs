mod common;

use std::collections::BTreeSet;

use common::*;
use partseq::default_logic::{DefaultRule, DefaultTheory};
use partseq::partition::validate_structure;
use partseq::{isomorphic, Formula, Limits, Mode, ModelSet};
use proptest::prelude::*;

fn theory(max_n: usize, max_rules: usize) -> impl Strategy<Value = DefaultTheory> {
    (1..=max_n).prop_flat_map(move |n| {
        let rule = (formula(n, 3), prop::collection::vec(formula(n, 3), 1..=2), formula(n, 3));
        (
            prop::collection::vec(rule, 0..=max_rules),
            prop::collection::vec(formula(n, 3), 0..=2),
        )
            .prop_map(move |(rules, facts)| {
                let rules = rules
                    .into_iter()
                    .enumerate()
                    .map(|(i, (a, b, g))| DefaultRule::new(format!("d{i}"), a, b, g))
                    .collect();
                DefaultTheory::new(vocab(n), rules, facts).unwrap()
            })
    })
}

/// World indices satisfying `f`, by direct truth-table evaluation.
fn sat(f: &Formula, n: usize) -> BTreeSet<usize> {
    worlds(&vocab(n))
        .iter()
        .filter(|w| truth(f, &bits_of(w, n)))
        .map(|w| w.assignment.index())
        .collect()
}

/// Extensions as fixed points of Γ, found by trying `Th(F ∪ conclusions)`
/// for every subset of rules and computing Γ by least-fixpoint iteration.
fn oracle_extensions(t: &DefaultTheory) -> BTreeSet<BTreeSet<usize>> {
    let n = t.vocab.len();
    let all: BTreeSet<usize> = (0..1 << n).collect();
    let conj = |fs: &mut dyn Iterator<Item = &Formula>| {
        fs.fold(all.clone(), |acc, f| acc.intersection(&sat(f, n)).copied().collect())
    };
    let facts = conj(&mut t.facts.iter());
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << t.rules.len() {
        let chosen = t.rules.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, r)| &r.gamma);
        let e: BTreeSet<usize> = facts.intersection(&conj(&mut chosen.into_iter())).copied().collect();
        let mut s = facts.clone();
        loop {
            let mut next = s.clone();
            for r in &t.rules {
                let alpha_in = s.is_subset(&sat(&r.alpha, n));
                let consistent = r.betas.iter().all(|b| !sat(b, n).is_disjoint(&e));
                if alpha_in && consistent {
                    next = next.intersection(&sat(&r.gamma, n)).copied().collect();
                }
            }
            if next == s {
                break;
            }
            s = next;
        }
        if s == e {
            out.insert(e);
        }
    }
    out
}

/// Last classes of every valid sequence with at most `max_classes` classes.
fn brute_force_last_classes(t: &DefaultTheory, max_classes: usize) -> BTreeSet<ModelSet> {
    let c = t.compile(&Limits::default()).unwrap();
    let size = c.universe().size();
    let mut out = BTreeSet::new();
    for k in 2..=max_classes {
        let mut assign = vec![0usize; size];
        loop {
            let mut classes = vec![ModelSet::empty(size); k];
            for (w, &i) in assign.iter().enumerate() {
                classes[i].insert(w);
            }
            if c.is_default_sequence(&classes, Mode::Standard) {
                out.insert(classes[k - 1].clone());
            }
            let mut i = 0;
            while i < size && assign[i] == k - 1 {
                assign[i] = 0;
                i += 1;
            }
            if i == size {
                break;
            }
            assign[i] += 1;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn extensions_match_fixed_point_oracle(t in theory(3, 3)) {
        let ext = t.compile(&Limits::default()).unwrap().extensions();
        let got: BTreeSet<BTreeSet<usize>> = ext.kernels.iter().map(|k| k.models.iter().collect()).collect();
        prop_assert_eq!(got, oracle_extensions(&t));
    }

    #[test]
    fn built_sequences_are_valid(t in theory(3, 3)) {
        let c = t.compile(&Limits::default()).unwrap();
        let ext = c.extensions();
        let seqs = c.build_sequences().unwrap();
        let all = c.universe().worlds(&c.universe().all());
        for s in &seqs {
            prop_assert!(validate_structure(s, &all).is_ok());
            prop_assert!(c.check(s, Mode::Standard).unwrap().is_ok(), "{:?}", s);
        }
        if !ext.inconsistent_facts {
            let lasts: BTreeSet<Vec<_>> = seqs.iter().map(|s| s.last().to_vec()).collect();
            let kernels: BTreeSet<Vec<_>> = ext.kernels.iter().map(|k| k.worlds()).collect();
            prop_assert_eq!(lasts, kernels);
        }
        for a in &seqs {
            for b in &seqs {
                prop_assert_eq!(isomorphic(a, b).unwrap(), a.last() == b.last());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn valid_sequences_end_in_extensions(t in theory(2, 2)) {
        let c = t.compile(&Limits::default()).unwrap();
        let kernels: BTreeSet<ModelSet> = c.extensions().kernels.into_iter().map(|k| k.models).collect();
        prop_assert_eq!(brute_force_last_classes(&t, 4), kernels);
    }
}
