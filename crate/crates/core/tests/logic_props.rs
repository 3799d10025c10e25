mod common;

use std::collections::HashSet;

use common::*;
use partseq::logic::{entails, models};
use partseq::syntax::{parse_formula, parse_kb, KbKind};
use partseq::{Formula, Limits};
use proptest::prelude::*;

proptest! {
    #[test]
    fn de_morgan_and_double_negation(a in formula(4, 6), b in formula(4, 6)) {
        let v = vocab(4);
        for w in worlds(&v) {
            let not_and = Formula::not(Formula::and(a.clone(), b.clone()));
            let or_not = Formula::or(Formula::not(a.clone()), Formula::not(b.clone()));
            prop_assert_eq!(not_and.eval(&w).unwrap(), or_not.eval(&w).unwrap());
            let not_or = Formula::not(Formula::or(a.clone(), b.clone()));
            let and_not = Formula::and(Formula::not(a.clone()), Formula::not(b.clone()));
            prop_assert_eq!(not_or.eval(&w).unwrap(), and_not.eval(&w).unwrap());
            prop_assert_eq!(Formula::not(Formula::not(a.clone())).eval(&w).unwrap(), a.eval(&w).unwrap());
        }
    }

    #[test]
    fn entails_matches_truth_table(
        n in 1usize..=3,
        s in prop::collection::vec(formula(3, 3), 0..3),
        phi in formula(3, 3),
    ) {
        let clamp = |f: &Formula| f.max_var().is_none_or(|v| (v.0 as usize) < n);
        prop_assume!(s.iter().all(clamp) && clamp(&phi));
        let v = vocab(n);
        let brute = rows(n)
            .iter()
            .filter(|r| s.iter().all(|f| truth(f, r)))
            .all(|r| truth(&phi, r));
        prop_assert_eq!(entails(&s, &phi, &v, &Limits::default()).unwrap(), brute);
    }

    #[test]
    fn models_matches_truth_table(phi in formula(3, 4)) {
        let v = vocab(3);
        let ws = worlds(&v);
        let m = models(&phi, &ws);
        let expected = ws.iter().filter(|w| truth(&phi, &bits_of(w, 3))).count();
        prop_assert_eq!(m.len(), expected);
    }

    #[test]
    fn printed_formulas_parse_back(phi in formula(4, 6)) {
        let v = vocab(4);
        let text = phi.display(&v).to_string();
        prop_assert_eq!(parse_formula(&text, &v).unwrap(), phi);
    }

    #[test]
    fn parsers_are_total(text in "[ -~\n]{0,80}") {
        let v = vocab(2);
        if let Err(e) = parse_formula(&text, &v) {
            prop_assert!(e.line >= 1 && e.column >= 1);
        }
        for kind in [KbKind::Default, KbKind::Ael, KbKind::Prob, KbKind::Poss] {
            if let Err(e) = parse_kb(&text, kind) {
                prop_assert!(e.line >= 1 && e.column >= 1);
            }
        }
    }

    #[test]
    fn parsers_are_total_on_near_miss_input(
        parts in prop::collection::vec(
            prop::sample::select(vec![
                "rule", "fact", "world", "poss", "vocab", ":", "/", ",", "M", "L", "~", "&", "|",
                "->", "<->", "(", ")", "p", "q", "true", "0.5", "1/2", "\n", " ", "#",
            ]),
            0..40,
        )
    ) {
        let text: String = parts.concat();
        for kind in [KbKind::Default, KbKind::Ael, KbKind::Prob, KbKind::Poss] {
            let _ = parse_kb(&text, kind);
        }
    }
}

#[test]
fn world_enumeration_is_exhaustive() {
    for n in 0..=4 {
        let ws = worlds(&vocab(n));
        assert_eq!(ws.len(), 1 << n);
        let distinct: HashSet<_> = ws.iter().map(|w| w.assignment.clone()).collect();
        assert_eq!(distinct.len(), ws.len());
    }
}
