mod common;

use common::*;
use partseq::prob::{
    cond_prob, cond_prob_prefix, condition, enumerate_threshold_orders, extend_condition, lottery_space, threshold,
    SampleSpace,
};
use partseq::{Assignment, Error, Formula, Limits, Mode, Var, Weight, World};
use proptest::prelude::*;

/// Random spaces over `n` constants; zero-weight worlds are sometimes
/// omitted and sometimes listed.
fn space() -> impl Strategy<Value = SampleSpace> {
    (1usize..=3).prop_flat_map(|n| {
        prop::collection::vec((0i64..6, any::<bool>()), 1 << n).prop_filter_map("zero mass", move |raw| {
            let total: i64 = raw.iter().map(|(w, _)| w).sum();
            if total == 0 {
                return None;
            }
            let worlds = raw
                .iter()
                .enumerate()
                .filter(|(_, (w, keep_zero))| *w > 0 || *keep_zero)
                .map(|(i, (w, _))| World::new(Assignment::from_index(n, i), Weight::ratio(*w, total)))
                .collect();
            Some(SampleSpace::new(vocab(n), worlds).unwrap())
        })
    })
}

fn with_conditions() -> impl Strategy<Value = (SampleSpace, Vec<Formula>, Formula)> {
    space().prop_flat_map(|s| {
        let n = s.vocab.len();
        (Just(s), prop::collection::vec(formula(n, 3), 1..=3), formula(n, 3))
    })
}

fn epsilon() -> impl Strategy<Value = Weight> {
    (0i64..100).prop_map(|k| Weight::ratio(k, 100))
}

fn prob_all(s: &SampleSpace, fs: &[Formula]) -> Weight {
    s.prob(&Formula::conjunction(fs.iter().cloned())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn conditioning_matches_ratio((s, conds, psi) in with_conditions()) {
        let seq = condition(&s, &conds).unwrap();
        let den = prob_all(&s, &conds);
        let mut with_psi = conds.clone();
        with_psi.push(psi.clone());
        match cond_prob(&seq, &psi) {
            Ok(p) => prop_assert_eq!(p, &prob_all(&s, &with_psi) / &den),
            Err(e) => {
                prop_assert_eq!(e, Error::UndefinedConditional);
                prop_assert!(den.is_zero());
            }
        }
    }

    #[test]
    fn thresholding_matches_stepwise_conditionals((s, conds, psi) in with_conditions(), eps in epsilon()) {
        let one_minus = &Weight::one() - &eps;
        let expected = (0..conds.len()).all(|i| {
            let den = prob_all(&s, &conds[..i]);
            let num = prob_all(&s, &conds[..=i]);
            num.checked_div(&den).is_some_and(|p| p >= one_minus)
        });
        match threshold(&s, &eps, &conds, Mode::Standard) {
            Ok(seq) => {
                prop_assert!(expected);
                prop_assert_eq!(cond_prob(&seq, &psi).ok(), cond_prob(&condition(&s, &conds).unwrap(), &psi).ok());
            }
            Err(Error::BelowThreshold { .. }) => prop_assert!(!expected),
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }

    #[test]
    fn conditioning_is_incremental((s, conds, _psi) in with_conditions()) {
        let (last, prefix) = conds.split_last().unwrap();
        if prefix.is_empty() {
            return Ok(());
        }
        let short = condition(&s, prefix).unwrap();
        prop_assert_eq!(extend_condition(&short, last).unwrap(), condition(&s, &conds).unwrap());
    }

    #[test]
    fn prefixes_persist((s, conds, psi) in with_conditions()) {
        let seq = condition(&s, &conds).unwrap();
        for k in 0..=conds.len() {
            let direct = if k == 0 {
                s.prob(&psi).ok()
            } else {
                cond_prob(&condition(&s, &conds[..k]).unwrap(), &psi).ok()
            };
            prop_assert_eq!(cond_prob_prefix(&seq, k, &psi).ok(), direct);
        }
    }
}

proptest! {
    #[test]
    fn lottery_is_never_fully_accepted(n in 1usize..=6, eps in epsilon()) {
        let s = lottery_space(n).unwrap();
        let losers: Vec<Formula> = (0..n).map(|i| Formula::not(Formula::Atom(Var(i as u32)))).collect();
        prop_assert!(threshold(&s, &eps, &losers, Mode::Standard).is_err());
        let orders = enumerate_threshold_orders(&s, &eps, &losers, n, Mode::Standard, &Limits::default()).unwrap();
        prop_assert!(orders.iter().all(|o| o.len() < n));
    }
}
