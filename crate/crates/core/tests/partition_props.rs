mod common;

use common::*;
use partseq::partition::validate_structure;
use partseq::{isomorphic, preference_view, PartitionSequence, SequenceKind, Weight, World};
use proptest::prelude::*;

/// Random sequences over the worlds of a 2-constant vocabulary.
fn sequence() -> impl Strategy<Value = PartitionSequence> {
    (2usize..=5, prop::collection::vec((0usize..5, 0i64..4), 4)).prop_map(|(k, raw)| {
        let v = vocab(2);
        let mut classes = vec![Vec::new(); k];
        for (w, (c, wt)) in worlds(&v).into_iter().zip(raw) {
            classes[c % k].push(World::new(w.assignment, Weight::ratio(wt, 3)));
        }
        PartitionSequence::new(SequenceKind::Default, v, classes, vec![]).unwrap()
    })
}

proptest! {
    #[test]
    fn isomorphism_is_an_equivalence(a in sequence(), b in sequence(), c in sequence()) {
        prop_assert!(isomorphic(&a, &a).unwrap());
        prop_assert_eq!(isomorphic(&a, &b).unwrap(), isomorphic(&b, &a).unwrap());
        if isomorphic(&a, &b).unwrap() && isomorphic(&b, &c).unwrap() {
            prop_assert!(isomorphic(&a, &c).unwrap());
        }
    }

    #[test]
    fn preference_chain_shrinks_to_last_class(s in sequence()) {
        let chain = preference_view(&s);
        let all = worlds(&s.vocab);
        prop_assert!(validate_structure(&s, &all).is_ok());
        prop_assert_eq!(chain.models.len(), s.classes().len());
        prop_assert_eq!(chain.models[0].len(), all.len());
        prop_assert_eq!(chain.models.last().unwrap().as_slice(), s.last());
        for pair in chain.models.windows(2) {
            prop_assert!(pair[1].iter().all(|w| pair[0].contains(w)));
        }
    }

    #[test]
    fn json_round_trip(s in sequence()) {
        let back = PartitionSequence::from_json_str(&s.to_json_string()).unwrap();
        prop_assert_eq!(back, s);
    }
}
