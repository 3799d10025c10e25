#![allow(dead_code)]

use std::sync::Arc;

use partseq::logic::enumerate_worlds;
use partseq::{Formula, Limits, Var, Vocabulary, World};
use proptest::prelude::*;

pub fn vocab(n: usize) -> Arc<Vocabulary> {
    Arc::new(Vocabulary::new((0..n).map(|i| ["p", "q", "r", "s"][i])).unwrap())
}

pub fn worlds(v: &Vocabulary) -> Vec<World> {
    enumerate_worlds(v, &Limits::default()).unwrap()
}

/// Random formulas over `n ≥ 1` constants, at most `depth` levels deep.
pub fn formula(n: usize, depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        8 => (0..n as u32).prop_map(|i| Formula::Atom(Var(i))),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bottom),
    ];
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
    .boxed()
}

/// Truth-table evaluation written independently of the library's
/// evaluators: looks each constant up in an explicit bit vector.
pub fn truth(f: &Formula, bits: &[bool]) -> bool {
    match f {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Atom(v) => bits[v.0 as usize],
        Formula::Not(a) => !truth(a, bits),
        Formula::And(a, b) => truth(a, bits) && truth(b, bits),
        Formula::Or(a, b) => truth(a, bits) || truth(b, bits),
        Formula::Implies(a, b) => !truth(a, bits) || truth(b, bits),
        Formula::Iff(a, b) => truth(a, bits) == truth(b, bits),
    }
}

/// All bit vectors of length `n`.
pub fn rows(n: usize) -> Vec<Vec<bool>> {
    (0..1usize << n)
        .map(|k| (0..n).map(|i| k >> i & 1 == 1).collect())
        .collect()
}

pub fn bits_of(w: &World, n: usize) -> Vec<bool> {
    (0..n).map(|i| w.assignment.get(Var(i as u32))).collect()
}
