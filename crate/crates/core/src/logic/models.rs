use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::{smallvec, SmallVec};

use super::{Assignment, Formula, Vocabulary, World};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::weight::Weight;

/// A set of worlds of an exhaustive enumeration, as a bitset over world
/// indices (see [`Assignment::from_index`]).
///
/// Deductively closed theories over a finite vocabulary are represented by
/// their model sets; `Th(S)` is never materialised as formulas.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModelSet {
    size: u32,
    words: SmallVec<[u64; 2]>,
}

impl ModelSet {
    pub fn empty(size: usize) -> Self {
        ModelSet {
            size: size as u32,
            words: smallvec![0; size.div_ceil(64).max(1)],
        }
    }

    pub fn full(size: usize) -> Self {
        let mut s = ModelSet {
            size: size as u32,
            words: smallvec![!0; size.div_ceil(64).max(1)],
        };
        s.trim();
        s
    }

    pub fn from_indices(size: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = ModelSet::empty(size);
        for i in indices {
            s.insert(i);
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.size as usize % 64;
        if rem != 0 {
            *self.words.last_mut().unwrap() &= (1u64 << rem) - 1;
        } else if self.size == 0 {
            self.words[0] = 0;
        }
    }

    /// Number of worlds in the underlying enumeration.
    pub fn universe_size(&self) -> usize {
        self.size as usize
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.size as usize, "world index out of range");
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.size as usize && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &ModelSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &ModelSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersect_with(&mut self, other: &ModelSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &ModelSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn subtract(&mut self, other: &ModelSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn and(&self, other: &ModelSet) -> ModelSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn or(&self, other: &ModelSet) -> ModelSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn minus(&self, other: &ModelSet) -> ModelSet {
        let mut s = self.clone();
        s.subtract(other);
        s
    }

    pub fn complement(&self) -> ModelSet {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.trim();
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

impl Ord for ModelSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size
            .cmp(&other.size)
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for ModelSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The exhaustive world set of a vocabulary, with formulas compiled to
/// model sets by bitwise evaluation.
#[derive(Debug, Clone)]
pub struct Universe {
    vocab: Arc<Vocabulary>,
    atoms: Vec<ModelSet>,
}

impl Universe {
    pub fn new(vocab: Arc<Vocabulary>, limits: &Limits) -> Result<Self> {
        let n = vocab.len();
        if n > limits.max_vocab {
            return Err(Error::resource("vocabulary size", n, limits.max_vocab));
        }
        let size = 1usize << n;
        let atoms = (0..n)
            .map(|i| ModelSet::from_indices(size, (0..size).filter(|k| k >> (n - 1 - i) & 1 == 1)))
            .collect();
        Ok(Universe { vocab, atoms })
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        1 << self.vocab.len()
    }

    pub fn all(&self) -> ModelSet {
        ModelSet::full(self.size())
    }

    pub fn none(&self) -> ModelSet {
        ModelSet::empty(self.size())
    }

    /// Model set of `phi`.
    pub fn compile(&self, phi: &Formula) -> Result<ModelSet> {
        self.vocab.check(phi)?;
        Ok(self.compile_unchecked(phi))
    }

    fn compile_unchecked(&self, phi: &Formula) -> ModelSet {
        match phi {
            Formula::Top => self.all(),
            Formula::Bottom => self.none(),
            Formula::Atom(v) => self.atoms[v.index()].clone(),
            Formula::Not(f) => self.compile_unchecked(f).complement(),
            Formula::And(l, r) => self.compile_unchecked(l).and(&self.compile_unchecked(r)),
            Formula::Or(l, r) => self.compile_unchecked(l).or(&self.compile_unchecked(r)),
            Formula::Implies(l, r) => self
                .compile_unchecked(l)
                .complement()
                .or(&self.compile_unchecked(r)),
            Formula::Iff(l, r) => {
                let a = self.compile_unchecked(l);
                let b = self.compile_unchecked(r);
                a.and(&b).or(&a.complement().and(&b.complement()))
            }
        }
    }

    pub fn world(&self, index: usize) -> World {
        World::new(Assignment::from_index(self.vocab.len(), index), Weight::one())
    }

    /// Unit-weight worlds of `set`, in enumeration order.
    pub fn worlds(&self, set: &ModelSet) -> Vec<World> {
        set.iter().map(|i| self.world(i)).collect()
    }

    /// Index of `a`, if it is an assignment over this vocabulary.
    pub fn index_of(&self, a: &Assignment) -> Option<usize> {
        (a.len() == self.vocab.len()).then(|| a.index())
    }
}

/// A deductively closed non-modal theory, held as the set of its models.
///
/// The empty model set is the inconsistent theory.
#[derive(Clone, PartialEq, Eq)]
pub struct Kernel {
    pub vocab: Arc<Vocabulary>,
    pub models: ModelSet,
}

impl Kernel {
    pub fn new(vocab: Arc<Vocabulary>, models: ModelSet) -> Self {
        Kernel { vocab, models }
    }

    pub fn is_consistent(&self) -> bool {
        !self.models.is_empty()
    }

    /// Membership `phi ∈ Th(kernel)`.
    pub fn contains(&self, phi: &Formula) -> bool {
        let n = self.vocab.len();
        self.models
            .iter()
            .all(|i| phi.holds(&Assignment::from_index(n, i)))
    }

    pub fn worlds(&self) -> Vec<World> {
        let n = self.vocab.len();
        self.models
            .iter()
            .map(|i| World::new(Assignment::from_index(n, i), Weight::one()))
            .collect()
    }

    pub fn render(&self) -> String {
        let ws: Vec<String> = self
            .worlds()
            .iter()
            .map(|w| w.assignment.render(&self.vocab))
            .collect();
        format!("{{{}}}", ws.join(", "))
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Ord for Kernel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.models.cmp(&other.models)
    }
}

impl PartialOrd for Kernel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The worlds of `ws` satisfying `phi`.
pub fn models(phi: &Formula, ws: &[World]) -> Vec<World> {
    ws.iter()
        .filter(|w| phi.holds(&w.assignment))
        .cloned()
        .collect()
}

/// Semantic entailment `S ⊨ phi`: every model of the conjunction of `S`
/// satisfies `phi`.
pub fn entails(s: &[Formula], phi: &Formula, vocab: &Arc<Vocabulary>, limits: &Limits) -> Result<bool> {
    let u = Universe::new(vocab.clone(), limits)?;
    let mut premises = u.all();
    for f in s {
        premises.intersect_with(&u.compile(f)?);
    }
    Ok(premises.is_subset(&u.compile(phi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Var;

    fn pq() -> (Arc<Vocabulary>, Formula, Formula) {
        (
            Arc::new(Vocabulary::new(["p", "q"]).unwrap()),
            Formula::Atom(Var(0)),
            Formula::Atom(Var(1)),
        )
    }

    #[test]
    fn models_examples() {
        let (v, p, q) = pq();
        let ws = crate::logic::enumerate_worlds(&v, &Limits::default()).unwrap();
        let m: Vec<_> = models(&p, &ws).iter().map(|w| w.render(&v)).collect();
        assert_eq!(m, ["{p,~q}", "{p,q}"]);
        assert!(models(&Formula::Bottom, &ws).is_empty());
        assert_eq!(models(&Formula::or(p, q), &ws).len(), 3);
    }

    #[test]
    fn entails_examples() {
        let (v, p, q) = pq();
        let l = Limits::default();
        assert!(entails(&[p.clone(), Formula::implies(p.clone(), q.clone())], &q, &v, &l).unwrap());
        assert!(!entails(std::slice::from_ref(&p), &q, &v, &l).unwrap());
        assert!(entails(&[], &Formula::or(p.clone(), Formula::not(p)), &v, &l).unwrap());
    }

    #[test]
    fn compile_agrees_with_eval() {
        let (v, p, q) = pq();
        let u = Universe::new(v, &Limits::default()).unwrap();
        let f = Formula::iff(p, Formula::not(q));
        let m = u.compile(&f).unwrap();
        for i in 0..u.size() {
            assert_eq!(m.contains(i), f.holds(&u.world(i).assignment));
        }
    }

    #[test]
    fn bitset_ops_cross_word_boundary() {
        let a = ModelSet::from_indices(130, [0, 64, 129]);
        let b = ModelSet::from_indices(130, [64]);
        assert_eq!(a.len(), 3);
        assert!(b.is_subset(&a));
        assert_eq!(a.minus(&b).iter().collect::<Vec<_>>(), [0, 129]);
        assert_eq!(a.complement().len(), 127);
        assert_eq!(ModelSet::full(130).len(), 130);
    }
}
