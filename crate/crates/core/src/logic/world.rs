use std::cmp::Ordering;
use std::fmt::Write as _;

use super::{Var, Vocabulary};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::weight::Weight;

/// A total truth assignment, stored as the sorted list of true constants.
///
/// The sparse form keeps large, sparse spaces (a lottery over a million
/// tickets) cheap; evaluation is a binary search per atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    len: u32,
    trues: Box<[u32]>,
}

impl Assignment {
    /// `trues` may be in any order; duplicates are collapsed.
    pub fn new(len: usize, trues: impl IntoIterator<Item = Var>) -> Self {
        let mut t: Vec<u32> = trues.into_iter().map(|v| v.0).collect();
        t.sort_unstable();
        t.dedup();
        debug_assert!(t.last().is_none_or(|&x| (x as usize) < len));
        Assignment {
            len: len as u32,
            trues: t.into_boxed_slice(),
        }
    }

    /// World number `index` in binary-counting order: the first constant of
    /// the vocabulary is the most significant bit.
    pub fn from_index(len: usize, index: usize) -> Self {
        let trues = (0..len)
            .filter(|&i| index >> (len - 1 - i) & 1 == 1)
            .map(|i| Var(i as u32));
        Assignment::new(len, trues)
    }

    /// Inverse of [`Assignment::from_index`].
    pub fn index(&self) -> usize {
        let n = self.len as usize;
        self.trues.iter().fold(0, |acc, &t| acc | 1 << (n - 1 - t as usize))
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, v: Var) -> bool {
        self.trues.binary_search(&v.0).is_ok()
    }

    pub fn trues(&self) -> impl Iterator<Item = Var> + '_ {
        self.trues.iter().map(|&t| Var(t))
    }

    /// Shorthand `{p,~q}` listing every constant.
    pub fn render(&self, vocab: &Vocabulary) -> String {
        let mut s = String::from("{");
        for (i, v) in vocab.vars().enumerate() {
            if i > 0 {
                s.push(',');
            }
            if !self.get(v) {
                s.push('~');
            }
            s.push_str(vocab.name(v));
        }
        s.push('}');
        s
    }
}

impl Ord for Assignment {
    fn cmp(&self, other: &Self) -> Ordering {
        // Binary-number order with constant 0 most significant. At the first
        // differing position the side holding the smaller index has a true
        // bit the other lacks.
        for (a, b) in self.trues.iter().zip(other.trues.iter()) {
            if a != b {
                return b.cmp(a);
            }
        }
        self.trues
            .len()
            .cmp(&other.trues.len())
            .then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for Assignment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One interpretation of the vocabulary together with its weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct World {
    pub assignment: Assignment,
    pub weight: Weight,
}

impl World {
    pub fn new(assignment: Assignment, weight: Weight) -> Self {
        World { assignment, weight }
    }

    /// Unit-weight world making exactly `trues` true.
    pub fn from_literals(len: usize, trues: &[Var]) -> Self {
        World::new(Assignment::new(len, trues.iter().copied()), Weight::one())
    }

    pub fn render(&self, vocab: &Vocabulary) -> String {
        let mut s = self.assignment.render(vocab);
        if !self.weight.is_one() {
            let _ = write!(s, ":{}", self.weight);
        }
        s
    }
}

/// Every truth assignment over `vocab`, unit weights, in binary-counting order.
pub fn enumerate_worlds(vocab: &Vocabulary, limits: &Limits) -> Result<Vec<World>> {
    let n = vocab.len();
    if n > limits.max_vocab {
        return Err(Error::resource("vocabulary size", n, limits.max_vocab));
    }
    Ok((0..1usize << n)
        .map(|i| World::new(Assignment::from_index(n, i), Weight::one()))
        .collect())
}
