//! Finite propositional language: vocabularies, formulas, worlds and
//! semantic entailment by exhaustive model checking.

mod formula;
mod models;
mod world;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub use formula::{Formula, FormulaDisplay, ModalFormula};
pub use models::{entails, models, Kernel, ModelSet, Universe};
pub use world::{enumerate_worlds, Assignment, World};

/// Index of a propositional constant within its [`Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An ordered set of distinct propositional constants.
///
/// The order is fixed at creation; world indices and the binary-counting
/// enumeration order depend on it.
#[derive(Clone, Default)]
pub struct Vocabulary {
    names: Vec<String>,
    index: HashMap<String, Var>,
}

impl Vocabulary {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vocab = Vocabulary::default();
        for name in names {
            vocab.insert(name.into())?;
        }
        Ok(vocab)
    }

    /// Appends a new constant, failing on duplicates.
    pub fn insert(&mut self, name: String) -> Result<Var> {
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateConstant(name));
        }
        let var = Var(self.names.len() as u32);
        self.index.insert(name.clone(), var);
        self.names.push(name);
        Ok(var)
    }

    /// Returns the constant, adding it when absent.
    pub fn intern(&mut self, name: &str) -> Var {
        match self.index.get(name) {
            Some(&v) => v,
            None => self.insert(name.to_string()).expect("absent name"),
        }
    }

    pub fn lookup(&self, name: &str) -> Result<Var> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownConstant(name.to_string()))
    }

    pub fn get(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    pub fn name(&self, var: Var) -> &str {
        &self.names[var.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.names.len() as u32).map(Var)
    }

    /// Fails with [`Error::UnknownConstant`] if `phi` mentions a constant
    /// outside this vocabulary.
    pub fn check(&self, phi: &Formula) -> Result<()> {
        match phi.max_var() {
            Some(v) if v.index() >= self.len() => Err(Error::UnknownConstant(format!("#{}", v.0))),
            _ => Ok(()),
        }
    }
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for Vocabulary {}

impl fmt::Debug for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.names).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_names_rejected() {
        assert_eq!(
            Vocabulary::new(["p", "q", "p"]).unwrap_err(),
            Error::DuplicateConstant("p".into())
        );
    }

    #[test]
    fn order_is_insertion_order() {
        let v = Vocabulary::new(["q", "p"]).unwrap();
        assert_eq!(v.lookup("q").unwrap(), Var(0));
        assert_eq!(v.name(Var(1)), "p");
        assert!(matches!(v.lookup("r"), Err(Error::UnknownConstant(_))));
    }
}
