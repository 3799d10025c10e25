use std::fmt;

use super::{Assignment, Var, Vocabulary, World};
use crate::error::{Error, Result};

/// Propositional formula over the constants of a [`Vocabulary`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bottom,
    Atom(Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(v: Var) -> Self {
        Formula::Atom(v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Conjunction of all members; `Top` for an empty iterator.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Top)
    }

    /// Truth value under a total assignment. Constants beyond the
    /// assignment's vocabulary evaluate to false; use [`Formula::eval`] for
    /// the checked version.
    pub fn holds(&self, a: &Assignment) -> bool {
        match self {
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Atom(v) => a.get(*v),
            Formula::Not(f) => !f.holds(a),
            Formula::And(l, r) => l.holds(a) && r.holds(a),
            Formula::Or(l, r) => l.holds(a) || r.holds(a),
            Formula::Implies(l, r) => !l.holds(a) || r.holds(a),
            Formula::Iff(l, r) => l.holds(a) == r.holds(a),
        }
    }

    pub fn eval(&self, w: &World) -> Result<bool> {
        if let Some(v) = self.max_var() {
            if v.index() >= w.assignment.len() {
                return Err(Error::UnknownConstant(format!("#{}", v.0)));
            }
        }
        Ok(self.holds(&w.assignment))
    }

    /// Highest constant mentioned, if any.
    pub fn max_var(&self) -> Option<Var> {
        match self {
            Formula::Top | Formula::Bottom => None,
            Formula::Atom(v) => Some(*v),
            Formula::Not(f) => f.max_var(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                l.max_var().max(r.max_var())
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) | Formula::Iff(l, r) => {
                1 + l.depth().max(r.depth())
            }
        }
    }

    pub fn display<'a>(&'a self, vocab: &'a Vocabulary) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            vocab,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(_) => 5,
            _ => 6,
        }
    }
}

/// Renders a formula in the concrete KB syntax with minimal parentheses.
pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    vocab: &'a Vocabulary,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, phi: &Formula, min_prec: u8) -> fmt::Result {
        let prec = phi.precedence();
        let paren = prec < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match phi {
            Formula::Top => f.write_str("true")?,
            Formula::Bottom => f.write_str("false")?,
            Formula::Atom(v) => match self.vocab.names().get(v.index()) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "#{}", v.0)?,
            },
            Formula::Not(inner) => {
                f.write_str("~")?;
                self.write(f, inner, 5)?;
            }
            // left-associative operators: the right operand binds tighter
            Formula::And(l, r) => self.binary(f, l, " & ", r, prec, prec + 1)?,
            Formula::Or(l, r) => self.binary(f, l, " | ", r, prec, prec + 1)?,
            Formula::Iff(l, r) => self.binary(f, l, " <-> ", r, prec, prec + 1)?,
            // right-associative
            Formula::Implies(l, r) => self.binary(f, l, " -> ", r, prec + 1, prec)?,
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }

    fn binary(
        &self,
        f: &mut fmt::Formatter<'_>,
        l: &Formula,
        op: &str,
        r: &Formula,
        lp: u8,
        rp: u8,
    ) -> fmt::Result {
        self.write(f, l, lp)?;
        f.write_str(op)?;
        self.write(f, r, rp)
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, 0)
    }
}

/// An autoepistemic premise in normal form `Lα ∧ ¬Lβ₁ ∧ … ∧ ¬Lβₙ → γ`.
///
/// `alpha = None` stands for `L⊤`, which is always believed. A premise with
/// neither `alpha` nor `betas` is an ordinary non-modal formula `γ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModalFormula {
    pub alpha: Option<Formula>,
    pub betas: Vec<Formula>,
    pub gamma: Formula,
}

impl ModalFormula {
    pub fn new(alpha: Option<Formula>, betas: Vec<Formula>, gamma: Formula) -> Self {
        ModalFormula { alpha, betas, gamma }
    }

    pub fn plain(gamma: Formula) -> Self {
        ModalFormula::new(None, Vec::new(), gamma)
    }

    /// The belief `Lα` alone, written `¬Lα → ⊥`.
    pub fn belief(alpha: Formula) -> Self {
        ModalFormula::new(None, vec![alpha], Formula::Bottom)
    }

    pub fn is_modal(&self) -> bool {
        self.alpha.is_some() || !self.betas.is_empty()
    }

    pub fn max_var(&self) -> Option<Var> {
        self.alpha
            .iter()
            .chain(&self.betas)
            .chain(std::iter::once(&self.gamma))
            .filter_map(Formula::max_var)
            .max()
    }

    pub fn render(&self, vocab: &Vocabulary) -> String {
        if !self.is_modal() {
            return self.gamma.display(vocab).to_string();
        }
        let mut parts = Vec::new();
        if let Some(a) = &self.alpha {
            parts.push(format!("L {}", operand(a, vocab)));
        }
        for b in &self.betas {
            parts.push(format!("~L {}", operand(b, vocab)));
        }
        format!("{} -> {}", parts.join(" & "), self.gamma.display(vocab))
    }
}

// Operands of L are parsed at negation precedence.
fn operand(phi: &Formula, vocab: &Vocabulary) -> String {
    if phi.precedence() >= 5 {
        phi.display(vocab).to_string()
    } else {
        format!("({})", phi.display(vocab))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pq() -> (Vocabulary, Formula, Formula) {
        let v = Vocabulary::new(["p", "q"]).unwrap();
        (v, Formula::Atom(Var(0)), Formula::Atom(Var(1)))
    }

    #[test]
    fn eval_examples() {
        let (_, p, q) = pq();
        let w = World::from_literals(2, &[Var(0)]);
        assert!(Formula::and(p.clone(), Formula::not(q.clone())).eval(&w).unwrap());
        assert!(!Formula::implies(p, q).eval(&w).unwrap());
        assert!(Formula::Top.eval(&w).unwrap());
        assert!(!Formula::Bottom.eval(&w).unwrap());
    }

    #[test]
    fn eval_unknown_constant() {
        let w = World::from_literals(1, &[]);
        assert!(matches!(
            Formula::Atom(Var(3)).eval(&w),
            Err(Error::UnknownConstant(_))
        ));
    }

    #[test]
    fn display_minimal_parens() {
        let (v, p, q) = pq();
        let f = Formula::implies(Formula::implies(p.clone(), q.clone()), p.clone());
        assert_eq!(f.display(&v).to_string(), "(p -> q) -> p");
        let g = Formula::not(Formula::or(p.clone(), q.clone()));
        assert_eq!(g.display(&v).to_string(), "~(p | q)");
        let h = Formula::and(p.clone(), Formula::and(q.clone(), p));
        assert_eq!(h.display(&v).to_string(), "p & (q & p)");
    }

    #[test]
    fn modal_render() {
        let (v, p, q) = pq();
        assert_eq!(
            ModalFormula::new(Some(p.clone()), vec![], p.clone()).render(&v),
            "L p -> p"
        );
        assert_eq!(
            ModalFormula::new(None, vec![Formula::or(p.clone(), q.clone())], q).render(&v),
            "~L (p | q) -> q"
        );
        assert_eq!(ModalFormula::belief(p).render(&v), "~L p -> false");
    }
}
