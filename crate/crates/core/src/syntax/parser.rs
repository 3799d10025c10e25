use std::sync::Arc;

use super::lexer::{Tok, Token};
use super::ParseError;
use crate::logic::{Formula, ModalFormula, Vocabulary};

/// Deepest parenthesis/negation nesting accepted.
pub const MAX_NESTING: usize = 256;
/// Deepest formula tree accepted, counting long operator chains.
pub const MAX_DEPTH: usize = 4096;

/// How identifiers become constants.
pub(crate) enum Names {
    /// Only declared constants are accepted.
    Fixed(Arc<Vocabulary>),
    /// Constants are added in order of first appearance.
    Infer(Vocabulary),
}

impl Names {
    pub(crate) fn vocab(&self) -> &Vocabulary {
        match self {
            Names::Fixed(v) => v,
            Names::Infer(v) => v,
        }
    }

    pub(crate) fn into_vocab(self) -> Arc<Vocabulary> {
        match self {
            Names::Fixed(v) => v,
            Names::Infer(v) => Arc::new(v),
        }
    }
}

pub(crate) struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    /// Column just past the end of the line, for end-of-input errors.
    end_col: usize,
    names: &'a mut Names,
    reserved: Option<&'static str>,
    nesting: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(
        toks: &'a [Token],
        line: usize,
        end_col: usize,
        names: &'a mut Names,
        reserved: Option<&'static str>,
    ) -> Self {
        Parser {
            toks,
            pos: 0,
            line,
            end_col,
            names,
            reserved,
            nesting: 0,
        }
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    pub(crate) fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of line")),
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    pub(crate) fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == word)
    }

    /// A bare identifier such as a rule id.
    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        let col = self.col();
        let (f, depth) = self.iff()?;
        if depth > MAX_DEPTH {
            return Err(ParseError::new(self.line, col, format!("formula deeper than {MAX_DEPTH}")));
        }
        Ok(f)
    }

    fn iff(&mut self) -> Result<(Formula, usize), ParseError> {
        let (mut f, mut d) = self.implies()?;
        while self.eat(&Tok::Iff) {
            let (r, rd) = self.implies()?;
            f = Formula::iff(f, r);
            d = 1 + d.max(rd);
            self.check_depth(d)?;
        }
        Ok((f, d))
    }

    fn implies(&mut self) -> Result<(Formula, usize), ParseError> {
        let mut parts = vec![self.or()?];
        while self.eat(&Tok::Implies) {
            parts.push(self.or()?);
        }
        let (mut f, mut d) = parts.pop().unwrap();
        while let Some((l, ld)) = parts.pop() {
            f = Formula::implies(l, f);
            d = 1 + d.max(ld);
            self.check_depth(d)?;
        }
        Ok((f, d))
    }

    fn or(&mut self) -> Result<(Formula, usize), ParseError> {
        let (mut f, mut d) = self.and()?;
        while self.eat(&Tok::Or) {
            let (r, rd) = self.and()?;
            f = Formula::or(f, r);
            d = 1 + d.max(rd);
            self.check_depth(d)?;
        }
        Ok((f, d))
    }

    fn and(&mut self) -> Result<(Formula, usize), ParseError> {
        let (mut f, mut d) = self.unary()?;
        while self.eat(&Tok::And) {
            let (r, rd) = self.unary()?;
            f = Formula::and(f, r);
            d = 1 + d.max(rd);
            self.check_depth(d)?;
        }
        Ok((f, d))
    }

    fn check_depth(&self, d: usize) -> Result<(), ParseError> {
        if d > MAX_DEPTH {
            Err(self.error(format!("formula deeper than {MAX_DEPTH}")))
        } else {
            Ok(())
        }
    }

    fn nest(&mut self) -> Result<(), ParseError> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            Err(self.error(format!("nesting deeper than {MAX_NESTING}")))
        } else {
            Ok(())
        }
    }

    pub(crate) fn unary_formula(&mut self) -> Result<Formula, ParseError> {
        Ok(self.unary()?.0)
    }

    fn unary(&mut self) -> Result<(Formula, usize), ParseError> {
        if self.eat(&Tok::Not) {
            self.nest()?;
            let (f, d) = self.unary()?;
            self.nesting -= 1;
            return Ok((Formula::not(f), d + 1));
        }
        if self.eat(&Tok::LParen) {
            self.nest()?;
            let r = self.iff()?;
            self.expect(&Tok::RParen)?;
            self.nesting -= 1;
            return Ok(r);
        }
        let col = self.col();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                let f = match s.as_str() {
                    "true" => Formula::Top,
                    "false" => Formula::Bottom,
                    name if Some(name) == self.reserved => {
                        return Err(ParseError::new(
                            self.line,
                            col,
                            format!("`{name}` is reserved here and cannot name a constant"),
                        ));
                    }
                    name => Formula::Atom(match self.names {
                        Names::Fixed(v) => v.get(name).ok_or_else(|| {
                            ParseError::new(self.line, col, format!("unknown propositional constant `{name}`"))
                        })?,
                        Names::Infer(v) => v.intern(name),
                    }),
                };
                self.pos += 1;
                Ok((f, 1))
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn at_modal_literal(&self) -> bool {
        let is_l = |t: Option<&Tok>| matches!(t, Some(Tok::Ident(s)) if s == "L");
        is_l(self.peek()) || (self.peek() == Some(&Tok::Not) && is_l(self.peek_at(1)))
    }

    /// `[~]L operand`; returns whether the literal is positive.
    fn modal_literal(&mut self) -> Result<(bool, Formula, usize), ParseError> {
        let col = self.col();
        let positive = !self.eat(&Tok::Not);
        self.pos += 1;
        Ok((positive, self.unary_formula()?, col))
    }

    /// An autoepistemic premise: `Lα & ~Lβ₁ & … -> γ`, a single `[~]Lφ`, or
    /// a non-modal formula.
    pub(crate) fn premise(&mut self) -> Result<ModalFormula, ParseError> {
        if !self.at_modal_literal() {
            let f = self.formula()?;
            self.expect_end()?;
            return Ok(ModalFormula::plain(f));
        }
        let mut lits = vec![self.modal_literal()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            if !self.at_modal_literal() {
                return Err(self.error(
                    "expected `L` or `~L`; parenthesize to believe a compound formula, as in `L (p & q)`",
                ));
            }
            lits.push(self.modal_literal()?);
        }
        let (gamma, bare) = if self.eat(&Tok::Implies) {
            (self.formula()?, false)
        } else if lits.len() == 1 && self.at_end() {
            (Formula::Bottom, true)
        } else {
            return Err(self.unexpected("`->`"));
        };
        self.expect_end()?;
        let mut alpha = None;
        let mut betas = Vec::new();
        for (positive, f, col) in lits {
            // A lone `Lφ` asserts belief: `¬Lφ → ⊥`; a lone `¬Lφ` is `Lφ → ⊥`.
            let positive = if bare { !positive } else { positive };
            if positive {
                if alpha.is_some() {
                    return Err(ParseError::new(self.line, col, "at most one positive `L` literal is allowed"));
                }
                alpha = Some(f);
            } else {
                betas.push(f);
            }
        }
        Ok(ModalFormula::new(alpha, betas, gamma))
    }
}

/// Parses one formula over a fixed vocabulary.
pub fn parse_formula(text: &str, vocab: &Arc<Vocabulary>) -> Result<Formula, ParseError> {
    let toks = super::lexer::lex(text, 1, 1)?;
    let mut names = Names::Fixed(vocab.clone());
    let mut p = Parser::new(&toks, 1, text.chars().count() + 1, &mut names, None);
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Var;

    fn v() -> Arc<Vocabulary> {
        Arc::new(Vocabulary::new(["p", "q", "r"]).unwrap())
    }

    fn parse(s: &str) -> Formula {
        parse_formula(s, &v()).unwrap()
    }

    fn a(i: u32) -> Formula {
        Formula::Atom(Var(i))
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse("~p & q | r"), Formula::or(Formula::and(Formula::not(a(0)), a(1)), a(2)));
        assert_eq!(parse("p -> q -> r"), Formula::implies(a(0), Formula::implies(a(1), a(2))));
        assert_eq!(parse("p <-> q <-> r"), Formula::iff(Formula::iff(a(0), a(1)), a(2)));
        assert_eq!(parse("p | q -> r <-> p"), Formula::iff(Formula::implies(Formula::or(a(0), a(1)), a(2)), a(0)));
        assert_eq!(parse("(true) & false"), Formula::and(Formula::Top, Formula::Bottom));
    }

    #[test]
    fn errors_carry_locations() {
        let e = parse_formula("p & s", &v()).unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        assert!(e.message.contains("unknown"));
        let e = parse_formula("(p & q", &v()).unwrap_err();
        assert_eq!(e.column, 7);
        assert!(parse_formula("", &v()).is_err());
        assert!(parse_formula("p q", &v()).is_err());
    }

    #[test]
    fn nesting_limit() {
        let deep = format!("{}p{}", "(".repeat(300), ")".repeat(300));
        assert!(parse_formula(&deep, &v()).unwrap_err().message.contains("nesting"));
        let ok = format!("{}p{}", "(".repeat(200), ")".repeat(200));
        assert_eq!(parse(&ok), a(0));
        let chain = vec!["p"; 5000].join(" & ");
        assert!(parse_formula(&chain, &v()).unwrap_err().message.contains("deeper"));
    }

    #[test]
    fn printing_round_trips() {
        for s in ["p -> q -> r", "(p -> q) -> r", "p & (q | r)", "~(p <-> q) <-> r", "p <-> (q <-> r)", "~~p"] {
            let f = parse(s);
            assert_eq!(f.display(&v()).to_string(), s);
            assert_eq!(parse(&f.display(&v()).to_string()), f);
        }
    }
}
