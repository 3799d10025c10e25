//! Concrete syntax: formulas and the four knowledge-base formats.

mod kb;
mod lexer;
mod parser;

use std::fmt;

pub use kb::{parse_kb, serialize_kb, Kb, KbDocument, KbKind, SourceMap};
pub use parser::{parse_formula, MAX_DEPTH, MAX_NESTING};

/// A rejected input, located by 1-based line and character column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}
