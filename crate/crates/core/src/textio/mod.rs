//! Concrete syntax: a parser and printer for formulas, and the line-oriented
//! presentation file format.
//!
//! Formula grammar, loosest binding first:
//!
//! ```text
//! formula := impl ("<->" impl)*
//! impl    := disj ("->" impl)?
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "!" unary | quant | atom | "(" formula ")" | "true" | "false"
//! quant   := ("E" | "A") ident "." unary | "C" ident "=" ident "." unary
//! atom    := term ("<=" | "<" | "=" | ">=" | ">") term | term "==" int "mod" int
//! term    := ["-"] addend (("+" | "-") addend)*
//! addend  := int | ident | int "*" ident
//! ```
//!
//! `C x = y . φ` means "exactly `y` values of `x` satisfy `φ`".

mod lexer;
mod parser;
mod presentation;
mod printer;

use std::fmt;

use thiserror::Error;

pub use lexer::is_keyword;
pub use parser::{parse_assignment, parse_formula, parse_term};
pub use presentation::{parse_presentation, print_presentation};
pub use printer::{print_formula, print_formula_styled, print_term, Style};

/// A region of the input text. Offsets are bytes; line and column are 1-based
/// and refer to `begin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub(crate) fn locate(text: &str, begin: usize, end: usize) -> Self {
        let before = &text[..begin];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        SourceSpan {
            begin,
            end,
            line,
            column,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
    /// What the parser would have accepted at `span`; may be empty.
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.span.line, self.span.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}
