//! Textual IR: a recursive-descent parser with line/column diagnostics and a
//! canonical printer.
//!
//! ```text
//! module    := "module" ("attributes" attrs)? "{" func* "}"
//! func      := "func" "@" ident "(" ")" ("attributes" attrs)? "{" op* "}"
//! op        := results? ident "." ident "(" operands? ")" attrs? ":" fn-type
//! results   := "%" id ("," "%" id)* "="
//! attrs     := "{" key "=" attrval ("," key "=" attrval)* "}"
//! key       := ident ("." ident)*
//! attrval   := int | float | string | "[" (int ("," int)* | string ("," string)*)? "]"
//! fn-type   := "(" types? ")" "->" ("(" types? ")" | type)
//! type      := "!" ident "." ident | "f64" | "i1" | "i64"
//! ```
//!
//! Comments run from `//` to the end of the line.

mod lexer;
mod parser;
mod printer;

use std::fmt;

pub use parser::{parse_module, parse_module_bytes, parse_module_unverified};
pub use printer::{print_function, print_module};

/// 1-based line and column (columns count characters).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceLocation {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub location: SourceLocation,
    pub message: String,
    pub expected: Option<String>,
}

impl ParseError {
    pub fn new(location: SourceLocation, message: impl Into<String>) -> Self {
        ParseError {
            location,
            message: message.into(),
            expected: None,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ParseError {}
