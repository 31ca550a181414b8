//! A SPARQL subset: `SELECT` over basic graph patterns with `FILTER`,
//! `ORDER BY` and `LIMIT`.
//!
//! Grammar, keywords case-insensitive:
//!
//! ```text
//! query    := prefix* SELECT DISTINCT? (var+ | '*') WHERE? '{' body '}' order? limit?
//! prefix   := PREFIX pname ':' '<' iri '>'
//! body     := (triples | filter) ('.'? (triples | filter))* '.'?
//! triples  := term term term (',' term)* (';' term term (',' term)*)*
//! filter   := FILTER '(' var op operand ')' | FILTER '(' CONTAINS '(' var ',' operand ')' ')'
//! op       := '=' | '!=' | '<' | '<=' | '>' | '>='
//! order    := ORDER BY (var | ASC '(' var ')' | DESC '(' var ')')
//! limit    := LIMIT integer
//! ```
//!
//! Terms are `?var`/`$var`, `<iri>`, `prefix:local`, `a`, `_:label`,
//! quoted strings with optional `@lang` or `^^type`, integers, decimals and
//! `true`/`false`. Registry prefixes are predeclared. A `_:label` names that
//! blank node in the data; it is not a variable.

mod eval;
mod parse;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::rdf::Term;

pub use eval::{evaluate, ResultSet};
pub use parse::parse_query;

/// Keywords the parser accepts.
pub const KEYWORDS: &[&str] =
    &["ASC", "BY", "CONTAINS", "DESC", "DISTINCT", "FILTER", "LIMIT", "ORDER", "PREFIX", "SELECT", "WHERE"];

/// SPARQL keywords rejected with [`QueryError::Unsupported`].
pub const UNSUPPORTED: &[&str] = &[
    "ASK", "AVG", "BIND", "CONSTRUCT", "COUNT", "DESCRIBE", "EXISTS", "FROM", "GRAPH", "GROUP", "HAVING", "INSERT",
    "DELETE", "MAX", "MIN", "MINUS", "NOT", "OFFSET", "OPTIONAL", "REDUCED", "REGEX", "SAMPLE", "SERVICE", "SUM", "UNION",
    "VALUES",
];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Var(String),
    Term(Term),
}

impl Slot {
    pub fn var(&self) -> Option<&str> {
        match self {
            Slot::Var(v) => Some(v),
            Slot::Term(_) => None,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Var(v) => write!(f, "?{v}"),
            Slot::Term(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: Slot,
    pub predicate: Slot,
    pub object: Slot,
}

impl TriplePattern {
    pub fn slots(&self) -> [&Slot; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.slots().into_iter().filter_map(Slot::var)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Contains,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterExpr {
    pub op: CompareOp,
    pub left: String,
    pub right: Slot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Asc,
    Desc,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectQuery {
    pub projected: Vec<String>,
    pub distinct: bool,
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<FilterExpr>,
    pub order_by: Option<(String, Direction)>,
    pub limit: Option<usize>,
}

impl SelectQuery {
    /// Pattern variables in order of first appearance.
    pub fn pattern_vars(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for v in self.patterns.iter().flat_map(TriplePattern::vars) {
            if !out.iter().any(|o| o == v) {
                out.push(v.to_owned());
            }
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unknown prefix \"{prefix}\" at {line}:{column}")]
    UnknownPrefix { prefix: String, line: usize, column: usize },
    #[error("{keyword} is not supported (at {line}:{column})")]
    Unsupported { keyword: String, line: usize, column: usize },
    #[error("variable ?{0} does not occur in any triple pattern")]
    UnboundVariable(String),
}

impl QueryError {
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            QueryError::Syntax { line, column, .. }
            | QueryError::UnknownPrefix { line, column, .. }
            | QueryError::Unsupported { line, column, .. } => Some((*line, *column)),
            QueryError::UnboundVariable(_) => None,
        }
    }
}
