//! RDF substrate: terms, graphs, Turtle in, Turtle and N-Triples out, and
//! blank-node-aware isomorphism.

mod graph;
mod iso;
mod serialize;
mod term;
mod turtle;

pub use graph::{is_pn_local, is_pn_prefix, Graph, PrefixMap};
pub use iso::isomorphic;
pub use serialize::{serialize_ntriples, serialize_turtle};
pub use term::{BlankNode, Iri, Literal, Term, Triple};
pub use turtle::parse_turtle;

use thiserror::Error;

/// Namespaces the RDF layer itself depends on.
pub mod ns {
    pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
    pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdfError {
    #[error("invalid IRI <{iri}>: {reason}")]
    InvalidIri { iri: String, reason: &'static str },
    #[error("invalid blank node label {0:?}")]
    InvalidBlankNode(String),
    #[error("invalid literal {lexical:?}^^<{datatype}>: {reason}")]
    InvalidLiteral { lexical: String, datatype: String, reason: &'static str },
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("invalid prefix {0:?}")]
    InvalidPrefix(String),
    #[error("{term} cannot appear in {position} position")]
    BadPosition { position: &'static str, term: String },
    #[error("syntax error at {line}:{column} near {token:?}: {message}")]
    Syntax { line: usize, column: usize, token: String, message: String },
    #[error("unknown prefix \"{prefix}\" at {line}:{column}")]
    UnknownPrefix { prefix: String, line: usize, column: usize },
    #[error("unsupported construct {construct} at {line}:{column}")]
    Unsupported { construct: &'static str, line: usize, column: usize },
}

impl RdfError {
    /// 1-based (line, column) for parse errors.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            RdfError::Syntax { line, column, .. }
            | RdfError::UnknownPrefix { line, column, .. }
            | RdfError::Unsupported { line, column, .. } => Some((*line, *column)),
            _ => None,
        }
    }
}

/// `rdf:type` as a term.
pub fn rdf_type() -> Term {
    Term::Iri(Iri::from_static(ns::RDF_TYPE))
}
