use std::fmt;

use rust_decimal::Decimal;
use serde::{Serialize, Serializer};

use super::ns;
use super::RdfError;

/// An absolute IRI.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, RdfError> {
        let value = value.into();
        if value.is_empty() {
            return Err(RdfError::InvalidIri { iri: value, reason: "empty" });
        }
        if !value.contains(':') {
            return Err(RdfError::InvalidIri { iri: value, reason: "missing scheme separator ':'" });
        }
        if value
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
        {
            return Err(RdfError::InvalidIri { iri: value, reason: "forbidden character" });
        }
        Ok(Iri(value))
    }

    /// Builds an IRI from a compile-time constant known to be valid.
    pub(crate) fn from_static(value: &'static str) -> Self {
        debug_assert!(Iri::new(value).is_ok(), "invalid constant IRI {value}");
        Iri(value.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

/// A graph-local blank node identifier.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, RdfError> {
        let label = label.into();
        if label.is_empty() {
            return Err(RdfError::InvalidBlankNode(label));
        }
        let mut chars = label.chars();
        let first = chars.next().unwrap_or(' ');
        let ok_first = first.is_alphanumeric() || first == '_';
        let ok_rest = label.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'));
        if !ok_first || !ok_rest || label.ends_with('.') {
            return Err(RdfError::InvalidBlankNode(label));
        }
        Ok(BlankNode(label))
    }

    /// Parser-internal placeholder labels; never escape a finished graph.
    pub(crate) fn unchecked(label: String) -> Self {
        BlankNode(label)
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// A literal: lexical form, datatype, and optional language tag.
///
/// Equality is structural over all three parts; `"1"` and `"01"` typed as
/// integers are different literals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    /// A plain `xsd:string` literal.
    pub fn string(lexical: impl Into<String>) -> Self {
        Literal { lexical: lexical.into(), datatype: Iri::from_static(ns::XSD_STRING), language: None }
    }

    pub fn lang(lexical: impl Into<String>, tag: impl Into<String>) -> Result<Self, RdfError> {
        let tag = tag.into();
        let valid = !tag.is_empty()
            && tag.split('-').enumerate().all(|(i, part)| {
                !part.is_empty()
                    && part.len() <= 8
                    && if i == 0 { part.chars().all(|c| c.is_ascii_alphabetic()) } else { part.chars().all(|c| c.is_ascii_alphanumeric()) }
            });
        if !valid {
            return Err(RdfError::InvalidLanguageTag(tag));
        }
        Ok(Literal { lexical: lexical.into(), datatype: Iri::from_static(ns::RDF_LANG_STRING), language: Some(tag) })
    }

    /// A typed literal. Numeric and boolean datatypes must carry a lexical
    /// form from their value space.
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Result<Self, RdfError> {
        let lexical = lexical.into();
        if datatype.as_str() == ns::RDF_LANG_STRING {
            return Err(RdfError::InvalidLiteral { lexical, datatype: datatype.0, reason: "language strings need a tag" });
        }
        let ok = match datatype.as_str() {
            ns::XSD_INTEGER => is_integer_lexical(&lexical),
            ns::XSD_DECIMAL => is_decimal_lexical(&lexical),
            ns::XSD_DOUBLE => is_double_lexical(&lexical),
            ns::XSD_BOOLEAN => matches!(lexical.as_str(), "true" | "false" | "1" | "0"),
            _ => true,
        };
        if !ok {
            return Err(RdfError::InvalidLiteral { lexical, datatype: datatype.0, reason: "lexical form outside the datatype's value space" });
        }
        Ok(Literal { lexical, datatype, language: None })
    }

    pub fn integer(value: i64) -> Self {
        Literal { lexical: value.to_string(), datatype: Iri::from_static(ns::XSD_INTEGER), language: None }
    }

    pub fn decimal(value: Decimal) -> Self {
        let mut lexical = value.to_string();
        if !lexical.contains('.') {
            lexical.push_str(".0");
        }
        Literal { lexical, datatype: Iri::from_static(ns::XSD_DECIMAL), language: None }
    }

    pub fn boolean(value: bool) -> Self {
        Literal { lexical: value.to_string(), datatype: Iri::from_static(ns::XSD_BOOLEAN), language: None }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.datatype.as_str(), ns::XSD_INTEGER | ns::XSD_DECIMAL | ns::XSD_DOUBLE)
    }

    /// Value-space reading of the literal as an exact decimal.
    ///
    /// Numeric datatypes parse their lexical form; plain strings are parsed
    /// too, since listings often quote numbers (`s:value "64"`).
    pub fn as_decimal(&self) -> Option<Decimal> {
        if self.language.is_some() {
            return None;
        }
        match self.datatype.as_str() {
            ns::XSD_INTEGER | ns::XSD_DECIMAL | ns::XSD_STRING => parse_decimal(&self.lexical),
            ns::XSD_DOUBLE => Decimal::from_scientific(self.lexical.trim()).ok().or_else(|| parse_decimal(&self.lexical)),
            _ => None,
        }
    }

    /// Value-space reading as a boolean, accepting quoted `"true"`/`"false"`.
    pub fn as_bool(&self) -> Option<bool> {
        match (self.datatype.as_str(), self.lexical.trim()) {
            (ns::XSD_BOOLEAN | ns::XSD_STRING, "true") => Some(true),
            (ns::XSD_BOOLEAN | ns::XSD_STRING, "false") => Some(false),
            (ns::XSD_BOOLEAN, "1") => Some(true),
            (ns::XSD_BOOLEAN, "0") => Some(false),
            _ => None,
        }
    }
}

pub(crate) fn parse_decimal(s: &str) -> Option<Decimal> {
    let s = s.trim();
    if is_decimal_lexical(s) || is_integer_lexical(s) {
        let unsigned = s.strip_prefix('+').unwrap_or(s);
        let normalized = if unsigned.starts_with('.') {
            format!("0{unsigned}")
        } else if let Some(rest) = unsigned.strip_prefix("-.") {
            format!("-0.{rest}")
        } else {
            unsigned.to_owned()
        };
        normalized.parse().ok()
    } else {
        None
    }
}

pub(crate) fn is_integer_lexical(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

pub(crate) fn is_decimal_lexical(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    match body.split_once('.') {
        Some((int, frac)) => {
            !frac.is_empty() && int.bytes().all(|b| b.is_ascii_digit()) && frac.bytes().all(|b| b.is_ascii_digit())
        }
        None => false,
    }
}

pub(crate) fn is_double_lexical(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let Some(pos) = body.find(['e', 'E']) else {
        return false;
    };
    let (mantissa, exp) = (&body[..pos], &body[pos + 1..]);
    let mantissa_ok = if mantissa.contains('.') {
        let (a, b) = mantissa.split_once('.').unwrap();
        (!a.is_empty() || !b.is_empty()) && a.bytes().all(|c| c.is_ascii_digit()) && b.bytes().all(|c| c.is_ascii_digit())
    } else {
        !mantissa.is_empty() && mantissa.bytes().all(|c| c.is_ascii_digit())
    };
    mantissa_ok && is_integer_lexical(exp)
}

impl fmt::Display for Literal {
    /// N-Triples form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        f.write_str(&escape_string(&self.lexical))?;
        f.write_str("\"")?;
        if let Some(tag) = &self.language {
            write!(f, "@{tag}")
        } else if self.datatype.as_str() == ns::XSD_STRING {
            Ok(())
        } else {
            write!(f, "^^{}", self.datatype)
        }
    }
}

/// Escapes a string body for N-Triples/Turtle. Control characters without a
/// short escape use lowercase `\u00xx`.
pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{8}' => out.push_str("\\b"),
            '\u{c}' => out.push_str("\\f"),
            c if (c as u32) < 0x20 || c as u32 == 0x7f => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// An RDF term in any position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Self, RdfError> {
        Iri::new(value).map(Term::Iri)
    }

    pub fn blank(label: impl Into<String>) -> Result<Self, RdfError> {
        BlankNode::new(label).map(Term::Blank)
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn as_blank(&self) -> Option<&BlankNode> {
        match self {
            Term::Blank(b) => Some(b),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    /// True when the term names a resource (may be a subject).
    pub fn is_resource(&self) -> bool {
        !self.is_literal()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => i.fmt(f),
            Term::Blank(b) => b.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<Iri> for Term {
    fn from(value: Iri) -> Self {
        Term::Iri(value)
    }
}

impl From<BlankNode> for Term {
    fn from(value: BlankNode) -> Self {
        Term::Blank(value)
    }
}

impl From<Literal> for Term {
    fn from(value: Literal) -> Self {
        Term::Literal(value)
    }
}

/// A subject-predicate-object statement with RDF position constraints.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Term,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, RdfError> {
        if subject.is_literal() {
            return Err(RdfError::BadPosition { position: "subject", term: subject.to_string() });
        }
        if !matches!(predicate, Term::Iri(_)) {
            return Err(RdfError::BadPosition { position: "predicate", term: predicate.to_string() });
        }
        Ok(Triple { subject, predicate, object })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Term {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn is_ground(&self) -> bool {
        !self.subject.is_blank() && !self.object.is_blank()
    }

    /// Smallest possible triple with this subject; a range-scan start key.
    pub(crate) fn lower_bound(subject: &Term) -> Triple {
        let min = Term::Iri(Iri(String::new()));
        Triple { subject: subject.clone(), predicate: min.clone(), object: min }
    }

    pub fn into_parts(self) -> (Term, Term, Term) {
        (self.subject, self.predicate, self.object)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
