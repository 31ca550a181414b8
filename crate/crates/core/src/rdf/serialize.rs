use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::graph::{Graph, PrefixMap};
use super::ns;
use super::term::{escape_string, is_decimal_lexical, is_double_lexical, is_integer_lexical, Literal, Term};

/// One triple per line, absolute IRIs, lines sorted bytewise.
pub fn serialize_ntriples(g: &Graph) -> String {
    let mut lines: Vec<String> = g.iter().map(|t| t.to_string()).collect();
    lines.sort();
    let mut out = String::new();
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn turtle_iri(iri: &str, prefixes: &PrefixMap) -> String {
    match prefixes.compact(iri) {
        Some((prefix, local)) => format!("{prefix}:{local}"),
        None => format!("<{iri}>"),
    }
}

fn turtle_literal(lit: &Literal, prefixes: &PrefixMap) -> String {
    let lexical = lit.lexical();
    if lit.language().is_none() {
        let bare = match lit.datatype().as_str() {
            ns::XSD_INTEGER => is_integer_lexical(lexical),
            ns::XSD_DECIMAL => is_decimal_lexical(lexical),
            ns::XSD_DOUBLE => is_double_lexical(lexical),
            ns::XSD_BOOLEAN => lexical == "true" || lexical == "false",
            _ => false,
        };
        if bare {
            return lexical.to_owned();
        }
    }
    let mut out = format!("\"{}\"", escape_string(lexical));
    if let Some(tag) = lit.language() {
        let _ = write!(out, "@{tag}");
    } else if lit.datatype().as_str() != ns::XSD_STRING {
        let _ = write!(out, "^^{}", turtle_iri(lit.datatype().as_str(), prefixes));
    }
    out
}

fn turtle_term(term: &Term, prefixes: &PrefixMap) -> String {
    match term {
        Term::Iri(iri) => turtle_iri(iri.as_str(), prefixes),
        Term::Blank(b) => b.to_string(),
        Term::Literal(l) => turtle_literal(l, prefixes),
    }
}

/// Turtle with the graph's own prefixes. Subjects, predicates and objects
/// are each ordered by their written form, so equal graphs give equal text.
pub fn serialize_turtle(g: &Graph) -> String {
    let prefixes = g.prefixes();
    let mut out = String::new();
    for (prefix, ns) in prefixes.iter() {
        let _ = writeln!(out, "@prefix {prefix}: <{}> .", ns.as_str());
    }

    let mut subjects: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    for t in g.iter() {
        let predicate = match t.predicate() {
            Term::Iri(i) if i.as_str() == ns::RDF_TYPE => "a".to_owned(),
            p => turtle_term(p, prefixes),
        };
        subjects
            .entry(turtle_term(t.subject(), prefixes))
            .or_default()
            .entry(predicate)
            .or_default()
            .push(turtle_term(t.object(), prefixes));
    }

    for (subject, predicates) in subjects {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&subject);
        let count = predicates.len();
        for (i, (predicate, mut objects)) in predicates.into_iter().enumerate() {
            objects.sort();
            let _ = write!(out, "\n    {predicate} {}", objects.join(", "));
            out.push_str(if i + 1 == count { " .\n" } else { " ;" });
        }
    }
    out
}
