use std::collections::{BTreeMap, BTreeSet};

use super::term::{Iri, Term, Triple};
use super::RdfError;

/// Prefix → namespace IRI bindings. The empty string is the default prefix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrefixMap {
    entries: BTreeMap<String, Iri>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `prefix`, replacing any earlier binding.
    pub fn insert(&mut self, prefix: impl Into<String>, namespace: Iri) -> Result<(), RdfError> {
        let prefix = prefix.into();
        if !is_pn_prefix(&prefix) {
            return Err(RdfError::InvalidPrefix(prefix));
        }
        self.entries.insert(prefix, namespace);
        Ok(())
    }

    pub fn get(&self, prefix: &str) -> Option<&Iri> {
        self.entries.get(prefix)
    }

    pub fn expand(&self, prefix: &str, local: &str) -> Option<String> {
        self.get(prefix).map(|ns| format!("{}{}", ns.as_str(), local))
    }

    /// Longest-namespace match, returning `(prefix, local)` when the local
    /// part is a valid Turtle local name.
    pub fn compact<'a>(&'a self, iri: &'a str) -> Option<(&'a str, &'a str)> {
        self.entries
            .iter()
            .filter(|(_, ns)| iri.starts_with(ns.as_str()))
            .max_by_key(|(p, ns)| (ns.as_str().len(), std::cmp::Reverse(p.as_str())))
            .map(|(p, ns)| (p.as_str(), &iri[ns.as_str().len()..]))
            .filter(|(_, local)| is_pn_local(local))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.entries.iter().map(|(p, i)| (p.as_str(), i))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn is_pn_chars_base(c: char) -> bool {
    c.is_alphabetic()
}

fn is_pn_chars(c: char) -> bool {
    is_pn_chars_base(c) || c == '_' || c == '-' || c.is_ascii_digit() || c == '\u{b7}'
}

/// Turtle PN_PREFIX, or empty.
pub fn is_pn_prefix(s: &str) -> bool {
    if s.is_empty() {
        return true;
    }
    let mut chars = s.chars();
    let first = chars.next().unwrap();
    is_pn_chars_base(first) && !s.ends_with('.') && chars.all(|c| is_pn_chars(c) || c == '.')
}

/// Conservative Turtle PN_LOCAL check (no escapes or percent encodings).
pub fn is_pn_local(s: &str) -> bool {
    if s.is_empty() {
        return true;
    }
    let first = s.chars().next().unwrap();
    (is_pn_chars_base(first) || first == '_' || first.is_ascii_digit())
        && !s.ends_with('.')
        && s.chars().all(|c| is_pn_chars(c) || c == '.')
}

/// A set of triples plus the prefix bindings it was written with.
///
/// Build it once, then share it: every read method takes `&self`.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    by_predicate: BTreeMap<Term, BTreeSet<Triple>>,
    by_object: BTreeMap<Term, BTreeSet<Triple>>,
    prefixes: PrefixMap,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples && self.prefixes == other.prefixes
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_prefixes(prefixes: PrefixMap) -> Self {
        Graph { prefixes, ..Self::default() }
    }

    /// Returns false if the triple was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if self.triples.contains(&triple) {
            return false;
        }
        self.by_predicate.entry(triple.predicate().clone()).or_default().insert(triple.clone());
        self.by_object.entry(triple.object().clone()).or_default().insert(triple.clone());
        self.triples.insert(triple)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        if !self.triples.remove(triple) {
            return false;
        }
        for (index, key) in [(&mut self.by_predicate, triple.predicate()), (&mut self.by_object, triple.object())] {
            if let Some(set) = index.get_mut(key) {
                set.remove(triple);
                if set.is_empty() {
                    index.remove(key);
                }
            }
        }
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in (subject, predicate, object) order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn prefixes_mut(&mut self) -> &mut PrefixMap {
        &mut self.prefixes
    }

    /// Every triple agreeing with the bound positions, in (s, p, o) order.
    pub fn matching<'a>(&'a self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> Vec<&'a Triple> {
        let agrees = |t: &&Triple| {
            s.is_none_or(|s| t.subject() == s) && p.is_none_or(|p| t.predicate() == p) && o.is_none_or(|o| t.object() == o)
        };
        if let Some(s) = s {
            // Subject-first order lets us range-scan the primary set.
            return self.subject_range(s).filter(agrees).collect();
        }
        let candidates = match (p, o) {
            (Some(p), Some(o)) => {
                let by_p = self.by_predicate.get(p);
                let by_o = self.by_object.get(o);
                match (by_p, by_o) {
                    (Some(a), Some(b)) => if a.len() <= b.len() { a } else { b },
                    _ => return Vec::new(),
                }
            }
            (Some(p), None) => match self.by_predicate.get(p) {
                Some(set) => set,
                None => return Vec::new(),
            },
            (None, Some(o)) => match self.by_object.get(o) {
                Some(set) => set,
                None => return Vec::new(),
            },
            (None, None) => &self.triples,
        };
        candidates.iter().filter(agrees).collect()
    }

    fn subject_range<'a>(&'a self, s: &Term) -> impl Iterator<Item = &'a Triple> + 'a {
        let s = s.clone();
        self.triples.range(Triple::lower_bound(&s)..).take_while(move |t| *t.subject() == s)
    }

    /// Objects of `(s, p, ?)`.
    pub fn objects<'a>(&'a self, s: &Term, p: &Term) -> impl Iterator<Item = &'a Term> + 'a {
        let p = p.clone();
        self.subject_range(s).filter(move |t| *t.predicate() == p).map(Triple::object)
    }

    /// Subjects of `(?, p, o)`.
    pub fn subjects<'a>(&'a self, p: &Term, o: &Term) -> Vec<&'a Term> {
        self.matching(None, Some(p), Some(o)).into_iter().map(Triple::subject).collect()
    }

    pub fn object<'a>(&'a self, s: &Term, p: &Term) -> Option<&'a Term> {
        self.objects(s, p).next()
    }

    /// True if the node occurs as the subject of any triple.
    pub fn describes(&self, node: &Term) -> bool {
        self.subject_range(node).next().is_some()
    }

    /// Every distinct term in any position, sorted.
    pub fn terms(&self) -> BTreeSet<&Term> {
        self.triples.iter().flat_map(|t| [t.subject(), t.predicate(), t.object()]).collect()
    }

    /// Blank nodes in subject or object position, sorted.
    pub fn blank_nodes(&self) -> BTreeSet<&Term> {
        self.triples.iter().flat_map(|t| [t.subject(), t.object()]).filter(|t| t.is_blank()).collect()
    }

    /// Triples free of blank nodes.
    pub fn ground_triples(&self) -> BTreeSet<&Triple> {
        self.triples.iter().filter(|t| t.is_ground()).collect()
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}
