//! Turtle reader for the subset used by service descriptions.
//!
//! Supported: `@prefix`/`PREFIX`, prefixed names, `<iri>`, `_:label`,
//! `[ ... ]` property lists, `;` and `,` lists, `a`, string / integer /
//! decimal / double / boolean literals with `^^` and `@lang`, and comments.
//! Collections, quoted triples and `@base` are rejected.

use std::collections::BTreeSet;

use super::graph::{Graph, PrefixMap};
use super::ns;
use super::term::{BlankNode, Iri, Literal, Term, Triple};
use super::RdfError;

const ANON_MARK: char = '\u{0}';

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Blank(String),
    Str(String),
    Integer(String),
    Decimal(String),
    Double(String),
    Bool(bool),
    LangTag(String),
    Carets,
    Dot,
    Semicolon,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    A,
    AtPrefix,
    AtBase,
    SparqlPrefix,
    SparqlBase,
    QuoteOpen,
    QuoteClose,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::IriRef(i) => format!("<{i}>"),
            Tok::PName { prefix, local } => format!("{prefix}:{local}"),
            Tok::Blank(b) => format!("_:{b}"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Integer(s) | Tok::Decimal(s) | Tok::Double(s) => s.clone(),
            Tok::Bool(b) => b.to_string(),
            Tok::LangTag(t) => format!("@{t}"),
            Tok::Carets => "^^".into(),
            Tok::Dot => ".".into(),
            Tok::Semicolon => ";".into(),
            Tok::Comma => ",".into(),
            Tok::LBracket => "[".into(),
            Tok::RBracket => "]".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::A => "a".into(),
            Tok::AtPrefix => "@prefix".into(),
            Tok::AtBase => "@base".into(),
            Tok::SparqlPrefix => "PREFIX".into(),
            Tok::SparqlBase => "BASE".into(),
            Tok::QuoteOpen => "<<".into(),
            Tok::QuoteClose => ">>".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    lookahead: Vec<char>,
    line: usize,
    column: usize,
    last_was_string: bool,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), lookahead: Vec::new(), line: 1, column: 1, last_was_string: false }
    }

    fn peek(&mut self) -> Option<char> {
        self.peek_nth(0)
    }

    fn peek_nth(&mut self, n: usize) -> Option<char> {
        while self.lookahead.len() <= n {
            {
                let c = self.chars.next()?;
                self.lookahead.push(c)
            }
        }
        Some(self.lookahead[n])
    }

    fn bump(&mut self) -> Option<char> {
        let c = if self.lookahead.is_empty() { self.chars.next() } else { Some(self.lookahead.remove(0)) }?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, column: usize, token: impl Into<String>, message: impl Into<String>) -> RdfError {
        RdfError::Syntax { line, column, token: token.into(), message: message.into() }
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Result<Spanned, RdfError> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let after_string = std::mem::replace(&mut self.last_was_string, false);
        let Some(c) = self.peek() else {
            return Ok(Spanned { tok: Tok::Eof, line, column });
        };
        let tok = match c {
            '<' if self.peek_nth(1) == Some('<') => {
                self.bump();
                self.bump();
                Tok::QuoteOpen
            }
            '>' if self.peek_nth(1) == Some('>') => {
                self.bump();
                self.bump();
                Tok::QuoteClose
            }
            '<' => Tok::IriRef(self.iri_ref(line, column)?),
            '"' | '\'' => {
                let s = self.string(line, column)?;
                self.last_was_string = true;
                Tok::Str(s)
            }
            '@' => {
                self.bump();
                let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                if after_string {
                    if word.is_empty() {
                        return Err(self.err(line, column, "@", "empty language tag"));
                    }
                    Tok::LangTag(word)
                } else {
                    match word.as_str() {
                        "prefix" => Tok::AtPrefix,
                        "base" => Tok::AtBase,
                        _ => return Err(self.err(line, column, format!("@{word}"), "unknown directive")),
                    }
                }
            }
            '^' => {
                self.bump();
                if self.bump() != Some('^') {
                    return Err(self.err(line, column, "^", "expected '^^'"));
                }
                Tok::Carets
            }
            '.' if self.peek_nth(1).is_some_and(|d| d.is_ascii_digit()) => self.number(line, column)?,
            '.' => {
                self.bump();
                Tok::Dot
            }
            ';' => {
                self.bump();
                Tok::Semicolon
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '[' => {
                self.bump();
                Tok::LBracket
            }
            ']' => {
                self.bump();
                Tok::RBracket
            }
            '(' => {
                self.bump();
                Tok::LParen
            }
            ')' => {
                self.bump();
                Tok::RParen
            }
            '_' if self.peek_nth(1) == Some(':') => {
                self.bump();
                self.bump();
                let label = self.name_chars();
                if label.is_empty() {
                    return Err(self.err(line, column, "_:", "empty blank node label"));
                }
                Tok::Blank(label)
            }
            '+' | '-' | '0'..='9' => self.number(line, column)?,
            c if c.is_alphabetic() || c == ':' => self.name(line, column)?,
            other => {
                self.bump();
                return Err(self.err(line, column, other.to_string(), "unexpected character"));
            }
        };
        Ok(Spanned { tok, line, column })
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
        out
    }

    /// Name characters including interior dots; a trailing dot is left in
    /// the input as a statement terminator.
    fn name_chars(&mut self) -> String {
        let mut out = String::new();
        loop {
            match self.peek() {
                Some(c) if c.is_alphanumeric() || c == '_' || c == '-' || c == '\u{b7}' => {
                    out.push(c);
                    self.bump();
                }
                Some('.') => {
                    let mut n = 1;
                    while self.peek_nth(n) == Some('.') {
                        n += 1;
                    }
                    match self.peek_nth(n) {
                        Some(c) if c.is_alphanumeric() || c == '_' || c == '-' => {
                            for _ in 0..n {
                                out.push('.');
                                self.bump();
                            }
                        }
                        _ => break,
                    }
                }
                _ => break,
            }
        }
        out
    }

    fn name(&mut self, line: usize, column: usize) -> Result<Tok, RdfError> {
        let prefix = if self.peek() == Some(':') { String::new() } else { self.name_chars() };
        if self.peek() == Some(':') {
            self.bump();
            if self.peek() == Some('\\') || self.peek() == Some('%') {
                return Err(RdfError::Unsupported { construct: "escaped local name", line, column });
            }
            let local = self.name_chars();
            return Ok(Tok::PName { prefix, local });
        }
        Ok(match prefix.as_str() {
            "a" => Tok::A,
            "true" => Tok::Bool(true),
            "false" => Tok::Bool(false),
            w if w.eq_ignore_ascii_case("prefix") => Tok::SparqlPrefix,
            w if w.eq_ignore_ascii_case("base") => Tok::SparqlBase,
            _ => return Err(self.err(line, column, prefix, "bare word is not a prefixed name or keyword")),
        })
    }

    fn number(&mut self, line: usize, column: usize) -> Result<Tok, RdfError> {
        let mut text = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            text.push(sign);
            self.bump();
        }
        text.push_str(&self.take_while(|c| c.is_ascii_digit()));
        let mut is_decimal = false;
        if self.peek() == Some('.') && self.peek_nth(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            text.push('.');
            text.push_str(&self.take_while(|c| c.is_ascii_digit()));
            is_decimal = true;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            text.push(self.bump().unwrap());
            if let Some(sign @ ('+' | '-')) = self.peek() {
                text.push(sign);
                self.bump();
            }
            let exp = self.take_while(|c| c.is_ascii_digit());
            if exp.is_empty() {
                return Err(self.err(line, column, text, "malformed exponent"));
            }
            text.push_str(&exp);
            return Ok(Tok::Double(text));
        }
        let digits = text.trim_start_matches(['+', '-']);
        if digits.is_empty() || digits == "." {
            return Err(self.err(line, column, text, "malformed number"));
        }
        Ok(if is_decimal { Tok::Decimal(text) } else { Tok::Integer(text) })
    }

    fn unicode_escape(&mut self, len: usize, line: usize, column: usize) -> Result<char, RdfError> {
        let mut hex = String::new();
        for _ in 0..len {
            match self.bump() {
                Some(c) if c.is_ascii_hexdigit() => hex.push(c),
                _ => return Err(self.err(line, column, format!("\\u{hex}"), "malformed unicode escape")),
            }
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.err(line, column, format!("\\u{hex}"), "escape is not a scalar value"))
    }

    fn iri_ref(&mut self, line: usize, column: usize) -> Result<String, RdfError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(out),
                Some('\\') => match self.bump() {
                    Some('u') => out.push(self.unicode_escape(4, line, column)?),
                    Some('U') => out.push(self.unicode_escape(8, line, column)?),
                    _ => return Err(self.err(line, column, format!("<{out}"), "bad escape in IRI")),
                },
                Some(c) if c.is_whitespace() || c == '<' || c == '"' => {
                    return Err(self.err(line, column, format!("<{out}"), "unterminated IRI"))
                }
                Some(c) => out.push(c),
                None => return Err(self.err(line, column, format!("<{out}"), "unterminated IRI")),
            }
        }
    }

    fn string(&mut self, line: usize, column: usize) -> Result<String, RdfError> {
        let quote = self.bump().unwrap();
        let long = self.peek() == Some(quote) && self.peek_nth(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        } else if self.peek() == Some(quote) {
            self.bump();
            return Ok(String::new());
        }
        let mut out = String::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(self.err(line, column, format!("{quote}{out}"), "unterminated string"));
            };
            match c {
                c if c == quote && !long => return Ok(out),
                c if c == quote && self.peek() == Some(quote) && self.peek_nth(1) == Some(quote) => {
                    self.bump();
                    self.bump();
                    // Extra quotes just before the closing triple belong to the content.
                    while self.peek() == Some(quote) {
                        out.push(quote);
                        self.bump();
                    }
                    return Ok(out);
                }
                '\\' => {
                    let esc = self.bump();
                    match esc {
                        Some('t') => out.push('\t'),
                        Some('b') => out.push('\u{8}'),
                        Some('n') => out.push('\n'),
                        Some('r') => out.push('\r'),
                        Some('f') => out.push('\u{c}'),
                        Some('"') => out.push('"'),
                        Some('\'') => out.push('\''),
                        Some('\\') => out.push('\\'),
                        Some('u') => out.push(self.unicode_escape(4, line, column)?),
                        Some('U') => out.push(self.unicode_escape(8, line, column)?),
                        other => {
                            return Err(self.err(
                                line,
                                column,
                                format!("\\{}", other.map(String::from).unwrap_or_default()),
                                "unknown string escape",
                            ))
                        }
                    }
                }
                '\n' | '\r' if !long => {
                    return Err(self.err(line, column, format!("{quote}{out}"), "line break in short string"))
                }
                c => out.push(c),
            }
        }
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: Spanned,
    prefixes: PrefixMap,
    triples: Vec<Triple>,
    anon_count: usize,
}

/// Parses a Turtle document into a graph.
///
/// Source blank-node labels are kept; anonymous `[ ]` nodes are labelled
/// `b0`, `b1`, ... in document order, skipping labels the document uses.
pub fn parse_turtle(text: &str) -> Result<Graph, RdfError> {
    let mut lexer = Lexer::new(text);
    let current = lexer.next_token()?;
    let mut parser = Parser { lexer, current, prefixes: PrefixMap::new(), triples: Vec::new(), anon_count: 0 };
    while parser.current.tok != Tok::Eof {
        parser.statement()?;
    }
    Ok(parser.finish())
}

impl Parser<'_> {
    fn advance(&mut self) -> Result<Spanned, RdfError> {
        let next = self.lexer.next_token()?;
        Ok(std::mem::replace(&mut self.current, next))
    }

    fn error(&self, message: impl Into<String>) -> RdfError {
        RdfError::Syntax {
            line: self.current.line,
            column: self.current.column,
            token: self.current.tok.describe(),
            message: message.into(),
        }
    }

    fn unsupported(&self, construct: &'static str) -> RdfError {
        RdfError::Unsupported { construct, line: self.current.line, column: self.current.column }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), RdfError> {
        if self.current.tok == tok {
            self.advance()?;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn statement(&mut self) -> Result<(), RdfError> {
        match self.current.tok {
            Tok::AtPrefix => {
                self.advance()?;
                self.prefix_binding()?;
                self.expect(Tok::Dot, "'.' after @prefix directive")
            }
            Tok::SparqlPrefix => {
                self.advance()?;
                self.prefix_binding()
            }
            Tok::AtBase | Tok::SparqlBase => Err(self.unsupported("base directive")),
            _ => {
                self.triples_block()?;
                self.expect(Tok::Dot, "'.' at end of statement")
            }
        }
    }

    fn prefix_binding(&mut self) -> Result<(), RdfError> {
        let Tok::PName { prefix, local } = self.current.tok.clone() else {
            return Err(self.error("expected prefix name ending in ':'"));
        };
        if !local.is_empty() {
            return Err(self.error("expected prefix name ending in ':'"));
        }
        self.advance()?;
        let Tok::IriRef(ns) = self.current.tok.clone() else {
            return Err(self.error("expected namespace IRI"));
        };
        let iri = self.make_iri(ns)?;
        self.prefixes.insert(prefix, iri).map_err(|e| self.error(e.to_string()))?;
        self.advance()?;
        Ok(())
    }

    fn triples_block(&mut self) -> Result<(), RdfError> {
        if self.current.tok == Tok::LBracket {
            let subject = self.blank_property_list()?;
            if self.current.tok != Tok::Dot {
                self.predicate_object_list(&subject)?;
            }
            return Ok(());
        }
        let subject = self.subject()?;
        self.predicate_object_list(&subject)
    }

    fn subject(&mut self) -> Result<Term, RdfError> {
        match self.current.tok.clone() {
            Tok::IriRef(_) | Tok::PName { .. } => self.iri_term(),
            Tok::Blank(label) => {
                self.advance()?;
                self.blank(label)
            }
            Tok::LParen => Err(self.unsupported("RDF collection")),
            Tok::QuoteOpen => Err(self.unsupported("quoted triple")),
            _ => Err(self.error("expected subject")),
        }
    }

    fn blank(&self, label: String) -> Result<Term, RdfError> {
        BlankNode::new(label).map(Term::Blank).map_err(|e| self.error(e.to_string()))
    }

    fn fresh_anon(&mut self) -> Term {
        let t = Term::Blank(BlankNode::unchecked(format!("{ANON_MARK}{}", self.anon_count)));
        self.anon_count += 1;
        t
    }

    fn blank_property_list(&mut self) -> Result<Term, RdfError> {
        self.expect(Tok::LBracket, "'['")?;
        let node = self.fresh_anon();
        if self.current.tok != Tok::RBracket {
            self.predicate_object_list(&node)?;
        }
        self.expect(Tok::RBracket, "']'")?;
        Ok(node)
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), RdfError> {
        loop {
            let predicate = match self.current.tok {
                Tok::A => {
                    self.advance()?;
                    super::rdf_type()
                }
                Tok::IriRef(_) | Tok::PName { .. } => self.iri_term()?,
                _ => return Err(self.error("expected predicate")),
            };
            loop {
                let object = self.object()?;
                let triple = Triple::new(subject.clone(), predicate.clone(), object).map_err(|e| self.error(e.to_string()))?;
                self.triples.push(triple);
                if self.current.tok == Tok::Comma {
                    self.advance()?;
                } else {
                    break;
                }
            }
            if self.current.tok != Tok::Semicolon {
                return Ok(());
            }
            while self.current.tok == Tok::Semicolon {
                self.advance()?;
            }
            if matches!(self.current.tok, Tok::Dot | Tok::RBracket) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, RdfError> {
        match self.current.tok.clone() {
            Tok::IriRef(_) | Tok::PName { .. } => self.iri_term(),
            Tok::Blank(label) => {
                self.advance()?;
                self.blank(label)
            }
            Tok::LBracket => self.blank_property_list(),
            Tok::LParen => Err(self.unsupported("RDF collection")),
            Tok::QuoteOpen => Err(self.unsupported("quoted triple")),
            Tok::Str(s) => {
                self.advance()?;
                self.literal_tail(s)
            }
            Tok::Integer(s) => self.bare_literal(s, ns::XSD_INTEGER),
            Tok::Decimal(s) => self.bare_literal(s, ns::XSD_DECIMAL),
            Tok::Double(s) => self.bare_literal(s, ns::XSD_DOUBLE),
            Tok::Bool(b) => {
                self.advance()?;
                Ok(Term::Literal(Literal::boolean(b)))
            }
            _ => Err(self.error("expected object")),
        }
    }

    fn bare_literal(&mut self, lexical: String, datatype: &'static str) -> Result<Term, RdfError> {
        let lit = Literal::typed(lexical, Iri::from_static(datatype)).map_err(|e| self.error(e.to_string()))?;
        self.advance()?;
        Ok(Term::Literal(lit))
    }

    fn literal_tail(&mut self, lexical: String) -> Result<Term, RdfError> {
        match self.current.tok.clone() {
            Tok::LangTag(tag) => {
                let lit = Literal::lang(lexical, tag).map_err(|e| self.error(e.to_string()))?;
                self.advance()?;
                Ok(Term::Literal(lit))
            }
            Tok::Carets => {
                self.advance()?;
                let datatype = match self.iri_term()? {
                    Term::Iri(iri) => iri,
                    _ => unreachable!(),
                };
                Literal::typed(lexical, datatype).map(Term::Literal).map_err(|e| self.error(e.to_string()))
            }
            _ => Ok(Term::Literal(Literal::string(lexical))),
        }
    }

    fn make_iri(&self, value: String) -> Result<Iri, RdfError> {
        if !value.contains(':') {
            return Err(RdfError::Unsupported {
                construct: "relative IRI (no base)",
                line: self.current.line,
                column: self.current.column,
            });
        }
        Iri::new(value).map_err(|e| self.error(e.to_string()))
    }

    fn iri_term(&mut self) -> Result<Term, RdfError> {
        let iri = match self.current.tok.clone() {
            Tok::IriRef(value) => self.make_iri(value)?,
            Tok::PName { prefix, local } => {
                let expanded = self.prefixes.expand(&prefix, &local).ok_or_else(|| RdfError::UnknownPrefix {
                    prefix: prefix.clone(),
                    line: self.current.line,
                    column: self.current.column,
                })?;
                Iri::new(expanded).map_err(|e| self.error(e.to_string()))?
            }
            _ => return Err(self.error("expected IRI")),
        };
        self.advance()?;
        Ok(Term::Iri(iri))
    }

    fn finish(self) -> Graph {
        let used: BTreeSet<String> = self
            .triples
            .iter()
            .flat_map(|t| [t.subject(), t.object()])
            .filter_map(|t| t.as_blank())
            .map(|b| b.label().to_owned())
            .filter(|l| !l.starts_with(ANON_MARK))
            .collect();
        let mut names = Vec::with_capacity(self.anon_count);
        let mut next = 0usize;
        while names.len() < self.anon_count {
            let candidate = format!("b{next}");
            next += 1;
            if !used.contains(&candidate) {
                names.push(candidate);
            }
        }
        let rename = |t: Term| match t {
            Term::Blank(b) if b.label().starts_with(ANON_MARK) => {
                let idx: usize = b.label()[ANON_MARK.len_utf8()..].parse().expect("anon index");
                Term::Blank(BlankNode::unchecked(names[idx].clone()))
            }
            other => other,
        };
        let mut graph = Graph::with_prefixes(self.prefixes);
        for triple in self.triples {
            let (s, p, o) = triple.into_parts();
            graph.insert(Triple::new(rename(s), p, rename(o)).expect("positions already checked"));
        }
        graph
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROLOGUE: &str = "@prefix ex: <http://example.org/> .\n";

    fn parse(body: &str) -> Result<Graph, RdfError> {
        parse_turtle(&format!("{PROLOGUE}{body}"))
    }

    #[test]
    fn empty_document() {
        let g = parse_turtle("").unwrap();
        assert!(g.is_empty());
        assert!(g.prefixes().is_empty());
    }

    #[test]
    fn comments_and_whitespace_only() {
        assert!(parse_turtle("# nothing here\n   \n").unwrap().is_empty());
    }

    #[test]
    fn unknown_prefix_names_the_prefix() {
        let err = parse_turtle("xyz:foo xyz:bar xyz:baz .").unwrap_err();
        match err {
            RdfError::UnknownPrefix { prefix, line, column } => {
                assert_eq!(prefix, "xyz");
                assert_eq!((line, column), (1, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn predicate_and_object_lists() {
        let g = parse("ex:s ex:p ex:a, ex:b ; ex:q 1 ; .").unwrap();
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn numeric_and_boolean_literals() {
        let g = parse("ex:s ex:d 0.00 ; ex:i 250 ; ex:b true ; ex:e 1.5e3 ; ex:n -7 .").unwrap();
        let dt = |p: &str| {
            let p = Term::iri(format!("http://example.org/{p}")).unwrap();
            let s = Term::iri("http://example.org/s").unwrap();
            g.object(&s, &p).unwrap().as_literal().unwrap().datatype().as_str().to_owned()
        };
        assert_eq!(dt("d"), ns::XSD_DECIMAL);
        assert_eq!(dt("i"), ns::XSD_INTEGER);
        assert_eq!(dt("b"), ns::XSD_BOOLEAN);
        assert_eq!(dt("e"), ns::XSD_DOUBLE);
        assert_eq!(dt("n"), ns::XSD_INTEGER);
    }

    #[test]
    fn integer_followed_by_terminator() {
        let g = parse("ex:s ex:p 250.").unwrap();
        let lit = g.iter().next().unwrap().object().as_literal().unwrap().clone();
        assert_eq!(lit.lexical(), "250");
    }

    #[test]
    fn language_and_datatype_annotations() {
        let g = parse("ex:s ex:p \"ML Provider\"@en ; ex:q \"5\"^^<http://www.w3.org/2001/XMLSchema#integer> .").unwrap();
        assert_eq!(g.len(), 2);
        assert!(parse("ex:s ex:q \"five\"^^<http://www.w3.org/2001/XMLSchema#integer> .").is_err());
    }

    #[test]
    fn anonymous_nodes_are_numbered_in_document_order() {
        let g = parse("ex:s ex:p [ ex:q [ ex:r 1 ] ] ; ex:t [] .").unwrap();
        let labels: BTreeSet<_> = g.blank_nodes().into_iter().map(|t| t.as_blank().unwrap().label().to_owned()).collect();
        assert_eq!(labels, ["b0", "b1", "b2"].into_iter().map(String::from).collect());
        let s = Term::iri("http://example.org/s").unwrap();
        let p = Term::iri("http://example.org/p").unwrap();
        assert_eq!(g.object(&s, &p), Some(&Term::blank("b0").unwrap()));
    }

    #[test]
    fn generated_labels_skip_explicit_ones() {
        let g = parse("ex:s ex:p [ ex:q 1 ] . _:b0 ex:p 2 .").unwrap();
        let s = Term::iri("http://example.org/s").unwrap();
        let p = Term::iri("http://example.org/p").unwrap();
        assert_eq!(g.object(&s, &p), Some(&Term::blank("b1").unwrap()));
    }

    #[test]
    fn collections_and_quoted_triples_are_rejected() {
        assert!(matches!(parse("ex:s ex:p ( 1 2 ) ."), Err(RdfError::Unsupported { construct: "RDF collection", .. })));
        assert!(matches!(parse("<< ex:a ex:b ex:c >> ex:p 1 ."), Err(RdfError::Unsupported { construct: "quoted triple", .. })));
        assert!(matches!(parse_turtle("@base <http://x/> ."), Err(RdfError::Unsupported { .. })));
    }

    #[test]
    fn syntax_errors_report_position_and_token() {
        let err = parse("ex:s ex:p \"64\"\n   ex:q \"E34\" .").unwrap_err();
        match err {
            RdfError::Syntax { line, column, token, .. } => {
                assert_eq!((line, column), (3, 4));
                assert_eq!(token, "ex:q");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn later_prefix_redefines_earlier() {
        let g = parse_turtle("@prefix ex: <http://a/> .\n@prefix ex: <http://b/> .\nex:s ex:p ex:o .").unwrap();
        assert_eq!(g.iter().next().unwrap().subject(), &Term::iri("http://b/s").unwrap());
    }

    #[test]
    fn sparql_style_prefix() {
        let g = parse_turtle("PREFIX ex: <http://example.org/>\nex:s a ex:C .").unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn dotted_local_names() {
        let g = parse("ex:a.b ex:p ex:c.").unwrap();
        let t = g.iter().next().unwrap();
        assert_eq!(t.subject(), &Term::iri("http://example.org/a.b").unwrap());
        assert_eq!(t.object(), &Term::iri("http://example.org/c").unwrap());
    }

    #[test]
    fn string_escapes_and_long_strings() {
        let g = parse("ex:s ex:p \"a\\\"b\\u00e9\" ; ex:q \"\"\"multi\nline\"\"\" ; ex:r 'single' .").unwrap();
        let lexicals: BTreeSet<_> = g.iter().map(|t| t.object().as_literal().unwrap().lexical().to_owned()).collect();
        assert!(lexicals.contains("a\"bé"));
        assert!(lexicals.contains("multi\nline"));
        assert!(lexicals.contains("single"));
    }

    #[test]
    fn literal_subject_is_an_error() {
        assert!(parse("\"x\" ex:p ex:o .").is_err());
    }
}
