use crate::rdf::{ns, rdf_type, BlankNode, Iri, Literal, PrefixMap, Term};
use crate::vocab::registry;

use super::{CompareOp, Direction, FilterExpr, QueryError, SelectQuery, Slot, TriplePattern, UNSUPPORTED};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Var(String),
    Iri(String),
    PName(String, String),
    Blank(String),
    Str(String),
    Lang(String),
    Number(String),
    Word(String),
    Punct(&'static str),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const PUNCT: &[&str] = &["^^", "!=", "<=", ">=", "{", "}", "(", ")", ".", ";", ",", "*", "=", "<", ">"];

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    _src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { chars: src.chars().collect(), pos: 0, line: 1, column: 1, _src: src }
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> QueryError {
        QueryError::Syntax { line, column, message: message.into() }
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, QueryError> {
        let mut out = Vec::new();
        loop {
            while let Some(c) = self.peek(0) {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '#' {
                    while self.peek(0).is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let (line, column) = (self.line, self.column);
            let Some(c) = self.peek(0) else { break };
            let tok = if c == '?' || c == '$' {
                self.bump();
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                if name.is_empty() {
                    return Err(self.err(line, column, "variable without a name"));
                }
                Tok::Var(name)
            } else if c == '<' && self.iri_ahead() {
                self.bump();
                let iri = self.take_while(|c| c != '>');
                self.bump();
                Tok::Iri(iri)
            } else if c == '"' || c == '\'' {
                Tok::Str(self.string(c, line, column)?)
            } else if c == '@' {
                self.bump();
                let tag = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
                Tok::Lang(tag)
            } else if c == '_' && self.peek(1) == Some(':') {
                self.bump();
                self.bump();
                Tok::Blank(self.name_chars())
            } else if c.is_ascii_digit() || (matches!(c, '+' | '-') && self.peek(1).is_some_and(|d| d.is_ascii_digit() || d == '.')) || (c == '.' && self.peek(1).is_some_and(|d| d.is_ascii_digit())) {
                Tok::Number(self.number())
            } else if c.is_alphabetic() || c == ':' {
                let head = self.take_while(|c| c.is_alphanumeric() || matches!(c, '_' | '-'));
                if self.peek(0) == Some(':') {
                    self.bump();
                    Tok::PName(head, self.name_chars())
                } else {
                    Tok::Word(head)
                }
            } else if let Some(p) = PUNCT.iter().find(|p| p.chars().enumerate().all(|(i, pc)| self.peek(i) == Some(pc))) {
                for _ in 0..p.len() {
                    self.bump();
                }
                Tok::Punct(p)
            } else {
                return Err(self.err(line, column, format!("unexpected character {c:?}")));
            };
            out.push(Spanned { tok, line, column });
        }
        Ok(out)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek(0).filter(|c| f(*c)) {
            s.push(c);
            self.bump();
        }
        s
    }

    /// Local-name characters; a trailing '.' ends the triple instead.
    fn name_chars(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek(0) {
            let inner = c.is_alphanumeric() || matches!(c, '_' | '-' | '%' | ':');
            let dot = c == '.' && self.peek(1).is_some_and(|n| n.is_alphanumeric() || matches!(n, '_' | '-'));
            if !(inner || dot) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn iri_ahead(&self) -> bool {
        let mut i = 1;
        while let Some(c) = self.peek(i) {
            if c == '>' {
                return i > 1;
            }
            if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`' | '\\') {
                return false;
            }
            i += 1;
        }
        false
    }

    fn string(&mut self, quote: char, line: usize, column: usize) -> Result<String, QueryError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return Err(self.err(line, column, "unterminated string")),
                Some(c) if c == quote => return Ok(s),
                Some('\\') => {
                    let e = self.bump().ok_or_else(|| self.err(line, column, "unterminated string"))?;
                    s.push(match e {
                        'n' => '\n',
                        't' => '\t',
                        'r' => '\r',
                        '"' | '\'' | '\\' => e,
                        other => return Err(self.err(self.line, self.column - 1, format!("unknown escape \\{other}"))),
                    });
                }
                Some(c) => s.push(c),
            }
        }
    }

    fn number(&mut self) -> String {
        let mut s = String::new();
        if let Some(c) = self.peek(0).filter(|c| matches!(c, '+' | '-')) {
            s.push(c);
            self.bump();
        }
        s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        if self.peek(0) == Some('.') && self.peek(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            s.push('.');
            s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        }
        s
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    prefixes: PrefixMap,
    end: (usize, usize),
}

pub fn parse_query(text: &str) -> Result<SelectQuery, QueryError> {
    let toks = Lexer::new(text).tokens()?;
    let end = text.lines().count().max(1);
    let end_col = text.lines().last().map_or(1, |l| l.chars().count() + 1);
    for t in &toks {
        if let Tok::Word(w) = &t.tok {
            let upper = w.to_ascii_uppercase();
            if UNSUPPORTED.contains(&upper.as_str()) {
                return Err(QueryError::Unsupported { keyword: upper, line: t.line, column: t.column });
            }
        }
    }
    let mut p = Parser { toks, pos: 0, prefixes: registry().prefixes().clone(), end: (end, end_col) };
    let q = p.query()?;
    check_scope(&q)?;
    Ok(q)
}

fn check_scope(q: &SelectQuery) -> Result<(), QueryError> {
    let vars = q.pattern_vars();
    let known = |v: &str| vars.iter().any(|k| k == v);
    let mut used: Vec<&str> = q.projected.iter().map(String::as_str).collect();
    for f in &q.filters {
        used.push(&f.left);
        if let Slot::Var(v) = &f.right {
            used.push(v);
        }
    }
    if let Some((v, _)) = &q.order_by {
        used.push(v);
    }
    match used.into_iter().find(|v| !known(v)) {
        Some(v) => Err(QueryError::UnboundVariable(v.to_owned())),
        None => Ok(()),
    }
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.column))
    }

    fn err(&self, message: impl Into<String>) -> QueryError {
        let (line, column) = self.here();
        let found = match self.peek() {
            None => "end of input".to_owned(),
            Some(t) => describe(t),
        };
        QueryError::Syntax { line, column, message: format!("{}, found {found}", message.into()) }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn is_word(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(kw))
    }

    fn eat_word(&mut self, kw: &str) -> bool {
        let hit = self.is_word(kw);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect_word(&mut self, kw: &str) -> Result<(), QueryError> {
        if self.eat_word(kw) {
            Ok(())
        } else {
            Err(self.err(format!("expected {kw}")))
        }
    }

    fn eat(&mut self, p: &str) -> bool {
        let hit = matches!(self.peek(), Some(Tok::Punct(q)) if *q == p);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect(&mut self, p: &str) -> Result<(), QueryError> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{p}'")))
        }
    }

    fn var(&mut self) -> Result<String, QueryError> {
        match self.peek() {
            Some(Tok::Var(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("expected a variable")),
        }
    }

    fn query(&mut self) -> Result<SelectQuery, QueryError> {
        while self.eat_word("PREFIX") {
            let (line, column) = self.here();
            let prefix = match self.next() {
                Some(Tok::PName(p, l)) if l.is_empty() => p,
                _ => return Err(QueryError::Syntax { line, column, message: "expected a prefix name such as ex:".into() }),
            };
            let (line, column) = self.here();
            let ns = match self.next() {
                Some(Tok::Iri(i)) => Iri::new(i).map_err(|e| QueryError::Syntax { line, column, message: e.to_string() })?,
                _ => return Err(QueryError::Syntax { line, column, message: "expected <namespace>".into() }),
            };
            self.prefixes.insert(prefix, ns).map_err(|e| QueryError::Syntax { line, column, message: e.to_string() })?;
        }
        self.expect_word("SELECT")?;
        let distinct = self.eat_word("DISTINCT");
        let mut projected = Vec::new();
        let star = self.eat("*");
        if !star {
            while let Some(Tok::Var(_)) = self.peek() {
                projected.push(self.var()?);
            }
            if projected.is_empty() {
                return Err(self.err("expected variables or '*' after SELECT"));
            }
        }
        self.eat_word("WHERE");
        self.expect("{")?;
        let mut patterns = Vec::new();
        let mut filters = Vec::new();
        loop {
            if self.eat("}") {
                break;
            }
            if self.eat(".") {
                continue;
            }
            if self.is_word("FILTER") {
                self.pos += 1;
                filters.push(self.filter()?);
            } else {
                self.triples(&mut patterns)?;
                if !matches!(self.peek(), Some(Tok::Punct(".")) | Some(Tok::Punct("}"))) && !self.is_word("FILTER") {
                    return Err(self.err("expected '.' or '}' after a triple pattern"));
                }
            }
        }
        let mut order_by = None;
        if self.eat_word("ORDER") {
            self.expect_word("BY")?;
            order_by = Some(if self.eat_word("ASC") {
                self.expect("(")?;
                let v = self.var()?;
                self.expect(")")?;
                (v, Direction::Asc)
            } else if self.eat_word("DESC") {
                self.expect("(")?;
                let v = self.var()?;
                self.expect(")")?;
                (v, Direction::Desc)
            } else {
                (self.var()?, Direction::Asc)
            });
            if let Some(Tok::Var(_)) = self.peek() {
                return Err(self.err("only one ORDER BY key is supported"));
            }
        }
        let mut limit = None;
        if self.eat_word("LIMIT") {
            limit = match self.next() {
                Some(Tok::Number(n)) if n.bytes().all(|b| b.is_ascii_digit()) => {
                    Some(n.parse::<usize>().map_err(|_| self.err_at_prev("LIMIT out of range"))?)
                }
                _ => return Err(self.err_at_prev("LIMIT expects a non-negative integer")),
            };
        }
        if self.pos < self.toks.len() {
            return Err(self.err("unexpected trailing input"));
        }
        let mut q = SelectQuery { projected, distinct, patterns, filters, order_by, limit };
        if star {
            q.projected = q.pattern_vars();
        }
        Ok(q)
    }

    fn err_at_prev(&self, message: &str) -> QueryError {
        let t = &self.toks[self.pos.saturating_sub(1).min(self.toks.len().saturating_sub(1))];
        QueryError::Syntax { line: t.line, column: t.column, message: message.into() }
    }

    fn triples(&mut self, out: &mut Vec<TriplePattern>) -> Result<(), QueryError> {
        let subject = self.slot()?;
        loop {
            let predicate = if self.eat_word("a") { Slot::Term(rdf_type()) } else { self.slot()? };
            loop {
                let object = self.slot()?;
                out.push(TriplePattern { subject: subject.clone(), predicate: predicate.clone(), object });
                if !self.eat(",") {
                    break;
                }
            }
            if !self.eat(";") {
                return Ok(());
            }
            // Allow a dangling ';' before '.' or '}'.
            if matches!(self.peek(), Some(Tok::Punct(".")) | Some(Tok::Punct("}"))) {
                return Ok(());
            }
        }
    }

    fn slot(&mut self) -> Result<Slot, QueryError> {
        if let Some(Tok::Var(_)) = self.peek() {
            return Ok(Slot::Var(self.var()?));
        }
        Ok(Slot::Term(self.term()?))
    }

    fn term(&mut self) -> Result<Term, QueryError> {
        let (line, column) = self.here();
        let bad = |e: crate::rdf::RdfError| QueryError::Syntax { line, column, message: e.to_string() };
        match self.peek().cloned() {
            Some(Tok::Iri(i)) => {
                self.pos += 1;
                Term::iri(i).map_err(bad)
            }
            Some(Tok::PName(p, l)) => {
                self.pos += 1;
                self.expand(&p, &l, line, column)
            }
            Some(Tok::Blank(b)) => {
                self.pos += 1;
                BlankNode::new(b).map(Term::Blank).map_err(bad)
            }
            Some(Tok::Str(s)) => {
                self.pos += 1;
                if let Some(Tok::Lang(tag)) = self.peek().cloned() {
                    self.pos += 1;
                    return Literal::lang(s, tag).map(Term::Literal).map_err(bad);
                }
                if self.eat("^^") {
                    let (l2, c2) = self.here();
                    let dt = match self.next() {
                        Some(Tok::Iri(i)) => Iri::new(i).map_err(bad)?,
                        Some(Tok::PName(p, l)) => match self.expand(&p, &l, l2, c2)? {
                            Term::Iri(i) => i,
                            _ => unreachable!(),
                        },
                        _ => return Err(QueryError::Syntax { line: l2, column: c2, message: "expected a datatype IRI after ^^".into() }),
                    };
                    return Literal::typed(s, dt).map(Term::Literal).map_err(bad);
                }
                Ok(Term::Literal(Literal::string(s)))
            }
            Some(Tok::Number(n)) => {
                self.pos += 1;
                let dt = if n.contains('.') { ns::XSD_DECIMAL } else { ns::XSD_INTEGER };
                Literal::typed(n, Iri::new(dt).expect("xsd iri")).map(Term::Literal).map_err(bad)
            }
            Some(Tok::Word(w)) if w == "true" || w == "false" => {
                self.pos += 1;
                Ok(Term::Literal(Literal::boolean(w == "true")))
            }
            _ => Err(self.err("expected a term")),
        }
    }

    fn expand(&self, prefix: &str, local: &str, line: usize, column: usize) -> Result<Term, QueryError> {
        let iri = self
            .prefixes
            .expand(prefix, local)
            .ok_or_else(|| QueryError::UnknownPrefix { prefix: prefix.to_owned(), line, column })?;
        Term::iri(iri).map_err(|e| QueryError::Syntax { line, column, message: e.to_string() })
    }

    fn filter(&mut self) -> Result<FilterExpr, QueryError> {
        let wrapped = self.eat("(");
        let f = if self.eat_word("CONTAINS") {
            self.expect("(")?;
            let left = self.var()?;
            self.expect(",")?;
            let right = self.slot()?;
            self.expect(")")?;
            FilterExpr { op: CompareOp::Contains, left, right }
        } else {
            if !wrapped {
                return Err(self.err("expected '(' after FILTER"));
            }
            let lhs = self.slot()?;
            let op = match self.next() {
                Some(Tok::Punct("=")) => CompareOp::Eq,
                Some(Tok::Punct("!=")) => CompareOp::Ne,
                Some(Tok::Punct("<")) => CompareOp::Lt,
                Some(Tok::Punct("<=")) => CompareOp::Le,
                Some(Tok::Punct(">")) => CompareOp::Gt,
                Some(Tok::Punct(">=")) => CompareOp::Ge,
                _ => {
                    self.pos -= 1;
                    return Err(self.err("expected a comparison operator"));
                }
            };
            let rhs = self.slot()?;
            match (lhs, rhs) {
                (Slot::Var(left), right) => FilterExpr { op, left, right },
                // Constant on the left: mirror so the variable leads.
                (right @ Slot::Term(_), Slot::Var(left)) => FilterExpr { op: mirror(op), left, right },
                (Slot::Term(_), Slot::Term(_)) => return Err(self.err_at_prev("a filter must mention a variable")),
            }
        };
        if wrapped {
            self.expect(")")?;
        }
        Ok(f)
    }
}

fn mirror(op: CompareOp) -> CompareOp {
    match op {
        CompareOp::Lt => CompareOp::Gt,
        CompareOp::Le => CompareOp::Ge,
        CompareOp::Gt => CompareOp::Lt,
        CompareOp::Ge => CompareOp::Le,
        other => other,
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Var(v) => format!("?{v}"),
        Tok::Iri(i) => format!("<{i}>"),
        Tok::PName(p, l) => format!("{p}:{l}"),
        Tok::Blank(b) => format!("_:{b}"),
        Tok::Str(s) => format!("{s:?}"),
        Tok::Lang(l) => format!("@{l}"),
        Tok::Number(n) | Tok::Word(n) => n.clone(),
        Tok::Punct(p) => format!("'{p}'"),
    }
}
