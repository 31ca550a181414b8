use std::cmp::Ordering;
use std::collections::BTreeSet;

use rust_decimal::Decimal;
use serde::Serialize;

use crate::rdf::{Graph, Term};

use super::{CompareOp, Direction, FilterExpr, SelectQuery, Slot, TriplePattern};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ResultSet {
    pub columns: Vec<String>,
    /// Each row holds one term per column.
    pub rows: Vec<Vec<Term>>,
    /// Filter evaluations that hit a type error and counted as non-matches.
    #[serde(rename = "typeErrors")]
    pub type_errors: usize,
}

impl ResultSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Term>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result set serializes");
        s.push('\n');
        s
    }

    /// Aligned text table with a header row.
    pub fn to_table(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.len() + 1]).max().unwrap_or(0))
            .collect();
        let line = |vals: Vec<String>| {
            let padded: Vec<String> = vals.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect();
            padded.join("  ").trim_end().to_owned() + "\n"
        };
        let mut out = line(self.columns.iter().map(|c| format!("?{c}")).collect());
        for r in cells {
            out.push_str(&line(r));
        }
        out.push_str(&format!("({} row{})\n", self.rows.len(), if self.rows.len() == 1 { "" } else { "s" }));
        out
    }
}

/// Numbers print bare, as Turtle would write them.
fn cell(t: &Term) -> String {
    match t.as_literal() {
        Some(l) if l.is_numeric() => l.lexical().to_owned(),
        _ => t.to_string(),
    }
}

type Binding = Vec<Option<Term>>;

struct Plan<'q> {
    vars: Vec<String>,
    patterns: Vec<[Compiled<'q>; 3]>,
}

#[derive(Clone, Copy)]
enum Compiled<'q> {
    Var(usize),
    Term(&'q Term),
}

impl<'q> Plan<'q> {
    fn new(q: &'q SelectQuery) -> Self {
        let vars = q.pattern_vars();
        let compile = |s: &'q Slot| match s {
            Slot::Var(v) => Compiled::Var(vars.iter().position(|x| x == v).expect("pattern var")),
            Slot::Term(t) => Compiled::Term(t),
        };
        let patterns = q.patterns.iter().map(|p: &'q TriplePattern| [compile(&p.subject), compile(&p.predicate), compile(&p.object)]).collect();
        Plan { vars, patterns }
    }

    fn index(&self, name: &str) -> usize {
        self.vars.iter().position(|v| v == name).expect("checked at parse time")
    }
}

/// Runs `q` over `g`.
///
/// Patterns are joined greedily, most-bound first; filters run on complete
/// solutions. Unordered results are sorted by their serialized rows.
pub fn evaluate(g: &Graph, q: &SelectQuery) -> ResultSet {
    let plan = Plan::new(q);
    let mut solutions: Vec<Binding> = vec![vec![None; plan.vars.len()]];
    let mut bound = vec![false; plan.vars.len()];
    let mut remaining: Vec<usize> = (0..plan.patterns.len()).collect();

    while !remaining.is_empty() && !solutions.is_empty() {
        let score = |i: &usize| {
            plan.patterns[*i]
                .iter()
                .filter(|c| match c {
                    Compiled::Term(_) => true,
                    Compiled::Var(v) => bound[*v],
                })
                .count()
        };
        // Most bound positions first; ties keep textual order.
        let pick = remaining.iter().enumerate().max_by(|a, b| score(a.1).cmp(&score(b.1)).then(b.0.cmp(&a.0))).map(|(k, _)| k).unwrap();
        let pi = remaining.remove(pick);
        let pat = &plan.patterns[pi];
        let mut next = Vec::new();
        for sol in &solutions {
            let fixed: Vec<Option<&Term>> = pat
                .iter()
                .map(|c| match c {
                    Compiled::Term(t) => Some(*t),
                    Compiled::Var(v) => sol[*v].as_ref(),
                })
                .collect();
            'triples: for t in g.matching(fixed[0], fixed[1], fixed[2]) {
                let mut ext = sol.clone();
                for (c, val) in pat.iter().zip([t.subject(), t.predicate(), t.object()]) {
                    if let Compiled::Var(v) = c {
                        match &ext[*v] {
                            Some(existing) if existing != val => continue 'triples,
                            Some(_) => {}
                            None => ext[*v] = Some(val.clone()),
                        }
                    }
                }
                next.push(ext);
            }
        }
        for c in pat {
            if let Compiled::Var(v) = c {
                bound[*v] = true;
            }
        }
        solutions = next;
    }

    let mut type_errors = 0;
    let filters: Vec<(usize, &FilterExpr)> = q.filters.iter().map(|f| (plan.index(&f.left), f)).collect();
    solutions.retain(|sol| {
        let mut keep = true;
        for (li, f) in &filters {
            let left = sol[*li].as_ref().expect("pattern vars are bound");
            let right = match &f.right {
                Slot::Var(v) => sol[plan.index(v)].as_ref().expect("pattern vars are bound"),
                Slot::Term(t) => t,
            };
            match test(f.op, left, right) {
                Some(true) => {}
                Some(false) => keep = false,
                None => {
                    type_errors += 1;
                    keep = false;
                }
            }
        }
        keep
    });

    let cols: Vec<usize> = q.projected.iter().map(|v| plan.index(v)).collect();
    let key = |sol: &Binding| -> Vec<String> { sol.iter().map(|t| t.as_ref().map_or(String::new(), Term::to_string)).collect() };
    let project = |sol: &Binding| -> Vec<String> { cols.iter().map(|&i| sol[i].as_ref().map_or(String::new(), Term::to_string)).collect() };
    let order = q.order_by.as_ref().map(|(v, d)| (plan.index(v), *d));
    solutions.sort_by(|a, b| {
        let primary = match order {
            Some((i, dir)) => {
                let o = order_terms(a[i].as_ref().unwrap(), b[i].as_ref().unwrap());
                if dir == Direction::Desc { o.reverse() } else { o }
            }
            None => Ordering::Equal,
        };
        primary.then_with(|| project(a).cmp(&project(b))).then_with(|| key(a).cmp(&key(b)))
    });

    let mut rows: Vec<Vec<Term>> = Vec::new();
    let mut seen = BTreeSet::new();
    for sol in solutions {
        let row: Vec<Term> = cols.iter().map(|&i| sol[i].clone().expect("pattern vars are bound")).collect();
        if q.distinct && !seen.insert(row.clone()) {
            continue;
        }
        rows.push(row);
    }
    if let Some(n) = q.limit {
        rows.truncate(n);
    }
    ResultSet { columns: q.projected.clone(), rows, type_errors }
}

fn numeric(t: &Term) -> Option<Decimal> {
    t.as_literal().filter(|l| l.is_numeric()).and_then(|l| l.as_decimal())
}

/// `None` is a type error.
pub(crate) fn test(op: CompareOp, left: &Term, right: &Term) -> Option<bool> {
    let nums = numeric(left).zip(numeric(right));
    match op {
        CompareOp::Eq | CompareOp::Ne => {
            let eq = match nums {
                Some((a, b)) => a == b,
                None => left == right,
            };
            Some(eq == (op == CompareOp::Eq))
        }
        CompareOp::Contains => {
            let (a, b) = (left.as_literal()?, right.as_literal()?);
            if a.is_numeric() || b.is_numeric() {
                return None;
            }
            Some(a.lexical().contains(b.lexical()))
        }
        _ => {
            let (a, b) = nums?;
            Some(match op {
                CompareOp::Lt => a < b,
                CompareOp::Le => a <= b,
                CompareOp::Gt => a > b,
                CompareOp::Ge => a >= b,
                _ => unreachable!(),
            })
        }
    }
}

/// Blank nodes, then IRIs, then literals; numbers by value among themselves.
fn order_terms(a: &Term, b: &Term) -> Ordering {
    let rank = |t: &Term| match t {
        Term::Blank(_) => 0,
        Term::Iri(_) => 1,
        Term::Literal(_) => 2,
    };
    rank(a).cmp(&rank(b)).then_with(|| match (numeric(a), numeric(b)) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => match (a.as_literal(), b.as_literal()) {
            (Some(x), Some(y)) => x.lexical().cmp(y.lexical()),
            _ => Ordering::Equal,
        },
    })
}
