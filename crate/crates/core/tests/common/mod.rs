#![allow(dead_code)]

use std::collections::BTreeSet;

use dmcc::rdf::{parse_turtle, Graph, Term};
use dmcc::vocab::{self, dmcc as d};

pub fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> Graph {
    parse_turtle(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

pub fn blank(label: &str) -> Term {
    Term::blank(label).unwrap()
}

pub const ASPECT_LINKS: &[(&str, &str, &str)] = &[
    ("auth", d::HAS_AUTHENTICATION, "ASPECT_MISSING_AUTH"),
    ("function", d::HAS_FUNCTION, "ASPECT_MISSING_FUNCTION"),
    ("interaction", d::HAS_INTERACTION_POINT, "ASPECT_MISSING_INTERACTION"),
    ("pricing", d::HAS_PRICING_PLAN, "ASPECT_MISSING_PRICING"),
    ("sla", d::HAS_SERVICE_COMMITMENT, "ASPECT_MISSING_SLA"),
];

fn reachable(g: &Graph, roots: impl IntoIterator<Item = Term>) -> BTreeSet<Term> {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<Term> = roots.into_iter().collect();
    while let Some(n) = stack.pop() {
        if n.is_literal() || !seen.insert(n.clone()) {
            continue;
        }
        for t in g.matching(Some(&n), None, None) {
            stack.push(t.object().clone());
        }
    }
    seen
}

/// Drops `service`'s `link` triples together with every node reachable only
/// through them. Nodes still used elsewhere (shared plans, regions) stay.
pub fn delete_aspect(g: &Graph, service: &Term, link: &'static str) -> Graph {
    let pred = vocab::term(link);
    let targets: Vec<Term> = g.objects(service, &pred).cloned().collect();
    let candidates = reachable(g, targets.iter().cloned());
    let mut out = g.clone();
    for t in g.matching(Some(service), Some(&pred), None) {
        out.remove(t);
    }
    let outside: Vec<Term> = out.iter().map(|t| t.subject().clone()).filter(|s| !candidates.contains(s)).collect();
    let kept = reachable(&out, outside);
    for t in g.iter() {
        if candidates.contains(t.subject()) && !kept.contains(t.subject()) {
            out.remove(t);
        }
    }
    out
}

pub mod gen {
    use dmcc::model::{Compound, Instance, PriceSpec, PricingPlan, Quantity, Region};
    use dmcc::rdf::{Graph, Iri, Literal, Term, Triple};
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rust_decimal::Decimal;

    pub const EX: &str = "http://example.org/";

    pub fn ex(local: &str) -> Term {
        Term::iri(format!("{EX}{local}")).unwrap()
    }

    fn literal_pool() -> Vec<Term> {
        let xsd = |t: &str| Iri::new(format!("http://www.w3.org/2001/XMLSchema#{t}")).unwrap();
        vec![
            Literal::string("alpha").into(),
            Literal::string("beta").into(),
            Literal::string("x").into(),
            Literal::lang("data", "en").unwrap().into(),
            Literal::typed("3", xsd("integer")).unwrap().into(),
            Literal::typed("5", xsd("integer")).unwrap().into(),
            Literal::typed("05", xsd("integer")).unwrap().into(),
            Literal::typed("4.50", xsd("decimal")).unwrap().into(),
            Literal::typed("-1.0", xsd("decimal")).unwrap().into(),
            Literal::typed("5.0", xsd("decimal")).unwrap().into(),
        ]
    }

    /// A graph of up to `max` triples over a small, collision-prone pool of
    /// nodes, predicates and literals.
    pub fn random_graph(rng: &mut impl Rng, max: usize) -> Graph {
        let nodes: Vec<Term> = (0..6)
            .map(|i| ex(&format!("n{i}")))
            .chain((0..5).map(|i| Term::blank(format!("b{i}")).unwrap()))
            .collect();
        let preds: Vec<Term> = (0..4).map(|i| ex(&format!("p{i}"))).chain([dmcc::rdf::rdf_type()]).collect();
        let classes: Vec<Term> = (0..2).map(|i| ex(&format!("C{i}"))).collect();
        let lits = literal_pool();
        let mut g = Graph::new();
        let n = rng.gen_range(0..=max);
        for _ in 0..n {
            let s = nodes.choose(rng).unwrap().clone();
            let p = preds.choose(rng).unwrap().clone();
            let o = if p == dmcc::rdf::rdf_type() {
                classes.choose(rng).unwrap().clone()
            } else if rng.gen_bool(0.5) {
                nodes.choose(rng).unwrap().clone()
            } else {
                lits.choose(rng).unwrap().clone()
            };
            g.insert(Triple::new(s, p, o).unwrap());
        }
        g
    }

    pub fn dec(cents: i64, scale: u32) -> Decimal {
        Decimal::new(cents, scale)
    }

    /// Random plan over HRS and E34 with optional allowances, caps and scopes.
    pub fn random_plan(rng: &mut impl Rng) -> PricingPlan {
        let node = |l: String| Term::blank(l).unwrap();
        let units = ["HRS", "E34"];
        let mut compounds = Vec::new();
        for i in 0..rng.gen_range(1..=4) {
            let unit = *units.choose(rng).unwrap();
            let price_spec = rng.gen_bool(0.8).then(|| PriceSpec {
                node: node(format!("ps{i}")),
                unit_price: dec(rng.gen_range(0..500), 3),
                currency: "USD".into(),
                unit: unit.into(),
                max_charge: rng.gen_bool(0.2).then(|| dec(rng.gen_range(0..5000), 2)),
            });
            let allowance = (price_spec.is_none() || rng.gen_bool(0.3)).then(|| Quantity::new(dec(rng.gen_range(0..300), 0), unit));
            let instance = rng.gen_bool(0.2).then(|| Instance { node: node("i0".into()), ram_gb: None, cpu_model: None, cores: None, storage_gb: None });
            let region = rng.gen_bool(0.2).then(|| Region { node: node("r0".into()), code: "eu".into(), display_name: None });
            compounds.push(Compound { node: node(format!("c{i}")), price_spec, instance, region, allowance });
        }
        PricingPlan {
            node: node("plan".into()),
            name: "random".into(),
            min_price: None,
            max_price: rng.gen_bool(0.2).then(|| dec(rng.gen_range(0..3000), 2)),
            currency: "USD".into(),
            currency_declared: true,
            compounds,
        }
    }

    /// A free plan: allowance of `hours`, capped at zero.
    pub fn free_plan(hours: Decimal) -> PricingPlan {
        let node = |l: &str| Term::blank(l).unwrap();
        PricingPlan {
            node: node("free"),
            name: "Free".into(),
            min_price: Some(Decimal::ZERO),
            max_price: Some(Decimal::ZERO),
            currency: "USD".into(),
            currency_declared: true,
            compounds: vec![Compound {
                node: node("fc"),
                price_spec: Some(PriceSpec {
                    node: node("fs"),
                    unit_price: Decimal::ZERO,
                    currency: "USD".into(),
                    unit: "HRS".into(),
                    max_charge: Some(Decimal::ZERO),
                }),
                instance: None,
                region: None,
                allowance: Some(Quantity::new(hours, "HRS")),
            }],
        }
    }
}

pub mod oracle {
    use std::collections::BTreeMap;

    use dmcc::model::PricingPlan;
    use dmcc::pricing::UsageRequest;
    use dmcc::query::{CompareOp, SelectQuery, Slot};
    use dmcc::rdf::{Graph, Term};
    use rust_decimal::Decimal;

    fn number(t: &Term) -> Option<Decimal> {
        let l = t.as_literal()?;
        let dt = l.datatype().as_str();
        if dt.ends_with("#integer") || dt.ends_with("#decimal") {
            l.lexical().parse().ok()
        } else {
            None
        }
    }

    /// Some(bool) or None on a type error.
    fn holds(op: CompareOp, a: &Term, b: &Term) -> Option<bool> {
        match op {
            CompareOp::Eq => Some(match (number(a), number(b)) {
                (Some(x), Some(y)) => x == y,
                _ => a == b,
            }),
            CompareOp::Ne => holds(CompareOp::Eq, a, b).map(|v| !v),
            CompareOp::Contains => {
                if number(a).is_some() || number(b).is_some() {
                    return None;
                }
                Some(a.as_literal()?.lexical().contains(b.as_literal()?.lexical()))
            }
            _ => {
                let (x, y) = (number(a)?, number(b)?);
                Some(match op {
                    CompareOp::Lt => x < y,
                    CompareOp::Le => x <= y,
                    CompareOp::Gt => x > y,
                    _ => x >= y,
                })
            }
        }
    }

    /// Enumerates every assignment of the query's variables to graph terms.
    /// Returns the projected rows sorted by their serialization and the
    /// number of filter type errors.
    pub fn brute_force(g: &Graph, q: &SelectQuery) -> (Vec<Vec<Term>>, usize) {
        let vars = q.pattern_vars();
        let terms: Vec<Term> = g.terms().into_iter().cloned().collect();
        let mut rows = Vec::new();
        let mut errors = 0;
        let mut idx = vec![0usize; vars.len()];
        if terms.is_empty() && !vars.is_empty() {
            return (rows, 0);
        }
        loop {
            let env: BTreeMap<&str, &Term> = vars.iter().map(String::as_str).zip(idx.iter().map(|&i| &terms[i])).collect();
            let val = |s: &Slot| match s {
                Slot::Var(v) => env[v.as_str()].clone(),
                Slot::Term(t) => t.clone(),
            };
            let all = q.patterns.iter().all(|p| {
                dmcc::rdf::Triple::new(val(&p.subject), val(&p.predicate), val(&p.object)).is_ok_and(|t| g.contains(&t))
            });
            if all {
                let mut keep = true;
                for f in &q.filters {
                    match holds(f.op, env[f.left.as_str()], &val(&f.right)) {
                        Some(true) => {}
                        Some(false) => keep = false,
                        None => {
                            errors += 1;
                            keep = false;
                        }
                    }
                }
                if keep {
                    rows.push(q.projected.iter().map(|v| env[v.as_str()].clone()).collect::<Vec<_>>());
                }
            }
            // Odometer step.
            let mut k = 0;
            loop {
                if k == idx.len() {
                    rows.sort_by_key(|r: &Vec<Term>| r.iter().map(Term::to_string).collect::<Vec<_>>());
                    if q.distinct {
                        rows.dedup();
                    }
                    return (rows, errors);
                }
                idx[k] += 1;
                if idx[k] < terms.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Independent total for a plan and usage: `None` when the quote should
    /// fail. Allowance first, additive compounds, then the cap.
    pub fn expected_total(plan: &PricingPlan, usage: &UsageRequest) -> Option<Decimal> {
        let applies = |c: &dmcc::model::Compound| {
            c.instance.as_ref().is_none_or(|i| usage.instance.as_ref() == Some(&i.node))
                && c.region.as_ref().is_none_or(|r| usage.region.as_deref() == Some(r.code.as_str()))
        };
        let unit_of = |c: &dmcc::model::Compound| c.unit().map(str::to_owned);
        let mut caps: Vec<Decimal> = plan.max_price.into_iter().collect();
        for c in plan.compounds.iter().filter(|c| applies(c)) {
            let used = unit_of(c).is_some_and(|u| usage.quantities.iter().any(|q| q.unit == u));
            if used {
                if let Some(m) = c.price_spec.as_ref().and_then(|p| p.max_charge) {
                    caps.push(m);
                }
            }
        }
        let cap = caps.into_iter().min();
        let mut total = Decimal::ZERO;
        for q in &usage.quantities {
            let same: Vec<_> = plan.compounds.iter().filter(|c| applies(c) && unit_of(c).as_deref() == Some(q.unit.as_str())).collect();
            let included: Decimal = same.iter().filter_map(|c| c.allowance.as_ref()).map(|a| a.amount).sum();
            let rest = q.amount - included;
            if rest <= Decimal::ZERO {
                continue;
            }
            if cap == Some(Decimal::ZERO) {
                return None;
            }
            let prices: Vec<Decimal> = same.iter().filter_map(|c| c.price_spec.as_ref()).map(|p| p.unit_price).collect();
            if prices.is_empty() {
                return None;
            }
            total += prices.iter().map(|p| rest * p).sum::<Decimal>();
        }
        Some(match cap {
            Some(c) if total > c => c,
            _ => total,
        })
    }
}

/// Query templates over the vocabulary of `gen::random_graph`.
pub const TEMPLATES: &[&str] = &[
    "SELECT ?s WHERE { ?s a ex:C0 }",
    "SELECT ?s ?o WHERE { ?s ex:p0 ?o }",
    "SELECT ?s ?o WHERE { ?s ex:p0 ?m . ?m ex:p1 ?o }",
    "SELECT ?s ?v WHERE { ?s ex:p1 ?v FILTER(?v > 3) }",
    "SELECT DISTINCT ?s WHERE { ?s ?p ?o FILTER(?o = 5) }",
    "SELECT ?s ?o WHERE { ?s ex:p2 ?o FILTER(CONTAINS(?o, \"a\")) }",
    "SELECT ?s WHERE { ?s ex:p0 ?s }",
    "SELECT ?a ?b WHERE { ?a ex:p3 ?b . ?b a ex:C1 FILTER(?a != ?b) }",
    "SELECT DISTINCT ?p WHERE { ex:n0 ?p ?o }",
    "SELECT ?x ?y WHERE { ?x ex:p0 ?y ; ex:p1 ?y FILTER(?y <= 4.5) }",
];

pub fn template(i: usize) -> dmcc::query::SelectQuery {
    dmcc::query::parse_query(&format!("PREFIX ex: <{}>\n{}", gen::EX, TEMPLATES[i])).unwrap()
}

pub fn sorted_rows(rs: &dmcc::query::ResultSet) -> Vec<Vec<Term>> {
    let mut rows = rs.rows.clone();
    rows.sort_by_key(|r| r.iter().map(Term::to_string).collect::<Vec<_>>());
    rows
}
