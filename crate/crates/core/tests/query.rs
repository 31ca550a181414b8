mod common;

use common::gen::random_graph;
use common::oracle::brute_force;
use common::{blank, fixture, sorted_rows, template, TEMPLATES};
use dmcc::query::{evaluate, parse_query, QueryError};
use dmcc::rdf::{Graph, Term};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run(g: &Graph, q: &str) -> dmcc::query::ResultSet {
    evaluate(g, &parse_query(q).unwrap())
}

fn pack(name: &str) -> String {
    std::fs::read_to_string(format!("{}/queries/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn services_of_the_assembled_document() {
    let g = fixture("full.ttl");
    let rs = run(&g, "SELECT ?s WHERE { ?s a dmcc:MLService }");
    assert_eq!(rs.columns, ["s"]);
    let got: Vec<_> = rs.column("s").unwrap().into_iter().cloned().collect();
    assert_eq!(got, [blank("MLServiceDicitsKMeans"), blank("MLServiceDicitsRF")]);
}

#[test]
fn empty_graph_gives_no_rows() {
    let rs = run(&Graph::new(), "SELECT * WHERE { ?s ?p ?o }");
    assert!(rs.is_empty());
    assert_eq!(rs.columns, ["s", "p", "o"]);
    assert!(rs.to_table().contains("(0 rows)"));
}

#[test]
fn providers_by_algorithm_on_two_providers() {
    let g = fixture("two-providers.ttl");
    let rs = run(&g, &pack("providers-by-algorithm.rq"));
    let names: Vec<String> =
        rs.column("name").unwrap().iter().map(|t| t.as_literal().unwrap().lexical().to_owned()).collect();
    assert_eq!(names.len(), 2);
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn best_price_picks_the_lowest_rate() {
    let g = fixture("two-providers.ttl");
    let rs = run(&g, &pack("best-price.rq"));
    assert_eq!(rs.len(), 1);
    let price = rs.column("price").unwrap()[0].as_literal().unwrap().as_decimal().unwrap();
    let all = run(&g, &pack("best-price.rq").replace("LIMIT 1", ""));
    let min = all.column("price").unwrap().iter().map(|t| t.as_literal().unwrap().as_decimal().unwrap()).min().unwrap();
    assert_eq!(price, min);
    assert!(all.len() >= 2);
}

#[test]
fn order_and_limit() {
    let g = fixture("full.ttl");
    let q = "SELECT ?t WHERE { ?x dc:title ?t } ORDER BY DESC(?t)";
    let all = run(&g, q);
    let titles: Vec<String> =
        all.column("t").unwrap().iter().map(|t| t.as_literal().unwrap().lexical().to_owned()).collect();
    let mut want = titles.clone();
    want.sort_by(|a, b| b.cmp(a));
    assert_eq!(titles, want);
    for n in 0..=all.len() + 1 {
        let limited = run(&g, &format!("{q} LIMIT {n}"));
        assert_eq!(limited.rows, all.rows[..n.min(all.len())]);
    }
}

#[test]
fn numeric_filters_compare_by_value() {
    let g = fixture("full.ttl");
    let rs = run(&g, "SELECT ?v WHERE { ?q s:minValue ?v FILTER(?v = 99) }");
    assert_eq!(rs.len(), 1);
    assert_eq!(rs.rows[0][0].as_literal().unwrap().lexical(), "99.00");
    // Strings never compare as numbers.
    let rs = run(&g, "SELECT ?x WHERE { ?x gr:amountOfThisGood ?a FILTER(?a > 10) }");
    assert!(rs.is_empty());
    assert_eq!(rs.type_errors, 2);
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse_query("SELECT ?x WHERE { ?x nope:p ?y }").unwrap_err();
    assert!(matches!(e, QueryError::UnknownPrefix { ref prefix, .. } if prefix == "nope"));
    assert_eq!(e.position(), Some((1, 22)));
    let e = parse_query("SELECT ?x WHERE {\n ?x ?p ?y } GROUP BY ?x").unwrap_err();
    assert!(matches!(e, QueryError::Unsupported { ref keyword, line: 2, .. } if keyword == "GROUP"));
    let e = parse_query("SELECT ?z WHERE { ?x ?p ?y }").unwrap_err();
    assert_eq!(e, QueryError::UnboundVariable("z".into()));
    let e = parse_query("SELECT ?x WHERE { ?x ?p }").unwrap_err();
    assert!(matches!(e, QueryError::Syntax { .. }));
}

#[test]
fn blank_labels_are_constants() {
    let g = fixture("full.ttl");
    let rs = run(&g, "SELECT ?f WHERE { _:MLServiceDicitsRF dmcc:hasFunction ?f }");
    assert_eq!(rs.column("f").unwrap(), [&blank("RandomForest_Function")]);
}

#[test]
fn output_is_deterministic() {
    let g = fixture("full.ttl");
    let q = "SELECT ?s ?p WHERE { ?s ?p ?o }";
    assert_eq!(run(&g, q).to_json(), run(&g, q).to_json());
    assert_eq!(run(&g, q).to_table(), run(&g, q).to_table());
}

#[test]
fn templates_parse() {
    for (i, text) in TEMPLATES.iter().enumerate() {
        let q = template(i);
        assert!(q.pattern_vars().len() <= 3, "{text}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn evaluation_matches_enumeration(seed in any::<u64>(), t in 0..TEMPLATES.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 60);
        let q = template(t);
        let rs = evaluate(&g, &q);
        let (want, errors) = brute_force(&g, &q);
        prop_assert_eq!(sorted_rows(&rs), want);
        prop_assert_eq!(rs.type_errors, errors);
    }

    #[test]
    fn extra_pattern_never_adds_rows(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 60);
        let pre = format!("PREFIX ex: <{}>\n", common::gen::EX);
        let base = run(&g, &format!("{pre}SELECT ?s ?o WHERE {{ ?s ex:p0 ?o }}"));
        let joined = run(&g, &format!("{pre}SELECT ?s ?o WHERE {{ ?s ex:p0 ?o . ?s a ?c }}"));
        for row in &joined.rows {
            prop_assert!(base.rows.contains(row));
        }
        let distinct = run(&g, &format!("{pre}SELECT DISTINCT ?s ?o WHERE {{ ?s ex:p0 ?o . ?s a ?c }}"));
        prop_assert!(distinct.len() <= base.len());
        for row in &distinct.rows {
            prop_assert!(base.rows.contains(row));
        }
    }

    #[test]
    fn limit_is_a_prefix(seed in any::<u64>(), n in 0usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 60);
        let pre = format!("PREFIX ex: <{}>\n", common::gen::EX);
        let q = format!("{pre}SELECT ?s ?o WHERE {{ ?s ?p ?o }} ORDER BY ?o");
        let all = run(&g, &q);
        let some = run(&g, &format!("{q} LIMIT {n}"));
        prop_assert_eq!(&some.rows[..], &all.rows[..n.min(all.len())]);
    }
}

#[test]
fn type_of_constant_terms() {
    let q = parse_query("SELECT ?s WHERE { ?s s:value 64 }").unwrap();
    let dmcc::query::Slot::Term(Term::Literal(l)) = &q.patterns[0].object else { panic!() };
    assert!(l.is_numeric());
}
