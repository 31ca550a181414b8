mod common;

use common::{blank, fixture, fixture_path};
use dmcc::broker::{best_offer, compare, providers_offering, Broker, BrokerError};
use dmcc::pricing::{money, PricingError, UsageRequest};
use dmcc::query::{evaluate, parse_query};
use dmcc::rdf::{parse_turtle, Graph, Term};
use rust_decimal::Decimal;

fn hours(h: i64) -> UsageRequest {
    UsageRequest::hours(Decimal::from(h))
}

fn with_prologue(body: &str) -> Graph {
    let prologue = std::fs::read_to_string(fixture_path("listings/prologue.ttl")).unwrap();
    parse_turtle(&format!("{prologue}{body}")).unwrap()
}

/// A provider with one RandomForest service and one plan.
fn provider(tag: &str, name: &str, title: &str, rate: &str, unit: &str) -> String {
    format!(
        "_:{tag} a dmcc:MLServiceProvider ; gr:name \"{name}\" ; dmcc:hasMLService _:{tag}S .
         _:{tag}S a dmcc:MLService ; dmcc:hasFunction _:{tag}F ; dmcc:hasPricingPlan _:{tag}P .
         _:{tag}F a ccdm:MLFunction ; dc:title \"{title}\" .
         _:{tag}P a ccpricing:PricingPlan ; s:name \"{tag} plan\" ; gr:priceCurrency \"USD\" ;
           ccpricing:hasCompound [ a ccpricing:Compound ; ccpricing:hasPriceSpecification [
             a gr:PriceSpecification ; gr:hasCurrencyValue {rate} ; gr:priceCurrency \"USD\" ;
             gr:hasUnitOfMeasurement \"{unit}\" ] ] .\n"
    )
}

fn term(iri: &str) -> Term {
    Term::iri(iri).unwrap()
}

/// Lowest hourly charge per provider, read straight off the price
/// specification triples. Only valid for plans without allowances or caps.
fn hourly_oracle(g: &Graph, function: &str, h: Decimal) -> Vec<(String, Decimal)> {
    let dmcc = "http://dicits.ugr.es/linkeddata/dmservices/ns/dmcc#";
    let ccp = "http://dicits.ugr.es/linkeddata/dmservices/ns/ccpricing#";
    let gr = "http://purl.org/goodrelations/v1#";
    let lex = |t: &Term| t.as_literal().unwrap().lexical().to_owned();
    let mut out = Vec::new();
    for t in g.matching(None, Some(&term(&format!("{dmcc}hasMLService"))), None) {
        let (p, svc) = (t.subject(), t.object());
        let offers = g
            .objects(svc, &term(&format!("{dmcc}hasFunction")))
            .any(|f| g.objects(f, &term("http://purl.org/dc/terms/title")).any(|x| lex(x) == function));
        if !offers {
            continue;
        }
        let mut best: Option<Decimal> = None;
        for plan in g.objects(svc, &term(&format!("{dmcc}hasPricingPlan"))) {
            for c in g.objects(plan, &term(&format!("{ccp}hasCompound"))) {
                for spec in g.objects(c, &term(&format!("{ccp}hasPriceSpecification"))) {
                    assert!(g.object(spec, &term(&format!("{gr}includesObject"))).is_none());
                    let unit = g.object(spec, &term(&format!("{gr}hasUnitOfMeasurement"))).map(lex);
                    if unit.as_deref() != Some("HRS") {
                        continue;
                    }
                    let rate: Decimal = lex(g.object(spec, &term(&format!("{gr}hasCurrencyValue"))).unwrap()).parse().unwrap();
                    let cost = rate * h;
                    best = Some(best.map_or(cost, |b| b.min(cost)));
                }
            }
        }
        let name = lex(g.object(p, &term(&format!("{gr}name"))).unwrap());
        out.push((name, best.unwrap()));
    }
    out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    out
}

#[test]
fn both_providers_offer_random_forest() {
    let g = fixture("two-providers.ttl");
    let offers = providers_offering(&g, "RandomForest");
    let names: Vec<&str> = offers.iter().map(|o| o.provider.name.as_str()).collect();
    assert_eq!(names, ["Alpha ML", "Beta Cloud"]);
    assert!(offers.iter().all(|o| o.quote.is_none()));
    assert!(providers_offering(&g, "NoSuchAlgo").is_empty());
    assert_eq!(best_offer(&g, "NoSuchAlgo", &hours(1)).unwrap_err(), BrokerError::NoOffers("NoSuchAlgo".into()));
}

#[test]
fn best_offer_at_one_hundred_hours() {
    let g = fixture("two-providers.ttl");
    let want = hourly_oracle(&g, "RandomForest", Decimal::from(100));
    assert_eq!(want[0].0, "Alpha ML");
    let best = best_offer(&g, "RandomForest", &hours(100)).unwrap();
    assert_eq!(best.provider.name, want[0].0);
    assert_eq!(money(best.quote.as_ref().unwrap().total), money(want[0].1));
    assert_eq!(money(want[0].1), "10.00");

    let all = compare(&g, "RandomForest", &hours(100));
    let got: Vec<(String, String)> = all.iter().map(|o| (o.provider.name.clone(), money(o.quote.as_ref().unwrap().total))).collect();
    let want: Vec<(String, String)> = want.into_iter().map(|(n, t)| (n, money(t))).collect();
    assert_eq!(got, want);
    assert_eq!(all[1].instance, Some(blank("InstanceT2Medium")));
    assert_eq!(all[1].region.as_deref(), Some("us-east-1"));
    assert_eq!(all[0].function_name, "RandomForest");
}

#[test]
fn kmeans_in_the_assembled_document() {
    let g = fixture("full.ttl");
    let offers = providers_offering(&g, "KMeans");
    assert_eq!(offers.len(), 1);
    assert_eq!(offers[0].service.node, blank("MLServiceDicitsKMeans"));
}

#[test]
fn free_allowance_wins() {
    let g = fixture("full.ttl");
    let best = best_offer(&g, "RandomForest", &hours(100)).unwrap();
    let q = best.quote.unwrap();
    assert_eq!(q.total, Decimal::ZERO);
    assert_eq!(q.plan_name, "Free");
    assert_eq!(best.instance, Some(blank("InstanceFree")));
    assert_eq!(best.region.as_deref(), Some("ugr-granada"));

    let best = best_offer(&g, "RandomForest", &hours(300)).unwrap();
    assert_eq!(best.quote.unwrap().plan_name, "Pay per use");
}

#[test]
fn ties_break_by_provider_name() {
    let g = with_prologue(&(provider("Z", "Zeta", "RandomForest", "0.10", "HRS") + &provider("A", "Acme", "RandomForest", "0.10", "HRS")));
    let all = compare(&g, "RandomForest", &hours(10));
    let names: Vec<&str> = all.iter().map(|o| o.provider.name.as_str()).collect();
    assert_eq!(names, ["Acme", "Zeta"]);
}

#[test]
fn matching_ignores_case_and_space() {
    let g = with_prologue(&provider("A", "Acme", " randomforest ", "0.10", "HRS"));
    assert_eq!(providers_offering(&g, "RandomForest").len(), 1);
    assert_eq!(providers_offering(&g, "RANDOMFOREST").len(), 1);
    assert_eq!(providers_offering(&g, "Random Forest").len(), 0);
}

#[test]
fn aliases_widen_matching() {
    let g = with_prologue(&(provider("A", "Acme", "RF", "0.10", "HRS") + &provider("B", "Bolt", "RandomForest", "0.20", "HRS")));
    assert_eq!(providers_offering(&g, "RandomForest").len(), 1);
    let broker = Broker::new().alias("RF", "RandomForest");
    let offers = broker.compare(&g, "RandomForest", &hours(1));
    let names: Vec<&str> = offers.iter().map(|o| o.provider.name.as_str()).collect();
    assert_eq!(names, ["Acme", "Bolt"]);
}

#[test]
fn unquotable_offers_come_last() {
    let g = with_prologue(&(provider("A", "Acme", "RandomForest", "0.02", "E34") + &provider("B", "Bolt", "RandomForest", "0.50", "HRS")));
    let all = compare(&g, "RandomForest", &hours(10));
    assert_eq!(all[0].provider.name, "Bolt");
    assert_eq!(all[1].provider.name, "Acme");
    match &all[1].error {
        Some(PricingError::NoneQuotable(fails)) => {
            assert!(matches!(fails[..], [(_, PricingError::NoApplicableCompound { .. })]))
        }
        other => panic!("{other:?}"),
    }
    let best = best_offer(&g, "RandomForest", &hours(10)).unwrap();
    assert_eq!(best.service.node, all[0].service.node);

    let only = with_prologue(&provider("A", "Acme", "RandomForest", "0.02", "E34"));
    match best_offer(&only, "RandomForest", &hours(10)) {
        Err(BrokerError::NoneQuotable { failures, .. }) => assert_eq!(failures.len(), 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn broker_agrees_with_the_query_pack() {
    let g = fixture("two-providers.ttl");
    let text = std::fs::read_to_string(format!("{}/queries/best-price.rq", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let rs = evaluate(&g, &parse_query(&text).unwrap());
    let name = rs.column("name").unwrap()[0].as_literal().unwrap().lexical().to_owned();
    let price = rs.column("price").unwrap()[0].as_literal().unwrap().as_decimal().unwrap();
    let best = best_offer(&g, "RandomForest", &hours(100)).unwrap();
    assert_eq!(best.provider.name, name);
    assert_eq!(best.quote.unwrap().total, price * Decimal::from(100));
}

#[test]
fn offer_json_is_stable() {
    let g = fixture("two-providers.ttl");
    let a = serde_json::to_string(&compare(&g, "RandomForest", &hours(100)).iter().map(|o| o.to_json()).collect::<Vec<_>>()).unwrap();
    let b = serde_json::to_string(&compare(&g, "RandomForest", &hours(100)).iter().map(|o| o.to_json()).collect::<Vec<_>>()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"functionName\":\"RandomForest\""));
}
