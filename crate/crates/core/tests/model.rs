use dmcc::model::*;
use dmcc::rdf::{isomorphic, parse_turtle, Graph, Term, Triple};
use dmcc::vocab::{self, dmcc as d};
use rust_decimal::Decimal;
use std::str::FromStr;

fn fixture(name: &str) -> Graph {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_turtle(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn blank(label: &str) -> Term {
    Term::blank(label).unwrap()
}

fn dec(s: &str) -> Decimal {
    Decimal::from_str(s).unwrap()
}

fn rf(provider: &ServiceProvider) -> &MLService {
    provider.services.iter().find(|s| s.node == blank("MLServiceDicitsRF")).unwrap()
}

#[test]
fn provider_literals_from_listing() {
    let g = fixture("full.ttl");
    assert_eq!(list_providers(&g), vec![blank("MLProvider")]);
    let p = extract_provider(&g, &blank("MLProvider")).unwrap();
    assert_eq!(p.legal_name, "U. of Granada");
    assert_eq!(p.naics.as_deref(), Some("541519"));
    assert_eq!(p.name, "DITICS ML Provider");
    assert_eq!(p.url.as_deref(), Some("http://www.dicits.ugr.es"));
    assert_eq!(p.services.len(), 2);
    assert_eq!(p.location.as_ref().unwrap().locality.as_deref(), Some("Granada"));
    assert_eq!(p.contacts[0].languages, vec!["English".to_owned()]);
    assert_eq!(p.catalog_ref, Some(blank("MLServiceDicitsCatalog")));
}

#[test]
fn rf_service_has_all_five_aspects() {
    let g = fixture("full.ttl");
    let p = extract_provider(&g, &blank("MLProvider")).unwrap();
    let s = rf(&p);
    assert!(s.interaction.is_some() && s.sla.is_some() && s.authentication.is_some());
    assert_eq!(s.functions.len(), 1);
    assert_eq!(s.pricing.len(), 2);
    let ip = s.interaction.as_ref().unwrap();
    assert_eq!(ip.http_method.as_deref(), Some("POST"));
    assert_eq!(ip.url_template.as_deref(), Some("http://dicits.ugr.es/ml/rf/"));
    let auth = s.authentication.as_ref().unwrap();
    assert_eq!(auth.requires, Some(Requirement::All));
    assert_eq!(auth.mechanism, Some(Mechanism::Direct));
    assert_eq!(auth.credential, Some(Credential::ApiKey { grounding_field: "key".into() }));
    assert_eq!(auth.transmission, Some(Transmission::ViaUri));
}

#[test]
fn parameter_and_outputs() {
    let g = fixture("full.ttl");
    let f = extract_function(&g, &blank("RandomForest_Function")).unwrap();
    assert_eq!(f.name, "RandomForest");
    let ntrees = f.parameters.iter().find(|p| p.title == "ntrees").unwrap();
    assert_eq!(ntrees.default_value.as_deref(), Some("100"));
    assert!(!ntrees.mandatory);
    let kinds: Vec<OutputKind> = f.outputs.iter().map(|o| o.kind).collect();
    assert!(kinds.contains(&OutputKind::Model) && kinds.contains(&OutputKind::ModelEvaluation));

    let km = extract_function(&g, &blank("KMeans_Function")).unwrap();
    let out = &km.outputs[0];
    assert_eq!(out.node, blank("KMeans_Model"));
    assert_eq!(out.kind, OutputKind::Model);
    assert_eq!(out.format.as_deref(), Some("PMML"));
    assert_eq!(out.storage_bucket.as_deref(), Some("dicits://models/"));
}

#[test]
fn sla_intervals_and_compensations() {
    let g = fixture("full.ttl");
    let sla = extract_sla(&g, &blank("MLServiceSLA")).unwrap();
    let term = &sla.terms[0];
    assert_eq!(term.name, "MUP");
    assert_eq!(term.definitions.len(), 2);
    let a = term.definitions.iter().find(|i| i.node == blank("SLADefinition_A")).unwrap();
    assert_eq!((a.min, a.max, a.unit.as_str()), (dec("99.00"), dec("99.99"), "percent"));
    assert_eq!(term.definitions[0].max, dec("99.00"));
    assert_eq!(term.compensations[0].amount, dec("30"));
    assert_eq!(term.compensations[1].amount, dec("10"));
    assert!(term.compensations.iter().all(|c| c.kind == CompensationKind::ServiceCredits));
    assert!(!term.paired_by_order);
}

#[test]
fn free_plan_allowance_and_instance() {
    let g = fixture("full.ttl");
    let plan = extract_pricing(&g, &blank("MLServicePricing")).unwrap();
    assert_eq!(plan.currency, "USD");
    let c = &plan.compounds[0];
    assert_eq!(c.allowance, Some(Quantity::new(dec("250"), "HRS")));
    let spec = c.price_spec.as_ref().unwrap();
    assert_eq!(spec.max_charge, Some(dec("0.00")));
    assert_eq!(spec.max_charge.unwrap().to_string(), "0.00");
    assert_eq!(spec.unit, "HRS");
    let inst = c.instance.as_ref().unwrap();
    assert_eq!(inst.ram_gb, Some(dec("64")));
    assert_eq!(inst.cpu_model.as_deref(), Some("Intel i7"));
    assert_eq!(c.region.as_ref().unwrap().code, "ugr-granada");
}

#[test]
fn empty_and_minimal_cases() {
    let g = Graph::new();
    assert!(list_providers(&g).is_empty());
    let g = parse_turtle(&format!(
        "@prefix dmcc: <{}> . @prefix gr: <{}> .\n_:p a dmcc:MLServiceProvider ; gr:name \"X\" .",
        d::NS,
        vocab::gr::NS
    ))
    .unwrap();
    let p = extract_provider(&g, &blank("p")).unwrap();
    assert_eq!(p.name, "X");
    assert!(p.label.is_none() && p.naics.is_none() && p.url.is_none() && p.location.is_none());
    assert!(p.services.is_empty() && p.contacts.is_empty() && p.catalog_ref.is_none());
    assert!(matches!(extract_provider(&g, &blank("q")), Err(ModelError::WrongType { .. })));
}

#[test]
fn service_with_only_label_has_no_aspects() {
    let g = parse_turtle(&format!(
        "@prefix dmcc: <{}> . @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n_:s a dmcc:MLService ; rdfs:label \"only\" .",
        d::NS
    ))
    .unwrap();
    let s = extract_service(&g, &blank("s")).unwrap();
    assert_eq!(s.label.as_deref(), Some("only"));
    assert!(s.interaction.is_none() && s.sla.is_none() && s.authentication.is_none());
    assert!(s.functions.is_empty() && s.pricing.is_empty());
}

#[test]
fn dangling_authentication_names_the_link() {
    let mut g = fixture("full.ttl");
    let auth = blank("MLServiceAuth");
    for t in g.matching(Some(&auth), None, None).into_iter().cloned().collect::<Vec<_>>() {
        g.remove(&t);
    }
    match extract_service(&g, &blank("MLServiceDicitsRF")) {
        Err(ModelError::DanglingReference { predicate, target, .. }) => {
            assert_eq!(predicate, d::HAS_AUTHENTICATION);
            assert_eq!(target, auth);
        }
        other => panic!("expected dangling reference, got {other:?}"),
    }
}

#[test]
fn malformed_mandatory_flag() {
    let g = parse_turtle(&format!(
        "@prefix ccdm: <{ns}> .\n_:f a ccdm:MLFunction ; ccdm:hasInputParameters _:p .\n_:p a ccdm:MLServiceInputParameter ; ccdm:mandatory \"maybe\" .",
        ns = vocab::ccdm::NS
    ))
    .unwrap();
    assert!(matches!(extract_function(&g, &blank("f")), Err(ModelError::MalformedLiteral { .. })));
}

#[test]
fn plan_without_compounds() {
    let g = parse_turtle(&format!("@prefix ccpricing: <{}> .\n_:p a ccpricing:PricingPlan .", vocab::ccpricing::NS)).unwrap();
    let plan = extract_pricing(&g, &blank("p")).unwrap();
    assert!(plan.compounds.is_empty());
}

#[test]
fn extract_lower_extract_is_a_fixed_point() {
    for name in ["full.ttl", "two-providers.ttl"] {
        let g = fixture(name);
        for node in list_providers(&g) {
            let p = extract_provider(&g, &node).unwrap();
            let lowered = lower(&p).unwrap();
            let again = extract_provider(&lowered, &node).unwrap();
            assert_eq!(again, p, "{name} {node}");
            // Lowering is a function of the typed object alone.
            assert!(isomorphic(&lower(&again).unwrap(), &lowered));
        }
    }
}

#[test]
fn minimal_provider_lowers_to_typed_links() {
    let p = ServiceProvider {
        node: blank("p"),
        label: None,
        description: None,
        name: "X".into(),
        legal_name: String::new(),
        naics: None,
        url: None,
        location: None,
        contacts: vec![],
        services: vec![MLService::new(blank("s"))],
        catalog_ref: None,
    };
    let g = lower(&p).unwrap();
    let ty = dmcc::rdf::rdf_type();
    let expected = [
        Triple::new(blank("p"), ty.clone(), vocab::term(d::ML_SERVICE_PROVIDER)).unwrap(),
        Triple::new(blank("p"), vocab::term(vocab::gr::NAME), dmcc::rdf::Literal::string("X").into()).unwrap(),
        Triple::new(blank("p"), vocab::term(d::HAS_ML_SERVICE), blank("s")).unwrap(),
        Triple::new(blank("s"), ty, vocab::term(d::ML_SERVICE)).unwrap(),
    ];
    assert_eq!(g.len(), expected.len());
    for t in &expected {
        assert!(g.contains(t), "missing {t}");
    }
}

#[test]
fn inverted_interval_is_an_invariant_violation() {
    let g = fixture("full.ttl");
    let mut p = extract_provider(&g, &blank("MLProvider")).unwrap();
    let svc = p.services.iter_mut().find(|s| s.sla.is_some()).unwrap();
    let def = &mut svc.sla.as_mut().unwrap().terms[0].definitions[0];
    def.min = dec("99.99");
    def.max = dec("99.00");
    match lower(&p) {
        Err(ModelError::InvariantViolation { field, .. }) => assert!(field.contains("definitions[0]"), "{field}"),
        other => panic!("expected invariant violation, got {other:?}"),
    }
}

#[test]
fn json_shape_uses_semantic_names() {
    let g = fixture("full.ttl");
    let p = extract_provider(&g, &blank("MLProvider")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&to_json_envelope("provider", &p)).unwrap();
    assert_eq!(json["schemaVersion"], 1);
    assert_eq!(json["provider"]["legalName"], "U. of Granada");
    assert_eq!(json["provider"]["node"], "_:MLProvider");
    let svc = &json["provider"]["services"][0];
    assert!(svc["pricing"][0]["compounds"][0]["instance"]["ramGB"].is_string());
}
