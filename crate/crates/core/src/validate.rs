//! Conformance checks over a graph.
//!
//! Problems are reported as diagnostics, never as failures. Each rule has a
//! stable code; see [`RULES`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rust_decimal::Decimal;
use serde::Serialize;

use crate::model::{
    self, check_compensation, check_interval, curie, extract_authentication, extract_interaction, sla_agreement, Credential,
    ModelError, HTTP_METHODS,
};
use crate::rdf::{rdf_type, Graph, Term};
use crate::vocab::{self, ccdm, ccpricing, ccsla, dmcc, gr, registry, schema};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Rule code, default severity, meaning.
pub const RULES: &[(&str, Severity, &str)] = &[
    ("ASPECT_MISSING_AUTH", Severity::Error, "service has no dmcc:hasAuthentication"),
    ("ASPECT_MISSING_CATALOG", Severity::Warning, "provider has no described dmcc:hasOfferCatalog"),
    ("ASPECT_MISSING_FUNCTION", Severity::Error, "service has no dmcc:hasFunction"),
    ("ASPECT_MISSING_INTERACTION", Severity::Error, "service has no dmcc:hasInteractionPoint"),
    ("ASPECT_MISSING_PRICING", Severity::Error, "service has no dmcc:hasPricingPlan"),
    ("ASPECT_MISSING_SLA", Severity::Error, "service has no dmcc:hasServiceCommitment"),
    ("AUTH_GROUNDING_MISSING", Severity::Error, "API key credential without waa:isGroundedIn"),
    ("CURRENCY_UNKNOWN", Severity::Warning, "currency is not an ISO 4217 code"),
    ("HTTP_METHOD_INVALID", Severity::Error, "entry point uses an unknown HTTP method"),
    ("LITERAL_MALFORMED", Severity::Error, "literal does not parse as the expected value"),
    ("PARAM_DUP", Severity::Error, "duplicate parameter titles in one function"),
    ("PRICE_BOUNDS", Severity::Error, "plan minPrice > maxPrice"),
    ("PRICE_NEGATIVE", Severity::Error, "unit price or allowance below zero"),
    ("REF_DANGLING", Severity::Error, "link target has no triples"),
    ("SLA_COMP_INVALID", Severity::Error, "negative compensation or more than 100% of the bill"),
    ("SLA_COMP_MISMATCH", Severity::Error, "term has unequal numbers of definitions and compensations"),
    ("SLA_COMP_UNLINKED", Severity::Warning, "compensations paired with definitions by node order"),
    ("SLA_INTERVAL_INVALID", Severity::Error, "min > max, percent outside [0,100], or a bound is missing"),
    ("SLA_RANGE_OVERLAP", Severity::Warning, "two definitions of one term overlap"),
    ("STRUCTURE_INVALID", Severity::Error, "node does not have the shape its link requires"),
    ("TYPO_ALIAS", Severity::Warning, "misspelt ccsla:cointainsTerm used"),
    ("UNIT_UNKNOWN", Severity::Warning, "unit code not in the unit table"),
    ("UNKNOWN_TERM", Severity::Warning, "predicate or class not in the vocabulary (strict mode)"),
];

pub fn severity_of(code: &str) -> Option<Severity> {
    RULES.iter().find(|r| r.0 == code).map(|r| r.1)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub node: Term,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] {}: {}", self.severity, self.code, self.node, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub errors: usize,
    pub warnings: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub diagnostics: Vec<Diagnostic>,
    pub counts: Counts,
}

impl Report {
    fn from_set(set: BTreeSet<(String, &'static str, String, Term)>) -> Self {
        let mut counts = Counts::default();
        let diagnostics = set
            .into_iter()
            .map(|(_, code, message, node)| {
                let severity = severity_of(code).expect("code in rule table");
                match severity {
                    Severity::Error => counts.errors += 1,
                    Severity::Warning => counts.warnings += 1,
                }
                Diagnostic { severity, code, node, message }
            })
            .collect();
        Report { diagnostics, counts }
    }

    pub fn is_conformant(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.counts.errors > 0
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Error)
    }

    pub fn codes(&self) -> BTreeSet<&'static str> {
        self.diagnostics.iter().map(|d| d.code).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per diagnostic followed by a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for d in &self.diagnostics {
            out.push_str(&d.to_string());
            out.push('\n');
        }
        out.push_str(&format!("{} error(s), {} warning(s)\n", self.counts.errors, self.counts.warnings));
        out
    }
}

struct Collector {
    set: BTreeSet<(String, &'static str, String, Term)>,
}

impl Collector {
    fn push(&mut self, code: &'static str, node: &Term, message: impl Into<String>) {
        debug_assert!(severity_of(code).is_some(), "{code}");
        self.set.insert((node.to_string(), code, message.into(), node.clone()));
    }

    fn model_error(&mut self, fallback: &Term, e: &ModelError) {
        let node = e.node().unwrap_or(fallback);
        let code = match e {
            ModelError::DanglingReference { .. } => "REF_DANGLING",
            ModelError::MalformedLiteral { .. } => "LITERAL_MALFORMED",
            ModelError::MalformedInterval { .. } => "SLA_INTERVAL_INVALID",
            // Reported by the raw unit scan.
            ModelError::UnknownUnit { .. } => return,
            ModelError::WrongType { .. } | ModelError::Malformed { .. } | ModelError::InvariantViolation { .. } => {
                "STRUCTURE_INVALID"
            }
        };
        self.push(code, node, e.to_string());
    }
}

const ASPECTS: &[(&str, &str)] = &[
    (dmcc::HAS_AUTHENTICATION, "ASPECT_MISSING_AUTH"),
    (dmcc::HAS_FUNCTION, "ASPECT_MISSING_FUNCTION"),
    (dmcc::HAS_INTERACTION_POINT, "ASPECT_MISSING_INTERACTION"),
    (dmcc::HAS_PRICING_PLAN, "ASPECT_MISSING_PRICING"),
    (dmcc::HAS_SERVICE_COMMITMENT, "ASPECT_MISSING_SLA"),
];

pub fn validate(g: &Graph) -> Report {
    let mut c = Collector { set: BTreeSet::new() };
    check(g, &mut c);
    Report::from_set(c.set)
}

/// [`validate`] plus an UNKNOWN_TERM warning for every predicate or class
/// outside the vocabulary.
pub fn validate_strict(g: &Graph) -> Report {
    let mut c = Collector { set: BTreeSet::new() };
    check(g, &mut c);
    let reg = registry();
    let ty = rdf_type();
    for t in g.iter() {
        let mut candidates = vec![t.predicate()];
        if *t.predicate() == ty {
            candidates.push(t.object());
        }
        for term in candidates {
            if let Some(iri) = term.as_iri() {
                if reg.lookup(iri.as_str()).is_none() {
                    c.push("UNKNOWN_TERM", t.subject(), format!("{} is not in the vocabulary", curie(iri.as_str())));
                }
            }
        }
    }
    Report::from_set(c.set)
}

fn link(iri: &'static str) -> Term {
    vocab::term(iri)
}

fn check(g: &Graph, c: &mut Collector) {
    scan_raw(g, c);

    for provider in model::list_providers(g) {
        let catalog: Vec<&Term> = g.objects(&provider, &link(dmcc::HAS_OFFER_CATALOG)).collect();
        if !catalog.iter().any(|n| g.describes(n)) {
            let msg = match catalog.first() {
                None => "provider has no dmcc:hasOfferCatalog".to_owned(),
                Some(n) => format!("catalogue {n} is not described"),
            };
            c.push("ASPECT_MISSING_CATALOG", &provider, msg);
        }
        for svc in g.objects(&provider, &link(dmcc::HAS_ML_SERVICE)) {
            if !g.describes(svc) {
                c.push("REF_DANGLING", &provider, format!("dmcc:hasMLService points at {svc}, which has no triples"));
            }
        }
    }

    for svc in model::list_services(g) {
        for &(pred, code) in ASPECTS {
            let targets: Vec<Term> = g.objects(&svc, &link(pred)).cloned().collect();
            let described: Vec<&Term> = targets.iter().filter(|t| g.describes(t)).collect();
            for t in targets.iter().filter(|t| !g.describes(t)) {
                c.push("REF_DANGLING", &svc, format!("{} points at {t}, which has no triples", curie(pred)));
            }
            if described.is_empty() {
                c.push(code, &svc, format!("no described {} target", curie(pred)));
            }
            for t in described {
                check_aspect(g, c, pred, t);
            }
        }
    }

    // Aspect nodes no service links to are still checked on their own.
    for &(class, pred) in TYPED_ASPECTS {
        for node in g.subjects(&rdf_type(), &link(class)) {
            check_aspect(g, c, pred, node);
        }
    }
}

const TYPED_ASPECTS: &[(&str, &str)] = &[
    (ccsla::SLA, dmcc::HAS_SERVICE_COMMITMENT),
    (ccpricing::PRICING_PLAN, dmcc::HAS_PRICING_PLAN),
    (ccdm::ML_FUNCTION, dmcc::HAS_FUNCTION),
    (dmcc::INTERACTION, dmcc::HAS_INTERACTION_POINT),
    (dmcc::SERVICE_AUTHENTICATION, dmcc::HAS_AUTHENTICATION),
];

fn check_aspect(g: &Graph, c: &mut Collector, pred: &str, node: &Term) {
    if node.is_literal() {
        c.push("STRUCTURE_INVALID", node, format!("{} expects a node", curie(pred)));
        return;
    }
    match pred {
        dmcc::HAS_INTERACTION_POINT => {
            let ip = extract_interaction(g, node);
            if let Some(m) = &ip.http_method {
                if !HTTP_METHODS.contains(&m.as_str()) {
                    c.push("HTTP_METHOD_INVALID", node, format!("unknown HTTP method {m:?}"));
                }
            }
        }
        dmcc::HAS_AUTHENTICATION => match extract_authentication(g, node) {
            Ok(auth) => {
                if let Some(Credential::ApiKey { grounding_field }) = &auth.credential {
                    if grounding_field.trim().is_empty() {
                        c.push("AUTH_GROUNDING_MISSING", node, "API key credential names no field");
                    }
                }
            }
            Err(e) => c.model_error(node, &e),
        },
        dmcc::HAS_SERVICE_COMMITMENT => match sla_agreement(g, node) {
            Ok(sla) => check_sla(c, &sla),
            Err(e) => c.model_error(node, &e),
        },
        dmcc::HAS_FUNCTION => match model::extract_function(g, node) {
            Ok(f) => {
                let mut seen = BTreeMap::new();
                for p in &f.parameters {
                    *seen.entry(p.title.as_str()).or_insert(0) += 1;
                }
                for (title, n) in seen.into_iter().filter(|(_, n)| *n > 1) {
                    c.push("PARAM_DUP", node, format!("parameter title {title:?} appears {n} times"));
                }
            }
            Err(e) => c.model_error(node, &e),
        },
        dmcc::HAS_PRICING_PLAN => match model::extract_pricing(g, node) {
            Ok(plan) => check_plan(c, &plan),
            Err(e) => c.model_error(node, &e),
        },
        _ => {}
    }
}

fn check_sla(c: &mut Collector, sla: &model::SlaAgreement) {
    for term in &sla.terms {
        if term.definitions.len() != term.compensations.len() {
            c.push(
                "SLA_COMP_MISMATCH",
                &term.node,
                format!("{} definitions but {} compensations", term.definitions.len(), term.compensations.len()),
            );
        }
        if term.paired_by_order && !term.compensations.is_empty() {
            c.push("SLA_COMP_UNLINKED", &term.node, "definitions carry no ccsla:hasCompensation; paired by node order");
        }
        for d in &term.definitions {
            if let Err(ModelError::InvariantViolation { reason, .. }) = check_interval("", d) {
                c.push("SLA_INTERVAL_INVALID", &d.node, reason);
            }
        }
        for comp in &term.compensations {
            if let Err(ModelError::InvariantViolation { reason, .. }) = check_compensation("", comp) {
                c.push("SLA_COMP_INVALID", &comp.node, reason);
            }
        }
        for (i, a) in term.definitions.iter().enumerate() {
            for b in &term.definitions[i + 1..] {
                // Shared endpoints are fine; only a common open stretch counts.
                if a.min.max(b.min) < a.max.min(b.max) {
                    c.push(
                        "SLA_RANGE_OVERLAP",
                        &term.node,
                        format!("[{}, {}) overlaps [{}, {}) in {}", a.min, a.max, b.min, b.max, term.name),
                    );
                }
            }
        }
    }
}

fn check_plan(c: &mut Collector, plan: &model::PricingPlan) {
    if let (Some(lo), Some(hi)) = (plan.min_price, plan.max_price) {
        if lo > hi {
            c.push("PRICE_BOUNDS", &plan.node, format!("minPrice {lo} > maxPrice {hi}"));
        }
    }
    for comp in &plan.compounds {
        if let Some(ps) = &comp.price_spec {
            if ps.unit_price < Decimal::ZERO {
                c.push("PRICE_NEGATIVE", &ps.node, format!("unit price {} is negative", ps.unit_price));
            }
        }
        if let Some(a) = &comp.allowance {
            if a.amount < Decimal::ZERO {
                c.push("PRICE_NEGATIVE", &comp.node, format!("allowance {} {} is negative", a.amount, a.unit));
            }
        }
    }
}

/// Checks that need no model: spelling aliases, unit codes, currencies.
fn scan_raw(g: &Graph, c: &mut Collector) {
    let reg = registry();
    let unit_preds = [link(gr::HAS_UNIT_OF_MEASUREMENT), link(schema::UNIT_CODE)];
    let currency = link(gr::PRICE_CURRENCY);
    for t in g.iter() {
        if let Some(iri) = t.predicate().as_iri() {
            if reg.is_alias(iri.as_str()) {
                c.push("TYPO_ALIAS", t.subject(), format!("{} is spelt {}", curie(ccsla::CONTAINS_TERM), curie(iri.as_str())));
            }
        }
        if unit_preds.contains(t.predicate()) {
            if let Some(code) = literal_text(t.object()) {
                if vocab::unit(code.trim()).is_none() {
                    c.push("UNIT_UNKNOWN", t.subject(), format!("unit {code:?} is not in the unit table"));
                }
            }
        }
        if *t.predicate() == currency {
            if let Some(code) = literal_text(t.object()) {
                if !vocab::is_iso_currency(code.trim()) {
                    c.push("CURRENCY_UNKNOWN", t.subject(), format!("currency {code:?} is not ISO 4217"));
                }
            }
        }
    }
}

fn literal_text(t: &Term) -> Option<&str> {
    t.as_literal().map(|l| l.lexical())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_table_is_sorted_and_unique() {
        let codes: Vec<&str> = RULES.iter().map(|r| r.0).collect();
        let mut sorted = codes.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(codes, sorted);
    }

    #[test]
    fn empty_graph_is_conformant() {
        let r = validate(&Graph::new());
        assert!(r.is_conformant());
        assert_eq!(r.counts, Counts::default());
    }
}
