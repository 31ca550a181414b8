use std::collections::{BTreeSet, HashMap};

use rust_decimal::Decimal;

use super::*;
use crate::rdf::{rdf_type, BlankNode, Graph, Iri, Literal, Term, Triple};
use crate::vocab::{self, ccdm, ccinstances, ccpricing, ccregions, ccsla, dc, dmcc, gr, mls, rdfs, schema, waa};

const FRESH_MARK: char = '\u{1}';

struct Builder {
    triples: Vec<Triple>,
    fresh: usize,
}

impl Builder {
    /// A wrapper node; real labels are assigned once every source label is known.
    fn fresh(&mut self) -> Term {
        self.fresh += 1;
        Term::Blank(BlankNode::unchecked(format!("{FRESH_MARK}{}", self.fresh - 1)))
    }

    fn add(&mut self, s: &Term, p: &'static str, o: Term) {
        self.triples.push(Triple::new(s.clone(), vocab::term(p), o).expect("lowering emits valid positions"));
    }

    fn a(&mut self, s: &Term, class: &'static str) {
        self.triples.push(Triple::new(s.clone(), rdf_type(), vocab::term(class)).expect("valid"));
    }

    fn text(&mut self, s: &Term, p: &'static str, value: Option<&String>) {
        if let Some(v) = value {
            self.add(s, p, Literal::string(v.clone()).into());
        }
    }

    fn decimal(&mut self, s: &Term, p: &'static str, value: Option<Decimal>) {
        if let Some(v) = value {
            self.add(s, p, Literal::decimal(v).into());
        }
    }

    /// IRI when the value is one, plain literal otherwise.
    fn iri_or_text(&mut self, s: &Term, p: &'static str, value: Option<&String>) {
        if let Some(v) = value {
            let obj = match Iri::new(v.clone()) {
                Ok(iri) => Term::Iri(iri),
                Err(_) => Literal::string(v.clone()).into(),
            };
            self.add(s, p, obj);
        }
    }

    fn finish(self) -> Graph {
        let used: BTreeSet<String> = self
            .triples
            .iter()
            .flat_map(|t| [t.subject(), t.object()])
            .filter_map(Term::as_blank)
            .map(|b| b.label().to_owned())
            .filter(|l| !l.starts_with(FRESH_MARK))
            .collect();
        let mut names = HashMap::new();
        let mut next = 0usize;
        for i in 0..self.fresh {
            let label = loop {
                let candidate = format!("v{next}");
                next += 1;
                if !used.contains(&candidate) {
                    break candidate;
                }
            };
            names.insert(format!("{FRESH_MARK}{i}"), label);
        }
        let rename = |t: Term| match t {
            Term::Blank(b) if b.label().starts_with(FRESH_MARK) => Term::Blank(BlankNode::unchecked(names[b.label()].clone())),
            other => other,
        };
        let mut g = Graph::with_prefixes(vocab::registry().prefixes().clone());
        for t in self.triples {
            let (s, p, o) = t.into_parts();
            g.insert(Triple::new(rename(s), p, rename(o)).expect("valid"));
        }
        g
    }
}

fn violation(field: impl Into<String>, reason: impl Into<String>) -> ModelError {
    ModelError::InvariantViolation { field: field.into(), reason: reason.into() }
}

fn check_node(field: &str, node: &Term) -> Result<(), ModelError> {
    if node.is_literal() {
        return Err(violation(field, "node must be an IRI or blank node"));
    }
    Ok(())
}

/// Writes a provider and everything reachable from it as triples.
///
/// Fails with [`ModelError::InvariantViolation`] naming the first field that
/// breaks a type invariant.
pub fn lower(desc: &ServiceProvider) -> Result<Graph, ModelError> {
    check_provider(desc)?;
    let mut b = Builder { triples: Vec::new(), fresh: 0 };
    let n = &desc.node;
    b.a(n, dmcc::ML_SERVICE_PROVIDER);
    b.text(n, rdfs::LABEL, desc.label.as_ref());
    b.text(n, dc::DESCRIPTION, desc.description.as_ref());
    b.text(n, gr::NAME, Some(&desc.name));
    if !desc.legal_name.is_empty() {
        b.text(n, gr::LEGAL_NAME, Some(&desc.legal_name));
    }
    b.text(n, gr::HAS_NAICS, desc.naics.as_ref());
    b.iri_or_text(n, schema::URL, desc.url.as_ref());
    if let Some(addr) = &desc.location {
        let a = b.fresh();
        b.add(n, schema::SERVICE_LOCATION, a.clone());
        b.a(&a, schema::POSTAL_ADDRESS);
        b.text(&a, schema::ADDRESS_COUNTRY, addr.country.as_ref());
        b.text(&a, schema::ADDRESS_LOCALITY, addr.locality.as_ref());
    }
    for cp in &desc.contacts {
        let c = b.fresh();
        b.add(n, schema::CONTACT_POINT, c.clone());
        b.a(&c, schema::CONTACT_POINT_CLASS);
        b.text(&c, schema::CONTACT_TYPE, cp.contact_type.as_ref());
        for lang in &cp.languages {
            let l = b.fresh();
            b.add(&c, schema::AVAILABLE_LANGUAGE, l.clone());
            b.a(&l, schema::LANGUAGE);
            b.text(&l, schema::NAME, Some(lang));
        }
        b.text(&c, schema::EMAIL, cp.email.as_ref());
    }
    for svc in &desc.services {
        b.add(n, dmcc::HAS_ML_SERVICE, svc.node.clone());
        lower_service(&mut b, svc);
    }
    if let Some(cat) = &desc.catalog_ref {
        b.add(n, dmcc::HAS_OFFER_CATALOG, cat.clone());
    }
    Ok(b.finish())
}

fn lower_service(b: &mut Builder, svc: &MLService) {
    let n = &svc.node;
    b.a(n, dmcc::ML_SERVICE);
    b.text(n, rdfs::LABEL, svc.label.as_ref());
    b.text(n, dc::DESCRIPTION, svc.description.as_ref());
    if let Some(ip) = &svc.interaction {
        b.add(n, dmcc::HAS_INTERACTION_POINT, ip.node.clone());
        lower_interaction(b, ip);
    }
    if let Some(sla) = &svc.sla {
        b.add(n, dmcc::HAS_SERVICE_COMMITMENT, sla.node.clone());
        lower_sla(b, sla);
    }
    for f in &svc.functions {
        b.add(n, dmcc::HAS_FUNCTION, f.node.clone());
        lower_function(b, f);
    }
    if let Some(auth) = &svc.authentication {
        b.add(n, dmcc::HAS_AUTHENTICATION, auth.node.clone());
        lower_auth(b, auth);
    }
    for plan in &svc.pricing {
        b.add(n, dmcc::HAS_PRICING_PLAN, plan.node.clone());
        lower_plan(b, plan);
    }
}

fn lower_interaction(b: &mut Builder, ip: &InteractionPoint) {
    let n = &ip.node;
    b.a(n, dmcc::INTERACTION);
    let has_entry = ip.http_method.is_some() || ip.url_template.is_some() || ip.content_type.is_some();
    if !has_entry && ip.parameters.is_empty() {
        return;
    }
    let action = b.fresh();
    b.add(n, dmcc::HAS_ENTRY_POINT, action.clone());
    b.a(&action, schema::ACTION);
    if has_entry {
        let entry = b.fresh();
        b.add(&action, schema::TARGET, entry.clone());
        b.a(&entry, schema::ENTRY_POINT);
        b.text(&entry, schema::HTTP_METHOD, ip.http_method.as_ref());
        b.text(&entry, schema::URL_TEMPLATE, ip.url_template.as_ref());
        b.text(&entry, schema::CONTENT_TYPE, ip.content_type.as_ref());
    }
    for p in &ip.parameters {
        let pn = b.fresh();
        b.add(&action, schema::OBJECT, pn.clone());
        b.a(&pn, schema::PROPERTY_VALUE_SPECIFICATION);
        b.text(&pn, schema::VALUE_NAME, Some(&p.name));
        b.text(&pn, schema::DESCRIPTION, p.description.as_ref());
    }
}

fn lower_auth(b: &mut Builder, auth: &Authentication) {
    let n = &auth.node;
    b.a(n, dmcc::SERVICE_AUTHENTICATION);
    b.text(n, rdfs::LABEL, auth.label.as_ref());
    b.text(n, dc::DESCRIPTION, auth.description.as_ref());
    if let Some(req) = auth.requires {
        let iri = match req {
            Requirement::All => waa::ALL,
            Requirement::None => waa::NONE,
            Requirement::Partial => waa::SOME,
        };
        b.add(n, waa::REQUIRES_AUTHENTICATION, vocab::term(iri));
    }
    if auth.mechanism.is_none() && auth.credential.is_none() && auth.transmission.is_none() {
        return;
    }
    let m = b.fresh();
    b.add(n, waa::HAS_AUTHENTICATION_MECHANISM, m.clone());
    match &auth.mechanism {
        Some(Mechanism::Direct) => b.a(&m, waa::DIRECT),
        Some(Mechanism::OAuth) => b.a(&m, waa::OAUTH),
        Some(Mechanism::Other(class)) => {
            if let Ok(iri) = Iri::new(class.clone()) {
                b.triples.push(Triple::new(m.clone(), rdf_type(), Term::Iri(iri)).expect("valid"));
            }
        }
        None => {}
    }
    if let Some(cred) = &auth.credential {
        let c = b.fresh();
        b.add(&m, waa::HAS_INPUT_CREDENTIALS, c.clone());
        match cred {
            Credential::ApiKey { grounding_field } => {
                b.a(&c, waa::API_KEY);
                b.text(&c, waa::IS_GROUNDED_IN, Some(grounding_field));
            }
            Credential::UsernamePassword => b.a(&c, waa::USERNAME_PASSWORD),
            Credential::Token => b.a(&c, waa::TOKEN),
            Credential::Other(class) => {
                if let Ok(iri) = Iri::new(class.clone()) {
                    b.triples.push(Triple::new(c.clone(), rdf_type(), Term::Iri(iri)).expect("valid"));
                }
            }
        }
    }
    match &auth.transmission {
        Some(Transmission::ViaUri) => b.add(&m, waa::WAY_OF_SENDING_INFORMATION, vocab::term(waa::VIA_URI)),
        Some(Transmission::ViaHeader) => b.add(&m, waa::WAY_OF_SENDING_INFORMATION, vocab::term(waa::VIA_HEADER)),
        Some(Transmission::Other(other)) => b.iri_or_text(&m, waa::WAY_OF_SENDING_INFORMATION, Some(other)),
        None => {}
    }
}

fn lower_sla(b: &mut Builder, sla: &SlaAgreement) {
    let n = &sla.node;
    b.a(n, ccsla::SLA);
    for term in &sla.terms {
        let tn = &term.node;
        b.add(n, ccsla::CONTAINS_TERM, tn.clone());
        b.a(tn, ccsla::TERM);
        if !term.name.is_empty() {
            b.text(tn, schema::NAME, Some(&term.name));
        }
        for (def, comp) in term.definitions.iter().zip(&term.compensations) {
            b.add(tn, ccsla::HAS_DEFINITION, def.node.clone());
            b.a(&def.node, ccsla::DEFINITION);
            let wrapper = b.fresh();
            b.add(&def.node, ccsla::HAS_DEFINITION_VALUE, wrapper.clone());
            b.a(&wrapper, schema::STRUCTURED_VALUE);
            let qv = b.fresh();
            b.add(&wrapper, schema::VALUE, qv.clone());
            b.a(&qv, schema::QUANTITATIVE_VALUE);
            b.decimal(&qv, schema::MIN_VALUE, Some(def.min));
            b.decimal(&qv, schema::MAX_VALUE, Some(def.max));
            if !def.unit.is_empty() {
                b.text(&qv, schema::UNIT_TEXT, Some(&def.unit));
            }

            b.add(&def.node, ccsla::HAS_COMPENSATION, comp.node.clone());
            b.a(&comp.node, ccsla::COMPENSATION);
            let cv = b.fresh();
            b.add(&comp.node, ccsla::HAS_COMPENSATION_VALUE, cv.clone());
            b.a(&cv, schema::QUANTITATIVE_VALUE);
            b.decimal(&cv, schema::VALUE, Some(comp.amount));
            let unit = match comp.kind {
                CompensationKind::PercentOfBill => "percent",
                CompensationKind::ServiceCredits => "credits",
            };
            b.text(&cv, schema::UNIT_TEXT, Some(&unit.to_owned()));
        }
    }
}

fn lower_function(b: &mut Builder, f: &MLFunction) {
    let n = &f.node;
    b.a(n, ccdm::ML_FUNCTION);
    if !f.name.is_empty() {
        b.text(n, dc::TITLE, Some(&f.name));
    }
    if let Some(list) = &f.parameter_list {
        b.add(n, ccdm::HAS_INPUT_PARAMETERS, list.clone());
        b.a(list, ccdm::ML_SERVICE_INPUT_PARAMETERS);
    }
    for p in &f.parameters {
        match &f.parameter_list {
            Some(list) => b.add(list, ccdm::HAS_PARAMETER, p.node.clone()),
            None => b.add(n, ccdm::HAS_INPUT_PARAMETERS, p.node.clone()),
        }
        b.a(&p.node, ccdm::ML_SERVICE_INPUT_PARAMETER);
        b.text(&p.node, dc::TITLE, Some(&p.title));
        b.text(&p.node, dc::DESCRIPTION, p.description.as_ref());
        b.text(&p.node, ccdm::DEFAULT_VALUE, p.default_value.as_ref());
        b.add(&p.node, ccdm::MANDATORY, Literal::boolean(p.mandatory).into());
    }
    for i in &f.inputs {
        b.add(n, mls::HAS_INPUT, i.node.clone());
        b.a(&i.node, ccdm::ML_SERVICE_INPUT);
        b.text(&i.node, dc::DESCRIPTION, i.description.as_ref());
        b.text(&i.node, dc::FORMAT, i.format.as_ref());
    }
    for o in &f.outputs {
        match &o.group {
            Some(group) => {
                b.add(n, mls::HAS_OUTPUT, group.clone());
                b.a(group, ccdm::ML_SERVICE_OUTPUT);
                b.add(group, mls::HAS_OUTPUT, o.node.clone());
            }
            None => b.add(n, mls::HAS_OUTPUT, o.node.clone()),
        }
        let pmml = o.kind == OutputKind::Model && o.format.as_deref() == Some("PMML");
        let class = match o.kind {
            OutputKind::Model if pmml => ccdm::PMML_MODEL,
            OutputKind::Model => mls::MODEL,
            OutputKind::ModelEvaluation => mls::MODEL_EVALUATION,
            OutputKind::Data => mls::DATA,
        };
        b.a(&o.node, class);
        if !pmml {
            b.text(&o.node, dc::FORMAT, o.format.as_ref());
        }
        b.iri_or_text(&o.node, ccdm::STORAGE_BUCKET, o.storage_bucket.as_ref());
        b.text(&o.node, dc::TITLE, o.title.as_ref());
        b.text(&o.node, dc::DESCRIPTION, o.description.as_ref());
    }
}

fn lower_quantity(b: &mut Builder, owner: &Term, q: &Quantity) {
    let node = b.fresh();
    b.add(owner, gr::INCLUDES_OBJECT, node.clone());
    b.a(&node, gr::TYPE_AND_QUALITY_NODE);
    b.decimal(&node, gr::AMOUNT_OF_THIS_GOOD, Some(q.amount));
    b.text(&node, gr::HAS_UNIT_OF_MEASUREMENT, Some(&q.unit));
}

fn lower_plan(b: &mut Builder, plan: &PricingPlan) {
    let n = &plan.node;
    b.a(n, ccpricing::PRICING_PLAN);
    b.text(n, schema::NAME, Some(&plan.name));
    b.decimal(n, ccpricing::MIN_PRICE, plan.min_price);
    b.decimal(n, ccpricing::MAX_PRICE, plan.max_price);
    if plan.currency_declared {
        b.text(n, gr::PRICE_CURRENCY, Some(&plan.currency));
    }
    for c in &plan.compounds {
        b.add(n, ccpricing::HAS_COMPOUND, c.node.clone());
        b.a(&c.node, ccpricing::COMPOUND);
        match &c.price_spec {
            Some(ps) => {
                b.add(&c.node, ccpricing::HAS_PRICE_SPECIFICATION, ps.node.clone());
                b.a(&ps.node, gr::PRICE_SPECIFICATION);
                b.decimal(&ps.node, gr::HAS_CURRENCY_VALUE, Some(ps.unit_price));
                b.text(&ps.node, gr::PRICE_CURRENCY, Some(&ps.currency));
                b.text(&ps.node, gr::HAS_UNIT_OF_MEASUREMENT, Some(&ps.unit));
                b.decimal(&ps.node, gr::MAX, ps.max_charge);
                if let Some(q) = &c.allowance {
                    lower_quantity(b, &ps.node, q);
                }
            }
            None => {
                if let Some(q) = &c.allowance {
                    lower_quantity(b, &c.node, q);
                }
            }
        }
        if let Some(inst) = &c.instance {
            b.add(&c.node, ccpricing::HAS_INSTANCE, inst.node.clone());
            lower_instance(b, inst);
        }
        if let Some(r) = &c.region {
            b.add(&c.node, ccpricing::HAS_REGION, r.node.clone());
            b.a(&r.node, ccregions::REGION);
            b.text(&r.node, ccregions::REGION_CODE, Some(&r.code));
            b.text(&r.node, rdfs::LABEL, r.display_name.as_ref());
        }
    }
}

fn lower_instance(b: &mut Builder, inst: &Instance) {
    let n = &inst.node;
    b.a(n, ccinstances::INSTANCE);
    let sized = |b: &mut Builder, link: &'static str, class: &'static str, gb: Option<Decimal>| {
        if let Some(gb) = gb {
            let node = b.fresh();
            b.add(n, link, node.clone());
            b.a(&node, class);
            b.decimal(&node, schema::VALUE, Some(gb));
            b.text(&node, schema::UNIT_CODE, Some(&"E34".to_owned()));
        }
    };
    sized(b, ccinstances::HAS_RAM, ccinstances::RAM, inst.ram_gb);
    sized(b, ccinstances::HAS_STORAGE, ccinstances::STORAGE, inst.storage_gb);
    if inst.cpu_model.is_some() || inst.cores.is_some() {
        let cpu = b.fresh();
        b.add(n, ccinstances::HAS_CPU, cpu.clone());
        b.a(&cpu, ccinstances::CPU);
        b.text(&cpu, ccinstances::CPU_MODEL, inst.cpu_model.as_ref());
        if let Some(cores) = inst.cores {
            b.add(&cpu, ccinstances::CPU_CORES, Literal::integer(cores).into());
        }
    }
}

fn check_provider(p: &ServiceProvider) -> Result<(), ModelError> {
    check_node("node", &p.node)?;
    if p.name.trim().is_empty() {
        return Err(violation("name", "must be non-empty"));
    }
    for (i, s) in p.services.iter().enumerate() {
        check_service(&format!("services[{i}]"), s)?;
    }
    Ok(())
}

fn check_service(path: &str, s: &MLService) -> Result<(), ModelError> {
    check_node(&format!("{path}.node"), &s.node)?;
    if let Some(ip) = &s.interaction {
        if let Some(m) = &ip.http_method {
            if !HTTP_METHODS.contains(&m.as_str()) {
                return Err(violation(format!("{path}.interaction.httpMethod"), format!("{m:?} is not one of {HTTP_METHODS:?}")));
            }
        }
    }
    if let Some(Authentication { credential: Some(Credential::ApiKey { grounding_field }), .. }) = &s.authentication {
        if grounding_field.trim().is_empty() {
            return Err(violation(format!("{path}.authentication.credential"), "API key needs a grounding field"));
        }
    }
    if let Some(sla) = &s.sla {
        for (ti, term) in sla.terms.iter().enumerate() {
            let tp = format!("{path}.sla.terms[{ti}]");
            if term.definitions.len() != term.compensations.len() {
                return Err(violation(
                    format!("{tp}.compensations"),
                    format!("{} definitions but {} compensations", term.definitions.len(), term.compensations.len()),
                ));
            }
            for (di, d) in term.definitions.iter().enumerate() {
                check_interval(&format!("{tp}.definitions[{di}]"), d)?;
            }
            for (ci, c) in term.compensations.iter().enumerate() {
                check_compensation(&format!("{tp}.compensations[{ci}]"), c)?;
            }
        }
    }
    for (fi, f) in s.functions.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for (pi, p) in f.parameters.iter().enumerate() {
            let field = format!("{path}.functions[{fi}].parameters[{pi}].title");
            if p.title.trim().is_empty() {
                return Err(violation(field, "must be non-empty"));
            }
            if !seen.insert(p.title.as_str()) {
                return Err(violation(field, format!("duplicate title {:?}", p.title)));
            }
        }
    }
    for (pi, plan) in s.pricing.iter().enumerate() {
        check_plan(&format!("{path}.pricing[{pi}]"), plan)?;
    }
    Ok(())
}

pub(crate) fn check_interval(field: &str, d: &Interval) -> Result<(), ModelError> {
    if d.min > d.max {
        return Err(violation(field, format!("min {} > max {}", d.min, d.max)));
    }
    if d.is_percent() && (d.min < Decimal::ZERO || d.max > Decimal::ONE_HUNDRED) {
        return Err(violation(field, format!("percent interval [{}, {}] outside [0, 100]", d.min, d.max)));
    }
    Ok(())
}

pub(crate) fn check_compensation(field: &str, c: &Compensation) -> Result<(), ModelError> {
    if c.amount < Decimal::ZERO {
        return Err(violation(field, "amount must be non-negative"));
    }
    if c.kind == CompensationKind::PercentOfBill && c.amount > Decimal::ONE_HUNDRED {
        return Err(violation(field, "percent of bill above 100"));
    }
    Ok(())
}

fn check_plan(path: &str, plan: &PricingPlan) -> Result<(), ModelError> {
    if let (Some(lo), Some(hi)) = (plan.min_price, plan.max_price) {
        if lo > hi {
            return Err(violation(format!("{path}.minPrice"), format!("{lo} > maxPrice {hi}")));
        }
    }
    for (ci, c) in plan.compounds.iter().enumerate() {
        let cp = format!("{path}.compounds[{ci}]");
        if c.price_spec.is_none() && c.allowance.is_none() {
            return Err(violation(cp, "needs a price specification or an allowance"));
        }
        if let Some(ps) = &c.price_spec {
            if ps.unit_price < Decimal::ZERO {
                return Err(violation(format!("{cp}.priceSpec.unitPrice"), "must be non-negative"));
            }
            if vocab::unit(&ps.unit).is_none() {
                return Err(violation(format!("{cp}.priceSpec.unit"), format!("unknown unit {:?}", ps.unit)));
            }
            if plan.currency_declared && ps.currency != plan.currency {
                return Err(violation(format!("{cp}.priceSpec.currency"), format!("{} differs from plan currency {}", ps.currency, plan.currency)));
            }
        }
        if let Some(q) = &c.allowance {
            if q.amount < Decimal::ZERO {
                return Err(violation(format!("{cp}.allowance"), "must be non-negative"));
            }
            if vocab::unit(&q.unit).is_none() {
                return Err(violation(format!("{cp}.allowance.unit"), format!("unknown unit {:?}", q.unit)));
            }
        }
        if let Some(inst) = &c.instance {
            let positive = |v: Option<Decimal>| v.is_none_or(|v| v > Decimal::ZERO);
            if !positive(inst.ram_gb) || !positive(inst.storage_gb) || inst.cores.is_some_and(|c| c <= 0) {
                return Err(violation(format!("{cp}.instance"), "numeric fields must be positive"));
            }
        }
        if let Some(r) = &c.region {
            if r.code.trim().is_empty() {
                return Err(violation(format!("{cp}.region.code"), "must be non-empty"));
            }
        }
    }
    Ok(())
}
