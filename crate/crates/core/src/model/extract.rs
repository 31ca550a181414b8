use std::collections::BTreeSet;

use rust_decimal::Decimal;

use super::*;
use crate::rdf::{rdf_type, Graph, Term};
use crate::vocab::{self, ccdm, ccinstances, ccpricing, ccregions, ccsla, dc, dmcc, gr, mls, normalize_unit_text, rdfs, schema, waa};

fn t(iri: &'static str) -> Term {
    vocab::term(iri)
}

fn has_type(g: &Graph, node: &Term, class: &'static str) -> bool {
    g.objects(node, &rdf_type()).any(|o| o.as_iri().is_some_and(|i| i.as_str() == class))
}

fn types(g: &Graph, node: &Term) -> Vec<String> {
    g.objects(node, &rdf_type()).filter_map(|o| o.as_iri().map(|i| i.as_str().to_owned())).collect()
}

fn text_of(term: &Term) -> Option<String> {
    match term {
        Term::Literal(l) => Some(l.lexical().to_owned()),
        Term::Iri(i) => Some(i.as_str().to_owned()),
        Term::Blank(_) => None,
    }
}

/// First literal (or IRI) value of `node pred ?`, in term order.
fn string(g: &Graph, node: &Term, pred: &'static str) -> Option<String> {
    g.objects(node, &t(pred)).find_map(text_of)
}

fn first_string(g: &Graph, node: &Term, preds: &[&'static str]) -> Option<String> {
    preds.iter().find_map(|p| string(g, node, p))
}

fn decimal(g: &Graph, node: &Term, pred: &'static str) -> Result<Option<Decimal>, ModelError> {
    let Some(obj) = g.object(node, &t(pred)) else { return Ok(None) };
    let parsed = obj.as_literal().and_then(|l| l.as_decimal());
    match parsed {
        Some(d) => Ok(Some(d)),
        None => Err(ModelError::MalformedLiteral {
            node: node.clone(),
            predicate: pred,
            lexical: text_of(obj).unwrap_or_else(|| obj.to_string()),
            reason: "expected a decimal number",
        }),
    }
}

/// Link targets of `node pred ?`, each required to be described in `g`.
fn targets(g: &Graph, node: &Term, pred: &'static str) -> Result<Vec<Term>, ModelError> {
    let mut out = Vec::new();
    for obj in g.objects(node, &t(pred)) {
        if obj.is_literal() {
            return Err(ModelError::Malformed { node: node.clone(), reason: format!("{} expects a node, found {obj}", curie(pred)) });
        }
        if !g.describes(obj) {
            return Err(ModelError::DanglingReference { node: node.clone(), predicate: pred, target: obj.clone() });
        }
        out.push(obj.clone());
    }
    Ok(out)
}

fn target(g: &Graph, node: &Term, pred: &'static str) -> Result<Option<Term>, ModelError> {
    Ok(targets(g, node, pred)?.into_iter().next())
}

pub(crate) fn curie(iri: &str) -> String {
    match vocab::registry().prefixes().compact(iri) {
        Some((p, l)) => format!("{p}:{l}"),
        None => format!("<{iri}>"),
    }
}

fn require_type(g: &Graph, node: &Term, class: &'static str) -> Result<(), ModelError> {
    if has_type(g, node, class) {
        Ok(())
    } else {
        Err(ModelError::WrongType { node: node.clone(), class })
    }
}

fn typed_subjects(g: &Graph, class: &'static str) -> Vec<Term> {
    let set: BTreeSet<Term> = g.subjects(&rdf_type(), &t(class)).into_iter().cloned().collect();
    set.into_iter().collect()
}

/// Every node typed `dmcc:MLServiceProvider`, in term order.
pub fn list_providers(g: &Graph) -> Vec<Term> {
    typed_subjects(g, dmcc::ML_SERVICE_PROVIDER)
}

/// Every node typed `dmcc:MLService`, in term order.
pub fn list_services(g: &Graph) -> Vec<Term> {
    typed_subjects(g, dmcc::ML_SERVICE)
}

pub fn extract_provider(g: &Graph, node: &Term) -> Result<ServiceProvider, ModelError> {
    require_type(g, node, dmcc::ML_SERVICE_PROVIDER)?;
    let location = match g.object(node, &t(schema::SERVICE_LOCATION)) {
        Some(addr) if !addr.is_literal() => Some(PostalAddress {
            country: string(g, addr, schema::ADDRESS_COUNTRY),
            locality: string(g, addr, schema::ADDRESS_LOCALITY),
        }),
        _ => None,
    };
    let mut contacts = Vec::new();
    for cp in g.objects(node, &t(schema::CONTACT_POINT)).filter(|c| !c.is_literal()) {
        let mut languages: Vec<String> = g
            .objects(cp, &t(schema::AVAILABLE_LANGUAGE))
            .filter_map(|l| if l.is_literal() { text_of(l) } else { string(g, l, schema::NAME) })
            .collect();
        languages.sort();
        contacts.push(ContactPoint {
            contact_type: string(g, cp, schema::CONTACT_TYPE),
            languages,
            email: string(g, cp, schema::EMAIL),
        });
    }
    let services = targets(g, node, dmcc::HAS_ML_SERVICE)?
        .iter()
        .map(|s| extract_service(g, s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ServiceProvider {
        node: node.clone(),
        label: string(g, node, rdfs::LABEL),
        description: string(g, node, dc::DESCRIPTION),
        name: first_string(g, node, &[gr::NAME, schema::NAME]).unwrap_or_default(),
        legal_name: string(g, node, gr::LEGAL_NAME).unwrap_or_default(),
        naics: string(g, node, gr::HAS_NAICS),
        url: string(g, node, schema::URL),
        location,
        contacts,
        services,
        // The catalogue's structure is unspecified; keep the bare reference.
        catalog_ref: g.object(node, &t(dmcc::HAS_OFFER_CATALOG)).cloned(),
    })
}

pub fn extract_service(g: &Graph, node: &Term) -> Result<MLService, ModelError> {
    require_type(g, node, dmcc::ML_SERVICE)?;
    let mut svc = MLService::new(node.clone());
    svc.label = string(g, node, rdfs::LABEL);
    svc.description = string(g, node, dc::DESCRIPTION);
    if let Some(n) = target(g, node, dmcc::HAS_INTERACTION_POINT)? {
        svc.interaction = Some(extract_interaction(g, &n));
    }
    if let Some(n) = target(g, node, dmcc::HAS_SERVICE_COMMITMENT)? {
        svc.sla = Some(sla_agreement(g, &n)?);
    }
    for n in targets(g, node, dmcc::HAS_FUNCTION)? {
        svc.functions.push(extract_function(g, &n)?);
    }
    if let Some(n) = target(g, node, dmcc::HAS_AUTHENTICATION)? {
        svc.authentication = Some(extract_authentication(g, &n)?);
    }
    for n in targets(g, node, dmcc::HAS_PRICING_PLAN)? {
        svc.pricing.push(extract_pricing(g, &n)?);
    }
    Ok(svc)
}

pub(crate) fn extract_interaction(g: &Graph, node: &Term) -> InteractionPoint {
    let action = g.object(node, &t(dmcc::HAS_ENTRY_POINT)).filter(|a| !a.is_literal()).cloned();
    let entry = action.as_ref().and_then(|a| g.object(a, &t(schema::TARGET))).filter(|e| !e.is_literal()).cloned();
    // Read each field from the most specific node that carries it.
    let chain: Vec<&Term> = [entry.as_ref(), action.as_ref(), Some(node)].into_iter().flatten().collect();
    let field = |pred| chain.iter().find_map(|n| string(g, n, pred));
    let param_owner = action.as_ref().unwrap_or(node);
    let mut parameters: Vec<ActionParameter> = g
        .objects(param_owner, &t(schema::OBJECT))
        .filter(|p| !p.is_literal())
        .filter_map(|p| {
            first_string(g, p, &[schema::VALUE_NAME, schema::NAME])
                .map(|name| ActionParameter { name, description: string(g, p, schema::DESCRIPTION) })
        })
        .collect();
    parameters.sort_by(|a, b| a.name.cmp(&b.name));
    InteractionPoint {
        node: node.clone(),
        http_method: field(schema::HTTP_METHOD),
        url_template: field(schema::URL_TEMPLATE),
        content_type: field(schema::CONTENT_TYPE),
        parameters,
    }
}

pub(crate) fn extract_authentication(g: &Graph, node: &Term) -> Result<Authentication, ModelError> {
    let requires = match g.object(node, &t(waa::REQUIRES_AUTHENTICATION)) {
        None => None,
        Some(Term::Iri(i)) if i.as_str() == waa::ALL => Some(Requirement::All),
        Some(Term::Iri(i)) if i.as_str() == waa::NONE => Some(Requirement::None),
        Some(Term::Iri(i)) if i.as_str() == waa::SOME => Some(Requirement::Partial),
        Some(other) => {
            return Err(ModelError::Malformed {
                node: node.clone(),
                reason: format!("waa:requiresAuthentication expects waa:All, waa:None or waa:Some, found {other}"),
            })
        }
    };
    let mech_node = g.object(node, &t(waa::HAS_AUTHENTICATION_MECHANISM)).filter(|m| !m.is_literal()).cloned();
    let mechanism = mech_node.as_ref().and_then(|m| match m {
        Term::Iri(i) => Some(classify_mechanism(i.as_str())),
        _ => {
            let ts = types(g, m);
            ts.iter()
                .find(|c| c.as_str() == waa::DIRECT || c.as_str() == waa::OAUTH)
                .or(ts.first())
                .map(|c| classify_mechanism(c))
        }
    });
    let owners: Vec<&Term> = mech_node.iter().chain(std::iter::once(node)).collect();
    let credential = owners
        .iter()
        .find_map(|o| g.object(o, &t(waa::HAS_INPUT_CREDENTIALS)).filter(|c| !c.is_literal()).cloned())
        .map(|c| classify_credential(g, &c));
    let transmission = owners.iter().find_map(|o| g.object(o, &t(waa::WAY_OF_SENDING_INFORMATION))).map(|w| {
        match w.as_iri().map(|i| i.as_str()) {
            Some(waa::VIA_URI) => Transmission::ViaUri,
            Some(waa::VIA_HEADER) => Transmission::ViaHeader,
            _ => Transmission::Other(text_of(w).unwrap_or_default()),
        }
    });
    Ok(Authentication {
        node: node.clone(),
        label: string(g, node, rdfs::LABEL),
        description: string(g, node, dc::DESCRIPTION),
        requires,
        mechanism,
        credential,
        transmission,
    })
}

fn classify_mechanism(class: &str) -> Mechanism {
    match class {
        waa::DIRECT => Mechanism::Direct,
        waa::OAUTH => Mechanism::OAuth,
        other => Mechanism::Other(other.to_owned()),
    }
}

fn classify_credential(g: &Graph, node: &Term) -> Credential {
    let classify = |class: &str| match class {
        waa::API_KEY => Some(Credential::ApiKey { grounding_field: string(g, node, waa::IS_GROUNDED_IN).unwrap_or_default() }),
        waa::USERNAME_PASSWORD => Some(Credential::UsernamePassword),
        waa::TOKEN => Some(Credential::Token),
        _ => None,
    };
    match node {
        Term::Iri(i) => classify(i.as_str()).unwrap_or_else(|| Credential::Other(i.as_str().to_owned())),
        _ => {
            let ts = types(g, node);
            ts.iter()
                .find_map(|c| classify(c))
                .unwrap_or_else(|| Credential::Other(ts.first().cloned().unwrap_or_default()))
        }
    }
}

/// Reads an agreement. The node must be typed `ccsla:SLA` or be the target
/// of some `dmcc:hasServiceCommitment` link.
pub fn extract_sla(g: &Graph, node: &Term) -> Result<SlaAgreement, ModelError> {
    let linked = !g.subjects(&t(dmcc::HAS_SERVICE_COMMITMENT), node).is_empty();
    if !linked {
        require_type(g, node, ccsla::SLA)?;
    }
    sla_agreement(g, node)
}

/// IRIs of the canonical `containsTerm` and its accepted misspelling.
fn contains_term_predicates() -> Vec<Term> {
    let mut preds = vec![t(ccsla::CONTAINS_TERM)];
    preds.push(Term::iri(format!("{}cointainsTerm", ccsla::NS)).expect("valid IRI"));
    preds
}

pub(crate) fn sla_agreement(g: &Graph, node: &Term) -> Result<SlaAgreement, ModelError> {
    let mut term_nodes = BTreeSet::new();
    for pred in contains_term_predicates() {
        for obj in g.objects(node, &pred) {
            if obj.is_literal() {
                continue;
            }
            if !g.describes(obj) {
                return Err(ModelError::DanglingReference { node: node.clone(), predicate: ccsla::CONTAINS_TERM, target: obj.clone() });
            }
            term_nodes.insert(obj.clone());
        }
    }
    let terms = term_nodes.iter().map(|n| sla_term(g, n)).collect::<Result<Vec<_>, _>>()?;
    Ok(SlaAgreement { node: node.clone(), terms })
}

fn sla_term(g: &Graph, node: &Term) -> Result<SlaTerm, ModelError> {
    let name = first_string(g, node, &[schema::NAME, rdfs::LABEL, dc::TITLE]).unwrap_or_default();
    let defs = targets(g, node, ccsla::HAS_DEFINITION)?;
    let mut linked = Vec::new();
    let mut unlinked = Vec::new();
    for d in &defs {
        let interval = interval(g, d)?;
        match target(g, d, ccsla::HAS_COMPENSATION)? {
            Some(c) => linked.push((interval, Some(compensation(g, &c)?))),
            None => unlinked.push(interval),
        }
    }
    // Compensations hung off the term itself pair with the unlinked
    // definitions by node order.
    let mut loose = targets(g, node, ccsla::HAS_COMPENSATION)?
        .iter()
        .map(|c| compensation(g, c))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter();
    let paired_by_order = !unlinked.is_empty() || loose.len() > 0;
    let mut pairs = linked;
    for interval in unlinked {
        pairs.push((interval, loose.next()));
    }
    pairs.sort_by(|a, b| (a.0.min, a.0.max, &a.0.node).cmp(&(b.0.min, b.0.max, &b.0.node)));
    let mut definitions = Vec::new();
    let mut compensations = Vec::new();
    for (i, c) in pairs {
        definitions.push(i);
        compensations.extend(c);
    }
    compensations.extend(loose);
    Ok(SlaTerm { node: node.clone(), name, definitions, compensations, paired_by_order })
}

/// The quantitative value under `node`: either on the node itself or one or
/// two wrapper hops down (`hasXValue` then `s:value`).
fn quantitative_value(g: &Graph, node: &Term, link: &'static str) -> Term {
    let has_bounds = |n: &Term| {
        g.object(n, &t(schema::MIN_VALUE)).is_some()
            || g.object(n, &t(schema::MAX_VALUE)).is_some()
            || g.object(n, &t(schema::UNIT_TEXT)).is_some()
    };
    if has_bounds(node) {
        return node.clone();
    }
    let Some(wrapper) = g.object(node, &t(link)).filter(|w| !w.is_literal()) else { return node.clone() };
    if has_bounds(wrapper) {
        return wrapper.clone();
    }
    match g.object(wrapper, &t(schema::VALUE)).filter(|v| !v.is_literal()) {
        Some(inner) => inner.clone(),
        None => wrapper.clone(),
    }
}

fn interval(g: &Graph, def: &Term) -> Result<Interval, ModelError> {
    let qv = quantitative_value(g, def, ccsla::HAS_DEFINITION_VALUE);
    let min = decimal(g, &qv, schema::MIN_VALUE)?;
    let max = decimal(g, &qv, schema::MAX_VALUE)?;
    let (min, max) = match (min, max) {
        (Some(a), Some(b)) => (a, b),
        (None, _) => return Err(ModelError::MalformedInterval { node: def.clone(), reason: "missing s:minValue" }),
        (_, None) => return Err(ModelError::MalformedInterval { node: def.clone(), reason: "missing s:maxValue" }),
    };
    let unit = string(g, &qv, schema::UNIT_TEXT).map(|u| normalize_unit_text(&u)).unwrap_or_default();
    Ok(Interval { node: def.clone(), min, max, unit })
}

fn compensation(g: &Graph, node: &Term) -> Result<Compensation, ModelError> {
    let value_node = match g.object(node, &t(ccsla::HAS_COMPENSATION_VALUE)) {
        Some(v) if !v.is_literal() => v.clone(),
        _ => node.clone(),
    };
    let amount = decimal(g, &value_node, schema::VALUE)?.or(decimal(g, node, ccsla::HAS_COMPENSATION_VALUE).ok().flatten());
    let Some(amount) = amount else {
        return Err(ModelError::Malformed { node: node.clone(), reason: "compensation without s:value".into() });
    };
    let unit = string(g, &value_node, schema::UNIT_TEXT).map(|u| normalize_unit_text(&u)).unwrap_or_default();
    let kind = match unit.as_str() {
        "percent" => CompensationKind::PercentOfBill,
        "credits" => CompensationKind::ServiceCredits,
        other => {
            return Err(ModelError::Malformed {
                node: node.clone(),
                reason: format!("compensation unit {other:?} is neither percent nor credits"),
            })
        }
    };
    Ok(Compensation { node: node.clone(), kind, amount })
}

pub fn extract_pricing(g: &Graph, node: &Term) -> Result<PricingPlan, ModelError> {
    require_type(g, node, ccpricing::PRICING_PLAN)?;
    let declared = string(g, node, gr::PRICE_CURRENCY);
    let mut compounds = Vec::new();
    for c in targets(g, node, ccpricing::HAS_COMPOUND)? {
        compounds.push(compound(g, &c, declared.as_deref())?);
    }
    let currency = match &declared {
        Some(c) => c.clone(),
        None => {
            let found: BTreeSet<&str> =
                compounds.iter().filter_map(|c| c.price_spec.as_ref()).map(|p| p.currency.as_str()).collect();
            if found.len() == 1 {
                found.into_iter().next().unwrap().to_owned()
            } else {
                "USD".to_owned()
            }
        }
    };
    Ok(PricingPlan {
        node: node.clone(),
        name: first_string(g, node, &[schema::NAME, gr::NAME, rdfs::LABEL]).unwrap_or_else(|| node.to_string()),
        min_price: decimal(g, node, ccpricing::MIN_PRICE)?,
        max_price: decimal(g, node, ccpricing::MAX_PRICE)?,
        currency,
        currency_declared: declared.is_some(),
        compounds,
    })
}

fn known_unit(node: &Term, unit: String) -> Result<String, ModelError> {
    if vocab::unit(&unit).is_some() {
        Ok(unit)
    } else {
        Err(ModelError::UnknownUnit { node: node.clone(), unit })
    }
}

fn allowance(g: &Graph, owner: &Term) -> Result<Option<Quantity>, ModelError> {
    let Some(node) = g.object(owner, &t(gr::INCLUDES_OBJECT)).filter(|n| !n.is_literal()) else { return Ok(None) };
    let amount = decimal(g, node, gr::AMOUNT_OF_THIS_GOOD)?
        .ok_or_else(|| ModelError::Malformed { node: node.clone(), reason: "included object without gr:amountOfThisGood".into() })?;
    let unit = string(g, node, gr::HAS_UNIT_OF_MEASUREMENT)
        .ok_or_else(|| ModelError::Malformed { node: node.clone(), reason: "included object without gr:hasUnitOfMeasurement".into() })?;
    Ok(Some(Quantity { amount, unit: known_unit(node, unit)? }))
}

fn compound(g: &Graph, node: &Term, plan_currency: Option<&str>) -> Result<Compound, ModelError> {
    let spec_node = target(g, node, ccpricing::HAS_PRICE_SPECIFICATION)?;
    let allowance = match &spec_node {
        Some(s) => allowance(g, s)?,
        None => None,
    }
    .map_or_else(|| allowance(g, node), |a| Ok(Some(a)))?;
    let price_spec = match spec_node {
        None => None,
        Some(s) => {
            let unit = string(g, &s, gr::HAS_UNIT_OF_MEASUREMENT).or_else(|| allowance.as_ref().map(|a| a.unit.clone()));
            let unit = unit.ok_or_else(|| ModelError::Malformed {
                node: s.clone(),
                reason: "price specification without a unit of measurement".into(),
            })?;
            Some(PriceSpec {
                unit_price: decimal(g, &s, gr::HAS_CURRENCY_VALUE)?.unwrap_or(Decimal::ZERO),
                currency: string(g, &s, gr::PRICE_CURRENCY).or(plan_currency.map(str::to_owned)).unwrap_or_else(|| "USD".into()),
                unit: known_unit(&s, unit)?,
                max_charge: decimal(g, &s, gr::MAX)?,
                node: s,
            })
        }
    };
    let instance = target(g, node, ccpricing::HAS_INSTANCE)?.map(|i| instance(g, &i)).transpose()?;
    let region = target(g, node, ccpricing::HAS_REGION)?.map(|r| region(g, &r)).transpose()?;
    Ok(Compound { node: node.clone(), price_spec, instance, region, allowance })
}

/// Size in gigabytes of a `[ s:value N; s:unitCode U ]` node; the unit
/// defaults to gigabytes.
fn gigabytes(g: &Graph, node: &Term) -> Result<Option<Decimal>, ModelError> {
    let Some(value) = decimal(g, node, schema::VALUE)? else { return Ok(None) };
    let code = string(g, node, schema::UNIT_CODE).unwrap_or_else(|| "E34".into());
    match vocab::unit(&code).and_then(|u| u.gigabytes()) {
        Some(factor) => Ok(Some(value * factor)),
        None => Err(ModelError::UnknownUnit { node: node.clone(), unit: code }),
    }
}

fn instance(g: &Graph, node: &Term) -> Result<Instance, ModelError> {
    let sub = |pred| g.object(node, &t(pred)).filter(|n| !n.is_literal()).cloned();
    let ram_gb = match sub(ccinstances::HAS_RAM) {
        Some(r) => gigabytes(g, &r)?,
        None => None,
    };
    let storage_gb = match sub(ccinstances::HAS_STORAGE) {
        Some(s) => gigabytes(g, &s)?,
        None => None,
    };
    let (cpu_model, cores) = match sub(ccinstances::HAS_CPU) {
        Some(c) => {
            let cores = match decimal(g, &c, ccinstances::CPU_CORES)? {
                Some(d) if d.fract().is_zero() => Some(i64::try_from(d).map_err(|_| ModelError::MalformedLiteral {
                    node: c.clone(),
                    predicate: ccinstances::CPU_CORES,
                    lexical: d.to_string(),
                    reason: "core count out of range",
                })?),
                Some(d) => {
                    return Err(ModelError::MalformedLiteral {
                        node: c.clone(),
                        predicate: ccinstances::CPU_CORES,
                        lexical: d.to_string(),
                        reason: "expected an integer",
                    })
                }
                None => None,
            };
            (string(g, &c, ccinstances::CPU_MODEL), cores)
        }
        None => (None, None),
    };
    Ok(Instance { node: node.clone(), ram_gb, cpu_model, cores, storage_gb })
}

fn region(g: &Graph, node: &Term) -> Result<Region, ModelError> {
    let code = string(g, node, ccregions::REGION_CODE)
        .ok_or_else(|| ModelError::Malformed { node: node.clone(), reason: "region without ccregions:regionCode".into() })?;
    Ok(Region { node: node.clone(), code, display_name: first_string(g, node, &[rdfs::LABEL, schema::NAME]) })
}

pub fn extract_function(g: &Graph, node: &Term) -> Result<MLFunction, ModelError> {
    require_type(g, node, ccdm::ML_FUNCTION)?;
    let mut parameter_list = None;
    let mut param_nodes = BTreeSet::new();
    for p in targets(g, node, ccdm::HAS_INPUT_PARAMETERS)? {
        let is_list = has_type(g, &p, ccdm::ML_SERVICE_INPUT_PARAMETERS) || g.object(&p, &t(ccdm::HAS_PARAMETER)).is_some();
        if is_list {
            param_nodes.extend(targets(g, &p, ccdm::HAS_PARAMETER)?);
            parameter_list.get_or_insert(p);
        } else {
            param_nodes.insert(p);
        }
    }
    let parameters = param_nodes.iter().map(|p| parameter(g, p)).collect::<Result<Vec<_>, _>>()?;

    let inputs = targets(g, node, mls::HAS_INPUT)?
        .into_iter()
        .map(|i| DataInputSpec {
            description: string(g, &i, dc::DESCRIPTION),
            format: first_string(g, &i, &[dc::FORMAT, ccdm::FORMAT]),
            node: i,
        })
        .collect();

    let mut outputs = Vec::new();
    for o in targets(g, node, mls::HAS_OUTPUT)? {
        let children = targets(g, &o, mls::HAS_OUTPUT)?;
        if has_type(g, &o, ccdm::ML_SERVICE_OUTPUT) && !children.is_empty() {
            for c in children {
                outputs.push(output(g, &c, Some(o.clone())));
            }
        } else {
            outputs.push(output(g, &o, None));
        }
    }
    outputs.sort_by(|a, b| (&a.node, &a.group).cmp(&(&b.node, &b.group)));

    Ok(MLFunction {
        node: node.clone(),
        name: first_string(g, node, &[dc::TITLE, rdfs::LABEL, schema::NAME]).unwrap_or_default(),
        parameter_list,
        parameters,
        inputs,
        outputs,
    })
}

fn parameter(g: &Graph, node: &Term) -> Result<Parameter, ModelError> {
    let mandatory = match g.object(node, &t(ccdm::MANDATORY)) {
        None => true,
        Some(obj) => obj.as_literal().and_then(|l| l.as_bool()).ok_or_else(|| ModelError::MalformedLiteral {
            node: node.clone(),
            predicate: ccdm::MANDATORY,
            lexical: text_of(obj).unwrap_or_else(|| obj.to_string()),
            reason: "expected true or false",
        })?,
    };
    Ok(Parameter {
        node: node.clone(),
        title: string(g, node, dc::TITLE).unwrap_or_default(),
        description: string(g, node, dc::DESCRIPTION),
        default_value: string(g, node, ccdm::DEFAULT_VALUE),
        mandatory,
    })
}

fn output(g: &Graph, node: &Term, group: Option<Term>) -> OutputSpec {
    let pmml = has_type(g, node, ccdm::PMML_MODEL);
    let kind = if pmml || has_type(g, node, mls::MODEL) {
        OutputKind::Model
    } else if has_type(g, node, mls::MODEL_EVALUATION) {
        OutputKind::ModelEvaluation
    } else {
        OutputKind::Data
    };
    let format = first_string(g, node, &[dc::FORMAT, ccdm::FORMAT]).or_else(|| pmml.then(|| "PMML".to_owned()));
    OutputSpec {
        node: node.clone(),
        group,
        kind,
        format,
        storage_bucket: string(g, node, ccdm::STORAGE_BUCKET),
        title: string(g, node, dc::TITLE),
        description: string(g, node, dc::DESCRIPTION),
    }
}
