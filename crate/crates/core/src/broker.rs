//! Which providers offer an algorithm, and what it costs with each.
//!
//! Functions match on `dc:title`, case-insensitively after trimming. An
//! alias table can map other spellings onto one name; it is empty unless
//! configured.
//!
//! A request that names no instance or region is priced against every
//! instance and region the service's plans mention, and the cheapest
//! configuration is reported.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::model::{self, PricingPlan};
use crate::pricing::{cheapest_plan, CostBreakdown, CostJson, PricingError, UsageRequest};
use crate::rdf::{Graph, Term};
use crate::vocab::{self, dmcc, gr, rdfs, schema};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeRef {
    pub node: Term,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Offer {
    pub provider: NodeRef,
    pub service: NodeRef,
    pub function_name: String,
    pub quote: Option<CostBreakdown>,
    /// Instance the quote assumes, when the usage left it open.
    pub instance: Option<Term>,
    pub region: Option<String>,
    pub error: Option<PricingError>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OfferJson {
    pub provider: NodeRef,
    pub service: NodeRef,
    pub function_name: String,
    pub instance: Option<Term>,
    pub region: Option<String>,
    pub quote: Option<CostJson>,
    pub error: Option<String>,
}

impl Offer {
    pub fn to_json(&self) -> OfferJson {
        OfferJson {
            provider: self.provider.clone(),
            service: self.service.clone(),
            function_name: self.function_name.clone(),
            instance: self.instance.clone(),
            region: self.region.clone(),
            quote: self.quote.as_ref().map(CostBreakdown::to_json),
            error: self.error.as_ref().map(ToString::to_string),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BrokerError {
    #[error("no provider offers {0:?}")]
    NoOffers(String),
    #[error("no offer for {function:?} could be quoted: {}", .failures.iter().map(|(s, e)| format!("{s}: {e}")).collect::<Vec<_>>().join("; "))]
    NoneQuotable { function: String, failures: Vec<(String, PricingError)> },
}

#[derive(Clone, Debug, Default)]
pub struct Broker {
    aliases: BTreeMap<String, String>,
}

fn fold(name: &str) -> String {
    name.trim().to_lowercase()
}

impl Broker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Treats `alias` as another spelling of `canonical`.
    pub fn alias(mut self, alias: &str, canonical: &str) -> Self {
        self.aliases.insert(fold(alias), fold(canonical));
        self
    }

    fn canonical(&self, name: &str) -> String {
        let f = fold(name);
        self.aliases.get(&f).cloned().unwrap_or(f)
    }

    pub fn matches(&self, title: &str, wanted: &str) -> bool {
        self.canonical(title) == self.canonical(wanted)
    }

    /// One unquoted offer per (provider, service) pair whose function
    /// matches, ordered by provider name.
    pub fn providers_offering(&self, g: &Graph, function_name: &str) -> Vec<Offer> {
        let mut offers = Vec::new();
        for provider in model::list_providers(g) {
            let pref = NodeRef { name: display_name(g, &provider, &[gr::NAME, schema::NAME, rdfs::LABEL]), node: provider.clone() };
            let services: BTreeSet<&Term> = g.objects(&provider, &vocab::term(dmcc::HAS_ML_SERVICE)).collect();
            for svc in services {
                let titles = function_titles(g, svc);
                let Some(title) = titles.iter().find(|t| self.matches(t, function_name)) else { continue };
                offers.push(Offer {
                    provider: pref.clone(),
                    service: NodeRef { node: svc.clone(), name: display_name(g, svc, &[rdfs::LABEL, schema::NAME]) },
                    function_name: title.trim().to_owned(),
                    quote: None,
                    instance: None,
                    region: None,
                    error: None,
                });
            }
        }
        offers.sort_by(|a, b| (&a.provider.name, &a.provider.node, &a.service.node).cmp(&(&b.provider.name, &b.provider.node, &b.service.node)));
        offers
    }

    /// Every offer, quoted. Quoted offers come first by total then provider
    /// name; offers that could not be quoted follow with their error.
    pub fn compare(&self, g: &Graph, function_name: &str, usage: &UsageRequest) -> Vec<Offer> {
        let mut offers = self.providers_offering(g, function_name);
        for offer in &mut offers {
            match service_plans(g, &offer.service.node).and_then(|plans| cheapest_configuration(&plans, usage)) {
                Ok((cost, instance, region)) => {
                    offer.quote = Some(cost);
                    offer.instance = instance;
                    offer.region = region;
                }
                Err(e) => offer.error = Some(e),
            }
        }
        // Stable sort keeps provider order among equal keys.
        offers.sort_by(|a, b| match (&a.quote, &b.quote) {
            (Some(x), Some(y)) => (x.total, &a.provider.name).cmp(&(y.total, &b.provider.name)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        });
        offers
    }

    pub fn best_offer(&self, g: &Graph, function_name: &str, usage: &UsageRequest) -> Result<Offer, BrokerError> {
        let offers = self.compare(g, function_name, usage);
        if offers.is_empty() {
            return Err(BrokerError::NoOffers(function_name.to_owned()));
        }
        if offers[0].quote.is_some() {
            return Ok(offers.into_iter().next().unwrap());
        }
        let failures = offers.into_iter().map(|o| (o.service.node.to_string(), o.error.expect("unquoted offers carry an error"))).collect();
        Err(BrokerError::NoneQuotable { function: function_name.to_owned(), failures })
    }
}

pub fn providers_offering(g: &Graph, function_name: &str) -> Vec<Offer> {
    Broker::default().providers_offering(g, function_name)
}

pub fn compare(g: &Graph, function_name: &str, usage: &UsageRequest) -> Vec<Offer> {
    Broker::default().compare(g, function_name, usage)
}

pub fn best_offer(g: &Graph, function_name: &str, usage: &UsageRequest) -> Result<Offer, BrokerError> {
    Broker::default().best_offer(g, function_name, usage)
}

fn display_name(g: &Graph, node: &Term, preds: &[&'static str]) -> String {
    preds
        .iter()
        .find_map(|p| g.objects(node, &vocab::term(p)).find_map(|o| o.as_literal().map(|l| l.lexical().to_owned())))
        .unwrap_or_else(|| node.to_string())
}

fn function_titles(g: &Graph, svc: &Term) -> Vec<String> {
    g.objects(svc, &vocab::term(dmcc::HAS_FUNCTION))
        .filter_map(|f| model::extract_function(g, f).ok())
        .map(|f| f.name)
        .collect()
}

fn service_plans(g: &Graph, svc: &Term) -> Result<Vec<PricingPlan>, PricingError> {
    g.objects(svc, &vocab::term(dmcc::HAS_PRICING_PLAN))
        .map(|p| model::extract_pricing(g, p).map_err(|e| PricingError::InvalidPlan { plan: p.clone(), reason: e.to_string() }))
        .collect()
}

/// Cheapest plan over the instance and region choices the usage leaves open.
pub fn cheapest_configuration(
    plans: &[PricingPlan],
    usage: &UsageRequest,
) -> Result<(CostBreakdown, Option<Term>, Option<String>), PricingError> {
    let mut instances: BTreeSet<Option<Term>> = BTreeSet::from([usage.instance.clone()]);
    let mut regions: BTreeSet<Option<String>> = BTreeSet::from([usage.region.clone()]);
    for c in plans.iter().flat_map(|p| &p.compounds) {
        if usage.instance.is_none() {
            instances.insert(c.instance.as_ref().map(|i| i.node.clone()));
        }
        if usage.region.is_none() {
            regions.insert(c.region.as_ref().map(|r| r.code.clone()));
        }
    }
    let base = cheapest_plan(plans, usage).map(|(_, cost)| cost);
    let mut best: Option<(CostBreakdown, Option<Term>, Option<String>)> = base.as_ref().ok().map(|c| (c.clone(), None, None));
    for inst in &instances {
        for reg in &regions {
            if inst.is_none() && reg.is_none() {
                continue;
            }
            let variant = UsageRequest { instance: inst.clone(), region: reg.clone(), ..usage.clone() };
            if let Ok((_, cost)) = cheapest_plan(plans, &variant) {
                let better = best.as_ref().is_none_or(|(b, _, _)| (cost.total, &cost.plan_name) < (b.total, &b.plan_name));
                if better {
                    best = Some((cost, inst.clone(), reg.clone()));
                }
            }
        }
    }
    match best {
        Some((cost, inst, reg)) => Ok((cost, inst.filter(|_| usage.instance.is_none()), reg.filter(|_| usage.region.is_none()))),
        None => Err(base.expect_err("no configuration quoted")),
    }
}
