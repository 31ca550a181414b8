//! Usage quotes against a pricing plan.
//!
//! A compound applies when its instance and region scopes (if any) match the
//! request and it prices or grants one of the requested units. Matching
//! compounds add up. Included allowances are used before anything is billed,
//! and the plan's cap (the smaller of `ccpricing:maxPrice` and any `gr:max`)
//! limits the total. A cap of zero cannot bill at all, so usage beyond the
//! allowance is an error rather than a charge.
//!
//! Arithmetic is exact decimal throughout; rounding to cents happens only in
//! [`money`].

use std::collections::BTreeSet;

use rust_decimal::{Decimal, RoundingStrategy};
use serde::Serialize;
use thiserror::Error;

use crate::model::{Compound, PricingPlan, Quantity};
use crate::rdf::Term;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UsageRequest {
    pub quantities: Vec<Quantity>,
    /// Instance node the usage runs on.
    pub instance: Option<Term>,
    /// Region code, compared with `ccregions:regionCode`.
    pub region: Option<String>,
}

impl UsageRequest {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn hours(amount: Decimal) -> Self {
        UsageRequest { quantities: vec![Quantity::new(amount, "HRS")], ..Self::default() }
    }

    pub fn with(mut self, amount: Decimal, unit: &str) -> Self {
        self.quantities.push(Quantity::new(amount, unit));
        self
    }

    pub fn on_instance(mut self, instance: Term) -> Self {
        self.instance = Some(instance);
        self
    }

    pub fn in_region(mut self, code: impl Into<String>) -> Self {
        self.region = Some(code.into());
        self
    }

    fn amount(&self, unit: &str) -> Option<Decimal> {
        self.quantities.iter().find(|q| q.unit == unit).map(|q| q.amount)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum LineKind {
    Usage,
    /// Negative adjustment bringing the total down to the plan cap.
    Cap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LineItem {
    pub kind: LineKind,
    /// Compound billed, or the plan node for a cap adjustment.
    pub compound: Term,
    pub unit: String,
    pub billed_quantity: Decimal,
    pub unit_price: Decimal,
    pub subtotal: Decimal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CostBreakdown {
    pub plan: Term,
    pub plan_name: String,
    pub items: Vec<LineItem>,
    pub currency: String,
    pub total: Decimal,
    pub allowance_applied: Vec<Quantity>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PricingError {
    #[error("usage is invalid: {0}")]
    InvalidUsage(String),
    #[error("plan {plan} is invalid: {reason}")]
    InvalidPlan { plan: Term, reason: String },
    #[error("no compound of plan {plan} prices {amount} {unit} for this instance and region")]
    NoApplicableCompound { plan: Term, unit: String, amount: Decimal },
    #[error("plan {plan} mixes currencies {currencies:?}")]
    CurrencyConflict { plan: Term, currencies: Vec<String> },
    #[error("plan {plan} is capped at 0 and {requested} {unit} exceeds the {included} {unit} included")]
    AllowanceExceeded { plan: Term, unit: String, requested: Decimal, included: Decimal },
    #[error("no plans to quote")]
    NoPlans,
    #[error("no plan could quote this usage: {}", .0.iter().map(|(n, e)| format!("{n}: {e}")).collect::<Vec<_>>().join("; "))]
    NoneQuotable(Vec<(String, PricingError)>),
}

/// Rounds half-even to cents and prints with exactly two decimals.
pub fn money(value: Decimal) -> String {
    format!("{:.2}", value.round_dp_with_strategy(2, RoundingStrategy::MidpointNearestEven))
}

fn in_scope(c: &Compound, usage: &UsageRequest) -> bool {
    let instance_ok = c.instance.as_ref().is_none_or(|i| usage.instance.as_ref() == Some(&i.node));
    let region_ok = c.region.as_ref().is_none_or(|r| usage.region.as_deref() == Some(r.code.as_str()));
    instance_ok && region_ok
}

pub fn applicable_compounds<'a>(plan: &'a PricingPlan, usage: &UsageRequest) -> Vec<&'a Compound> {
    plan.compounds
        .iter()
        .filter(|c| in_scope(c, usage))
        .filter(|c| c.unit().is_some_and(|u| usage.amount(u).is_some()))
        .collect()
}

fn check_usage(usage: &UsageRequest) -> Result<(), PricingError> {
    let mut seen = BTreeSet::new();
    for q in &usage.quantities {
        if q.amount < Decimal::ZERO {
            return Err(PricingError::InvalidUsage(format!("negative quantity {} {}", q.amount, q.unit)));
        }
        if !seen.insert(q.unit.as_str()) {
            return Err(PricingError::InvalidUsage(format!("unit {} given twice", q.unit)));
        }
    }
    Ok(())
}

pub fn quote(plan: &PricingPlan, usage: &UsageRequest) -> Result<CostBreakdown, PricingError> {
    check_usage(usage)?;
    let applicable = applicable_compounds(plan, usage);

    let mut currencies: BTreeSet<&str> = applicable.iter().filter_map(|c| c.price_spec.as_ref()).map(|p| p.currency.as_str()).collect();
    if plan.currency_declared {
        currencies.insert(plan.currency.as_str());
    }
    if currencies.len() > 1 {
        return Err(PricingError::CurrencyConflict {
            plan: plan.node.clone(),
            currencies: currencies.into_iter().map(str::to_owned).collect(),
        });
    }
    let currency = currencies.into_iter().next().map_or_else(|| plan.currency.clone(), str::to_owned);

    let cap = applicable
        .iter()
        .filter_map(|c| c.price_spec.as_ref().and_then(|p| p.max_charge))
        .chain(plan.max_price)
        .min();

    let mut quantities: Vec<&Quantity> = usage.quantities.iter().collect();
    quantities.sort_by(|a, b| a.unit.cmp(&b.unit));

    let mut items = Vec::new();
    let mut allowance_applied = Vec::new();
    for q in quantities {
        let matching: Vec<&&Compound> = applicable.iter().filter(|c| c.unit() == Some(q.unit.as_str())).collect();
        let included: Decimal = matching
            .iter()
            .filter_map(|c| c.allowance.as_ref())
            .filter(|a| a.unit == q.unit)
            .map(|a| a.amount)
            .sum();
        let used = q.amount.min(included);
        if used > Decimal::ZERO {
            allowance_applied.push(Quantity::new(used, q.unit.clone()));
        }
        let remaining = q.amount - used;
        if remaining <= Decimal::ZERO {
            continue;
        }
        if cap == Some(Decimal::ZERO) {
            return Err(PricingError::AllowanceExceeded {
                plan: plan.node.clone(),
                unit: q.unit.clone(),
                requested: q.amount,
                included,
            });
        }
        let mut priced: Vec<(&Term, Decimal)> =
            matching.iter().filter_map(|c| c.price_spec.as_ref().map(|p| (&c.node, p.unit_price))).collect();
        if priced.is_empty() {
            return Err(PricingError::NoApplicableCompound { plan: plan.node.clone(), unit: q.unit.clone(), amount: q.amount });
        }
        priced.sort();
        for (node, unit_price) in priced {
            if unit_price < Decimal::ZERO {
                return Err(PricingError::InvalidPlan { plan: plan.node.clone(), reason: format!("negative unit price on {node}") });
            }
            items.push(LineItem {
                kind: LineKind::Usage,
                compound: node.clone(),
                unit: q.unit.clone(),
                billed_quantity: remaining,
                unit_price,
                subtotal: remaining * unit_price,
            });
        }
    }

    let mut total: Decimal = items.iter().map(|i| i.subtotal).sum();
    if let Some(cap) = cap {
        if total > cap {
            let adjustment = cap - total;
            items.push(LineItem {
                kind: LineKind::Cap,
                compound: plan.node.clone(),
                unit: String::new(),
                billed_quantity: Decimal::ONE,
                unit_price: adjustment,
                subtotal: adjustment,
            });
            total = cap;
        }
    }
    Ok(CostBreakdown { plan: plan.node.clone(), plan_name: plan.name.clone(), items, currency, total, allowance_applied })
}

/// The plan with the smallest total; ties go to the lexicographically first
/// plan name. Plans that cannot quote the usage are skipped.
pub fn cheapest_plan<'a>(plans: &'a [PricingPlan], usage: &UsageRequest) -> Result<(&'a PricingPlan, CostBreakdown), PricingError> {
    if plans.is_empty() {
        return Err(PricingError::NoPlans);
    }
    let mut best: Option<(&PricingPlan, CostBreakdown)> = None;
    let mut failures = Vec::new();
    for plan in plans {
        match quote(plan, usage) {
            Ok(cost) => {
                let better = best.as_ref().is_none_or(|(p, b)| (cost.total, &plan.name, &plan.node) < (b.total, &p.name, &p.node));
                if better {
                    best = Some((plan, cost));
                }
            }
            Err(e) => failures.push((plan.name.clone(), e)),
        }
    }
    best.ok_or(PricingError::NoneQuotable(failures))
}

/// Presentation view of a breakdown with money rounded to cents.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CostJson {
    pub plan: Term,
    pub plan_name: String,
    pub currency: String,
    pub total: String,
    pub items: Vec<LineJson>,
    pub allowance_applied: Vec<Quantity>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LineJson {
    pub kind: LineKind,
    pub compound: Term,
    pub unit: String,
    pub billed_quantity: Decimal,
    pub unit_price: Decimal,
    pub subtotal: String,
}

impl CostBreakdown {
    pub fn to_json(&self) -> CostJson {
        CostJson {
            plan: self.plan.clone(),
            plan_name: self.plan_name.clone(),
            currency: self.currency.clone(),
            total: money(self.total),
            items: self
                .items
                .iter()
                .map(|i| LineJson {
                    kind: i.kind,
                    compound: i.compound.clone(),
                    unit: i.unit.clone(),
                    billed_quantity: i.billed_quantity,
                    unit_price: i.unit_price,
                    subtotal: money(i.subtotal),
                })
                .collect(),
            allowance_applied: self.allowance_applied.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Instance, PriceSpec, Region};

    fn d(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    fn node(l: &str) -> Term {
        Term::blank(l).unwrap()
    }

    fn priced(label: &str, price: &str, unit: &str) -> Compound {
        Compound {
            node: node(label),
            price_spec: Some(PriceSpec { node: node(&format!("{label}_spec")), unit_price: d(price), currency: "USD".into(), unit: unit.into(), max_charge: None }),
            instance: None,
            region: None,
            allowance: None,
        }
    }

    fn plan(name: &str, compounds: Vec<Compound>) -> PricingPlan {
        PricingPlan { node: node(name), name: name.into(), min_price: None, max_price: None, currency: "USD".into(), currency_declared: true, compounds }
    }

    #[test]
    fn unscoped_compound_applies() {
        let p = plan("p", vec![priced("c", "0.10", "HRS")]);
        assert_eq!(applicable_compounds(&p, &UsageRequest::hours(d("100"))).len(), 1);
    }

    #[test]
    fn region_scope_mismatch() {
        let mut c = priced("c", "0.10", "HRS");
        c.region = Some(Region { node: node("r"), code: "us-east-1".into(), display_name: None });
        let p = plan("p", vec![c]);
        assert!(applicable_compounds(&p, &UsageRequest::hours(d("1")).in_region("eu-west-1")).is_empty());
        assert_eq!(applicable_compounds(&p, &UsageRequest::hours(d("1")).in_region("us-east-1")).len(), 1);
    }

    #[test]
    fn instance_scope_is_strict() {
        let mut c = priced("c", "0.10", "HRS");
        c.instance = Some(Instance { node: node("i"), ram_gb: None, cpu_model: None, cores: None, storage_gb: None });
        let p = plan("p", vec![c]);
        assert!(applicable_compounds(&p, &UsageRequest::hours(d("1"))).is_empty());
        assert_eq!(applicable_compounds(&p, &UsageRequest::hours(d("1")).on_instance(node("i"))).len(), 1);
    }

    #[test]
    fn two_components_add_up() {
        let p = plan("p", vec![priced("compute", "0.28", "HRS"), priced("storage", "0.02", "E34")]);
        let cost = quote(&p, &UsageRequest::hours(d("10")).with(d("5"), "E34")).unwrap();
        assert_eq!(cost.total, d("2.90"));
        assert_eq!(money(cost.total), "2.90");
    }

    #[test]
    fn cap_adds_adjustment_line() {
        let mut p = plan("p", vec![priced("c", "1", "HRS")]);
        p.max_price = Some(d("5"));
        let cost = quote(&p, &UsageRequest::hours(d("8"))).unwrap();
        assert_eq!(cost.total, d("5"));
        assert_eq!(cost.items.iter().map(|i| i.subtotal).sum::<Decimal>(), cost.total);
        assert_eq!(cost.items.last().unwrap().kind, LineKind::Cap);
    }

    #[test]
    fn mixed_currencies_conflict() {
        let mut eur = priced("e", "1", "E34");
        eur.price_spec.as_mut().unwrap().currency = "EUR".into();
        let mut p = plan("p", vec![priced("c", "1", "HRS"), eur]);
        p.currency_declared = false;
        assert!(matches!(quote(&p, &UsageRequest::hours(d("1")).with(d("1"), "E34")), Err(PricingError::CurrencyConflict { .. })));
    }

    #[test]
    fn unpriced_unit_errors_unless_zero() {
        let p = plan("p", vec![priced("c", "1", "HRS")]);
        assert!(matches!(quote(&p, &UsageRequest::new().with(d("3"), "E34")), Err(PricingError::NoApplicableCompound { .. })));
        assert_eq!(quote(&p, &UsageRequest::new().with(d("0"), "E34")).unwrap().total, Decimal::ZERO);
    }

    #[test]
    fn money_rounds_half_even() {
        assert_eq!(money(d("0.125")), "0.12");
        assert_eq!(money(d("0.135")), "0.14");
        assert_eq!(money(d("5")), "5.00");
    }
}
