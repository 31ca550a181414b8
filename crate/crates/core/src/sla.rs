//! Compensation owed under an agreement for an observed metric value.
//!
//! Ranges are half-open, `[min, max)`, so a value on a shared endpoint
//! belongs to the upper range. The topmost range also takes `value == max`
//! when nothing sits above it.

use rust_decimal::Decimal;
use serde::Serialize;
use thiserror::Error;

use crate::model::{Compensation, CompensationKind, SlaAgreement, SlaTerm};
use crate::vocab::normalize_unit_text;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observation {
    pub term_name: String,
    pub value: Decimal,
    pub unit: String,
}

impl Observation {
    /// An observation in percent, the unit of uptime terms.
    pub fn percent(term_name: impl Into<String>, value: Decimal) -> Self {
        Observation { term_name: term_name.into(), value, unit: "percent".into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompensationResult {
    /// Index into the term's `definitions`.
    pub matched: Option<usize>,
    pub compensation: Option<Compensation>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlaError {
    #[error("agreement has no term named {0:?}")]
    UnknownTerm(String),
    #[error("observation is in {found:?} but term {term:?} is measured in {expected:?}")]
    UnitMismatch { term: String, expected: String, found: String },
    #[error("term {term:?} has {definitions} definitions but {compensations} compensations")]
    Unpaired { term: String, definitions: usize, compensations: usize },
}

/// Term lookup by name, ignoring case and surrounding space.
pub fn find_term<'a>(sla: &'a SlaAgreement, name: &str) -> Option<&'a SlaTerm> {
    let want = name.trim().to_lowercase();
    sla.terms.iter().find(|t| t.name.trim().to_lowercase() == want)
}

/// Index of the range containing `value`, if any.
pub fn match_interval(term: &SlaTerm, value: Decimal) -> Option<usize> {
    if let Some(i) = term.definitions.iter().position(|d| d.contains(value)) {
        return Some(i);
    }
    let (top_idx, top) = term.definitions.iter().enumerate().max_by(|a, b| (a.1.max, a.1.min).cmp(&(b.1.max, b.1.min)))?;
    (value == top.max).then_some(top_idx)
}

pub fn compensation_for(sla: &SlaAgreement, obs: &Observation) -> Result<CompensationResult, SlaError> {
    let term = find_term(sla, &obs.term_name).ok_or_else(|| SlaError::UnknownTerm(obs.term_name.clone()))?;
    let found = normalize_unit_text(&obs.unit);
    if let Some(expected) = term.definitions.iter().map(|d| d.unit.as_str()).find(|u| !u.is_empty()) {
        if !found.is_empty() && found != expected {
            return Err(SlaError::UnitMismatch { term: term.name.clone(), expected: expected.to_owned(), found });
        }
    }
    if term.definitions.len() != term.compensations.len() {
        return Err(SlaError::Unpaired {
            term: term.name.clone(),
            definitions: term.definitions.len(),
            compensations: term.compensations.len(),
        });
    }
    Ok(match match_interval(term, obs.value) {
        Some(i) => CompensationResult { matched: Some(i), compensation: Some(term.compensations[i].clone()) },
        None => CompensationResult::default(),
    })
}

/// What the result is worth against a bill: a share of it for percentage
/// compensation, the credit count itself for service credits.
pub fn compensation_amount(result: &CompensationResult, billed: Decimal) -> Decimal {
    match &result.compensation {
        None => Decimal::ZERO,
        Some(c) => match c.kind {
            CompensationKind::PercentOfBill => billed * c.amount / Decimal::ONE_HUNDRED,
            CompensationKind::ServiceCredits => c.amount,
        },
    }
}

/// JSON view: `{"matched": i|null, "kind": ..., "amount": ...}`.
#[derive(Clone, Debug, Serialize)]
pub struct CompensationJson {
    pub matched: Option<usize>,
    pub kind: Option<CompensationKind>,
    pub amount: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub owed: Option<Decimal>,
}

impl CompensationResult {
    pub fn to_json(&self, billed: Option<Decimal>) -> CompensationJson {
        CompensationJson {
            matched: self.matched,
            kind: self.compensation.as_ref().map(|c| c.kind),
            amount: self.compensation.as_ref().map(|c| c.amount),
            owed: billed.map(|b| compensation_amount(self, b).round_dp(2)),
        }
    }
}
