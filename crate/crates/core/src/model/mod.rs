//! Typed view of a service description: provider, services and the five
//! service aspects (interaction, SLA, function, authentication, pricing).
//!
//! [`extract_provider`] lifts a graph into these types and [`lower`] writes
//! them back. Node references are kept, so lowering reuses the source's
//! blank-node labels; only wrapper nodes (quantitative values and the like)
//! get fresh labels.
//!
//! JSON uses camelCase field names. CLI output wraps it in an envelope
//! carrying [`SCHEMA_VERSION`].

mod extract;
mod lower;

pub use extract::{
    extract_function, extract_pricing, extract_provider, extract_service, extract_sla, list_providers, list_services,
};
pub use lower::lower;
pub(crate) use extract::{curie, extract_authentication, extract_interaction, sla_agreement};
pub(crate) use lower::{check_compensation, check_interval};

use rust_decimal::Decimal;
use serde::Serialize;
use thiserror::Error;

use crate::rdf::Term;

/// Version of the JSON shape emitted for typed objects.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ServiceProvider {
    pub node: Term,
    pub label: Option<String>,
    pub description: Option<String>,
    pub name: String,
    pub legal_name: String,
    pub naics: Option<String>,
    pub url: Option<String>,
    pub location: Option<PostalAddress>,
    pub contacts: Vec<ContactPoint>,
    pub services: Vec<MLService>,
    pub catalog_ref: Option<Term>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PostalAddress {
    pub country: Option<String>,
    pub locality: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ContactPoint {
    pub contact_type: Option<String>,
    pub languages: Vec<String>,
    pub email: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MLService {
    pub node: Term,
    pub label: Option<String>,
    pub description: Option<String>,
    pub interaction: Option<InteractionPoint>,
    pub sla: Option<SlaAgreement>,
    /// One entry per `dmcc:hasFunction` link, in node order.
    pub functions: Vec<MLFunction>,
    pub authentication: Option<Authentication>,
    pub pricing: Vec<PricingPlan>,
}

impl MLService {
    pub fn new(node: Term) -> Self {
        MLService {
            node,
            label: None,
            description: None,
            interaction: None,
            sla: None,
            functions: Vec::new(),
            authentication: None,
            pricing: Vec::new(),
        }
    }

    /// The first function, which is the only one in every shipped fixture.
    pub fn function(&self) -> Option<&MLFunction> {
        self.functions.first()
    }
}

pub const HTTP_METHODS: &[&str] = &["GET", "POST", "PUT", "DELETE", "PATCH"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InteractionPoint {
    pub node: Term,
    pub http_method: Option<String>,
    pub url_template: Option<String>,
    pub content_type: Option<String>,
    pub parameters: Vec<ActionParameter>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ActionParameter {
    pub name: String,
    pub description: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Requirement {
    All,
    None,
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Mechanism {
    Direct,
    #[serde(rename = "oauth")]
    OAuth,
    /// Any other mechanism class, by IRI.
    Other(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Credential {
    #[serde(rename_all = "camelCase")]
    ApiKey { grounding_field: String },
    UsernamePassword,
    Token,
    Other(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Transmission {
    ViaUri,
    ViaHeader,
    Other(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Authentication {
    pub node: Term,
    pub label: Option<String>,
    pub description: Option<String>,
    pub requires: Option<Requirement>,
    pub mechanism: Option<Mechanism>,
    pub credential: Option<Credential>,
    pub transmission: Option<Transmission>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SlaAgreement {
    pub node: Term,
    pub terms: Vec<SlaTerm>,
}

/// One agreement term. `definitions[i]` is compensated by
/// `compensations[i]`; both are ordered by interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SlaTerm {
    pub node: Term,
    pub name: String,
    pub definitions: Vec<Interval>,
    pub compensations: Vec<Compensation>,
    /// True when pairing fell back to node order for lack of
    /// `ccsla:hasCompensation` links.
    #[serde(skip)]
    pub paired_by_order: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Interval {
    pub node: Term,
    pub min: Decimal,
    pub max: Decimal,
    /// Normalized unit text, e.g. `percent`.
    pub unit: String,
}

impl Interval {
    /// Half-open membership: `min <= value < max`.
    pub fn contains(&self, value: Decimal) -> bool {
        self.min <= value && value < self.max
    }

    pub fn is_percent(&self) -> bool {
        self.unit == "percent"
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum CompensationKind {
    PercentOfBill,
    ServiceCredits,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Compensation {
    pub node: Term,
    pub kind: CompensationKind,
    pub amount: Decimal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PricingPlan {
    pub node: Term,
    pub name: String,
    pub min_price: Option<Decimal>,
    pub max_price: Option<Decimal>,
    pub currency: String,
    /// False when the plan states no currency and `currency` was inferred.
    #[serde(skip)]
    pub currency_declared: bool,
    pub compounds: Vec<Compound>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Compound {
    pub node: Term,
    pub price_spec: Option<PriceSpec>,
    pub instance: Option<Instance>,
    pub region: Option<Region>,
    pub allowance: Option<Quantity>,
}

impl Compound {
    /// Unit this compound prices or grants: the price spec's, else the
    /// allowance's.
    pub fn unit(&self) -> Option<&str> {
        self.price_spec.as_ref().map(|p| p.unit.as_str()).or(self.allowance.as_ref().map(|a| a.unit.as_str()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PriceSpec {
    pub node: Term,
    pub unit_price: Decimal,
    pub currency: String,
    pub unit: String,
    pub max_charge: Option<Decimal>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Instance {
    pub node: Term,
    #[serde(rename = "ramGB")]
    pub ram_gb: Option<Decimal>,
    pub cpu_model: Option<String>,
    pub cores: Option<i64>,
    #[serde(rename = "storageGB")]
    pub storage_gb: Option<Decimal>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Region {
    pub node: Term,
    pub code: String,
    pub display_name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Quantity {
    pub amount: Decimal,
    pub unit: String,
}

impl Quantity {
    pub fn new(amount: Decimal, unit: impl Into<String>) -> Self {
        Quantity { amount, unit: unit.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MLFunction {
    pub node: Term,
    pub name: String,
    /// Node of the `ccdm:MLServiceInputParameters` list, when there is one.
    pub parameter_list: Option<Term>,
    pub parameters: Vec<Parameter>,
    pub inputs: Vec<DataInputSpec>,
    pub outputs: Vec<OutputSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Parameter {
    pub node: Term,
    pub title: String,
    pub description: Option<String>,
    pub default_value: Option<String>,
    pub mandatory: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DataInputSpec {
    pub node: Term,
    pub description: Option<String>,
    pub format: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum OutputKind {
    Model,
    ModelEvaluation,
    Data,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OutputSpec {
    pub node: Term,
    /// The `ccdm:MLServiceOutput` grouping node this output hangs from.
    pub group: Option<Term>,
    pub kind: OutputKind,
    pub format: Option<String>,
    pub storage_bucket: Option<String>,
    pub title: Option<String>,
    pub description: Option<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("{node} is not typed {class}")]
    WrongType { node: Term, class: &'static str },
    #[error("{node} {} points at {target}, which has no triples", extract::curie(predicate))]
    DanglingReference { node: Term, predicate: &'static str, target: Term },
    #[error("{node} {}: malformed literal {lexical:?} ({reason})", extract::curie(predicate))]
    MalformedLiteral { node: Term, predicate: &'static str, lexical: String, reason: &'static str },
    #[error("{node}: malformed interval ({reason})")]
    MalformedInterval { node: Term, reason: &'static str },
    #[error("{node}: unknown unit {unit:?}")]
    UnknownUnit { node: Term, unit: String },
    #[error("{node}: {reason}")]
    Malformed { node: Term, reason: String },
    #[error("invariant violated on {field}: {reason}")]
    InvariantViolation { field: String, reason: String },
}

impl ModelError {
    pub fn node(&self) -> Option<&Term> {
        match self {
            ModelError::WrongType { node, .. }
            | ModelError::DanglingReference { node, .. }
            | ModelError::MalformedLiteral { node, .. }
            | ModelError::MalformedInterval { node, .. }
            | ModelError::UnknownUnit { node, .. }
            | ModelError::Malformed { node, .. } => Some(node),
            ModelError::InvariantViolation { .. } => None,
        }
    }
}

/// `{"schemaVersion": 1, <key>: value}` as pretty JSON.
pub fn to_json_envelope<T: Serialize>(key: &str, value: &T) -> String {
    let mut map = serde_json::Map::new();
    map.insert("schemaVersion".into(), SCHEMA_VERSION.into());
    map.insert(key.into(), serde_json::to_value(value).expect("model serializes"));
    serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("json")
}
