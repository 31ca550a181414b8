//! Every vocabulary term the service schema uses, with its IRI, kind and a
//! short note.
//!
//! The `dmcc`/`cc*` namespaces are project constants declared here and
//! nowhere else. The reused vocabularies (GoodRelations, schema.org, waa,
//! ML-Schema, Dublin Core) use their published namespaces.

use std::collections::HashMap;
use std::sync::LazyLock;

use rust_decimal::Decimal;
use serde::Serialize;
use thiserror::Error;

use crate::rdf::{Iri, PrefixMap, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Class,
    Property,
    /// A named instance used as a value, e.g. `waa:All`.
    Individual,
}

/// Result of [`TermRegistry::kind_of`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermKind {
    Class,
    Property,
    Individual,
    Unknown,
}

macro_rules! vocabulary {
    ($( $module:ident $prefix:literal $ns:literal {
        $( $kind:ident $name:ident = $local:literal : $note:literal ; )*
    } )*) => {
        $(
            #[allow(dead_code)]
            pub mod $module {
                pub const PREFIX: &str = $prefix;
                pub const NS: &str = $ns;
                $( pub const $name: &str = concat!($ns, $local); )*
            }
        )*
        const NAMESPACES: &[(&str, &str)] = &[ $( ($prefix, $ns), )* ];
        const TABLE: &[(&str, &str, Kind, &str)] = &[ $( $( ($prefix, $local, Kind::$kind, $note), )* )* ];
    };
}

vocabulary! {
    dmcc "dmcc" "http://dicits.ugr.es/linkeddata/dmservices/ns/dmcc#" {
        Class ML_SERVICE_PROVIDER = "MLServiceProvider": "Entity offering data-mining services";
        Class ML_SERVICE = "MLService": "A data-mining service offered by a provider";
        Class SERVICE_AUTHENTICATION = "ServiceAuthentication": "Authentication aspect of a service";
        Class INTERACTION = "Interaction": "Interaction point of a service";
        Property HAS_ML_SERVICE = "hasMLService": "Provider to service";
        Property HAS_OFFER_CATALOG = "hasOfferCatalog": "Provider to its catalogue of services";
        Property HAS_INTERACTION_POINT = "hasInteractionPoint": "Service to interaction point";
        Property HAS_SERVICE_COMMITMENT = "hasServiceCommitment": "Service to SLA";
        Property HAS_FUNCTION = "hasFunction": "Service to ML function";
        Property HAS_AUTHENTICATION = "hasAuthentication": "Service to authentication";
        Property HAS_PRICING_PLAN = "hasPricingPlan": "Service to pricing plan";
        Property HAS_ENTRY_POINT = "hasEntryPoint": "Interaction to schema.org Action";
    }
    ccdm "ccdm" "http://dicits.ugr.es/linkeddata/dmservices/ns/ccdm#" {
        Class ML_FUNCTION = "MLFunction": "Operation, function or algorithm to execute";
        Class ML_SERVICE_INPUT = "MLServiceInput": "Input data of a function";
        Class ML_SERVICE_OUTPUT = "MLServiceOutput": "Output of a function run";
        Class ML_SERVICE_INPUT_PARAMETERS = "MLServiceInputParameters": "Parameter list of a function";
        Class ML_SERVICE_INPUT_PARAMETER = "MLServiceInputParameter": "One hyper-parameter";
        Class PMML_MODEL = "PMML_Model": "Model output serialized as PMML";
        Property HAS_INPUT_PARAMETERS = "hasInputParameters": "Function to its parameters";
        Property HAS_PARAMETER = "hasParameter": "Parameter list to one parameter";
        Property DEFAULT_VALUE = "defaultvalue": "Default value of a parameter";
        Property MANDATORY = "mandatory": "Whether a parameter is required";
        Property STORAGE_BUCKET = "storagebucket": "Where an output is stored";
        Property FORMAT = "format": "Format of an input or output";
    }
    mls "mls" "http://www.w3.org/ns/mls#" {
        Class MODEL = "Model": "Model generated by a run";
        Class MODEL_EVALUATION = "ModelEvaluation": "Performance measures of a model";
        Class DATA = "Data": "Tables, columns, rows or values";
        Class TASK = "Task": "Part of an experiment to perform";
        Property HAS_INPUT = "hasInput": "Function to input";
        Property HAS_OUTPUT = "hasOutput": "Function to output";
    }
    ccsla "ccsla" "http://dicits.ugr.es/linkeddata/dmservices/ns/ccsla#" {
        Class SLA = "SLA": "Service level agreement";
        Class TERM = "Term": "Agreement term, e.g. monthly uptime percentage";
        Class DEFINITION = "Definition": "One metric range of a term";
        Class COMPENSATION = "Compensation": "What is owed when a range is hit";
        Property CONTAINS_TERM = "containsTerm": "SLA to term";
        Property HAS_DEFINITION = "hasDefinition": "Term to definition";
        Property HAS_DEFINITION_VALUE = "hasDefinitionValue": "Definition to its structured value";
        Property HAS_COMPENSATION = "hasCompensation": "Definition (or term) to compensation";
        Property HAS_COMPENSATION_VALUE = "hasCompensationValue": "Compensation to its quantitative value";
    }
    ccpricing "ccpricing" "http://dicits.ugr.es/linkeddata/dmservices/ns/ccpricing#" {
        Class PRICING_PLAN = "PricingPlan": "A price plan, e.g. free or premium";
        Class COMPOUND = "Compound": "One component of a plan's price";
        Property HAS_COMPOUND = "hasCompound": "Plan to compound";
        Property HAS_PRICE_SPECIFICATION = "hasPriceSpecification": "Compound to price specification";
        Property HAS_INSTANCE = "hasInstance": "Compound scoped to an instance";
        Property HAS_REGION = "hasRegion": "Compound scoped to a region";
        Property MIN_PRICE = "minPrice": "Lower price bound of a plan";
        Property MAX_PRICE = "maxPrice": "Upper price bound of a plan";
    }
    ccinstances "ccinstances" "http://dicits.ugr.es/linkeddata/dmservices/ns/ccinstances#" {
        Class INSTANCE = "Instance": "Machine a service runs on";
        Class RAM = "ram": "Memory description";
        Class CPU = "cpu": "Processor description";
        Class STORAGE = "storage": "Disk description";
        Property HAS_RAM = "hasRAM": "Instance to memory";
        Property HAS_CPU = "hasCPU": "Instance to processor";
        Property HAS_STORAGE = "hasStorage": "Instance to disk";
        Property CPU_MODEL = "cpu_model": "Processor model name";
        Property CPU_CORES = "cpu_cores": "Number of cores";
    }
    ccregions "ccregions" "http://dicits.ugr.es/linkeddata/dmservices/ns/ccregions#" {
        Class REGION = "Region": "Provider location or region";
        Property REGION_CODE = "regionCode": "Provider's code for the region";
    }
    gr "gr" "http://purl.org/goodrelations/v1#" {
        Class PRICE_SPECIFICATION = "PriceSpecification": "Price of a good or service";
        Class OFFERING = "Offering": "An offer";
        Class TYPE_AND_QUALITY_NODE = "TypeAndQualityNode": "Included amount of a good";
        Property NAME = "name": "Name";
        Property LEGAL_NAME = "legalName": "Legal name";
        Property HAS_NAICS = "hasNAICS": "NAICS industry code";
        Property MAX = "max": "Maximum charge";
        Property PRICE_CURRENCY = "priceCurrency": "ISO 4217 currency";
        Property HAS_CURRENCY_VALUE = "hasCurrencyValue": "Price per unit";
        Property INCLUDES_OBJECT = "includesObject": "Included amount";
        Property AMOUNT_OF_THIS_GOOD = "amountOfThisGood": "Quantity";
        Property HAS_UNIT_OF_MEASUREMENT = "hasUnitOfMeasurement": "UN/CEFACT unit code";
    }
    schema "s" "http://schema.org/" {
        Class POSTAL_ADDRESS = "PostalAddress": "Postal address";
        Class CONTACT_POINT_CLASS = "ContactPoint": "Contact point";
        Class LANGUAGE = "Language": "Natural language";
        Class ACTION = "Action": "An action on a resource";
        Class ENTRY_POINT = "EntryPoint": "Target of an action";
        Class STRUCTURED_VALUE = "structuredValue": "Structured value wrapper";
        Class QUANTITATIVE_VALUE = "QuantitativeValue": "Value with unit and bounds";
        Class PROPERTY_VALUE_SPECIFICATION = "PropertyValueSpecification": "Action input description";
        Property URL = "url": "Web address";
        Property SERVICE_LOCATION = "serviceLocation": "Where the provider is";
        Property ADDRESS_COUNTRY = "addressCountry": "Country";
        Property ADDRESS_LOCALITY = "addressLocality": "Locality";
        Property CONTACT_POINT = "contactPoint": "Provider to contact point";
        Property CONTACT_TYPE = "contactType": "Kind of contact";
        Property AVAILABLE_LANGUAGE = "availableLanguage": "Languages a contact speaks";
        Property NAME = "name": "Name";
        Property EMAIL = "email": "Email address";
        Property DESCRIPTION = "description": "Description";
        Property VALUE = "value": "Value";
        Property MAX_VALUE = "maxValue": "Upper bound";
        Property MIN_VALUE = "minValue": "Lower bound";
        Property UNIT_TEXT = "unitText": "Free-text unit";
        Property UNIT_CODE = "unitCode": "UN/CEFACT unit code";
        Property TARGET = "target": "Action to entry point";
        Property HTTP_METHOD = "httpMethod": "HTTP method";
        Property URL_TEMPLATE = "urlTemplate": "URL template";
        Property CONTENT_TYPE = "contentType": "Media type";
        Property OBJECT = "object": "Action input";
        Property VALUE_NAME = "valueName": "Name of an action input";
    }
    waa "waa" "http://purl.oclc.org/NET/WebApiAuthentication#" {
        Class WEB_API_AUTHENTICATION = "WebApiAuthentication": "Web API authentication description";
        Class DIRECT = "Direct": "Credentials sent directly";
        Class OAUTH = "OAuth": "OAuth mechanism";
        Class API_KEY = "APIkey": "API key credential";
        Class USERNAME_PASSWORD = "UsernamePassword": "Username and password credential";
        Class TOKEN = "Token": "Token credential";
        Property REQUIRES_AUTHENTICATION = "requiresAuthentication": "Which operations need authentication";
        Property HAS_AUTHENTICATION_MECHANISM = "hasAuthenticationMechanism": "Authentication to mechanism";
        Property HAS_INPUT_CREDENTIALS = "hasInputCredentials": "Mechanism to credential";
        Property IS_GROUNDED_IN = "isGroundedIn": "Field carrying the credential";
        Property WAY_OF_SENDING_INFORMATION = "wayOfSendingInformation": "How credentials travel";
        Individual ALL = "All": "Every operation needs authentication";
        Individual NONE = "None": "No operation needs authentication";
        Individual SOME = "Some": "Some operations need authentication";
        Individual VIA_URI = "ViaURI": "Credentials in the URI";
        Individual VIA_HEADER = "ViaHTTPHeader": "Credentials in an HTTP header";
    }
    dc "dc" "http://purl.org/dc/terms/" {
        Property TITLE = "title": "Title";
        Property DESCRIPTION = "description": "Description";
        Property FORMAT = "format": "Format";
    }
    rdfs "rdfs" "http://www.w3.org/2000/01/rdf-schema#" {
        Property LABEL = "label": "Human label";
        Property COMMENT = "comment": "Comment";
    }
    rdf "rdf" "http://www.w3.org/1999/02/22-rdf-syntax-ns#" {
        Property TYPE = "type": "Class membership";
        Class LANG_STRING = "langString": "Language-tagged string";
    }
    xsd "xsd" "http://www.w3.org/2001/XMLSchema#" {
        Class STRING = "string": "String datatype";
        Class INTEGER = "integer": "Integer datatype";
        Class DECIMAL = "decimal": "Decimal datatype";
        Class DOUBLE = "double": "Double datatype";
        Class BOOLEAN = "boolean": "Boolean datatype";
    }
}

/// Accepted alternate spellings: (alias curie, canonical curie). Aliases are
/// read, never written.
const ALIASES: &[(&str, &str)] = &[("ccsla:cointainsTerm", "ccsla:containsTerm")];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VocabTerm {
    pub curie: String,
    pub iri: Iri,
    pub kind: Kind,
    pub note: &'static str,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VocabError {
    #[error("malformed CURIE {0:?} (expected prefix:local)")]
    MalformedCurie(String),
    #[error("unknown prefix {0:?}")]
    UnknownPrefix(String),
    #[error("unknown term {0:?}")]
    UnknownTerm(String),
}

pub struct TermRegistry {
    prefixes: PrefixMap,
    terms: Vec<VocabTerm>,
    by_curie: HashMap<String, usize>,
    by_iri: HashMap<String, usize>,
}

static REGISTRY: LazyLock<TermRegistry> = LazyLock::new(TermRegistry::build);

/// The shared, immutable registry.
pub fn registry() -> &'static TermRegistry {
    &REGISTRY
}

impl TermRegistry {
    fn build() -> Self {
        let mut prefixes = PrefixMap::new();
        for (prefix, ns) in NAMESPACES {
            prefixes.insert(*prefix, Iri::from_static(ns)).expect("valid namespace");
        }
        let mut terms = Vec::with_capacity(TABLE.len());
        let mut by_curie = HashMap::new();
        let mut by_iri = HashMap::new();
        for (prefix, local, kind, note) in TABLE {
            let iri = Iri::new(prefixes.expand(prefix, local).unwrap()).expect("valid term IRI");
            let curie = format!("{prefix}:{local}");
            let prev = by_curie.insert(curie.clone(), terms.len());
            assert!(prev.is_none(), "duplicate curie {curie}");
            by_iri.insert(iri.as_str().to_owned(), terms.len());
            terms.push(VocabTerm { curie, iri, kind: *kind, note });
        }
        for (alias, canonical) in ALIASES {
            let idx = by_curie[*canonical];
            let (prefix, local) = alias.split_once(':').unwrap();
            by_iri.insert(prefixes.expand(prefix, local).unwrap(), idx);
            by_curie.insert((*alias).to_owned(), idx);
        }
        TermRegistry { prefixes, terms, by_curie, by_iri }
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn terms(&self) -> &[VocabTerm] {
        &self.terms
    }

    /// Expands a CURIE by its registered prefix. Aliases resolve to their
    /// canonical IRI; unregistered local names under a known prefix are
    /// still expanded.
    pub fn resolve(&self, curie: &str) -> Result<Iri, VocabError> {
        if let Some(&idx) = self.by_curie.get(curie) {
            return Ok(self.terms[idx].iri.clone());
        }
        let (prefix, local) = curie.split_once(':').ok_or_else(|| VocabError::MalformedCurie(curie.to_owned()))?;
        let expanded = self.prefixes.expand(prefix, local).ok_or_else(|| VocabError::UnknownPrefix(prefix.to_owned()))?;
        Iri::new(expanded).map_err(|_| VocabError::MalformedCurie(curie.to_owned()))
    }

    /// Like [`resolve`](Self::resolve) but the term itself must be registered.
    pub fn resolve_strict(&self, curie: &str) -> Result<Iri, VocabError> {
        let iri = self.resolve(curie)?;
        if self.by_curie.contains_key(curie) {
            Ok(iri)
        } else {
            Err(VocabError::UnknownTerm(curie.to_owned()))
        }
    }

    /// Reverse lookup; alias IRIs map to the canonical term.
    pub fn lookup(&self, iri: &str) -> Option<&VocabTerm> {
        self.by_iri.get(iri).map(|&i| &self.terms[i])
    }

    pub fn by_curie(&self, curie: &str) -> Option<&VocabTerm> {
        self.by_curie.get(curie).map(|&i| &self.terms[i])
    }

    /// True for IRIs that are a registered alias spelling, not the canonical one.
    pub fn is_alias(&self, iri: &str) -> bool {
        self.lookup(iri).is_some_and(|t| t.iri.as_str() != iri)
    }

    pub fn kind_of(&self, iri: &Iri) -> TermKind {
        match self.lookup(iri.as_str()).map(|t| t.kind) {
            Some(Kind::Class) => TermKind::Class,
            Some(Kind::Property) => TermKind::Property,
            Some(Kind::Individual) => TermKind::Individual,
            None => TermKind::Unknown,
        }
    }

    /// The term manifest consumed by docs and tooling: one entry per
    /// registered spelling, aliases pointing at their canonical CURIE.
    pub fn manifest_json(&self) -> String {
        #[derive(Serialize)]
        struct Entry<'a> {
            curie: &'a str,
            iri: &'a str,
            kind: Kind,
            note: &'a str,
            #[serde(rename = "aliasOf", skip_serializing_if = "Option::is_none")]
            alias_of: Option<&'a str>,
        }
        #[derive(Serialize)]
        struct Manifest<'a> {
            namespaces: Vec<(&'a str, &'a str)>,
            terms: Vec<Entry<'a>>,
            units: Vec<&'a Unit>,
        }
        let mut terms: Vec<Entry> = self
            .terms
            .iter()
            .map(|t| Entry { curie: &t.curie, iri: t.iri.as_str(), kind: t.kind, note: t.note, alias_of: None })
            .collect();
        for (alias, canonical) in ALIASES {
            let t = self.by_curie(canonical).unwrap();
            terms.push(Entry {
                curie: alias,
                iri: t.iri.as_str(),
                kind: t.kind,
                note: "Accepted misspelling; never emitted",
                alias_of: Some(canonical),
            });
        }
        let manifest = Manifest { namespaces: NAMESPACES.to_vec(), terms, units: UNITS.iter().collect() };
        let mut out = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        out.push('\n');
        out
    }
}

/// Shorthand for `registry().resolve(curie)`.
pub fn resolve(curie: &str) -> Result<Iri, VocabError> {
    registry().resolve(curie)
}

pub fn kind_of(iri: &Iri) -> TermKind {
    registry().kind_of(iri)
}

/// A registered IRI constant as a graph term.
pub fn term(iri: &'static str) -> Term {
    Term::Iri(Iri::from_static(iri))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Time,
    Information,
    Count,
}

/// A UN/CEFACT unit code the pricing model understands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Unit {
    pub code: &'static str,
    pub name: &'static str,
    pub dimension: Dimension,
    /// Size in gigabytes for information units, as (mantissa, scale).
    #[serde(skip)]
    gigabytes: Option<(i64, u32)>,
}

impl Unit {
    pub fn gigabytes(&self) -> Option<Decimal> {
        self.gigabytes.map(|(m, s)| Decimal::new(m, s))
    }
}

pub const UNITS: &[Unit] = &[
    Unit { code: "HRS", name: "hour", dimension: Dimension::Time, gigabytes: None },
    Unit { code: "MIN", name: "minute", dimension: Dimension::Time, gigabytes: None },
    Unit { code: "SEC", name: "second", dimension: Dimension::Time, gigabytes: None },
    Unit { code: "DAY", name: "day", dimension: Dimension::Time, gigabytes: None },
    Unit { code: "MON", name: "month", dimension: Dimension::Time, gigabytes: None },
    Unit { code: "2P", name: "kilobyte", dimension: Dimension::Information, gigabytes: Some((1, 6)) },
    Unit { code: "4L", name: "megabyte", dimension: Dimension::Information, gigabytes: Some((1, 3)) },
    Unit { code: "E34", name: "gigabyte", dimension: Dimension::Information, gigabytes: Some((1, 0)) },
    Unit { code: "E35", name: "terabyte", dimension: Dimension::Information, gigabytes: Some((1000, 0)) },
    Unit { code: "C62", name: "one", dimension: Dimension::Count, gigabytes: None },
];

pub fn unit(code: &str) -> Option<&'static Unit> {
    UNITS.iter().find(|u| u.code == code)
}

/// Canonical form of a free-text unit: every spelling of percent (including
/// the listing's "Percentaje") becomes `percent`; anything else is trimmed
/// and lowercased.
pub fn normalize_unit_text(text: &str) -> String {
    let t = text.trim().to_lowercase();
    match t.as_str() {
        "%" | "percent" | "percentage" | "percentaje" | "porcentaje" | "pct" => "percent".to_owned(),
        "credit" | "credits" | "service credits" | "servicecredits" => "credits".to_owned(),
        _ => t,
    }
}

const ISO_4217: &[&str] = &[
    "AED", "AFN", "ALL", "AMD", "ANG", "AOA", "ARS", "AUD", "AWG", "AZN", "BAM", "BBD", "BDT", "BGN", "BHD", "BIF",
    "BMD", "BND", "BOB", "BRL", "BSD", "BTN", "BWP", "BYN", "BZD", "CAD", "CDF", "CHF", "CLP", "CNY", "COP", "CRC",
    "CUP", "CVE", "CZK", "DJF", "DKK", "DOP", "DZD", "EGP", "ERN", "ETB", "EUR", "FJD", "FKP", "GBP", "GEL", "GHS",
    "GIP", "GMD", "GNF", "GTQ", "GYD", "HKD", "HNL", "HTG", "HUF", "IDR", "ILS", "INR", "IQD", "IRR", "ISK", "JMD",
    "JOD", "JPY", "KES", "KGS", "KHR", "KMF", "KPW", "KRW", "KWD", "KYD", "KZT", "LAK", "LBP", "LKR", "LRD", "LSL",
    "LYD", "MAD", "MDL", "MGA", "MKD", "MMK", "MNT", "MOP", "MRU", "MUR", "MVR", "MWK", "MXN", "MYR", "MZN", "NAD",
    "NGN", "NIO", "NOK", "NPR", "NZD", "OMR", "PAB", "PEN", "PGK", "PHP", "PKR", "PLN", "PYG", "QAR", "RON", "RSD",
    "RUB", "RWF", "SAR", "SBD", "SCR", "SDG", "SEK", "SGD", "SHP", "SLE", "SOS", "SRD", "SSP", "STN", "SVC", "SYP",
    "SZL", "THB", "TJS", "TMT", "TND", "TOP", "TRY", "TTD", "TWD", "TZS", "UAH", "UGX", "USD", "UYU", "UZS", "VES",
    "VND", "VUV", "WST", "XAF", "XCD", "XOF", "XPF", "YER", "ZAR", "ZMW", "ZWL",
];

pub fn is_iso_currency(code: &str) -> bool {
    ISO_4217.binary_search(&code).is_ok()
}
