#![allow(clippy::result_large_err)]

pub mod broker;
pub mod cli;
pub mod model;
pub mod pricing;
pub mod query;
pub mod rdf;
pub mod sla;
pub mod validate;
pub mod vocab;
