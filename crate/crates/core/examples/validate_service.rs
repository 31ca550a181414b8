//! Validate a description and show what breaks when an aspect is removed.

use dmcc::rdf::parse_turtle;
use dmcc::validate::{validate, validate_strict, RULES};

fn load(name: &str) -> dmcc::rdf::Graph {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_turtle(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn main() {
    let full = load("full.ttl");
    let report = validate(&full);
    println!("full.ttl has errors: {}", report.has_errors());
    print!("{}", report.to_text());

    println!();
    let broken = load("missing-sla.ttl");
    print!("{}", validate(&broken).to_text());

    println!();
    let strict = validate_strict(&full);
    println!("strict mode: {} error(s), {} warning(s)", strict.counts.errors, strict.counts.warnings);

    println!();
    println!("{} rules:", RULES.len());
    for (code, severity, what) in RULES {
        println!("  {code:<27} {:<8} {what}", format!("{severity:?}"));
    }
}
