//! Lift the provider and its services into typed values and walk them.

use dmcc::model::{extract_provider, list_providers, lower, to_json_envelope};
use dmcc::rdf::{isomorphic, parse_turtle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/full.ttl");
    let g = parse_turtle(&std::fs::read_to_string(path)?)?;

    for node in list_providers(&g) {
        let p = extract_provider(&g, &node)?;
        println!("{} ({}), NAICS {}", p.name, p.legal_name, p.naics.as_deref().unwrap_or("-"));
        for svc in &p.services {
            println!("  {}", svc.label.as_deref().unwrap_or("unlabelled service"));
            for f in &svc.functions {
                println!("    {}", f.name);
                for param in &f.parameters {
                    println!(
                        "      {} default={} mandatory={}",
                        param.title,
                        param.default_value.as_deref().unwrap_or("-"),
                        param.mandatory
                    );
                }
            }
            for plan in &svc.pricing {
                println!("    plan {} in {}", plan.name, plan.currency);
            }
        }

        // Writing the model back out and reading it again is a fixed point.
        let lowered = lower(&p)?;
        let again = extract_provider(&lowered, &p.node)?;
        println!("re-extracted graph stable: {}", isomorphic(&lower(&again)?, &lowered));

        let json = to_json_envelope("provider", &p);
        println!("{} bytes of JSON", json.len());
    }
    Ok(())
}
