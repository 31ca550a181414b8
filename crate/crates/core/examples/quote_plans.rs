//! Price the same usage under each plan of a service.

use dmcc::model::extract_service;
use dmcc::pricing::{cheapest_plan, money, quote, UsageRequest};
use dmcc::rdf::{parse_turtle, Term};
use rust_decimal::Decimal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/full.ttl");
    let g = parse_turtle(&std::fs::read_to_string(path)?)?;
    let svc = extract_service(&g, &Term::blank("MLServiceDicitsRF")?)?;

    for hours in [100, 250, 300, 1000] {
        let usage = UsageRequest::hours(Decimal::from(hours))
            .on_instance(Term::blank("InstanceFree")?)
            .in_region("ugr-granada");
        println!("{hours} h:");
        for plan in &svc.pricing {
            match quote(plan, &usage) {
                Ok(c) => println!("  {:<12} {} {}", plan.name, money(c.total), c.currency),
                Err(e) => println!("  {:<12} {e}", plan.name),
            }
        }
        if let Ok((plan, cost)) = cheapest_plan(&svc.pricing, &usage) {
            println!("  cheapest: {} at {}", plan.name, money(cost.total));
        }
    }

    // Outside the plans' region nothing applies.
    let elsewhere = UsageRequest::hours(Decimal::from(10)).on_instance(Term::blank("InstanceFree")?).in_region("us-east-1");
    println!("us-east-1: {}", cheapest_plan(&svc.pricing, &elsewhere).unwrap_err());
    Ok(())
}
