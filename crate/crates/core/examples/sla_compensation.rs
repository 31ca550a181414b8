//! What an uptime shortfall is worth under two agreements: one paying a
//! share of the bill, one paying service credits.

use dmcc::model::extract_sla;
use dmcc::rdf::{parse_turtle, Term};
use dmcc::sla::{compensation_amount, compensation_for, Observation};
use rust_decimal::Decimal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let table = parse_turtle(&std::fs::read_to_string(format!("{dir}/sla-table.ttl"))?)?;
    let full = parse_turtle(&std::fs::read_to_string(format!("{dir}/full.ttl"))?)?;
    let agreements = [
        ("percent table", extract_sla(&table, &Term::blank("TableSLA")?)?),
        ("service credits", extract_sla(&full, &Term::blank("MLServiceSLA")?)?),
    ];
    let bill = Decimal::new(12000, 2);

    for (name, sla) in &agreements {
        println!("{name}:");
        for uptime in ["97.20", "98.50", "99.00", "99.50", "99.99", "100.00"] {
            let obs = Observation::percent("MUP", uptime.parse()?);
            let r = compensation_for(sla, &obs)?;
            match &r.compensation {
                Some(c) => println!("  MUP {uptime}: {:?} {} -> {} on a bill of {bill}", c.kind, c.amount, compensation_amount(&r, bill)),
                None => println!("  MUP {uptime}: nothing owed"),
            }
        }
    }
    Ok(())
}
