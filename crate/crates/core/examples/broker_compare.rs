//! Rank the providers of an algorithm by what a workload would cost.

use dmcc::broker::{Broker, BrokerError};
use dmcc::pricing::{money, UsageRequest};
use dmcc::rdf::parse_turtle;
use rust_decimal::Decimal;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/two-providers.ttl");
    let g = parse_turtle(&std::fs::read_to_string(path)?)?;
    let broker = Broker::new().alias("RF", "RandomForest");

    for hours in [10, 100, 1000] {
        let usage = UsageRequest::hours(Decimal::from(hours));
        println!("RandomForest for {hours} h:");
        for offer in broker.compare(&g, "RF", &usage) {
            match (&offer.quote, &offer.error) {
                (Some(q), _) => println!(
                    "  {:<12} {:>8} {} via {:?}{}",
                    offer.provider.name,
                    money(q.total),
                    q.currency,
                    q.plan_name,
                    offer.instance.as_ref().map(|i| format!(" on {i}")).unwrap_or_default()
                ),
                (None, Some(e)) => println!("  {:<12} not quotable: {e}", offer.provider.name),
                (None, None) => {}
            }
        }
    }

    match broker.best_offer(&g, "XGBoost", &UsageRequest::hours(Decimal::ONE)) {
        Err(BrokerError::NoOffers(name)) => println!("nobody offers {name}"),
        other => println!("{other:?}"),
    }
    Ok(())
}
