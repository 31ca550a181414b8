//! Run the shipped queries, or one given on the command line, over the
//! two-provider dataset.

use dmcc::query::{evaluate, parse_query};
use dmcc::rdf::parse_turtle;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = env!("CARGO_MANIFEST_DIR");
    let g = parse_turtle(&std::fs::read_to_string(format!("{root}/fixtures/two-providers.ttl"))?)?;

    let mut queries: Vec<(String, String)> = Vec::new();
    if let Some(q) = std::env::args().nth(1) {
        queries.push(("argument".into(), q));
    } else {
        for name in ["providers-by-algorithm.rq", "best-price.rq"] {
            queries.push((name.into(), std::fs::read_to_string(format!("{root}/queries/{name}"))?));
        }
        queries.push((
            "instances".into(),
            "SELECT ?label ?ram WHERE { ?i a ccinstances:Instance ; rdfs:label ?label ; ccinstances:hasRAM ?r . \
             ?r s:value ?ram FILTER(?ram >= 8) } ORDER BY DESC(?ram)"
                .into(),
        ));
    }

    for (name, text) in queries {
        println!("# {name}");
        match parse_query(&text) {
            Ok(q) => print!("{}", evaluate(&g, &q).to_table()),
            Err(e) => println!("{e}"),
        }
        println!();
    }
    Ok(())
}
