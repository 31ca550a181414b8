//! Parse a Turtle document, print it as N-Triples and check that the
//! result reads back as the same graph.

use dmcc::rdf::{isomorphic, parse_turtle, serialize_ntriples, serialize_turtle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/full.ttl").into());
    let g = parse_turtle(&std::fs::read_to_string(&path)?)?;
    println!("{} triples, {} blank nodes", g.len(), g.blank_nodes().len());

    let nt = serialize_ntriples(&g);
    for line in nt.lines().take(5) {
        println!("{line}");
    }
    println!("...");

    let back = parse_turtle(&serialize_turtle(&g))?;
    println!("turtle round trip isomorphic: {}", isomorphic(&g, &back));

    // Errors carry a position.
    let err = parse_turtle("@prefix ex: <http://e/> .\nex:a ex:b .").unwrap_err();
    println!("bad input: {err}");
    Ok(())
}
