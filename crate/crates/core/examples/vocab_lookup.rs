//! Resolve CURIEs against the built-in vocabulary and look up units.

use dmcc::vocab::{kind_of, registry, resolve, unit};

fn main() {
    for curie in ["dmcc:MLService", "ccsla:cointainsTerm", "gr:hasCurrencyValue", "waa:All", "dmcc:NoSuchTerm", "zz:thing"] {
        match resolve(curie) {
            Ok(iri) => println!("{curie:<22} {iri}  {:?}", kind_of(&iri)),
            Err(e) => println!("{curie:<22} {e}"),
        }
    }

    println!();
    for (prefix, ns) in registry().prefixes().iter() {
        let n = registry().terms().iter().filter(|t| t.curie.starts_with(&format!("{prefix}:"))).count();
        println!("{prefix:<12} {n:>3} terms  {ns}");
    }

    println!();
    for code in ["HRS", "E34", "MIN", "XYZ"] {
        match unit(code) {
            Some(u) => println!("{code}: {u:?}"),
            None => println!("{code}: unknown"),
        }
    }
}
