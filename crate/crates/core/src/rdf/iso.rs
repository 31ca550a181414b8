//! Blank-node isomorphism by colour refinement plus backtracking.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use super::graph::Graph;
use super::term::{Term, Triple};

type Color = u64;

fn hash_of<T: Hash>(value: &T) -> Color {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// Edge signature seen from one blank node: direction, predicate, and the
/// other end (its colour if blank, the term itself otherwise).
fn refine(g: &Graph, colors: &HashMap<Term, Color>) -> HashMap<Term, Color> {
    let mut sigs: HashMap<Term, Vec<(u8, Color, Color)>> = colors.keys().map(|b| (b.clone(), Vec::new())).collect();
    let end = |t: &Term| if t.is_blank() { colors[t] } else { hash_of(t) };
    for t in g.iter().filter(|t| !t.is_ground()) {
        let p = hash_of(t.predicate());
        if t.subject().is_blank() {
            let self_loop = t.subject() == t.object();
            sigs.get_mut(t.subject()).unwrap().push((if self_loop { 2 } else { 0 }, p, end(t.object())));
        }
        if t.object().is_blank() && t.subject() != t.object() {
            sigs.get_mut(t.object()).unwrap().push((1, p, end(t.subject())));
        }
    }
    sigs.into_iter()
        .map(|(b, mut sig)| {
            sig.sort_unstable();
            let c = hash_of(&(colors[&b], sig));
            (b, c)
        })
        .collect()
}

fn color_classes(colors: &HashMap<Term, Color>) -> usize {
    colors.values().collect::<HashSet<_>>().len()
}

/// Stable colouring of each graph's blank nodes, refined until the number of
/// colour classes stops growing.
fn colorings(a: &Graph, b: &Graph) -> (HashMap<Term, Color>, HashMap<Term, Color>) {
    let init = |g: &Graph| g.blank_nodes().into_iter().map(|t| (t.clone(), 0)).collect::<HashMap<_, _>>();
    let (mut ca, mut cb) = (init(a), init(b));
    loop {
        let (na, nb) = (refine(a, &ca), refine(b, &cb));
        let grew = color_classes(&na) > color_classes(&ca) || color_classes(&nb) > color_classes(&cb);
        ca = na;
        cb = nb;
        if !grew {
            return (ca, cb);
        }
    }
}

fn histogram(colors: &HashMap<Term, Color>) -> BTreeMap<Color, usize> {
    let mut h = BTreeMap::new();
    for c in colors.values() {
        *h.entry(*c).or_default() += 1;
    }
    h
}

struct Search<'a> {
    b: &'a Graph,
    order: Vec<Term>,
    candidates: HashMap<Term, Vec<Term>>,
    /// Non-ground triples of `a`, indexed by each blank node they mention.
    touching: HashMap<Term, Vec<&'a Triple>>,
    forward: HashMap<Term, Term>,
    used: HashSet<Term>,
}

impl Search<'_> {
    fn image(&self, t: &Term) -> Option<Term> {
        if t.is_blank() {
            self.forward.get(t).cloned()
        } else {
            Some(t.clone())
        }
    }

    fn consistent(&self, node: &Term) -> bool {
        self.touching[node].iter().all(|t| match (self.image(t.subject()), self.image(t.object())) {
            (Some(s), Some(o)) => {
                let mapped = Triple::new(s, t.predicate().clone(), o).expect("positions preserved");
                self.b.contains(&mapped)
            }
            _ => true,
        })
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let node = self.order[depth].clone();
        for cand in self.candidates[&node].clone() {
            if self.used.contains(&cand) {
                continue;
            }
            self.forward.insert(node.clone(), cand.clone());
            self.used.insert(cand.clone());
            if self.consistent(&node) && self.run(depth + 1) {
                return true;
            }
            self.forward.remove(&node);
            self.used.remove(&cand);
        }
        false
    }
}

/// True iff some bijection between blank nodes maps `a`'s triples exactly
/// onto `b`'s.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() || a.ground_triples() != b.ground_triples() {
        return false;
    }
    let blanks_a = a.blank_nodes();
    if blanks_a.len() != b.blank_nodes().len() {
        return false;
    }
    if blanks_a.is_empty() {
        return true;
    }
    let (ca, cb) = colorings(a, b);
    if histogram(&ca) != histogram(&cb) {
        return false;
    }

    let mut by_color: HashMap<Color, Vec<Term>> = HashMap::new();
    for (t, c) in &cb {
        by_color.entry(*c).or_default().push(t.clone());
    }
    for v in by_color.values_mut() {
        v.sort();
    }
    let mut order: Vec<Term> = blanks_a.into_iter().cloned().collect();
    // Smallest colour classes first: they prune the most.
    order.sort_by_key(|t| (by_color[&ca[t]].len(), t.clone()));
    let candidates = order.iter().map(|t| (t.clone(), by_color[&ca[t]].clone())).collect();

    let mut touching: HashMap<Term, Vec<&Triple>> = order.iter().map(|t| (t.clone(), Vec::new())).collect();
    for t in a.iter().filter(|t| !t.is_ground()) {
        for end in [t.subject(), t.object()] {
            if end.is_blank() {
                let list = touching.get_mut(end).unwrap();
                if !list.iter().any(|x| std::ptr::eq(*x, t)) {
                    list.push(t);
                }
            }
        }
    }

    let mut search = Search { b, order, candidates, touching, forward: HashMap::new(), used: HashSet::new() };
    search.run(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_turtle;

    fn g(body: &str) -> Graph {
        parse_turtle(&format!("@prefix ex: <http://example.org/> .\n{body}")).unwrap()
    }

    #[test]
    fn reflexive_and_renaming() {
        let a = g("_:x ex:p _:y . _:y ex:p _:z . _:z ex:q \"1\" .");
        let b = g("_:k ex:p _:m . _:m ex:p _:n . _:n ex:q \"1\" .");
        assert!(isomorphic(&a, &a));
        assert!(isomorphic(&a, &b));
        assert!(isomorphic(&b, &a));
    }

    #[test]
    fn extra_triple_breaks_isomorphism() {
        let a = g("_:x ex:p ex:o .");
        let b = g("_:x ex:p ex:o . _:x ex:q ex:o .");
        assert!(!isomorphic(&a, &b));
    }

    #[test]
    fn structure_matters_not_just_counts() {
        // Two 2-cycles vs one 4-cycle: same colours under naive refinement.
        let a = g("_:a ex:p _:b . _:b ex:p _:a . _:c ex:p _:d . _:d ex:p _:c .");
        let b = g("_:a ex:p _:b . _:b ex:p _:c . _:c ex:p _:d . _:d ex:p _:a .");
        assert!(!isomorphic(&a, &b));
    }

    #[test]
    fn ground_difference_detected() {
        assert!(!isomorphic(&g("ex:a ex:p ex:b ."), &g("ex:a ex:p ex:c .")));
    }
}
