//! Evaluate formulas on the `fig1` models.

use hybis::model::fixtures;
use hybis::semantics::{sat_hybrid, witness, HybridContext};
use hybis::syntax::parse_hybrid;

fn main() {
    let fig = fixtures::fig1();
    for (label, model) in [("M", &fig.left), ("N", &fig.right)] {
        for text in ["'t", "<>'t", "down x . <> ?x", "@'t [] false", "exists x . (<>?x & ~?x)"] {
            let phi = parse_hybrid(text, model.signature()).unwrap();
            let holds: Vec<&str> = model
                .worlds()
                .filter(|&w| sat_hybrid(&HybridContext::at(model, w), &phi).unwrap())
                .map(|w| model.name(w))
                .collect();
            println!("{label}: {text:<26} holds at {holds:?}");
        }
    }

    let m = &fig.left;
    let root = m.world("m0").unwrap();
    let dia = parse_hybrid("<> ~'t", m.signature()).unwrap();
    let w = witness(&HybridContext::at(m, root), &dia).unwrap();
    println!("M, m0: first witness of {dia} is {:?}", w.map(|w| m.name(w)));
}
