//! Translate into first-order logic and back, checking truth is preserved.

use hybis::model::{fixtures, FolStructure};
use hybis::semantics::{sat_fol, sat_hybrid, FolValuation, HybridContext};
use hybis::syntax::parse_hybrid;
use hybis::translate::{sbt_from, st, Target, STX};

fn main() {
    let fig = fixtures::fig1();
    let model = &fig.left;
    let structure = FolStructure::plain(model.clone());
    for text in ["<> p", "[] 's", "down x . <> <> ?x", "@'t ~<>true", "exists x . ?x & p"] {
        let phi = parse_hybrid(text, model.signature()).unwrap();
        let fol = st(&phi, Target::X).unwrap();
        let back = sbt_from(&fol, STX, model.signature()).unwrap();
        println!("{phi}\n  ST  = {fol}\n  SBT = {back}");
        for w in model.worlds() {
            let hybrid = sat_hybrid(&HybridContext::at(model, w), &phi).unwrap();
            let first_order = sat_fol(&structure, &FolValuation::single(STX, w), &fol).unwrap();
            let round_trip = sat_hybrid(&HybridContext::at(model, w), &back).unwrap();
            assert_eq!(hybrid, first_order);
            assert_eq!(hybrid, round_trip);
        }
    }
    println!("truth agrees at every world of M");
}
