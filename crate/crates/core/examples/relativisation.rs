//! Relativise a sentence to one half of a disjoint union, and build the
//! reduction formula combining a sentence with a one-variable formula.

use hybis::model::{FolStructure, Expansion, KripkeModel};
use hybis::semantics::{sat_fol, FolValuation};
use hybis::syntax::{infer_fol, Signature};
use hybis::translate::{psi_sigma, relativise};

fn chain(names: &[&str]) -> KripkeModel {
    let mut b = KripkeModel::builder(Signature::new(["p"], Vec::<String>::new()).unwrap())
        .worlds(names.iter().copied())
        .prop("p", [names[0]]);
    for w in names.windows(2) {
        b = b.edge(w[0], w[1]);
    }
    b.build().unwrap()
}

fn main() {
    let a = FolStructure::plain(chain(&["a0", "a1"]));
    let b = FolStructure::plain(chain(&["b0", "b1", "b2", "b3"]));
    let union = a.disjoint_union(&b).unwrap();
    let marked = union
        .with_expansion(Expansion::new().with_pred("U", a.model().worlds()))
        .unwrap();

    let (phi, _) = infer_fol("exists x . exists y . exists z . (R(x,y) & R(y,z))").unwrap();
    let rel = relativise(&phi, "U").unwrap();
    let none = FolValuation::new();
    println!("phi          = {phi}");
    println!("phi^U        = {rel}");
    println!("A |= phi     : {}", sat_fol(&a, &none, &phi).unwrap());
    println!("A+B |= phi   : {}", sat_fol(&union, &none, &phi).unwrap());
    println!("A+B |= phi^U : {}", sat_fol(&marked, &none, &rel).unwrap());

    let (sigma, _) = infer_fol("forall x . exists y . R(x,y)").unwrap();
    let (phi_s, _) = infer_fol("P(x) & ~exists y . R(x,y)").unwrap();
    println!("psi          = {}", psi_sigma(&sigma, &phi_s, "U", "c").unwrap());
}
