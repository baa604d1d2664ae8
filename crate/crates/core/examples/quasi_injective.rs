//! Quasi-injectivity, and the family built from an unravelling.

use hybis::bisim::{is_quasi_injective, qinj_to_family, verify_omega_family, Scope};
use hybis::model::fixtures;

fn main() {
    let d = 5;
    let mn = fixtures::fig3_mn(d).unwrap();
    let un = fixtures::fig3_un(d).unwrap();
    let scope = |f: &fixtures::Related, below| Scope::fixture_depth(&f.left, &f.right, below);

    println!("M-N quasi-injective: {}", is_quasi_injective(&mn.left, &mn.right, &mn.relation, &scope(&mn, d)).unwrap());
    println!("U-N quasi-injective: {}", is_quasi_injective(&un.left, &un.right, &un.relation, &scope(&un, d)).unwrap());

    let family = qinj_to_family(&un.left, &un.right, &un.relation, 2, &scope(&un, d)).unwrap();
    for (k, b) in family.iter().enumerate() {
        println!("B_{k}: {} pairs", b.len());
    }
    let down = "down".parse().unwrap();
    let report = verify_omega_family(&un.left, &un.right, &family, down, 2, &scope(&un, 4)).unwrap();
    print!("{{down}} family on pairs of depth < 4: {}", report.render(&un.left, &un.right));
}
