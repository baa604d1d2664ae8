//! Parse hybrid and first-order formulas and print them back.

use hybis::syntax::{infer_fol, infer_hybrid, parse_hybrid, Signature};

fn main() {
    let sig = Signature::new(["p", "q"], ["s"]).unwrap();
    for text in [
        "down x . <> ?x",
        "@'s (p -> [] q)",
        "exists y . (?y & ~<>?y) | p & q",
        "p -> q -> false",
    ] {
        let phi = parse_hybrid(text, &sig).unwrap();
        println!(
            "{text:<36} => {phi:<36} degree {} features {}",
            phi.degree(),
            phi.features()
        );
        assert_eq!(parse_hybrid(&phi.to_string(), &sig).unwrap(), phi);
    }

    let (phi, inferred) = infer_hybrid("@?x <>'t & r").unwrap();
    println!("{phi} uses props {:?} and nominals {:?}", inferred.props(), inferred.noms());

    let (fol, _) = infer_fol("forall x . (P(x) -> exists y . (R(x,y) & ~(y = 's)))").unwrap();
    println!("{fol} has free variables {:?}", fol.free_vars());
}
