//! Enumerate formulas by degree and compare points by brute force.

use hybis::model::{fixtures, PointedModel, World};
use hybis::oracle::{agree_up_to, enumerate, OracleConfig, DEFAULT_CAP};
use hybis::syntax::FeatureSet;

fn main() {
    let chain = fixtures::fig2_chain(4).unwrap();
    let cycle = fixtures::fig2_cycle();
    let f: FeatureSet = "down".parse().unwrap();
    let found = enumerate(&[&chain, &cycle], f, 1, 3, &OracleConfig::default()).unwrap();
    for s in found.strata() {
        let sentences = s.representatives.iter().filter(|r| r.sentence).count();
        let example = s.representatives.iter().find(|r| r.sentence).map(|r| r.formula.to_string());
        println!(
            "degree {}: {} classes, {} new vectors ({sentences} from sentences), e.g. {}",
            s.degree,
            s.classes,
            s.representatives.len(),
            example.unwrap_or_default()
        );
    }

    let mp = PointedModel::new(chain, World(0));
    let np = PointedModel::new(cycle, World(0));
    for l in 0..=3 {
        let agree = agree_up_to(&mp, &np, f, 1, l, DEFAULT_CAP).unwrap();
        println!("m0 and n0 agree up to degree {l}: {agree}");
    }
}
