//! A finite chain against a two-cycle, compared at bounded degree.

use hybis::bisim::{decide_equiv, max_kl_family, verify_kl_family, Scope};
use hybis::model::{fixtures, PointedModel, World};
use hybis::oracle::{separating_formula, OracleConfig};
use hybis::syntax::FeatureSet;

fn main() {
    let chain = fixtures::fig2_chain(4).unwrap();
    let cycle = fixtures::fig2_cycle();
    let mp = PointedModel::new(chain.clone(), World(0));
    let np = PointedModel::new(cycle.clone(), World(0));

    for (features, l, k) in [("none", 3, None), ("none", 4, None), ("down", 3, Some(1))] {
        let f: FeatureSet = features.parse().unwrap();
        let eq = decide_equiv(&mp, &np, f, l, k).unwrap();
        print!("F = {features:<5} L = {l}: equivalent = {eq}");
        if !eq {
            let cfg = OracleConfig::default();
            let phi = separating_formula(&mp, &np, f, k.unwrap_or(0), l, &cfg).unwrap().unwrap();
            print!(", separated by {phi} (degree {})", phi.degree());
        }
        println!();
    }

    let f: FeatureSet = "down".parse().unwrap();
    let fam = max_kl_family(&chain, &cycle, f, 1, 3).unwrap();
    for k in 0..=fam.k_max() {
        let sizes: Vec<usize> = (0..=fam.l_max()).map(|i| fam.get(k, i).len()).collect();
        println!("maximal family, k = {k}: level sizes {sizes:?}");
    }
    let report = verify_kl_family(&chain, &cycle, &fam, f, None, &Scope::All).unwrap();
    print!("maximal family verifies: {}", report.render(&chain, &cycle));
}
