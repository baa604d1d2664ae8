//! Axiomatise a finite class of pointed models up to degree L and probe the
//! result on random models.

use hybis::model::random::{random_pointed, RandomModelSpec};
use hybis::oracle::{agree_up_to, axiomatise, DEFAULT_CAP};
use hybis::semantics::{sat_hybrid, HybridContext};
use hybis::syntax::{FeatureSet, Signature};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let spec = RandomModelSpec::new(Signature::new(["p"], ["s"]).unwrap(), 3);
    let features: FeatureSet = "at,nom".parse().unwrap();
    let (k, l) = (0, 2);
    let class: Vec<_> = (0..2).map(|_| random_pointed(&mut rng, &spec)).collect();
    let phi = axiomatise(&class, features, k, l, DEFAULT_CAP).unwrap();
    println!("degree {}, size {}", phi.degree(), phi.size());

    let holds = |p: &hybis::model::PointedModel| {
        sat_hybrid(&HybridContext::new(&p.model, vec![p.point; k], p.point), &phi).unwrap()
    };
    assert!(class.iter().all(holds));
    let (mut inside, mut total) = (0, 0);
    for _ in 0..200 {
        let probe = random_pointed(&mut rng, &spec);
        total += 1;
        if holds(&probe) {
            inside += 1;
            let agrees = class.iter().any(|m| agree_up_to(m, &probe, features, k, l, DEFAULT_CAP).unwrap());
            assert!(agrees);
        }
    }
    println!("{inside} of {total} random probes satisfy the axiom; each agrees with a member");
}
