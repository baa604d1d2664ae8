//! Seeded random models for property tests and probing.

use rand::Rng;

use super::{KripkeModel, PointedModel, World};
use crate::syntax::Signature;

#[derive(Debug, Clone, PartialEq)]
pub struct RandomModelSpec {
    pub min_worlds: usize,
    pub max_worlds: usize,
    pub sig: Signature,
    /// Probability of each possible edge; drawn uniformly per model when `None`.
    pub edge_density: Option<f64>,
    pub prop_density: f64,
}

impl RandomModelSpec {
    pub fn new(sig: Signature, max_worlds: usize) -> Self {
        RandomModelSpec {
            min_worlds: 1,
            max_worlds,
            sig,
            edge_density: None,
            prop_density: 0.5,
        }
    }
}

/// Worlds are named `w0, w1, ...`.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, spec: &RandomModelSpec) -> KripkeModel {
    let n = rng.gen_range(spec.min_worlds.max(1)..=spec.max_worlds.max(spec.min_worlds.max(1)));
    let density = spec.edge_density.unwrap_or_else(|| rng.gen_range(0.0..=1.0));
    let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let mut b = KripkeModel::builder(spec.sig.clone()).worlds(names.clone());
    for a in &names {
        for c in &names {
            if rng.gen_bool(density) {
                b = b.edge(a.clone(), c.clone());
            }
        }
    }
    for p in spec.sig.props() {
        let ws: Vec<String> = names
            .iter()
            .filter(|_| rng.gen_bool(spec.prop_density))
            .cloned()
            .collect();
        b = b.prop(p.clone(), ws);
    }
    for s in spec.sig.noms() {
        b = b.nom(s.clone(), names[rng.gen_range(0..n)].clone());
    }
    b.build().expect("generated names are consistent")
}

/// A random model with a uniformly chosen point.
pub fn random_pointed<R: Rng + ?Sized>(rng: &mut R, spec: &RandomModelSpec) -> PointedModel {
    let model = random_model(rng, spec);
    let point = World(rng.gen_range(0..model.len()));
    PointedModel::new(model, point)
}
