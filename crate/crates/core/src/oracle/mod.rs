//! Brute-force side of the bisimulation results: degree-stratified
//! formula enumeration over the contexts of a fixed list of models.
//!
//! Two views of the same strata are provided. [`Partition`] computes the
//! exact indistinguishability classes of contexts at each degree by
//! refinement, which is what agreement checks and characteristic formulas
//! use. [`enumerate`] lists concrete representative formulas, smallest
//! first, deduplicated by their truth vectors over all contexts; it is
//! bounded by formula size and by a cap on the number of representatives.

mod enumerate;
mod hintikka;

use std::collections::HashMap;

use crate::bits::Bits;
use crate::model::{Context, ContextSpace, KripkeModel, PointedModel};
use crate::semantics::{sat_hybrid, slot_names, CompiledHybrid, HybridContext, SemanticsError};
use crate::syntax::{Feature, FeatureSet, HybridFormula};

pub use enumerate::{enumerate, Enumeration, Representative, Stratum};
pub use hintikka::{axiomatise, characteristic};

pub const DEFAULT_CAP: usize = 200_000;
pub const DEFAULT_MAX_SIZE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("representative cap of {cap} exceeded in stratum {stratum}")]
    Cap { stratum: usize, cap: usize },
    #[error("{contexts} evaluation contexts exceed the cap of {cap}")]
    TooManyContexts { contexts: usize, cap: usize },
    #[error("models have different signatures")]
    SignatureMismatch,
    #[error("no models given")]
    NoModels,
    #[error("separator `{0}` does not separate under direct evaluation")]
    Unsound(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Bound on the number of representatives and on evaluation contexts.
    pub cap: usize,
    /// Largest formula size tried by the explicit enumeration.
    pub max_size: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            cap: DEFAULT_CAP,
            max_size: DEFAULT_MAX_SIZE,
        }
    }
}

impl OracleConfig {
    pub fn with_cap(cap: usize) -> Self {
        OracleConfig {
            cap,
            ..Self::default()
        }
    }
}

/// One bit per evaluation context of an [`Oracle`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthVector(pub Bits);

impl TruthVector {
    pub fn get(&self, ctx: usize) -> bool {
        self.0.get(ctx)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// All contexts `(tuple, point)` with tuple length `k` over a list of
/// models, numbered model by model.
pub struct Oracle<'a> {
    models: Vec<&'a KripkeModel>,
    features: FeatureSet,
    k: usize,
    spaces: Vec<ContextSpace>,
    offsets: Vec<usize>,
    total: usize,
    owner: Vec<usize>,
    succ: Vec<Vec<usize>>,
    shift_var: Vec<Vec<usize>>,
    shift_nom: Vec<Vec<usize>>,
    bind: Vec<Vec<usize>>,
}

impl<'a> Oracle<'a> {
    pub fn new(models: &[&'a KripkeModel], features: FeatureSet, k: usize, cap: usize) -> Result<Self, OracleError> {
        let first = models.first().ok_or(OracleError::NoModels)?;
        if models.iter().any(|m| m.signature() != first.signature()) {
            return Err(OracleError::SignatureMismatch);
        }
        let mut spaces = Vec::new();
        let mut offsets = Vec::new();
        let mut total: usize = 0;
        for m in models {
            let too_many = || OracleError::TooManyContexts {
                contexts: usize::MAX,
                cap,
            };
            let space = ContextSpace::new(m.len(), k).ok_or_else(too_many)?;
            offsets.push(total);
            total = total.checked_add(space.count()).ok_or_else(too_many)?;
            spaces.push(space);
        }
        if total > cap {
            return Err(OracleError::TooManyContexts { contexts: total, cap });
        }
        let mut oracle = Oracle {
            models: models.to_vec(),
            features,
            k,
            spaces,
            offsets,
            total,
            owner: Vec::with_capacity(total),
            succ: Vec::with_capacity(total),
            shift_var: vec![Vec::with_capacity(total); k],
            shift_nom: vec![Vec::with_capacity(total); first.signature().noms().len()],
            bind: vec![Vec::with_capacity(total); k],
        };
        for (mi, m) in models.iter().enumerate() {
            let (space, off) = (&oracle.spaces[mi], oracle.offsets[mi]);
            for idx in 0..space.count() {
                let point = space.point(idx);
                oracle.owner.push(mi);
                oracle
                    .succ
                    .push(m.succ_raw(point).iter().map(|&w| off + space.with_point(idx, w)).collect());
                for j in 0..k {
                    oracle.shift_var[j].push(off + space.with_point(idx, space.slot(idx, j)));
                    oracle.bind[j].push(off + space.with_slot(idx, j, point));
                }
                for (s, row) in oracle.shift_nom.iter_mut().enumerate() {
                    row.push(off + space.with_point(idx, m.nominal(s).0));
                }
            }
        }
        Ok(oracle)
    }

    pub fn models(&self) -> &[&'a KripkeModel] {
        &self.models
    }

    pub fn features(&self) -> FeatureSet {
        self.features
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn contexts(&self) -> usize {
        self.total
    }

    pub fn index(&self, model: usize, ctx: &Context) -> usize {
        self.offsets[model] + self.spaces[model].encode(ctx)
    }

    /// The constant context `((w..w), w)` of model `model`.
    pub fn seed(&self, model: usize, w: usize) -> usize {
        self.offsets[model] + self.spaces[model].constant(w)
    }

    pub fn context(&self, idx: usize) -> (usize, Context) {
        let mi = self.owner[idx];
        (mi, self.spaces[mi].decode(idx - self.offsets[mi]))
    }

    fn uses_nominals(&self) -> bool {
        self.features.contains(Feature::Nom)
    }

    fn at_var(&self) -> bool {
        self.features.contains(Feature::At) && self.k > 0
    }

    fn at_nom(&self) -> bool {
        self.features.contains(Feature::At) && self.uses_nominals()
    }

    fn rebinds(&self, c: usize, j: usize) -> impl Iterator<Item = usize> + '_ {
        let mi = self.owner[c];
        let (space, off) = (&self.spaces[mi], self.offsets[mi]);
        let local = c - off;
        (0..self.models[mi].len()).map(move |w| off + space.with_slot(local, j, w))
    }

    /// Truth vector of a formula whose free variables are among `x1..xk`.
    pub fn vector(&self, phi: &HybridFormula) -> Result<TruthVector, OracleError> {
        let slots = slot_names(self.k);
        let mut bits = Bits::new(self.total);
        for (mi, m) in self.models.iter().enumerate() {
            let compiled = CompiledHybrid::compile(phi, m, &slots)?;
            let space = &self.spaces[mi];
            let mut env = Vec::with_capacity(self.k);
            for idx in 0..space.count() {
                env.clear();
                env.extend((0..self.k).map(|j| space.slot(idx, j)));
                if compiled.eval_raw(m, &mut env, space.point(idx)) {
                    bits.set(self.offsets[mi] + idx);
                }
            }
        }
        Ok(TruthVector(bits))
    }

    /// Exact classes for strata `0..=l`.
    pub fn partition(&self, l: usize) -> Partition {
        let mut strata = vec![self.close_at(self.base_classes())];
        for _ in 0..l {
            let prev = strata.last().expect("nonempty");
            let next = self.close_at(self.step_classes(prev));
            strata.push(next);
        }
        Partition { strata }
    }

    fn base_classes(&self) -> Vec<u32> {
        let sig = self.models[0].signature();
        let noms = if self.uses_nominals() { sig.noms().len() } else { 0 };
        renumber((0..self.total).map(|c| {
            let (mi, off) = (self.owner[c], self.offsets[self.owner[c]]);
            let (m, space, local) = (self.models[mi], &self.spaces[mi], c - off);
            let point = space.point(local);
            let mut sig_c = Vec::with_capacity(sig.props().len() + noms + self.k);
            sig_c.extend((0..sig.props().len()).map(|p| m.holds(p, crate::model::World(point)) as u32));
            sig_c.extend((0..noms).map(|s| (m.nominal(s).0 == point) as u32));
            sig_c.extend((0..self.k).map(|j| (space.slot(local, j) == point) as u32));
            sig_c
        }))
    }

    fn step_classes(&self, prev: &[u32]) -> Vec<u32> {
        let down = self.features.contains(Feature::Down);
        let exists = self.features.contains(Feature::Exists);
        renumber((0..self.total).map(|c| {
            let mut sig_c = vec![prev[c]];
            push_set(&mut sig_c, self.succ[c].iter().map(|&d| prev[d]));
            if down {
                sig_c.extend(self.bind.iter().map(|row| prev[row[c]]));
            }
            if exists {
                for j in 0..self.k {
                    push_set(&mut sig_c, self.rebinds(c, j).map(|d| prev[d]));
                }
            }
            sig_c
        }))
    }

    /// Refine until the classes of all @-shifts are determined by the class.
    fn close_at(&self, mut classes: Vec<u32>) -> Vec<u32> {
        let (var, nom) = (self.at_var(), self.at_nom());
        if !var && !nom {
            return classes;
        }
        let mut count = class_count(&classes);
        loop {
            let next = renumber((0..self.total).map(|c| {
                let mut sig_c = vec![classes[c]];
                if var {
                    sig_c.extend(self.shift_var.iter().map(|row| classes[row[c]]));
                }
                if nom {
                    sig_c.extend(self.shift_nom.iter().map(|row| classes[row[c]]));
                }
                sig_c
            }));
            let next_count = class_count(&next);
            if next_count == count {
                return next;
            }
            classes = next;
            count = next_count;
        }
    }
}

fn push_set(out: &mut Vec<u32>, items: impl Iterator<Item = u32>) {
    let mut set: Vec<u32> = items.collect();
    set.sort_unstable();
    set.dedup();
    out.push(set.len() as u32);
    out.extend(set);
}

/// Class ids in order of first occurrence.
fn renumber(sigs: impl Iterator<Item = Vec<u32>>) -> Vec<u32> {
    let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
    sigs.map(|s| {
        let next = ids.len() as u32;
        *ids.entry(s).or_insert(next)
    })
    .collect()
}

fn class_count(classes: &[u32]) -> usize {
    classes.iter().max().map_or(0, |&m| m as usize + 1)
}

/// `strata[d][c]`: class of context `c` under agreement on formulas of
/// degree at most `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    strata: Vec<Vec<u32>>,
}

impl Partition {
    pub fn depth(&self) -> usize {
        self.strata.len() - 1
    }

    pub fn class(&self, d: usize, ctx: usize) -> u32 {
        self.strata[d][ctx]
    }

    pub fn classes(&self, d: usize) -> usize {
        class_count(&self.strata[d])
    }

    pub fn same(&self, d: usize, a: usize, b: usize) -> bool {
        self.strata[d][a] == self.strata[d][b]
    }

    /// Least stratum at which the two contexts part, if any.
    pub fn first_difference(&self, a: usize, b: usize) -> Option<usize> {
        (0..self.strata.len()).find(|&d| !self.same(d, a, b))
    }
}

fn pair_oracle<'a>(
    mp: &'a PointedModel,
    np: &'a PointedModel,
    features: FeatureSet,
    k: usize,
    cap: usize,
) -> Result<(Oracle<'a>, usize, usize), OracleError> {
    let oracle = Oracle::new(&[&mp.model, &np.model], features, k, cap)?;
    let (a, b) = (oracle.seed(0, mp.point.0), oracle.seed(1, np.point.0));
    Ok((oracle, a, b))
}

/// Agreement of the constant seeds on every `F`-formula of degree at most
/// `l` over the variables `x1..xk`.
pub fn agree_up_to(
    mp: &PointedModel,
    np: &PointedModel,
    features: FeatureSet,
    k: usize,
    l: usize,
    cap: usize,
) -> Result<bool, OracleError> {
    let (oracle, a, b) = pair_oracle(mp, np, features, k, cap)?;
    Ok(oracle.partition(l).same(l, a, b))
}

/// A formula of degree at most `l` taking different values at the two
/// seeds: the enumerated sentence of least degree and size if there is
/// one, else the least enumerated open formula, else a characteristic
/// formula of the left seed at the first degree where the seeds part.
pub fn separating_formula(
    mp: &PointedModel,
    np: &PointedModel,
    features: FeatureSet,
    k: usize,
    l: usize,
    config: &OracleConfig,
) -> Result<Option<HybridFormula>, OracleError> {
    let (oracle, a, b) = pair_oracle(mp, np, features, k, config.cap)?;
    let partition = oracle.partition(l);
    let Some(d) = partition.first_difference(a, b) else {
        return Ok(None);
    };
    let found = enumerate::enumerate_oracle(&oracle, l, config)?;
    let separates = |r: &&Representative| r.vector.get(a) != r.vector.get(b);
    let reps: Vec<&Representative> = found.up_to(l).filter(separates).collect();
    let phi = match reps.iter().find(|r| r.sentence).or(reps.first()) {
        Some(r) => r.formula.clone(),
        None => hintikka::characteristic_in(&oracle, &partition, d, a),
    };
    let at = |p: &PointedModel| {
        sat_hybrid(&HybridContext::new(&p.model, vec![p.point; k], p.point), &phi)
    };
    if at(mp)? == at(np)? {
        return Err(OracleError::Unsound(phi.to_string()));
    }
    Ok(Some(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fixtures, World};
    use crate::syntax::{parse_hybrid, Signature};

    fn fs(text: &str) -> FeatureSet {
        text.parse().unwrap()
    }

    fn fig2() -> (PointedModel, PointedModel) {
        (
            PointedModel::new(fixtures::fig2_chain(4).unwrap(), World(0)),
            PointedModel::new(fixtures::fig2_cycle(), World(0)),
        )
    }

    #[test]
    fn figure_two_agreement() {
        let (c, y) = fig2();
        assert!(agree_up_to(&c, &y, FeatureSet::empty(), 0, 3, DEFAULT_CAP).unwrap());
        assert!(!agree_up_to(&c, &y, FeatureSet::empty(), 0, 4, DEFAULT_CAP).unwrap());
        assert!(!agree_up_to(&c, &y, fs("down"), 1, 3, DEFAULT_CAP).unwrap());
        assert!(agree_up_to(&c, &c, FeatureSet::full(), 2, 3, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn figure_two_separators() {
        let (c, y) = fig2();
        let cfg = OracleConfig::default();
        let phi = separating_formula(&c, &y, fs("down"), 1, 3, &cfg).unwrap().unwrap();
        assert_eq!(phi.degree(), 3);
        let oracle = Oracle::new(&[&c.model, &y.model], fs("down"), 1, DEFAULT_CAP).unwrap();
        let target = parse_hybrid("down x1 . <><>?x1", c.model.signature()).unwrap();
        assert_eq!(oracle.vector(&phi).unwrap(), oracle.vector(&target).unwrap());

        let phi4 = separating_formula(&c, &y, FeatureSet::empty(), 0, 4, &cfg).unwrap().unwrap();
        assert_eq!(phi4.degree(), 4);
        assert!(phi4.is_sentence());
        assert_eq!(phi4.size(), 5, "{phi4}");
        assert_eq!(separating_formula(&c, &y, FeatureSet::empty(), 0, 3, &cfg).unwrap(), None);
    }

    #[test]
    fn partition_counts_boolean_classes() {
        let sig = Signature::new(["p"], Vec::<String>::new()).unwrap();
        let m = KripkeModel::builder(sig)
            .worlds(["a", "b"])
            .prop("p", ["a"])
            .build()
            .unwrap();
        let o = Oracle::new(&[&m, &m], FeatureSet::empty(), 0, DEFAULT_CAP).unwrap();
        assert_eq!(o.partition(0).classes(0), 2);
    }

    #[test]
    fn at_closure_separates_through_jumps() {
        let sig = Signature::new(["p"], ["s"]).unwrap();
        let build = |p_at: &[&str]| {
            KripkeModel::builder(sig.clone())
                .worlds(["a", "c"])
                .prop("p", p_at.iter().copied())
                .nom("s", "c")
                .build()
                .unwrap()
        };
        let mp = PointedModel::new(build(&["c"]), World(0));
        let np = PointedModel::new(build(&[]), World(0));
        assert!(agree_up_to(&mp, &np, fs("nom"), 0, 2, DEFAULT_CAP).unwrap());
        assert!(!agree_up_to(&mp, &np, fs("at,nom"), 0, 0, DEFAULT_CAP).unwrap());
        let sep = separating_formula(&mp, &np, fs("at,nom"), 0, 0, &OracleConfig::default())
            .unwrap()
            .unwrap();
        assert_eq!(sep.to_string(), "@'s p");
    }
}
