use std::collections::{BTreeSet, HashMap};

use super::{Oracle, OracleError, Partition};
use crate::model::PointedModel;
use crate::semantics::slot_names;
use crate::syntax::{Feature, FeatureSet, HybridFormula as H};

struct Builder<'o, 'a> {
    oracle: &'o Oracle<'a>,
    partition: &'o Partition,
    vars: Vec<String>,
    core: HashMap<(usize, u32), H>,
    chi: HashMap<(usize, u32), H>,
}

impl Builder<'_, '_> {
    fn literal(positive: bool, atom: H) -> H {
        if positive {
            atom
        } else {
            H::not(atom)
        }
    }

    fn distinct(&self, d: usize, ctxs: impl Iterator<Item = usize>) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        ctxs.filter(|&c| seen.insert(self.partition.class(d, c))).collect()
    }

    /// Literals of `c` and, above degree 0, the exact successor, binding
    /// and rebinding classes one degree down.
    fn core(&mut self, d: usize, c: usize) -> H {
        let key = (d, self.partition.class(d, c));
        if let Some(phi) = self.core.get(&key) {
            return phi.clone();
        }
        let o = self.oracle;
        let (mi, ctx) = o.context(c);
        let m = o.models[mi];
        let sig = m.signature();
        let mut parts = Vec::new();
        for (i, p) in sig.props().iter().enumerate() {
            parts.push(Self::literal(m.holds(i, ctx.point), H::prop(p.clone())));
        }
        if o.uses_nominals() {
            for (s, name) in sig.noms().iter().enumerate() {
                parts.push(Self::literal(m.nominal(s) == ctx.point, H::nom(name.clone())));
            }
        }
        for j in 0..o.k {
            parts.push(Self::literal(ctx.tuple[j] == ctx.point, H::var(self.vars[j].clone())));
        }
        if d > 0 {
            let succ = self.distinct(d - 1, o.succ[c].iter().copied());
            let succ_chi: Vec<H> = succ.iter().map(|&e| self.chi(d - 1, e)).collect();
            parts.extend(succ_chi.iter().cloned().map(H::dia));
            parts.push(H::nec(H::disj(succ_chi)));
            if o.features.contains(Feature::Down) {
                for j in 0..o.k {
                    let body = self.chi(d - 1, o.bind[j][c]);
                    parts.push(H::down(self.vars[j].clone(), body));
                }
            }
            if o.features.contains(Feature::Exists) {
                for j in 0..o.k {
                    let options = self.distinct(d - 1, o.rebinds(c, j));
                    let chis: Vec<H> = options.iter().map(|&e| self.chi(d - 1, e)).collect();
                    let x = &self.vars[j];
                    parts.extend(chis.iter().cloned().map(|phi| H::exists(x.clone(), phi)));
                    parts.push(H::not(H::exists(x.clone(), H::not(H::disj(chis)))));
                }
            }
        }
        let phi = H::conj(parts);
        self.core.insert(key, phi.clone());
        phi
    }

    fn chi(&mut self, d: usize, c: usize) -> H {
        let key = (d, self.partition.class(d, c));
        if let Some(phi) = self.chi.get(&key) {
            return phi.clone();
        }
        let o = self.oracle;
        let mut parts = vec![self.core(d, c)];
        if o.at_var() {
            for j in 0..o.k {
                let body = self.core(d, o.shift_var[j][c]);
                parts.push(H::at_var(self.vars[j].clone(), body));
            }
        }
        if o.at_nom() {
            let noms = o.models[0].signature().noms().to_vec();
            for (s, name) in noms.into_iter().enumerate() {
                let body = self.core(d, o.shift_nom[s][c]);
                parts.push(H::at_nom(name, body));
            }
        }
        let phi = H::conj(parts);
        self.chi.insert(key, phi.clone());
        phi
    }
}

fn builder<'o, 'a>(oracle: &'o Oracle<'a>, partition: &'o Partition) -> Builder<'o, 'a> {
    Builder {
        oracle,
        partition,
        vars: slot_names(oracle.k),
        core: HashMap::new(),
        chi: HashMap::new(),
    }
}

pub(crate) fn characteristic_in(oracle: &Oracle<'_>, partition: &Partition, d: usize, ctx: usize) -> H {
    builder(oracle, partition).chi(d, ctx)
}

/// A formula of degree `d` over `x1..xk` true exactly at the contexts, in
/// any model, that agree with the constant seed of `pm` on all
/// `F`-formulas of degree at most `d`.
pub fn characteristic(
    pm: &PointedModel,
    features: FeatureSet,
    k: usize,
    d: usize,
    cap: usize,
) -> Result<H, OracleError> {
    let oracle = Oracle::new(&[&pm.model], features, k, cap)?;
    let partition = oracle.partition(d);
    Ok(characteristic_in(&oracle, &partition, d, oracle.seed(0, pm.point.0)))
}

/// Disjunction of the degree-`l` characteristic formulas of the members.
/// Free variables are among `x1..xk`, read at the constant context of the
/// evaluation point; `false` for an empty class.
pub fn axiomatise(
    ks: &[PointedModel],
    features: FeatureSet,
    k: usize,
    l: usize,
    cap: usize,
) -> Result<H, OracleError> {
    if ks.is_empty() {
        return Ok(H::Bot);
    }
    let models: Vec<_> = ks.iter().map(|p| &p.model).collect();
    let oracle = Oracle::new(&models, features, k, cap)?;
    let partition = oracle.partition(l);
    let seeds: Vec<usize> = ks.iter().enumerate().map(|(i, p)| oracle.seed(i, p.point.0)).collect();
    let mut b = builder(&oracle, &partition);
    let distinct = b.distinct(l, seeds.into_iter());
    Ok(H::disj(distinct.into_iter().map(|c| b.chi(l, c))))
}
