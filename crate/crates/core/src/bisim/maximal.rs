use super::{conds, ext_enforced, same_signature, BisimError, BisimFamily, ConditionTag};
use crate::bits::Bits;
use crate::model::{ContextPair, ContextSpace, KripkeModel, PairRelation, PointedModel};
use crate::syntax::FeatureSet;

pub const DEFAULT_MAX_PAIRS: u128 = 5_000_000;

/// Refuses instances with `(|M|·|N|)^(K+1)·(L+1)` above `max_pairs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_pairs: u128,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            max_pairs: DEFAULT_MAX_PAIRS,
        }
    }
}

impl Guard {
    pub fn new(max_pairs: u128) -> Self {
        Guard { max_pairs }
    }

    pub fn needed(left: usize, right: usize, k: usize, l: usize) -> u128 {
        let base = (left as u128).saturating_mul(right as u128);
        let mut total: u128 = 1;
        for _ in 0..=k {
            total = total.saturating_mul(base);
        }
        total.saturating_mul(l as u128 + 1)
    }

    pub fn check(&self, left: usize, right: usize, k: usize, l: usize) -> Result<(), BisimError> {
        let needed = Self::needed(left, right, k, l);
        if needed > self.max_pairs {
            return Err(BisimError::Guard {
                needed,
                cap: self.max_pairs,
            });
        }
        Ok(())
    }
}

/// `K = L` when the features contain a binder, else 0: without binders a
/// sentence has no world variables to remember.
pub fn default_k(features: FeatureSet, l: usize) -> usize {
    if features.has_binder() {
        l
    } else {
        0
    }
}

/// Dense refinement over all context pairs; pair index `a * |right| + b`
/// for context indices `a`, `b`.
struct Refiner<'a> {
    left: &'a KripkeModel,
    right: &'a KripkeModel,
    k_max: usize,
    spaces: Vec<(ContextSpace, ContextSpace)>,
    nom_l: Vec<usize>,
    nom_r: Vec<usize>,
    nom: bool,
    bind: bool,
    atv: bool,
    atn: bool,
    ex_f: bool,
    ex_b: bool,
    ext: bool,
}

impl<'a> Refiner<'a> {
    fn new(left: &'a KripkeModel, right: &'a KripkeModel, features: FeatureSet, k_max: usize) -> Self {
        let c = conds(features);
        let spaces = (0..=k_max)
            .map(|k| {
                let l = ContextSpace::new(left.len(), k).expect("guarded size");
                let r = ContextSpace::new(right.len(), k).expect("guarded size");
                (l, r)
            })
            .collect();
        let noms = |m: &KripkeModel| (0..m.signature().noms().len()).map(|s| m.nominal(s).0).collect();
        Refiner {
            left,
            right,
            k_max,
            spaces,
            nom_l: noms(left),
            nom_r: noms(right),
            nom: c.contains(&ConditionTag::Nom),
            bind: c.contains(&ConditionTag::Bind),
            atv: c.contains(&ConditionTag::Atv),
            atn: c.contains(&ConditionTag::Atn),
            ex_f: c.contains(&ConditionTag::ExF),
            ex_b: c.contains(&ConditionTag::ExB),
            ext: ext_enforced(features),
        }
    }

    fn count(&self, k: usize) -> usize {
        let (l, r) = &self.spaces[k];
        l.count() * r.count()
    }

    /// (prop), (wvar) and, when required, (nom).
    fn local(&self, k: usize) -> Bits {
        let (sl, sr) = &self.spaces[k];
        let cr = sr.count();
        let props = self.left.signature().props().len();
        let agree: Vec<Vec<bool>> = self
            .left
            .worlds()
            .map(|m| {
                self.right
                    .worlds()
                    .map(|n| {
                        (0..props).all(|p| self.left.holds(p, m) == self.right.holds(p, n))
                            && (!self.nom
                                || self.nom_l.iter().zip(&self.nom_r).all(|(&a, &b)| (a == m.0) == (b == n.0)))
                    })
                    .collect()
            })
            .collect();
        Bits::from_fn(self.count(k), |idx| {
            let (a, b) = (idx / cr, idx % cr);
            let (m, n) = (sl.point(a), sr.point(b));
            agree[m][n] && (0..k).all(|j| (sl.slot(a, j) == m) == (sr.slot(b, j) == n))
        })
    }

    /// Remove pairs whose @-shifts are missing until none are.
    fn close_at(&self, k: usize, z: &mut Bits) {
        if !(self.atv && k > 0) && !(self.atn && !self.nom_l.is_empty()) {
            return;
        }
        let (sl, sr) = &self.spaces[k];
        let cr = sr.count();
        loop {
            let doomed: Vec<usize> = z
                .ones()
                .filter(|&idx| {
                    let (a, b) = (idx / cr, idx % cr);
                    let atv_bad = self.atv
                        && (0..k).any(|j| {
                            let a2 = sl.with_point(a, sl.slot(a, j));
                            let b2 = sr.with_point(b, sr.slot(b, j));
                            !z.get(a2 * cr + b2)
                        });
                    let atn_bad = self.atn
                        && self.nom_l.iter().zip(&self.nom_r).any(|(&s, &t)| {
                            !z.get(sl.with_point(a, s) * cr + sr.with_point(b, t))
                        });
                    atv_bad || atn_bad
                })
                .collect();
            if doomed.is_empty() {
                return;
            }
            for idx in doomed {
                z.clear(idx);
            }
        }
    }

    /// The level below `upper`, whose pairs must answer every move into
    /// `upper`; `upper_ext` is the level above for tuple length `k + 1`.
    fn step(&self, k: usize, upper: &Bits, upper_ext: Option<&Bits>) -> Bits {
        let (sl, sr) = &self.spaces[k];
        let cr = sr.count();
        let (nl, nr) = (self.left.len(), self.right.len());
        let in_upper = |a: usize, b: usize| upper.get(a * cr + b);
        let mut z = upper.clone();
        for idx in upper.ones() {
            let (a, b) = (idx / cr, idx % cr);
            let (m, n) = (sl.point(a), sr.point(b));
            let (succ_m, succ_n) = (self.left.succ_raw(m), self.right.succ_raw(n));
            let forth = succ_m
                .iter()
                .all(|&m2| succ_n.iter().any(|&n2| in_upper(sl.with_point(a, m2), sr.with_point(b, n2))));
            let back = forth
                && succ_n
                    .iter()
                    .all(|&n2| succ_m.iter().any(|&m2| in_upper(sl.with_point(a, m2), sr.with_point(b, n2))));
            let bind = back
                && (!self.bind || (0..k).all(|j| in_upper(sl.with_slot(a, j, m), sr.with_slot(b, j, n))));
            let ex_f = bind
                && (!self.ex_f
                    || (0..k).all(|j| {
                        (0..nl).all(|x| (0..nr).any(|y| in_upper(sl.with_slot(a, j, x), sr.with_slot(b, j, y))))
                    }));
            let ex_b = ex_f
                && (!self.ex_b
                    || (0..k).all(|j| {
                        (0..nr).all(|y| (0..nl).any(|x| in_upper(sl.with_slot(a, j, x), sr.with_slot(b, j, y))))
                    }));
            let ext = ex_b
                && upper_ext.is_none_or(|up| {
                    let cr2 = self.spaces[k + 1].1.count();
                    up.get(sl.extend(a) * cr2 + sr.extend(b))
                });
            if !ext {
                z.clear(idx);
            }
        }
        self.close_at(k, &mut z);
        z
    }

    fn top(&self) -> Vec<Bits> {
        (0..=self.k_max)
            .map(|k| {
                let mut z = self.local(k);
                self.close_at(k, &mut z);
                z
            })
            .collect()
    }

    fn descend(&self, upper: &[Bits]) -> Vec<Bits> {
        (0..=self.k_max)
            .map(|k| {
                let ext = (self.ext && k < self.k_max).then(|| &upper[k + 1]);
                self.step(k, &upper[k], ext)
            })
            .collect()
    }

    fn relation(&self, k: usize, z: &Bits) -> PairRelation {
        let (sl, sr) = &self.spaces[k];
        let cr = sr.count();
        let mut rel = PairRelation::new(k);
        for idx in z.ones() {
            let pair = ContextPair::new(sl.decode(idx / cr), sr.decode(idx % cr));
            rel.insert(pair).expect("tuple length matches the space");
        }
        rel
    }

    fn seed_index(&self, k: usize, m: usize, n: usize) -> usize {
        let (sl, sr) = &self.spaces[k];
        sl.constant(m) * sr.count() + sr.constant(n)
    }
}

/// Levels `[k][i]`, computed from `L` down to 0.
fn dense_levels(refiner: &Refiner<'_>, l: usize) -> Vec<Vec<Bits>> {
    let mut by_level = vec![refiner.top()];
    for _ in 0..l {
        let next = refiner.descend(by_level.last().expect("nonempty"));
        by_level.push(next);
    }
    by_level.reverse();
    (0..=refiner.k_max)
        .map(|k| by_level.iter().map(|lv| lv[k].clone()).collect())
        .collect()
}

/// The inclusion-greatest `F`-`(k, L)` family for all `k <= K`.
pub fn max_kl_family(
    left: &KripkeModel,
    right: &KripkeModel,
    features: FeatureSet,
    k: usize,
    l: usize,
) -> Result<BisimFamily, BisimError> {
    max_kl_family_with(left, right, features, k, l, Guard::default())
}

pub fn max_kl_family_with(
    left: &KripkeModel,
    right: &KripkeModel,
    features: FeatureSet,
    k: usize,
    l: usize,
    guard: Guard,
) -> Result<BisimFamily, BisimError> {
    same_signature(left, right)?;
    guard.check(left.len(), right.len(), k, l)?;
    let refiner = Refiner::new(left, right, features, k);
    let dense = dense_levels(&refiner, l);
    let levels = dense
        .iter()
        .enumerate()
        .map(|(kk, row)| row.iter().map(|z| refiner.relation(kk, z)).collect())
        .collect();
    BisimFamily::from_levels(levels)
}

/// Whether the constant seeds over the two points lie in `Z[k][0]` of the
/// maximal family for every `k <= K`; `K` defaults to [`default_k`].
pub fn decide_equiv(
    mp: &PointedModel,
    np: &PointedModel,
    features: FeatureSet,
    l: usize,
    k: Option<usize>,
) -> Result<bool, BisimError> {
    decide_equiv_with(mp, np, features, l, k, Guard::default())
}

pub fn decide_equiv_with(
    mp: &PointedModel,
    np: &PointedModel,
    features: FeatureSet,
    l: usize,
    k: Option<usize>,
    guard: Guard,
) -> Result<bool, BisimError> {
    let k = k.unwrap_or_else(|| default_k(features, l));
    same_signature(&mp.model, &np.model)?;
    guard.check(mp.model.len(), np.model.len(), k, l)?;
    let refiner = Refiner::new(&mp.model, &np.model, features, k);
    let mut level = refiner.top();
    for _ in 0..l {
        level = refiner.descend(&level);
    }
    Ok((0..=k).all(|kk| level[kk].get(refiner.seed_index(kk, mp.point.0, np.point.0))))
}

/// Per-`k` union of the top levels `Z[k][L]` of the given families.
pub fn union_family(fams: &[BisimFamily]) -> Result<Vec<PairRelation>, BisimError> {
    let first = fams.first().ok_or(BisimError::Inconsistent)?;
    let k_max = first.k_max();
    let consistent = fams.iter().all(|f| f.k_max() == k_max)
        && fams.windows(2).all(|w| w[0].l_max() < w[1].l_max());
    if !consistent {
        return Err(BisimError::Inconsistent);
    }
    let mut out = first.top();
    for fam in &fams[1..] {
        for (acc, rel) in out.iter_mut().zip(fam.top()) {
            acc.union_with(&rel)?;
        }
    }
    Ok(out)
}

/// Refine level after level until two consecutive levels coincide. On
/// finite models this happens after at most as many rounds as there are
/// pairs; returns the number of rounds and the stable relations `B_k`.
pub fn stable_family(
    left: &KripkeModel,
    right: &KripkeModel,
    features: FeatureSet,
    k: usize,
    guard: Guard,
) -> Result<(usize, Vec<PairRelation>), BisimError> {
    same_signature(left, right)?;
    guard.check(left.len(), right.len(), k, 1)?;
    let refiner = Refiner::new(left, right, features, k);
    let mut level = refiner.top();
    let mut rounds = 0;
    loop {
        let next = refiner.descend(&level);
        if next == level {
            break;
        }
        level = next;
        rounds += 1;
    }
    let rels = level
        .iter()
        .enumerate()
        .map(|(kk, z)| refiner.relation(kk, z))
        .collect();
    Ok((rounds, rels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::{verify_kl_family, verify_omega_family, Scope};
    use crate::model::{fixtures, World};
    use crate::syntax::Signature;

    fn fs(text: &str) -> FeatureSet {
        text.parse().unwrap()
    }

    #[test]
    fn single_world_identity() {
        let m = KripkeModel::builder(Signature::new(Vec::<String>::new(), Vec::<String>::new()).unwrap())
            .world("w")
            .build()
            .unwrap();
        let fam = max_kl_family(&m, &m, FeatureSet::empty(), 0, 1).unwrap();
        let pair = ContextPair::states(World(0), World(0));
        assert!(fam.get(0, 0).contains(&pair) && fam.get(0, 1).contains(&pair));
    }

    #[test]
    fn figure_two_degrees() {
        let chain = PointedModel::new(fixtures::fig2_chain(4).unwrap(), World(0));
        let cycle = PointedModel::new(fixtures::fig2_cycle(), World(0));
        assert!(decide_equiv(&chain, &cycle, FeatureSet::empty(), 3, None).unwrap());
        assert!(!decide_equiv(&chain, &cycle, FeatureSet::empty(), 4, None).unwrap());
        assert!(!decide_equiv(&chain, &cycle, fs("down"), 3, None).unwrap());
        assert!(!decide_equiv(&chain, &cycle, fs("down"), 3, Some(1)).unwrap());
        let fam = max_kl_family(&chain.model, &cycle.model, fs("down"), 1, 3).unwrap();
        assert!(!fam.get(1, 0).contains(&ContextPair::constant(1, World(0), World(0))));
        let plain = max_kl_family(&chain.model, &cycle.model, FeatureSet::empty(), 0, 3).unwrap();
        assert!(plain.get(0, 0).contains(&ContextPair::states(World(0), World(0))));
    }

    #[test]
    fn maximal_families_verify_and_are_chained() {
        let f = fixtures::fig3_mn(3).unwrap();
        for features in FeatureSet::all_subsets() {
            let fam = max_kl_family(&f.left, &f.right, features, 1, 2).unwrap();
            assert!(fam.is_chained());
            let r = verify_kl_family(&f.left, &f.right, &fam, features, None, &Scope::All).unwrap();
            assert!(r.ok, "{features}: {}", r.render(&f.left, &f.right));
        }
    }

    #[test]
    fn guard_refuses_large_instances() {
        let m = fixtures::fig3_m(9).unwrap();
        let err = max_kl_family_with(&m, &m, FeatureSet::empty(), 3, 2, Guard::new(1000)).unwrap_err();
        assert!(matches!(err, BisimError::Guard { cap: 1000, .. }));
    }

    #[test]
    fn stable_family_is_an_omega_family() {
        let f = fixtures::fig3_un(4).unwrap();
        for features in [fs("down"), fs("at,down"), fs("exists")] {
            let (_, rels) = stable_family(&f.left, &f.right, features, 2, Guard::default()).unwrap();
            let r = verify_omega_family(&f.left, &f.right, &rels, features, 2, &Scope::All).unwrap();
            assert!(r.ok, "{features}: {}", r.render(&f.left, &f.right));
        }
    }

    #[test]
    fn union_of_a_single_family_is_its_top() {
        let f = fixtures::fig2(4).unwrap();
        let fam = max_kl_family(&f.left, &f.right, FeatureSet::empty(), 1, 2).unwrap();
        assert_eq!(union_family(std::slice::from_ref(&fam)).unwrap(), fam.top());
        let other = max_kl_family(&f.left, &f.right, FeatureSet::empty(), 0, 3).unwrap();
        assert_eq!(union_family(&[fam, other]), Err(BisimError::Inconsistent));
    }
}
