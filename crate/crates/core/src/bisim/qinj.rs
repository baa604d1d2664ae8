use super::{verify_plain_bisim, BisimError, Scope};
use crate::model::{fixtures, Context, ContextPair, KripkeModel, PairRelation, World};

fn qinj_failure(left: &KripkeModel, right: &KripkeModel, rel: &PairRelation) -> Option<String> {
    let (rl, rr) = (left.reachability(), right.reachability());
    let pairs: Vec<(World, World)> = rel.iter().map(|p| (p.left.point, p.right.point)).collect();
    for &(m, n) in &pairs {
        for &(m2, n2) in &pairs {
            if m == m2 && n < n2 && (rr.reaches(n, n2) || rr.reaches(n2, n)) {
                return Some(format!(
                    "{} has partners {} and {}, and one reaches the other",
                    left.name(m),
                    right.name(n),
                    right.name(n2)
                ));
            }
            if n == n2 && m < m2 && (rl.reaches(m, m2) || rl.reaches(m2, m)) {
                return Some(format!(
                    "{} has partners {} and {}, and one reaches the other",
                    right.name(n),
                    left.name(m),
                    left.name(m2)
                ));
            }
        }
    }
    None
}

fn check_quasi_injective(
    left: &KripkeModel,
    right: &KripkeModel,
    rel: &PairRelation,
    scope: &Scope,
) -> Result<Result<(), String>, BisimError> {
    let report = verify_plain_bisim(left, right, rel, false, scope)?;
    if let Some(v) = report.violations.first() {
        return Ok(Err(v.render(left, right)));
    }
    Ok(qinj_failure(left, right, rel).map_or(Ok(()), Err))
}

/// A bisimulation whose distinct partners of any one state are mutually
/// unreachable. The bisimulation conditions are checked on in-scope pairs;
/// the partner condition on all of them.
pub fn is_quasi_injective(
    left: &KripkeModel,
    right: &KripkeModel,
    rel: &PairRelation,
    scope: &Scope,
) -> Result<bool, BisimError> {
    Ok(check_quasi_injective(left, right, rel, scope)?.is_ok())
}

/// `B_k` for `k <= K`: pairs whose current states and every remembered
/// coordinate pair lie in `rel`, with the current states reachable from
/// each remembered one.
pub fn qinj_to_family(
    left: &KripkeModel,
    right: &KripkeModel,
    rel: &PairRelation,
    k: usize,
    scope: &Scope,
) -> Result<Vec<PairRelation>, BisimError> {
    if let Err(why) = check_quasi_injective(left, right, rel, scope)? {
        return Err(BisimError::NotQuasiInjective(why));
    }
    let (rl, rr) = (left.reachability(), right.reachability());
    let states: Vec<(World, World)> = rel.iter().map(|p| (p.left.point, p.right.point)).collect();
    let mut out: Vec<PairRelation> = (0..=k).map(PairRelation::new).collect();
    for &(m, n) in &states {
        let letters: Vec<(World, World)> = states
            .iter()
            .copied()
            .filter(|&(a, b)| rl.reaches(a, m) && rr.reaches(b, n))
            .collect();
        for (kk, rel_k) in out.iter_mut().enumerate() {
            for word in words(&letters, kk) {
                rel_k.insert(word_pair(&word, m, n))?;
            }
        }
    }
    Ok(out)
}

fn words(letters: &[(World, World)], len: usize) -> Vec<Vec<(World, World)>> {
    let mut acc = vec![Vec::new()];
    for _ in 0..len {
        acc = acc
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut w2 = w.clone();
                    w2.push(l);
                    w2
                })
            })
            .collect();
    }
    acc
}

fn word_pair(word: &[(World, World)], m: World, n: World) -> ContextPair {
    ContextPair::new(
        Context::new(word.iter().map(|p| p.0).collect(), m),
        Context::new(word.iter().map(|p| p.1).collect(), n),
    )
}

/// The truncated `fig3_MN` pair together with the run-recording family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example46 {
    pub left: KripkeModel,
    pub right: KripkeModel,
    pub base: PairRelation,
    pub family: Vec<PairRelation>,
}

/// Words of remembered pairs for each base pair: the root pair `(m0, n0)`
/// only remembers itself; `(m_i, n_i)` remembers the root and `(m_j, n_j)`
/// for `1 <= j <= i`; `(m_(i+1), n_i)` the root and `(m_(j+1), n_j)`.
pub fn example46_family(d: usize, kbound: usize) -> Result<Example46, BisimError> {
    if d < 2 {
        return Err(BisimError::TooSmall { min: 2, got: d });
    }
    let fx = fixtures::fig3_mn(d).map_err(|e| BisimError::Malformed(e.to_string()))?;
    let letters = |i: usize, j: usize| -> Vec<(World, World)> {
        let mut out = vec![(World(0), World(0))];
        if i == j {
            out.extend((1..=j).map(|t| (World(t), World(t))));
        } else {
            out.extend((1..=j).map(|t| (World(t + 1), World(t))));
        }
        out
    };
    let mut family: Vec<PairRelation> = (0..=kbound).map(PairRelation::new).collect();
    for pair in fx.relation.iter() {
        let (m, n) = (pair.left.point, pair.right.point);
        let alphabet = letters(m.0, n.0);
        for (k, rel) in family.iter_mut().enumerate() {
            for word in words(&alphabet, k) {
                rel.insert(word_pair(&word, m, n))?;
            }
        }
    }
    Ok(Example46 {
        left: fx.left,
        right: fx.right,
        base: fx.relation,
        family,
    })
}
