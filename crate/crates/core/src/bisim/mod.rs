//! Graded bisimulations: condition sets, families of relations, their
//! verification and the maximal families.
//!
//! A family `Z[k][i]` relates contexts with tuples of length `k` at level
//! `i`. Level 0 is the strongest: pairs there must answer every move into
//! level 1, and so on up to level `L`, whose pairs only have to satisfy the
//! local conditions. In the maximal family, a pair sits at level `i` exactly
//! when its two contexts agree on formulas of degree at most `L - i`.

mod maximal;
mod qinj;
mod verify;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::model::{KripkeModel, PairRelation, RelationError};
use crate::syntax::{Feature, FeatureSet};

pub use maximal::{
    decide_equiv, decide_equiv_with, default_k, max_kl_family, max_kl_family_with, stable_family, union_family,
    Guard, DEFAULT_MAX_PAIRS,
};
pub use qinj::{example46_family, is_quasi_injective, qinj_to_family, Example46};
pub use verify::{verify_kl_family, verify_omega_family, verify_plain_bisim, Scope, Violation, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConditionTag {
    Prop,
    Wvar,
    Forth,
    Back,
    Nom,
    Bind,
    Atv,
    Atn,
    ExF,
    ExB,
    Ext,
    Chain,
    Seed,
}

impl ConditionTag {
    pub const ALL: [ConditionTag; 13] = [
        ConditionTag::Prop,
        ConditionTag::Wvar,
        ConditionTag::Forth,
        ConditionTag::Back,
        ConditionTag::Nom,
        ConditionTag::Bind,
        ConditionTag::Atv,
        ConditionTag::Atn,
        ConditionTag::ExF,
        ConditionTag::ExB,
        ConditionTag::Ext,
        ConditionTag::Chain,
        ConditionTag::Seed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConditionTag::Prop => "prop",
            ConditionTag::Wvar => "wvar",
            ConditionTag::Forth => "forth",
            ConditionTag::Back => "back",
            ConditionTag::Nom => "nom",
            ConditionTag::Bind => "bind",
            ConditionTag::Atv => "atv",
            ConditionTag::Atn => "atn",
            ConditionTag::ExF => "ex_f",
            ConditionTag::ExB => "ex_b",
            ConditionTag::Ext => "ext",
            ConditionTag::Chain => "chain",
            ConditionTag::Seed => "seed",
        }
    }

    /// Required of every family regardless of features.
    pub fn is_base(self) -> bool {
        matches!(
            self,
            ConditionTag::Prop | ConditionTag::Wvar | ConditionTag::Forth | ConditionTag::Back
        )
    }

    pub fn is_structural(self) -> bool {
        matches!(self, ConditionTag::Chain | ConditionTag::Ext | ConditionTag::Seed)
    }
}

impl fmt::Display for ConditionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown condition `{0}`")]
pub struct UnknownCondition(pub String);

impl FromStr for ConditionTag {
    type Err = UnknownCondition;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConditionTag::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| UnknownCondition(s.to_string()))
    }
}

/// The feature-dependent conditions, clause by clause.
pub fn conds(features: FeatureSet) -> BTreeSet<ConditionTag> {
    use ConditionTag::*;
    use Feature::{At, Down, Exists, Nom as F_Nom};
    let has = |fs: &[Feature]| fs.iter().all(|f| features.contains(*f));
    let clauses: &[(&[Feature], &[ConditionTag])] = &[
        (&[F_Nom], &[Nom]),
        (&[Down], &[Bind]),
        (&[Down, F_Nom], &[Bind, Nom]),
        (&[At], &[Atv]),
        (&[At, F_Nom], &[Atv, Atn, Nom]),
        (&[Exists], &[ExF, ExB]),
        (&[Exists, F_Nom], &[ExF, ExB, Nom]),
        (&[Down, At], &[Bind, Atv]),
        (&[Down, At, F_Nom], &[Bind, Atv, Atn, Nom]),
        (&[Exists, At], &[ExF, ExB, Atv]),
        (&[Exists, At, F_Nom], &[Nom, Bind, Atv, Atn, ExF, ExB]),
    ];
    clauses
        .iter()
        .filter(|(trigger, _)| has(trigger))
        .flat_map(|(_, out)| out.iter().copied())
        .collect()
}

/// Base conditions plus `conds(features)`.
pub fn required(features: FeatureSet) -> BTreeSet<ConditionTag> {
    let mut out = conds(features);
    out.extend(ConditionTag::ALL.into_iter().filter(|c| c.is_base()));
    out
}

/// Whether graded families enforce (ext). Without a binder, the extended
/// tuple cannot be reached by any formula, and requiring (ext) would
/// separate states that agree on every sentence.
pub fn ext_enforced(features: FeatureSet) -> bool {
    features.has_binder()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BisimError {
    #[error("the two models have different signatures")]
    SignatureMismatch,
    #[error("malformed family: {0}")]
    Malformed(String),
    #[error("instance needs {needed} context pairs, above the cap of {cap}")]
    Guard { needed: u128, cap: u128 },
    #[error("relation is not a quasi-injective bisimulation: {0}")]
    NotQuasiInjective(String),
    #[error("families must share K and have strictly increasing L")]
    Inconsistent,
    #[error("depth must be at least {min}, got {got}")]
    TooSmall { min: usize, got: usize },
    #[error(transparent)]
    Relation(#[from] RelationError),
}

/// `Z[k][i]` for `k <= K`, `i <= L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisimFamily {
    k_max: usize,
    l_max: usize,
    levels: Vec<Vec<PairRelation>>,
}

impl BisimFamily {
    /// All relations empty.
    pub fn empty(k_max: usize, l_max: usize) -> Self {
        let levels = (0..=k_max)
            .map(|k| (0..=l_max).map(|_| PairRelation::new(k)).collect())
            .collect();
        BisimFamily { k_max, l_max, levels }
    }

    /// From relations indexed `[k][i]`.
    pub fn from_levels(levels: Vec<Vec<PairRelation>>) -> Result<Self, BisimError> {
        let k_max = levels
            .len()
            .checked_sub(1)
            .ok_or_else(|| BisimError::Malformed("no tuple lengths".into()))?;
        let l_max = levels[0]
            .len()
            .checked_sub(1)
            .ok_or_else(|| BisimError::Malformed("no levels".into()))?;
        for (k, row) in levels.iter().enumerate() {
            if row.len() != l_max + 1 {
                return Err(BisimError::Malformed(format!("k = {k} has {} levels", row.len())));
            }
            if let Some(rel) = row.iter().find(|r| r.k() != k) {
                return Err(BisimError::Malformed(format!(
                    "relation with k = {} stored at k = {k}",
                    rel.k()
                )));
            }
        }
        Ok(BisimFamily { k_max, l_max, levels })
    }

    /// Lift a plain state relation to `K = 0, L = 0`.
    pub fn from_plain(rel: PairRelation) -> Result<Self, BisimError> {
        Self::from_levels(vec![vec![rel]])
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn get(&self, k: usize, i: usize) -> &PairRelation {
        &self.levels[k][i]
    }

    pub fn get_mut(&mut self, k: usize, i: usize) -> &mut PairRelation {
        &mut self.levels[k][i]
    }

    /// `Z[k][L]` for each `k`.
    pub fn top(&self) -> Vec<PairRelation> {
        self.levels.iter().map(|row| row[self.l_max].clone()).collect()
    }

    /// `Z[k][0]` for each `k`.
    pub fn bottom(&self) -> Vec<PairRelation> {
        self.levels.iter().map(|row| row[0].clone()).collect()
    }

    pub fn total_pairs(&self) -> usize {
        self.levels.iter().flatten().map(PairRelation::len).sum()
    }

    /// Whether `Z[k][i] ⊆ Z[k][i+1]` throughout.
    pub fn is_chained(&self) -> bool {
        self.levels
            .iter()
            .all(|row| row.windows(2).all(|w| w[0].is_subset(&w[1])))
    }

    pub fn to_json_value(&self, left: &KripkeModel, right: &KripkeModel) -> serde_json::Value {
        let mut levels = serde_json::Map::new();
        for (k, row) in self.levels.iter().enumerate() {
            for (i, rel) in row.iter().enumerate() {
                levels.insert(format!("{k},{i}"), rel.to_json_value(left, right));
            }
        }
        serde_json::json!({ "K": self.k_max, "L": self.l_max, "levels": levels })
    }

    pub fn to_json(&self, left: &KripkeModel, right: &KripkeModel) -> String {
        serde_json::to_string_pretty(&self.to_json_value(left, right)).expect("families serialize")
    }

    /// Missing `"k,i"` entries are read as empty relations.
    pub fn from_json_value(
        value: serde_json::Value,
        left: &KripkeModel,
        right: &KripkeModel,
    ) -> Result<Self, BisimError> {
        let malformed = |m: &str| BisimError::Malformed(m.to_string());
        let obj = value.as_object().ok_or_else(|| malformed("expected an object"))?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "K" | "L" | "levels") {
                return Err(BisimError::Malformed(format!("unknown field `{key}`")));
            }
        }
        let field = |name: &str| {
            obj.get(name)
                .and_then(serde_json::Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| BisimError::Malformed(format!("missing or invalid `{name}`")))
        };
        let (k_max, l_max) = (field("K")?, field("L")?);
        let levels = obj
            .get("levels")
            .and_then(serde_json::Value::as_object)
            .ok_or_else(|| malformed("missing `levels` object"))?;
        let mut fam = BisimFamily::empty(k_max, l_max);
        for (key, rel) in levels {
            let parsed = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)));
            let Some((k, i)) = parsed.filter(|&(k, i)| k <= k_max && i <= l_max) else {
                return Err(BisimError::Malformed(format!("bad level key `{key}`")));
            };
            let rel = PairRelation::from_json_value(rel.clone(), left, right)?;
            if rel.k() != k {
                return Err(BisimError::Malformed(format!("level `{key}` holds pairs with k = {}", rel.k())));
            }
            fam.levels[k][i] = rel;
        }
        Ok(fam)
    }

    pub fn from_json(text: &str, left: &KripkeModel, right: &KripkeModel) -> Result<Self, BisimError> {
        let value = serde_json::from_str(text).map_err(|e| BisimError::Malformed(e.to_string()))?;
        Self::from_json_value(value, left, right)
    }
}

fn same_signature(left: &KripkeModel, right: &KripkeModel) -> Result<(), BisimError> {
    if left.signature() != right.signature() {
        return Err(BisimError::SignatureMismatch);
    }
    Ok(())
}
