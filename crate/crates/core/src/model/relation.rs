use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{KripkeModel, World};

/// An assignment tuple together with a current point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    pub tuple: Vec<World>,
    pub point: World,
}

impl Context {
    pub fn new(tuple: Vec<World>, point: World) -> Self {
        Context { tuple, point }
    }

    /// The context `(w..w, w)` with `k` copies of `w` in the tuple.
    pub fn constant(k: usize, w: World) -> Self {
        Context {
            tuple: vec![w; k],
            point: w,
        }
    }

    pub fn k(&self) -> usize {
        self.tuple.len()
    }

    /// Replace the point.
    pub fn at(&self, point: World) -> Self {
        Context {
            tuple: self.tuple.clone(),
            point,
        }
    }

    /// Replace slot `j` (0-based) of the tuple.
    pub fn rebind(&self, j: usize, w: World) -> Self {
        let mut tuple = self.tuple.clone();
        tuple[j] = w;
        Context {
            tuple,
            point: self.point,
        }
    }

    /// Append the current point to the tuple.
    pub fn extend(&self) -> Self {
        let mut tuple = self.tuple.clone();
        tuple.push(self.point);
        Context {
            tuple,
            point: self.point,
        }
    }

    pub fn render(&self, model: &KripkeModel) -> String {
        let tuple: Vec<&str> = self.tuple.iter().map(|w| model.name(*w)).collect();
        format!("(({}), {})", tuple.join(","), model.name(self.point))
    }
}

/// A pair of contexts, left over the first model and right over the second.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextPair {
    pub left: Context,
    pub right: Context,
}

impl ContextPair {
    pub fn new(left: Context, right: Context) -> Self {
        ContextPair { left, right }
    }

    /// The plain state pair `((), m) ~ ((), n)`.
    pub fn states(m: World, n: World) -> Self {
        ContextPair {
            left: Context::new(Vec::new(), m),
            right: Context::new(Vec::new(), n),
        }
    }

    pub fn constant(k: usize, m: World, n: World) -> Self {
        ContextPair {
            left: Context::constant(k, m),
            right: Context::constant(k, n),
        }
    }

    pub fn render(&self, left: &KripkeModel, right: &KripkeModel) -> String {
        format!("{} ~ {}", self.left.render(left), self.right.render(right))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error("malformed relation document: {0}")]
    Schema(String),
    #[error("tuple length {found} does not match k = {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("world index {0} outside the model")]
    OutOfRange(usize),
}

/// A set of context pairs sharing one tuple length `k`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairRelation {
    k: usize,
    pairs: BTreeSet<ContextPair>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDoc {
    k: usize,
    pairs: Vec<PairDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairDoc {
    left: Vec<String>,
    right: Vec<String>,
}

impl PairRelation {
    pub fn new(k: usize) -> Self {
        PairRelation {
            k,
            pairs: BTreeSet::new(),
        }
    }

    /// A relation between plain states.
    pub fn from_states(pairs: impl IntoIterator<Item = (World, World)>) -> Self {
        PairRelation {
            k: 0,
            pairs: pairs.into_iter().map(|(m, n)| ContextPair::states(m, n)).collect(),
        }
    }

    /// Build from `(left, right)` world-name pairs of plain states.
    pub fn from_state_names(
        left: &KripkeModel,
        right: &KripkeModel,
        pairs: &[(&str, &str)],
    ) -> Result<Self, RelationError> {
        let find = |m: &KripkeModel, name: &str| {
            m.world(name)
                .ok_or_else(|| RelationError::UnknownWorld(name.to_string()))
        };
        let mut out = PairRelation::new(0);
        for (a, b) in pairs {
            out.pairs.insert(ContextPair::states(find(left, a)?, find(right, b)?));
        }
        Ok(out)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: &ContextPair) -> bool {
        self.pairs.contains(pair)
    }

    pub fn insert(&mut self, pair: ContextPair) -> Result<bool, RelationError> {
        for t in [&pair.left.tuple, &pair.right.tuple] {
            if t.len() != self.k {
                return Err(RelationError::WrongLength {
                    expected: self.k,
                    found: t.len(),
                });
            }
        }
        Ok(self.pairs.insert(pair))
    }

    pub fn remove(&mut self, pair: &ContextPair) -> bool {
        self.pairs.remove(pair)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ContextPair> {
        self.pairs.iter()
    }

    pub fn is_subset(&self, other: &PairRelation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn union_with(&mut self, other: &PairRelation) -> Result<(), RelationError> {
        if other.k != self.k {
            return Err(RelationError::WrongLength {
                expected: self.k,
                found: other.k,
            });
        }
        self.pairs.extend(other.pairs.iter().cloned());
        Ok(())
    }

    /// Check that every world index lies inside the two models.
    pub fn check_worlds(&self, left: &KripkeModel, right: &KripkeModel) -> Result<(), RelationError> {
        for p in &self.pairs {
            for (ctx, m) in [(&p.left, left), (&p.right, right)] {
                for w in ctx.tuple.iter().chain(std::iter::once(&ctx.point)) {
                    if w.0 >= m.len() {
                        return Err(RelationError::OutOfRange(w.0));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json_value(&self, left: &KripkeModel, right: &KripkeModel) -> serde_json::Value {
        let names = |ctx: &Context, m: &KripkeModel| {
            ctx.tuple
                .iter()
                .chain(std::iter::once(&ctx.point))
                .map(|w| m.name(*w).to_string())
                .collect()
        };
        let doc = RelationDoc {
            k: self.k,
            pairs: self
                .pairs
                .iter()
                .map(|p| PairDoc {
                    left: names(&p.left, left),
                    right: names(&p.right, right),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("relation documents always serialize")
    }

    pub fn from_json_value(
        value: serde_json::Value,
        left: &KripkeModel,
        right: &KripkeModel,
    ) -> Result<Self, RelationError> {
        let doc: RelationDoc =
            serde_json::from_value(value).map_err(|e| RelationError::Schema(e.to_string()))?;
        let context = |names: &[String], m: &KripkeModel| -> Result<Context, RelationError> {
            if names.len() != doc.k + 1 {
                return Err(RelationError::WrongLength {
                    expected: doc.k,
                    found: names.len().saturating_sub(1),
                });
            }
            let worlds = names
                .iter()
                .map(|n| m.world(n).ok_or_else(|| RelationError::UnknownWorld(n.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            let (point, tuple) = worlds.split_last().expect("k + 1 >= 1 names");
            Ok(Context::new(tuple.to_vec(), *point))
        };
        let mut out = PairRelation::new(doc.k);
        for p in &doc.pairs {
            out.insert(ContextPair::new(context(&p.left, left)?, context(&p.right, right)?))?;
        }
        Ok(out)
    }

    pub fn from_json(text: &str, left: &KripkeModel, right: &KripkeModel) -> Result<Self, RelationError> {
        let value = serde_json::from_str(text).map_err(|e| RelationError::Schema(e.to_string()))?;
        Self::from_json_value(value, left, right)
    }
}

impl FromIterator<ContextPair> for PairRelation {
    /// Collect pairs; `k` is taken from the first pair (0 when empty).
    /// Panics if the tuple lengths disagree.
    fn from_iter<I: IntoIterator<Item = ContextPair>>(iter: I) -> Self {
        let mut it = iter.into_iter().peekable();
        let k = it.peek().map_or(0, |p| p.left.k());
        let mut rel = PairRelation::new(k);
        for p in it {
            rel.insert(p).expect("uniform tuple length");
        }
        rel
    }
}

/// Dense numbering of the contexts of one model with tuple length `k`:
/// the tuple entries are the leading base-`n` digits, the point the last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextSpace {
    n: usize,
    k: usize,
    pow: Vec<usize>,
}

impl ContextSpace {
    /// `None` when `n^(k+1)` overflows.
    pub fn new(n: usize, k: usize) -> Option<Self> {
        let mut pow = vec![1usize];
        for _ in 0..=k {
            pow.push(pow.last().unwrap().checked_mul(n)?);
        }
        Some(ContextSpace { n, k, pow })
    }

    pub fn worlds(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of contexts, `n^(k+1)`.
    pub fn count(&self) -> usize {
        self.pow[self.k + 1]
    }

    pub fn encode(&self, ctx: &Context) -> usize {
        debug_assert_eq!(ctx.tuple.len(), self.k);
        ctx.tuple
            .iter()
            .chain(std::iter::once(&ctx.point))
            .fold(0, |acc, w| acc * self.n + w.0)
    }

    pub fn decode(&self, idx: usize) -> Context {
        let tuple = (0..self.k).map(|j| World(self.slot(idx, j))).collect();
        Context::new(tuple, World(self.point(idx)))
    }

    #[inline]
    pub fn point(&self, idx: usize) -> usize {
        idx % self.n
    }

    /// Entry of slot `j` (0-based).
    #[inline]
    pub fn slot(&self, idx: usize, j: usize) -> usize {
        (idx / self.pow[self.k - j]) % self.n
    }

    #[inline]
    pub fn with_point(&self, idx: usize, w: usize) -> usize {
        idx - self.point(idx) + w
    }

    #[inline]
    pub fn with_slot(&self, idx: usize, j: usize, w: usize) -> usize {
        let p = self.pow[self.k - j];
        idx - self.slot(idx, j) * p + w * p
    }

    /// Index, in the space of tuple length `k + 1`, of the context with the
    /// current point appended to the tuple.
    #[inline]
    pub fn extend(&self, idx: usize) -> usize {
        idx * self.n + self.point(idx)
    }

    pub fn constant(&self, w: usize) -> usize {
        (0..=self.k).fold(0, |acc, _| acc * self.n + w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Signature;

    #[test]
    fn context_space_digits() {
        let s = ContextSpace::new(3, 2).unwrap();
        assert_eq!(s.count(), 27);
        let c = Context::new(vec![World(2), World(0)], World(1));
        let i = s.encode(&c);
        assert_eq!(s.decode(i), c);
        assert_eq!(s.point(i), 1);
        assert_eq!(s.slot(i, 0), 2);
        assert_eq!(s.slot(i, 1), 0);
        assert_eq!(s.decode(s.with_slot(i, 1, 2)), c.rebind(1, World(2)));
        assert_eq!(s.decode(s.with_point(i, 0)), c.at(World(0)));
        let big = ContextSpace::new(3, 3).unwrap();
        assert_eq!(big.decode(s.extend(i)), c.extend());
        assert_eq!(s.decode(s.constant(1)), Context::constant(2, World(1)));
        assert!(ContextSpace::new(1 << 20, 8).is_none());
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let m = KripkeModel::builder(Signature::default())
            .worlds(["a", "b"])
            .build()
            .unwrap();
        let mut rel = PairRelation::new(1);
        rel.insert(ContextPair::new(
            Context::new(vec![World(0)], World(1)),
            Context::new(vec![World(1)], World(1)),
        ))
        .unwrap();
        let v = rel.to_json_value(&m, &m);
        assert_eq!(
            v,
            serde_json::json!({"k": 1, "pairs": [{"left": ["a", "b"], "right": ["b", "b"]}]})
        );
        assert_eq!(PairRelation::from_json_value(v, &m, &m).unwrap(), rel);
        let short = serde_json::json!({"k": 1, "pairs": [{"left": ["a"], "right": ["b", "b"]}]});
        assert!(matches!(
            PairRelation::from_json_value(short, &m, &m),
            Err(RelationError::WrongLength { .. })
        ));
        let unknown = serde_json::json!({"k": 0, "pairs": [{"left": ["z"], "right": ["b"]}]});
        assert_eq!(
            PairRelation::from_json_value(unknown, &m, &m),
            Err(RelationError::UnknownWorld("z".into()))
        );
        assert!(rel.insert(ContextPair::states(World(0), World(0))).is_err());
    }
}
