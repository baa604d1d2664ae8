use std::collections::{BTreeMap, BTreeSet};

use super::{KripkeModel, ModelError, World};
use crate::syntax::{predicate_name, FolSignature};

/// Interpretations of extra unary predicates and constants on top of a
/// Kripke model.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Expansion {
    preds: BTreeMap<String, BTreeSet<World>>,
    consts: BTreeMap<String, World>,
}

impl Expansion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_pred(mut self, name: impl Into<String>, worlds: impl IntoIterator<Item = World>) -> Self {
        self.preds.insert(name.into(), worlds.into_iter().collect());
        self
    }

    pub fn with_const(mut self, name: impl Into<String>, w: World) -> Self {
        self.consts.insert(name.into(), w);
        self
    }

    pub fn pred(&self, name: &str) -> Option<&BTreeSet<World>> {
        self.preds.get(name)
    }

    pub fn constant(&self, name: &str) -> Option<World> {
        self.consts.get(name).copied()
    }

    pub fn preds(&self) -> impl Iterator<Item = (&String, &BTreeSet<World>)> {
        self.preds.iter()
    }

    pub fn consts(&self) -> impl Iterator<Item = (&String, &World)> {
        self.consts.iter()
    }
}

/// A Kripke model read as a first-order structure, possibly expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FolStructure {
    model: KripkeModel,
    expansion: Expansion,
}

impl FolStructure {
    pub fn new(model: KripkeModel, expansion: Expansion) -> Result<Self, ModelError> {
        let sig = model.signature();
        for (p, ws) in &expansion.preds {
            let clash = p == "R" || sig.props().iter().any(|q| predicate_name(q) == *p);
            if clash {
                return Err(ModelError::SignatureMismatch(format!(
                    "extra predicate `{p}` clashes with the base signature"
                )));
            }
            if let Some(w) = ws.iter().find(|w| w.0 >= model.len()) {
                return Err(ModelError::UnknownWorld(w.to_string()));
            }
        }
        for (c, w) in &expansion.consts {
            if sig.has_nom(c) {
                return Err(ModelError::SignatureMismatch(format!(
                    "extra constant `{c}` clashes with a nominal"
                )));
            }
            if w.0 >= model.len() {
                return Err(ModelError::UnknownWorld(w.to_string()));
            }
        }
        Ok(FolStructure { model, expansion })
    }

    pub fn plain(model: KripkeModel) -> Self {
        FolStructure {
            model,
            expansion: Expansion::new(),
        }
    }

    pub fn model(&self) -> &KripkeModel {
        &self.model
    }

    pub fn expansion(&self) -> &Expansion {
        &self.expansion
    }

    pub fn signature(&self) -> FolSignature {
        FolSignature::with_extra(
            self.model.signature().clone(),
            self.expansion.preds.keys().cloned(),
            self.expansion.consts.keys().cloned(),
        )
        .expect("validated at construction")
    }

    /// Same model with a different expansion.
    pub fn with_expansion(&self, expansion: Expansion) -> Result<Self, ModelError> {
        FolStructure::new(self.model.clone(), expansion)
    }

    /// Disjoint union: A's worlds come first (indices `0..|A|`), then B's.
    /// Constants, including nominals, keep their interpretation in A.
    pub fn disjoint_union(&self, other: &FolStructure) -> Result<FolStructure, ModelError> {
        let same_preds = self.expansion.preds.keys().eq(other.expansion.preds.keys());
        let same_consts = self.expansion.consts.keys().eq(other.expansion.consts.keys());
        if !same_preds || !same_consts {
            return Err(ModelError::SignatureMismatch(
                "expansions declare different symbols".into(),
            ));
        }
        let model = disjoint_union(&self.model, &other.model)?;
        let shift = self.model.len();
        let preds = self
            .expansion
            .preds
            .iter()
            .map(|(p, ws)| {
                let mut all = ws.clone();
                all.extend(other.expansion.preds[p].iter().map(|w| World(w.0 + shift)));
                (p.clone(), all)
            })
            .collect();
        let expansion = Expansion {
            preds,
            consts: self.expansion.consts.clone(),
        };
        FolStructure::new(model, expansion)
    }
}

/// Disjoint union of two models over the same signature. World names are
/// tagged `A.` and `B.`; A's worlds come first; nominals keep A's
/// interpretation.
pub fn disjoint_union(a: &KripkeModel, b: &KripkeModel) -> Result<KripkeModel, ModelError> {
    if a.signature() != b.signature() {
        return Err(ModelError::SignatureMismatch(
            "operands have different signatures".into(),
        ));
    }
    let tag = |t: &str, m: &KripkeModel, w: World| format!("{t}.{}", m.name(w));
    let mut builder = KripkeModel::builder(a.signature().clone())
        .worlds(a.worlds().map(|w| tag("A", a, w)))
        .worlds(b.worlds().map(|w| tag("B", b, w)));
    for (x, y) in a.edges() {
        builder = builder.edge(tag("A", a, x), tag("A", a, y));
    }
    for (x, y) in b.edges() {
        builder = builder.edge(tag("B", b, x), tag("B", b, y));
    }
    for (i, p) in a.signature().props().iter().enumerate() {
        let left = a.worlds().filter(|w| a.holds(i, *w)).map(|w| tag("A", a, w));
        let right = b.worlds().filter(|w| b.holds(i, *w)).map(|w| tag("B", b, w));
        builder = builder.prop(p.clone(), left.chain(right).collect::<Vec<_>>());
    }
    for (i, s) in a.signature().noms().iter().enumerate() {
        builder = builder.nom(s.clone(), tag("A", a, a.nominal(i)));
    }
    builder.build()
}
