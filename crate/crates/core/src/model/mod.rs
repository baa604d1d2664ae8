//! Finite Kripke structures, contexts and relations between them.

pub mod fixtures;
pub mod random;
mod relation;
mod structure;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::syntax::{Signature, SignatureError};

pub use relation::{Context, ContextPair, ContextSpace, PairRelation, RelationError};
pub use structure::{disjoint_union, Expansion, FolStructure};

/// Index of a world in its model's declared order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct World(pub usize);

impl World {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("malformed model document: {0}")]
    Schema(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("nominal `{0}` has no interpretation")]
    Uninterpreted(String),
    #[error("proposition `{0}` is not in the signature")]
    UnknownProp(String),
    #[error("nominal `{0}` is not in the signature")]
    UnknownNom(String),
    #[error("model has no worlds")]
    Empty,
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// A finite structure `(W, R, V, nom)` over a [`Signature`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    sig: Signature,
    names: Vec<String>,
    succ: Vec<Vec<usize>>,
    valuation: Vec<Bits>,
    nom: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    worlds: Vec<String>,
    #[serde(default)]
    rel: Vec<(String, String)>,
    #[serde(default)]
    prop: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    nom: BTreeMap<String, String>,
}

/// Incremental, name-based construction of a [`KripkeModel`].
#[derive(Debug, Clone)]
pub struct ModelBuilder {
    sig: Signature,
    worlds: Vec<String>,
    edges: Vec<(String, String)>,
    props: Vec<(String, Vec<String>)>,
    noms: Vec<(String, String)>,
}

impl ModelBuilder {
    pub fn world(mut self, name: impl Into<String>) -> Self {
        self.worlds.push(name.into());
        self
    }

    pub fn worlds<I>(mut self, names: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        self.worlds.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn edge(mut self, from: impl Into<String>, to: impl Into<String>) -> Self {
        self.edges.push((from.into(), to.into()));
        self
    }

    pub fn prop<I>(mut self, p: impl Into<String>, worlds: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        self.props
            .push((p.into(), worlds.into_iter().map(Into::into).collect()));
        self
    }

    /// Make proposition `p` true at every world added so far.
    pub fn prop_everywhere(mut self, p: impl Into<String>) -> Self {
        let all = self.worlds.clone();
        self.props.push((p.into(), all));
        self
    }

    pub fn nom(mut self, s: impl Into<String>, world: impl Into<String>) -> Self {
        self.noms.push((s.into(), world.into()));
        self
    }

    pub fn build(self) -> Result<KripkeModel, ModelError> {
        if self.worlds.is_empty() {
            return Err(ModelError::Empty);
        }
        let mut index = HashMap::new();
        for (i, w) in self.worlds.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        let lookup = |w: &String| {
            index
                .get(w)
                .copied()
                .ok_or_else(|| ModelError::UnknownWorld(w.clone()))
        };
        let n = self.worlds.len();
        let mut succ = vec![Vec::new(); n];
        for (a, b) in &self.edges {
            succ[lookup(a)?].push(lookup(b)?);
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        let mut valuation = vec![Bits::new(n); self.sig.props().len()];
        for (p, ws) in &self.props {
            let pi = self
                .sig
                .prop_index(p)
                .ok_or_else(|| ModelError::UnknownProp(p.clone()))?;
            for w in ws {
                valuation[pi].set(lookup(w)?);
            }
        }
        let mut nom = vec![None; self.sig.noms().len()];
        for (s, w) in &self.noms {
            let si = self
                .sig
                .nom_index(s)
                .ok_or_else(|| ModelError::UnknownNom(s.clone()))?;
            nom[si] = Some(lookup(w)?);
        }
        let nom = nom
            .into_iter()
            .zip(self.sig.noms())
            .map(|(w, s)| w.ok_or_else(|| ModelError::Uninterpreted(s.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(KripkeModel {
            sig: self.sig,
            names: self.worlds,
            succ,
            valuation,
            nom,
        })
    }
}

impl KripkeModel {
    pub fn builder(sig: Signature) -> ModelBuilder {
        ModelBuilder {
            sig,
            worlds: Vec::new(),
            edges: Vec::new(),
            props: Vec::new(),
            noms: Vec::new(),
        }
    }

    /// Load a model document against an explicit signature. Propositions of
    /// the signature missing from the document are false everywhere.
    pub fn from_json(text: &str, sig: &Signature) -> Result<Self, ModelError> {
        let doc: ModelDoc =
            serde_json::from_str(text).map_err(|e| ModelError::Schema(e.to_string()))?;
        Self::from_doc(doc, sig.clone())
    }

    /// Load a model document, taking its signature from the document's keys.
    pub fn from_json_infer(text: &str) -> Result<Self, ModelError> {
        let doc: ModelDoc =
            serde_json::from_str(text).map_err(|e| ModelError::Schema(e.to_string()))?;
        let sig = Signature::new(doc.prop.keys().cloned(), doc.nom.keys().cloned())?;
        Self::from_doc(doc, sig)
    }

    /// Signature a document would infer, without building the model.
    pub fn signature_of_json(text: &str) -> Result<Signature, ModelError> {
        let doc: ModelDoc =
            serde_json::from_str(text).map_err(|e| ModelError::Schema(e.to_string()))?;
        Ok(Signature::new(doc.prop.keys().cloned(), doc.nom.keys().cloned())?)
    }

    fn from_doc(doc: ModelDoc, sig: Signature) -> Result<Self, ModelError> {
        let mut b = KripkeModel::builder(sig).worlds(doc.worlds);
        for (x, y) in doc.rel {
            b = b.edge(x, y);
        }
        for (p, ws) in doc.prop {
            b = b.prop(p, ws);
        }
        for (s, w) in doc.nom {
            b = b.nom(s, w);
        }
        b.build()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = ModelDoc {
            worlds: self.names.clone(),
            rel: self
                .edges()
                .map(|(a, b)| (self.name(a).to_string(), self.name(b).to_string()))
                .collect(),
            prop: self
                .sig
                .props()
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let ws = self.valuation[i].ones().map(|w| self.names[w].clone()).collect();
                    (p.clone(), ws)
                })
                .collect(),
            nom: self
                .sig
                .noms()
                .iter()
                .zip(&self.nom)
                .map(|(s, w)| (s.clone(), self.names[*w].clone()))
                .collect(),
        };
        serde_json::to_value(doc).expect("model documents always serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("model documents always serialize")
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> {
        (0..self.names.len()).map(World)
    }

    pub fn name(&self, w: World) -> &str {
        &self.names[w.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn world(&self, name: &str) -> Option<World> {
        self.names.iter().position(|n| n == name).map(World)
    }

    pub fn world_or_err(&self, name: &str) -> Result<World, ModelError> {
        self.world(name)
            .ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
    }

    /// Successors of `w`, ascending.
    pub fn successors(&self, w: World) -> impl Iterator<Item = World> + '_ {
        self.succ[w.0].iter().map(|&v| World(v))
    }

    pub(crate) fn succ_raw(&self, w: usize) -> &[usize] {
        &self.succ[w]
    }

    pub fn has_edge(&self, a: World, b: World) -> bool {
        self.succ[a.0].binary_search(&b.0).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (World, World)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, bs)| bs.iter().map(move |&b| (World(a), World(b))))
    }

    /// Truth of the `i`-th proposition of the signature at `w`.
    pub fn holds(&self, prop_index: usize, w: World) -> bool {
        self.valuation[prop_index].get(w.0)
    }

    pub fn holds_named(&self, prop: &str, w: World) -> Option<bool> {
        self.sig.prop_index(prop).map(|i| self.holds(i, w))
    }

    /// Interpretation of the `i`-th nominal of the signature.
    pub fn nominal(&self, nom_index: usize) -> World {
        World(self.nom[nom_index])
    }

    pub fn nominal_named(&self, s: &str) -> Option<World> {
        self.sig.nom_index(s).map(|i| self.nominal(i))
    }

    /// Same structure with one more nominal interpreted at `w`.
    pub fn with_nominal(&self, s: &str, w: World) -> Result<Self, ModelError> {
        let mut noms = self.sig.noms().to_vec();
        noms.push(s.to_string());
        let sig = Signature::new(self.sig.props().to_vec(), noms)?;
        let mut nom = self.nom.clone();
        nom.push(w.0);
        Ok(KripkeModel {
            sig,
            nom,
            ..self.clone()
        })
    }

    /// Same structure with nominal `s` dropped from the signature.
    pub fn without_nominal(&self, s: &str) -> Result<Self, ModelError> {
        let i = self
            .sig
            .nom_index(s)
            .ok_or_else(|| ModelError::UnknownNom(s.to_string()))?;
        let mut noms = self.sig.noms().to_vec();
        noms.remove(i);
        let mut nom = self.nom.clone();
        nom.remove(i);
        Ok(KripkeModel {
            sig: Signature::new(self.sig.props().to_vec(), noms)?,
            nom,
            ..self.clone()
        })
    }

    /// Reflexive transitive closure of the accessibility relation.
    pub fn reachability(&self) -> Reachability {
        let n = self.len();
        let rows = (0..n)
            .map(|start| {
                let mut seen = Bits::new(n);
                seen.set(start);
                let mut stack = vec![start];
                while let Some(v) = stack.pop() {
                    for &u in &self.succ[v] {
                        if !seen.get(u) {
                            seen.set(u);
                            stack.push(u);
                        }
                    }
                }
                seen
            })
            .collect();
        Reachability { rows }
    }
}

/// The relation R* of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachability {
    rows: Vec<Bits>,
}

impl Reachability {
    pub fn reaches(&self, from: World, to: World) -> bool {
        self.rows[from.0].get(to.0)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (World, World)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.ones().map(move |b| (World(a), World(b))))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Bits::count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A model with a distinguished world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedModel {
    pub model: KripkeModel,
    pub point: World,
}

impl PointedModel {
    pub fn new(model: KripkeModel, point: World) -> Self {
        assert!(point.0 < model.len(), "point outside the model");
        PointedModel { model, point }
    }

    pub fn named(model: KripkeModel, point: &str) -> Result<Self, ModelError> {
        let point = model.world_or_err(point)?;
        Ok(PointedModel { model, point })
    }
}
