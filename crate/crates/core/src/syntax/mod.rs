//! Formula syntax: signatures, feature sets, hybrid and first-order ASTs,
//! parsers and printers.

mod fol;
mod hybrid;
mod lexer;
mod parser;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use fol::{predicate_name, prop_of_predicate, FolFormula, FolSignature, Term};
pub use hybrid::{HybridFormula, Place};
pub use parser::{infer_fol, infer_hybrid, parse_fol, parse_hybrid, ParseError};

const KEYWORDS: [&str; 5] = ["false", "true", "down", "exists", "forall"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("duplicate symbol `{0}`")]
    Duplicate(String),
    #[error("`{0}` is declared both as a proposition and as a nominal")]
    Overlap(String),
    #[error("invalid proposition name `{0}` (expected [a-z][a-z0-9_]*, not a keyword)")]
    InvalidProp(String),
    #[error("invalid nominal name `{0}`")]
    InvalidNom(String),
}

pub(crate) fn is_ident(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_prop_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && !KEYWORDS.contains(&name)
}

/// Propositions and nominals, each in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSignature", into = "RawSignature")]
pub struct Signature {
    props: Vec<String>,
    noms: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RawSignature {
    #[serde(default)]
    props: Vec<String>,
    #[serde(default)]
    noms: Vec<String>,
}

impl TryFrom<RawSignature> for Signature {
    type Error = SignatureError;
    fn try_from(raw: RawSignature) -> Result<Self, Self::Error> {
        Signature::new(raw.props, raw.noms)
    }
}

impl From<Signature> for RawSignature {
    fn from(sig: Signature) -> Self {
        RawSignature {
            props: sig.props,
            noms: sig.noms,
        }
    }
}

impl Signature {
    pub fn new<P, N>(props: P, noms: N) -> Result<Self, SignatureError>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        N: IntoIterator,
        N::Item: Into<String>,
    {
        let props: Vec<String> = props.into_iter().map(Into::into).collect();
        let noms: Vec<String> = noms.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for p in &props {
            if !is_prop_name(p) {
                return Err(SignatureError::InvalidProp(p.clone()));
            }
            if !seen.insert(p.as_str()) {
                return Err(SignatureError::Duplicate(p.clone()));
            }
        }
        let mut seen_noms = BTreeSet::new();
        for s in &noms {
            if !is_ident(s) {
                return Err(SignatureError::InvalidNom(s.clone()));
            }
            if seen.contains(s.as_str()) {
                return Err(SignatureError::Overlap(s.clone()));
            }
            if !seen_noms.insert(s.as_str()) {
                return Err(SignatureError::Duplicate(s.clone()));
            }
        }
        Ok(Signature { props, noms })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn noms(&self) -> &[String] {
        &self.noms
    }

    pub fn prop_index(&self, name: &str) -> Option<usize> {
        self.props.iter().position(|p| p == name)
    }

    pub fn nom_index(&self, name: &str) -> Option<usize> {
        self.noms.iter().position(|s| s == name)
    }

    pub fn has_prop(&self, name: &str) -> bool {
        self.prop_index(name).is_some()
    }

    pub fn has_nom(&self, name: &str) -> bool {
        self.nom_index(name).is_some()
    }

    /// Symbols of `self` followed by the new symbols of `other`.
    pub fn union(&self, other: &Signature) -> Result<Signature, SignatureError> {
        let mut props = self.props.clone();
        props.extend(other.props.iter().filter(|p| !self.has_prop(p)).cloned());
        let mut noms = self.noms.clone();
        noms.extend(other.noms.iter().filter(|s| !self.has_nom(s)).cloned());
        Signature::new(props, noms)
    }
}

/// One of the four optional hybrid features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    Nom,
    Down,
    At,
    Exists,
}

impl Feature {
    pub const ALL: [Feature; 4] = [Feature::Nom, Feature::Down, Feature::At, Feature::Exists];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    pub fn name(self) -> &'static str {
        match self {
            Feature::Nom => "nom",
            Feature::Down => "down",
            Feature::At => "at",
            Feature::Exists => "exists",
        }
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown feature `{0}` (expected nom, down, at or exists)")]
pub struct UnknownFeature(pub String);

impl FromStr for Feature {
    type Err = UnknownFeature;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "nom" => Ok(Feature::Nom),
            "down" => Ok(Feature::Down),
            "at" => Ok(Feature::At),
            "exists" => Ok(Feature::Exists),
            other => Err(UnknownFeature(other.to_string())),
        }
    }
}

/// A subset of {nom, down, at, exists}.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureSet(u8);

impl FeatureSet {
    pub const fn empty() -> Self {
        FeatureSet(0)
    }

    pub const fn full() -> Self {
        FeatureSet(0b1111)
    }

    pub fn of(features: &[Feature]) -> Self {
        features.iter().fold(Self::empty(), |acc, f| acc.with(*f))
    }

    pub fn with(self, f: Feature) -> Self {
        FeatureSet(self.0 | f.bit())
    }

    pub fn insert(&mut self, f: Feature) {
        self.0 |= f.bit();
    }

    pub fn contains(self, f: Feature) -> bool {
        self.0 & f.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: FeatureSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: FeatureSet) -> Self {
        FeatureSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = Feature> {
        Feature::ALL.into_iter().filter(move |f| self.contains(*f))
    }

    /// All sixteen feature sets, smallest bit pattern first.
    pub fn all_subsets() -> impl Iterator<Item = FeatureSet> {
        (0u8..16).map(FeatureSet)
    }

    /// True when the set has a binder, so sentences may use world variables.
    pub fn has_binder(self) -> bool {
        self.contains(Feature::Down) || self.contains(Feature::Exists)
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("none");
        }
        let names: Vec<&str> = self.iter().map(Feature::name).collect();
        f.write_str(&names.join(","))
    }
}

impl FromStr for FeatureSet {
    type Err = UnknownFeature;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "none" {
            return Ok(FeatureSet::empty());
        }
        s.split(',')
            .map(str::parse::<Feature>)
            .try_fold(FeatureSet::empty(), |acc, f| Ok(acc.with(f?)))
    }
}
