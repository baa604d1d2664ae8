use std::collections::BTreeSet;
use std::fmt;

use super::{is_ident, Signature, SignatureError};

/// Name of the unary predicate standing for proposition `p`: the first
/// letter capitalised.
pub fn predicate_name(prop: &str) -> String {
    let mut chars = prop.chars();
    match chars.next() {
        Some(c) => c.to_ascii_uppercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}

/// Inverse of [`predicate_name`].
pub fn prop_of_predicate(pred: &str) -> String {
    let mut chars = pred.chars();
    match chars.next() {
        Some(c) => c.to_ascii_lowercase().to_string() + chars.as_str(),
        None => String::new(),
    }
}

/// First-order signature: the correspondent of a hybrid signature plus
/// optional extra unary predicates and constants.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FolSignature {
    base: Signature,
    extra_preds: Vec<String>,
    extra_consts: Vec<String>,
}

impl FolSignature {
    pub fn new(base: Signature) -> Self {
        FolSignature {
            base,
            extra_preds: Vec::new(),
            extra_consts: Vec::new(),
        }
    }

    pub fn with_extra<P, C>(base: Signature, preds: P, consts: C) -> Result<Self, SignatureError>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        C: IntoIterator,
        C::Item: Into<String>,
    {
        let mut sig = FolSignature::new(base);
        for p in preds {
            sig.add_pred(p.into())?;
        }
        for c in consts {
            sig.add_const(c.into())?;
        }
        Ok(sig)
    }

    pub fn add_pred(&mut self, name: String) -> Result<(), SignatureError> {
        let starts_upper = name.chars().next().is_some_and(|c| c.is_ascii_uppercase());
        if !is_ident(&name) || !starts_upper {
            return Err(SignatureError::InvalidProp(name));
        }
        if self.is_predicate(&name) || name == "R" {
            return Err(SignatureError::Duplicate(name));
        }
        self.extra_preds.push(name);
        Ok(())
    }

    pub fn add_const(&mut self, name: String) -> Result<(), SignatureError> {
        if !is_ident(&name) {
            return Err(SignatureError::InvalidNom(name));
        }
        if self.is_constant(&name) {
            return Err(SignatureError::Duplicate(name));
        }
        self.extra_consts.push(name);
        Ok(())
    }

    pub fn base(&self) -> &Signature {
        &self.base
    }

    pub fn extra_preds(&self) -> &[String] {
        &self.extra_preds
    }

    pub fn extra_consts(&self) -> &[String] {
        &self.extra_consts
    }

    /// True for the predicate of a base proposition or a declared extra predicate.
    pub fn is_predicate(&self, name: &str) -> bool {
        self.is_base_predicate(name) || self.extra_preds.iter().any(|p| p == name)
    }

    pub fn is_base_predicate(&self, name: &str) -> bool {
        name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
            && self.base.has_prop(&prop_of_predicate(name))
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.base.has_nom(name) || self.extra_consts.iter().any(|c| c == name)
    }

    pub fn is_extra_constant(&self, name: &str) -> bool {
        self.extra_consts.iter().any(|c| c == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(x: impl Into<String>) -> Self {
        Term::Var(x.into())
    }

    pub fn constant(c: impl Into<String>) -> Self {
        Term::Const(c.into())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Const(c) => write!(f, "'{c}"),
        }
    }
}

/// First-order formula over a unary-predicate signature with one binary
/// relation `R` and equality. `Top`, `And` and `Implies` are sugar.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FolFormula {
    Bot,
    Top,
    Pred(String, Term),
    Rel(Term, Term),
    Eq(Term, Term),
    Not(Box<FolFormula>),
    Or(Box<FolFormula>, Box<FolFormula>),
    And(Box<FolFormula>, Box<FolFormula>),
    Implies(Box<FolFormula>, Box<FolFormula>),
    Exists(String, Box<FolFormula>),
    Forall(String, Box<FolFormula>),
}

use FolFormula as G;

impl FolFormula {
    pub fn pred(p: impl Into<String>, t: Term) -> Self {
        G::Pred(p.into(), t)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Self) -> Self {
        G::Not(Box::new(a))
    }

    pub fn or(a: Self, b: Self) -> Self {
        G::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Self, b: Self) -> Self {
        G::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        G::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(x: impl Into<String>, a: Self) -> Self {
        G::Exists(x.into(), Box::new(a))
    }

    pub fn forall(x: impl Into<String>, a: Self) -> Self {
        G::Forall(x.into(), Box::new(a))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut term = |t: &'a Term, bound: &Vec<&'a str>| {
            if let Term::Var(x) = t {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
        };
        match self {
            G::Bot | G::Top => {}
            G::Pred(_, t) => term(t, bound),
            G::Rel(a, b) | G::Eq(a, b) => {
                term(a, bound);
                term(b, bound);
            }
            G::Not(a) => a.collect_free(bound, out),
            G::Or(a, b) | G::And(a, b) | G::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            G::Exists(x, a) | G::Forall(x, a) => {
                bound.push(x);
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn visit(&self, f: &mut impl FnMut(&FolFormula)) {
        f(self);
        match self {
            G::Bot | G::Top | G::Pred(..) | G::Rel(..) | G::Eq(..) => {}
            G::Not(a) | G::Exists(_, a) | G::Forall(_, a) => a.visit(f),
            G::Or(a, b) | G::And(a, b) | G::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Unary predicate names occurring in the formula.
    pub fn predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |node| {
            if let G::Pred(p, _) = node {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Constant names occurring in the formula.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut term = |t: &Term| {
            if let Term::Const(c) = t {
                out.insert(c.clone());
            }
        };
        self.visit(&mut |node| match node {
            G::Pred(_, t) => term(t),
            G::Rel(a, b) | G::Eq(a, b) => {
                term(a);
                term(b);
            }
            _ => {}
        });
        out
    }

    pub fn size(&self) -> usize {
        match self {
            G::Bot | G::Top | G::Pred(..) | G::Rel(..) | G::Eq(..) => 1,
            G::Not(a) | G::Exists(_, a) | G::Forall(_, a) => 1 + a.size(),
            G::Or(a, b) | G::And(a, b) | G::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let need = match self {
            G::Exists(..) | G::Forall(..) | G::Implies(..) => 0,
            G::Or(..) => 1,
            G::And(..) => 2,
            _ => 3,
        };
        if need < prec {
            f.write_str("(")?;
            self.fmt_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            G::Bot => f.write_str("false"),
            G::Top => f.write_str("true"),
            G::Pred(p, t) => write!(f, "{p}({t})"),
            G::Rel(a, b) => write!(f, "R({a},{b})"),
            G::Eq(a, b) => write!(f, "{a} = {b}"),
            G::Not(a) => {
                f.write_str("~")?;
                a.fmt_prec(f, if matches!(**a, G::Eq(..)) { 4 } else { 3 })
            }
            G::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, 2)
            }
            G::And(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, 3)
            }
            G::Implies(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" -> ")?;
                b.fmt_prec(f, 0)
            }
            G::Exists(x, a) | G::Forall(x, a) => {
                let kw = if matches!(self, G::Exists(..)) { "exists" } else { "forall" };
                write!(f, "{kw} {x} . ")?;
                let body_prec = match **a {
                    G::Or(..) | G::And(..) | G::Implies(..) => 3,
                    _ => 0,
                };
                a.fmt_prec(f, body_prec)
            }
        }
    }
}

impl fmt::Display for FolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicate_naming() {
        assert_eq!(predicate_name("p"), "P");
        assert_eq!(predicate_name("p_1"), "P_1");
        assert_eq!(prop_of_predicate("Q2"), "q2");
    }

    #[test]
    fn free_and_closed() {
        let f = G::exists(
            "y",
            G::and(
                G::Rel(Term::var("x"), Term::var("y")),
                G::pred("P", Term::var("y")),
            ),
        );
        assert_eq!(f.free_vars(), BTreeSet::from(["x".to_string()]));
        assert_eq!(f.to_string(), "exists y . (R(x,y) & P(y))");
        assert!(G::forall("x", G::Eq(Term::var("x"), Term::var("x"))).is_closed());
    }

    #[test]
    fn extra_symbols() {
        let base = Signature::new(["p"], ["s"]).unwrap();
        let sig = FolSignature::with_extra(base, ["U"], ["d"]).unwrap();
        assert!(sig.is_predicate("P") && sig.is_predicate("U"));
        assert!(!sig.is_predicate("Q"));
        assert!(sig.is_constant("s") && sig.is_constant("d"));
        let mut again = sig.clone();
        assert!(again.add_pred("P".into()).is_err());
        assert!(again.add_pred("u".into()).is_err());
    }
}
