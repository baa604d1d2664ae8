use std::collections::BTreeSet;
use std::fmt;

use super::{Feature, FeatureSet};

/// Target of an `@` jump.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Nom(String),
    Var(String),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Nom(s) => write!(f, "'{s}"),
            Place::Var(x) => write!(f, "?{x}"),
        }
    }
}

/// Hybrid formula. `Top`, `And`, `Implies` and `Nec` (box) are sugar kept
/// in the tree so printing reproduces the input; see [`HybridFormula::desugar`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HybridFormula {
    Bot,
    Top,
    Prop(String),
    Nom(String),
    WVar(String),
    Not(Box<HybridFormula>),
    Or(Box<HybridFormula>, Box<HybridFormula>),
    And(Box<HybridFormula>, Box<HybridFormula>),
    Implies(Box<HybridFormula>, Box<HybridFormula>),
    Dia(Box<HybridFormula>),
    Nec(Box<HybridFormula>),
    Down(String, Box<HybridFormula>),
    At(Place, Box<HybridFormula>),
    Exists(String, Box<HybridFormula>),
}

use HybridFormula as H;

impl HybridFormula {
    pub fn prop(p: impl Into<String>) -> Self {
        H::Prop(p.into())
    }

    pub fn nom(s: impl Into<String>) -> Self {
        H::Nom(s.into())
    }

    pub fn var(x: impl Into<String>) -> Self {
        H::WVar(x.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Self) -> Self {
        H::Not(Box::new(a))
    }

    pub fn or(a: Self, b: Self) -> Self {
        H::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Self, b: Self) -> Self {
        H::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        H::Implies(Box::new(a), Box::new(b))
    }

    pub fn dia(a: Self) -> Self {
        H::Dia(Box::new(a))
    }

    pub fn nec(a: Self) -> Self {
        H::Nec(Box::new(a))
    }

    pub fn down(x: impl Into<String>, a: Self) -> Self {
        H::Down(x.into(), Box::new(a))
    }

    pub fn exists(x: impl Into<String>, a: Self) -> Self {
        H::Exists(x.into(), Box::new(a))
    }

    pub fn at(place: Place, a: Self) -> Self {
        H::At(place, Box::new(a))
    }

    pub fn at_nom(s: impl Into<String>, a: Self) -> Self {
        H::At(Place::Nom(s.into()), Box::new(a))
    }

    pub fn at_var(x: impl Into<String>, a: Self) -> Self {
        H::At(Place::Var(x.into()), Box::new(a))
    }

    /// Conjunction of all items; `Top` when empty.
    pub fn conj(items: impl IntoIterator<Item = Self>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => H::Top,
            Some(first) => it.fold(first, H::and),
        }
    }

    /// Disjunction of all items; `Bot` when empty.
    pub fn disj(items: impl IntoIterator<Item = Self>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => H::Bot,
            Some(first) => it.fold(first, H::or),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            H::Bot | H::Top | H::Prop(_) | H::Nom(_) | H::WVar(_) => 0,
            H::Not(a) | H::At(_, a) => a.degree(),
            H::Or(a, b) | H::And(a, b) | H::Implies(a, b) => a.degree().max(b.degree()),
            H::Dia(a) | H::Nec(a) | H::Down(_, a) | H::Exists(_, a) => a.degree() + 1,
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            H::Bot | H::Top | H::Prop(_) | H::Nom(_) | H::WVar(_) => 1,
            H::Not(a) | H::At(_, a) | H::Dia(a) | H::Nec(a) | H::Down(_, a) | H::Exists(_, a) => {
                1 + a.size()
            }
            H::Or(a, b) | H::And(a, b) | H::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn free_wvars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut note = |x: &'a str, bound: &Vec<&'a str>| {
            if !bound.contains(&x) {
                out.insert(x.to_string());
            }
        };
        match self {
            H::Bot | H::Top | H::Prop(_) | H::Nom(_) => {}
            H::WVar(x) => note(x, bound),
            H::At(place, a) => {
                if let Place::Var(x) = place {
                    note(x, bound);
                }
                a.collect_free(bound, out);
            }
            H::Not(a) | H::Dia(a) | H::Nec(a) => a.collect_free(bound, out),
            H::Or(a, b) | H::And(a, b) | H::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            H::Down(x, a) | H::Exists(x, a) => {
                bound.push(x);
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_wvars().is_empty()
    }

    pub fn features(&self) -> FeatureSet {
        let mut fs = FeatureSet::empty();
        self.visit(&mut |node| match node {
            H::Nom(_) | H::At(Place::Nom(_), _) => {
                fs.insert(Feature::Nom);
                if matches!(node, H::At(..)) {
                    fs.insert(Feature::At);
                }
            }
            H::At(..) => fs.insert(Feature::At),
            H::Down(..) => fs.insert(Feature::Down),
            H::Exists(..) => fs.insert(Feature::Exists),
            _ => {}
        });
        fs
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&HybridFormula)) {
        f(self);
        match self {
            H::Bot | H::Top | H::Prop(_) | H::Nom(_) | H::WVar(_) => {}
            H::Not(a) | H::At(_, a) | H::Dia(a) | H::Nec(a) | H::Down(_, a) | H::Exists(_, a) => {
                a.visit(f)
            }
            H::Or(a, b) | H::And(a, b) | H::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Proposition names occurring in the formula.
    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |node| {
            if let H::Prop(p) = node {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Nominal names occurring in the formula, as atoms or `@` places.
    pub fn noms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |node| match node {
            H::Nom(s) | H::At(Place::Nom(s), _) => {
                out.insert(s.clone());
            }
            _ => {}
        });
        out
    }

    /// All world-variable names, free or bound.
    pub fn all_wvars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |node| match node {
            H::WVar(x) | H::At(Place::Var(x), _) | H::Down(x, _) | H::Exists(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    /// True when no sugar node occurs.
    pub fn is_core(&self) -> bool {
        let mut core = true;
        self.visit(&mut |node| {
            if matches!(node, H::Top | H::And(..) | H::Implies(..) | H::Nec(..)) {
                core = false;
            }
        });
        core
    }

    /// Rewrite sugar into the core constructors.
    pub fn desugar(&self) -> HybridFormula {
        match self {
            H::Bot | H::Prop(_) | H::Nom(_) | H::WVar(_) => self.clone(),
            H::Top => H::not(H::Bot),
            H::Not(a) => H::not(a.desugar()),
            H::Or(a, b) => H::or(a.desugar(), b.desugar()),
            H::And(a, b) => H::not(H::or(H::not(a.desugar()), H::not(b.desugar()))),
            H::Implies(a, b) => H::or(H::not(a.desugar()), b.desugar()),
            H::Dia(a) => H::dia(a.desugar()),
            H::Nec(a) => H::not(H::dia(H::not(a.desugar()))),
            H::Down(x, a) => H::down(x.clone(), a.desugar()),
            H::At(w, a) => H::at(w.clone(), a.desugar()),
            H::Exists(x, a) => H::exists(x.clone(), a.desugar()),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let need = match self {
            H::Down(..) | H::Exists(..) | H::Implies(..) => 0,
            H::Or(..) => 1,
            H::And(..) => 2,
            _ => 3,
        };
        if need < prec {
            f.write_str("(")?;
            self.fmt_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            H::Bot => f.write_str("false"),
            H::Top => f.write_str("true"),
            H::Prop(p) => f.write_str(p),
            H::Nom(s) => write!(f, "'{s}"),
            H::WVar(x) => write!(f, "?{x}"),
            H::Not(a) => {
                f.write_str("~")?;
                a.fmt_prec(f, 3)
            }
            H::Dia(a) => {
                f.write_str("<>")?;
                a.fmt_prec(f, 3)
            }
            H::Nec(a) => {
                f.write_str("[]")?;
                a.fmt_prec(f, 3)
            }
            H::At(w, a) => {
                write!(f, "@{w} ")?;
                a.fmt_prec(f, 3)
            }
            H::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" | ")?;
                b.fmt_prec(f, 2)
            }
            H::And(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" & ")?;
                b.fmt_prec(f, 3)
            }
            H::Implies(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" -> ")?;
                b.fmt_prec(f, 0)
            }
            H::Down(x, a) | H::Exists(x, a) => {
                let kw = if matches!(self, H::Down(..)) { "down" } else { "exists" };
                write!(f, "{kw} {x} . ")?;
                let body_prec = match **a {
                    H::Or(..) | H::And(..) | H::Implies(..) => 3,
                    _ => 0,
                };
                a.fmt_prec(f, body_prec)
            }
        }
    }
}

impl fmt::Display for HybridFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_clauses() {
        assert_eq!(H::prop("p").degree(), 0);
        assert_eq!(H::at_nom("s", H::prop("p")).degree(), 0);
        let f = H::down("x", H::dia(H::dia(H::var("x"))));
        assert_eq!(f.degree(), 3);
        assert_eq!(H::nec(H::or(H::prop("p"), H::dia(H::Bot))).degree(), 2);
    }

    #[test]
    fn free_variables() {
        let at = H::at_var("x", H::prop("p"));
        assert_eq!(at.free_wvars(), BTreeSet::from(["x".to_string()]));
        assert!(H::down("x", H::dia(H::var("x"))).free_wvars().is_empty());
        assert_eq!(
            H::exists("x", H::var("y")).free_wvars(),
            BTreeSet::from(["y".to_string()])
        );
        assert!(H::down("x", H::at_var("x", H::prop("p"))).is_sentence());
    }

    #[test]
    fn feature_scan() {
        assert_eq!(H::dia(H::prop("p")).features(), FeatureSet::empty());
        assert_eq!(
            H::down("x", H::at_var("x", H::prop("p"))).features(),
            FeatureSet::of(&[Feature::Down, Feature::At])
        );
        assert_eq!(H::nom("s").features(), FeatureSet::of(&[Feature::Nom]));
    }

    #[test]
    fn desugar_uses_core_only() {
        let f = H::implies(H::Top, H::nec(H::and(H::prop("p"), H::var("x"))));
        let d = f.desugar();
        assert!(d.is_core());
        assert_eq!(d.degree(), f.degree());
        assert_eq!(d.free_wvars(), f.free_wvars());
        assert_eq!(d.features(), f.features());
    }

    #[test]
    fn printing() {
        let f = H::down("x", H::dia(H::dia(H::var("x"))));
        assert_eq!(f.to_string(), "down x . <><>?x");
        let g = H::or(H::down("x", H::prop("p")), H::prop("q"));
        assert_eq!(g.to_string(), "(down x . p) | q");
        let h = H::not(H::exists("x", H::and(H::var("x"), H::dia(H::var("x")))));
        assert_eq!(h.to_string(), "~(exists x . (?x & <>?x))");
        assert_eq!(H::at_nom("s", H::prop("p")).to_string(), "@'s p");
    }
}
