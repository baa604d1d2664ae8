//! Standard translation into first-order logic, back translation, and
//! relativisation.
//!
//! The standard translation alternates between two reserved variables,
//! `stx` and `sty`:
//!
//! ```text
//! ST_t(p)       = P(t)                 ST_t(w)     = w = t
//! ST_t(<>a)     = exists u . (R(t,u) & ST_u(a))
//! ST_t(down z . a) = exists z . (z = t & ST_t(a))
//! ST_t(@w a)    = exists u . (u = w & ST_u(a))
//! ST_t(exists z . a) = exists z . ST_t(a)
//! ```
//!
//! where `u` is the reserved variable other than `t`. Boolean connectives
//! and sugar translate homomorphically (`[]` becomes `forall u . (R(t,u) -> ..)`).

use crate::syntax::{predicate_name, prop_of_predicate, FolFormula, HybridFormula, Place, Signature, Term};

pub const STX: &str = "stx";
pub const STY: &str = "sty";

/// Which reserved variable is the free one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Target {
    #[default]
    X,
    Y,
}

impl Target {
    pub fn var(self) -> &'static str {
        match self {
            Target::X => STX,
            Target::Y => STY,
        }
    }

    pub fn other(self) -> Target {
        match self {
            Target::X => Target::Y,
            Target::Y => Target::X,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("world variable `{0}` collides with a reserved translation variable")]
    DesignatedCollision(String),
    #[error("expected exactly one free variable, found {}", render_list(.0))]
    FreeVariables(Vec<String>),
    #[error("formula is not closed; free variables {}", render_list(.0))]
    NotClosed(Vec<String>),
    #[error("symbol `{0}` is outside the correspondence signature")]
    NonSignature(String),
    #[error("predicate `{0}` already occurs in the formula")]
    PredicateOccurs(String),
    #[error("constant `{0}` already occurs in the formula")]
    ConstantOccurs(String),
}

fn render_list(items: &[String]) -> String {
    if items.is_empty() {
        "none".to_string()
    } else {
        items.join(", ")
    }
}

/// Standard translation with free variable `target.var()`.
pub fn st(phi: &HybridFormula, target: Target) -> Result<FolFormula, TranslateError> {
    if let Some(x) = phi.all_wvars().into_iter().find(|x| x == STX || x == STY) {
        return Err(TranslateError::DesignatedCollision(x));
    }
    Ok(st_rec(phi, target))
}

fn place_term(w: &Place) -> Term {
    match w {
        Place::Nom(s) => Term::Const(s.clone()),
        Place::Var(z) => Term::Var(z.clone()),
    }
}

fn st_rec(phi: &HybridFormula, t: Target) -> FolFormula {
    use FolFormula as G;
    use HybridFormula as H;
    let x = Term::var(t.var());
    let u = t.other();
    match phi {
        H::Bot => G::Bot,
        H::Top => G::Top,
        H::Prop(p) => G::Pred(predicate_name(p), x),
        H::Nom(s) => G::Eq(Term::constant(s.clone()), x),
        H::WVar(z) => G::Eq(Term::var(z.clone()), x),
        H::Not(a) => G::not(st_rec(a, t)),
        H::Or(a, b) => G::or(st_rec(a, t), st_rec(b, t)),
        H::And(a, b) => G::and(st_rec(a, t), st_rec(b, t)),
        H::Implies(a, b) => G::implies(st_rec(a, t), st_rec(b, t)),
        H::Dia(a) => G::exists(u.var(), G::and(G::Rel(x, Term::var(u.var())), st_rec(a, u))),
        H::Nec(a) => G::forall(u.var(), G::implies(G::Rel(x, Term::var(u.var())), st_rec(a, u))),
        H::Down(z, a) => G::exists(z.clone(), G::and(G::Eq(Term::var(z.clone()), x), st_rec(a, t))),
        H::At(w, a) => G::exists(
            u.var(),
            G::and(G::Eq(Term::var(u.var()), place_term(w)), st_rec(a, u)),
        ),
        H::Exists(z, a) => G::exists(z.clone(), st_rec(a, t)),
    }
}

/// Back translation `SBT(φ(x)) = ∃x (x ∧ F(φ))` of a formula with exactly
/// one free variable over the correspondence signature of `sig`.
pub fn sbt(phi: &FolFormula, sig: &Signature) -> Result<HybridFormula, TranslateError> {
    let free: Vec<String> = phi.free_vars().into_iter().collect();
    let [x] = free.as_slice() else {
        return Err(TranslateError::FreeVariables(free));
    };
    sbt_from(phi, x, sig)
}

/// `∃x (x ∧ F(φ))` for a formula whose free variables are among `{x}`.
/// A closed `φ`, such as the translation of an `@`-sentence, is accepted.
pub fn sbt_from(phi: &FolFormula, x: &str, sig: &Signature) -> Result<HybridFormula, TranslateError> {
    let free: Vec<String> = phi.free_vars().into_iter().collect();
    if free.iter().any(|v| v != x) {
        return Err(TranslateError::FreeVariables(free));
    }
    for p in phi.predicates() {
        let is_base = p.chars().next().is_some_and(|c| c.is_ascii_uppercase())
            && sig.has_prop(&prop_of_predicate(&p));
        if !is_base {
            return Err(TranslateError::NonSignature(p));
        }
    }
    if let Some(c) = phi.constants().into_iter().find(|c| !sig.has_nom(c)) {
        return Err(TranslateError::NonSignature(c));
    }
    Ok(HybridFormula::exists(
        x,
        HybridFormula::and(HybridFormula::var(x), back(phi)),
    ))
}

fn term_place(t: &Term) -> Place {
    match t {
        Term::Var(z) => Place::Var(z.clone()),
        Term::Const(s) => Place::Nom(s.clone()),
    }
}

fn term_formula(t: &Term) -> HybridFormula {
    match t {
        Term::Var(z) => HybridFormula::var(z.clone()),
        Term::Const(s) => HybridFormula::nom(s.clone()),
    }
}

fn back(phi: &FolFormula) -> HybridFormula {
    use FolFormula as G;
    use HybridFormula as H;
    match phi {
        G::Bot => H::Bot,
        G::Top => H::Top,
        G::Pred(p, w) => H::at(term_place(w), H::prop(prop_of_predicate(p))),
        G::Rel(w, v) => H::at(term_place(w), H::dia(term_formula(v))),
        G::Eq(w, v) => H::at(term_place(w), term_formula(v)),
        G::Not(a) => H::not(back(a)),
        G::Or(a, b) => H::or(back(a), back(b)),
        G::And(a, b) => H::and(back(a), back(b)),
        G::Implies(a, b) => H::implies(back(a), back(b)),
        G::Exists(z, a) => H::exists(z.clone(), back(a)),
        G::Forall(z, a) => H::not(H::exists(z.clone(), H::not(back(a)))),
    }
}

/// Bound every quantifier by the unary predicate `pred`.
pub fn relativise(phi: &FolFormula, pred: &str) -> Result<FolFormula, TranslateError> {
    if phi.predicates().contains(pred) {
        return Err(TranslateError::PredicateOccurs(pred.to_string()));
    }
    Ok(relativise_rec(phi, pred))
}

fn relativise_rec(phi: &FolFormula, pred: &str) -> FolFormula {
    use FolFormula as G;
    let guard = |v: &str| G::pred(pred, Term::var(v));
    match phi {
        G::Bot | G::Top | G::Pred(..) | G::Rel(..) | G::Eq(..) => phi.clone(),
        G::Not(a) => G::not(relativise_rec(a, pred)),
        G::Or(a, b) => G::or(relativise_rec(a, pred), relativise_rec(b, pred)),
        G::And(a, b) => G::and(relativise_rec(a, pred), relativise_rec(b, pred)),
        G::Implies(a, b) => G::implies(relativise_rec(a, pred), relativise_rec(b, pred)),
        G::Exists(v, a) => G::exists(v.clone(), G::and(guard(v), relativise_rec(a, pred))),
        G::Forall(v, a) => G::forall(v.clone(), G::implies(guard(v), relativise_rec(a, pred))),
    }
}

/// `φ_S(x) ∨ (∃x P(x) → σ^P)` for a closed `σ` and a one-variable `φ_S`.
/// `pred` and `constant` name the fresh symbols of the expanded signature;
/// neither may occur in the inputs. The constant does not occur in the
/// output: it stands for the point at which the result is evaluated.
pub fn psi_sigma(
    sigma: &FolFormula,
    phi_s: &FolFormula,
    pred: &str,
    constant: &str,
) -> Result<FolFormula, TranslateError> {
    let open: Vec<String> = sigma.free_vars().into_iter().collect();
    if !open.is_empty() {
        return Err(TranslateError::NotClosed(open));
    }
    let free: Vec<String> = phi_s.free_vars().into_iter().collect();
    let [x] = free.as_slice() else {
        return Err(TranslateError::FreeVariables(free));
    };
    for f in [sigma, phi_s] {
        if f.predicates().contains(pred) {
            return Err(TranslateError::PredicateOccurs(pred.to_string()));
        }
        let bare = Term::var(constant);
        let mut uses_var = false;
        f.visit(&mut |node| match node {
            FolFormula::Pred(_, t) => uses_var |= *t == bare,
            FolFormula::Rel(a, b) | FolFormula::Eq(a, b) => uses_var |= *a == bare || *b == bare,
            _ => {}
        });
        if f.constants().contains(constant) || uses_var {
            return Err(TranslateError::ConstantOccurs(constant.to_string()));
        }
    }
    let guard = FolFormula::exists(x.clone(), FolFormula::pred(pred, Term::var(x.clone())));
    Ok(FolFormula::or(
        phi_s.clone(),
        FolFormula::implies(guard, relativise_rec(sigma, pred)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fixtures, FolStructure, World};
    use crate::semantics::{sat_fol, sat_hybrid, FolValuation, HybridContext};
    use crate::syntax::{parse_fol, parse_hybrid, FolSignature};

    fn sig() -> Signature {
        Signature::new(["p", "p0"], ["s", "t"]).unwrap()
    }

    fn hyb(text: &str) -> HybridFormula {
        parse_hybrid(text, &sig()).unwrap()
    }

    fn fol(text: &str) -> FolFormula {
        parse_fol(text, &FolSignature::with_extra(sig(), ["U"], ["d"]).unwrap()).unwrap()
    }

    #[test]
    fn table_rows() {
        assert_eq!(st(&HybridFormula::Bot, Target::X).unwrap(), FolFormula::Bot);
        assert_eq!(
            st(&hyb("<>p"), Target::X).unwrap().to_string(),
            "exists sty . (R(stx,sty) & P(sty))"
        );
        assert_eq!(
            st(&hyb("<>p"), Target::Y).unwrap().to_string(),
            "exists stx . (R(sty,stx) & P(stx))"
        );
        assert_eq!(
            st(&hyb("down z . ?z"), Target::X).unwrap().to_string(),
            "exists z . (z = stx & z = stx)"
        );
        assert_eq!(
            st(&hyb("@'s p"), Target::X).unwrap().to_string(),
            "exists sty . (sty = 's & P(sty))"
        );
        assert_eq!(
            st(&hyb("exists z . <>?z"), Target::X).unwrap().to_string(),
            "exists z . exists sty . (R(stx,sty) & z = sty)"
        );
        assert_eq!(
            st(&hyb("down stx . p"), Target::X),
            Err(TranslateError::DesignatedCollision("stx".into()))
        );
    }

    #[test]
    fn sentences_translate_to_at_most_one_free_variable() {
        for text in ["p", "<>(down z . <>?z)", "exists z . <>?z"] {
            let f = st(&hyb(text), Target::X).unwrap();
            assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec![STX.to_string()]);
        }
        for text in ["@'t <>'s", "exists z . @?z p"] {
            assert!(st(&hyb(text), Target::X).unwrap().is_closed());
        }
    }

    #[test]
    fn back_translation_examples() {
        let s = Signature::new(["p"], Vec::<String>::new()).unwrap();
        let fs = FolSignature::new(s.clone());
        let p = parse_fol("P(x)", &fs).unwrap();
        assert_eq!(sbt(&p, &s).unwrap().to_string(), "exists x . (?x & @?x p)");
        let r = parse_fol("R(x,x)", &fs).unwrap();
        assert_eq!(sbt(&r, &s).unwrap().to_string(), "exists x . (?x & @?x <>?x)");
        let two = parse_fol("R(x,y)", &fs).unwrap();
        assert!(matches!(sbt(&two, &s), Err(TranslateError::FreeVariables(v)) if v.len() == 2));
        let closed = parse_fol("forall x . P(x)", &fs).unwrap();
        assert!(matches!(sbt(&closed, &s), Err(TranslateError::FreeVariables(v)) if v.is_empty()));
        assert_eq!(sbt(&fol("U(x)"), &sig()), Err(TranslateError::NonSignature("U".into())));
        assert_eq!(
            sbt_from(&closed, "stx", &s).unwrap().to_string(),
            "exists stx . (?stx & ~(exists x . ~@?x p))"
        );
        assert!(sbt_from(&p, "y", &s).is_err());
    }

    #[test]
    fn se_on_figure_one() {
        let f = fixtures::fig1();
        let phi = parse_hybrid("'t", f.right.signature()).unwrap();
        let tr = st(&phi, Target::X).unwrap();
        let n1 = World(1);
        let via_fol = sat_fol(&FolStructure::plain(f.right.clone()), &FolValuation::single(STX, n1), &tr).unwrap();
        let direct = sat_hybrid(&HybridContext::at(&f.right, n1), &phi).unwrap();
        assert!(via_fol && direct);
        for text in ["@'t p", "<>'t & <>~'t", "@'s <>(down z . @'t ?z)", "exists z . (~?z & @?z ~<>true)"] {
            let phi = parse_hybrid(text, f.left.signature()).unwrap();
            let tr = st(&phi, Target::Y).unwrap();
            let structure = FolStructure::plain(f.left.clone());
            for w in f.left.worlds() {
                let a = sat_hybrid(&HybridContext::at(&f.left, w), &phi).unwrap();
                let b = sat_fol(&structure, &FolValuation::single(STY, w), &tr).unwrap();
                assert_eq!(a, b, "{text} at {w}");
            }
        }
    }

    #[test]
    fn relativisation() {
        assert_eq!(
            relativise(&fol("exists x . P0(x)"), "U").unwrap().to_string(),
            "exists x . (U(x) & P0(x))"
        );
        assert_eq!(
            relativise(&fol("forall x . R(x,x)"), "U").unwrap().to_string(),
            "forall x . (U(x) -> R(x,x))"
        );
        let qf = fol("P(x) & ~x = 's");
        assert_eq!(relativise(&qf, "U").unwrap(), qf);
        assert_eq!(
            relativise(&fol("U(x)"), "U"),
            Err(TranslateError::PredicateOccurs("U".into()))
        );
    }

    #[test]
    fn psi_sigma_shape_and_clashes() {
        let sigma = fol("forall y . y = y");
        let phi_s = fol("P(x)");
        let out = psi_sigma(&sigma, &phi_s, "U", "d").unwrap();
        assert_eq!(
            out.to_string(),
            "P(x) | ((exists x . U(x)) -> forall y . (U(y) -> y = y))"
        );
        assert_eq!(out.free_vars().into_iter().collect::<Vec<_>>(), vec!["x".to_string()]);
        assert!(matches!(psi_sigma(&phi_s, &phi_s, "U", "d"), Err(TranslateError::NotClosed(_))));
        assert_eq!(
            psi_sigma(&fol("exists y . U(y)"), &phi_s, "U", "d"),
            Err(TranslateError::PredicateOccurs("U".into()))
        );
        assert_eq!(
            psi_sigma(&fol("exists y . y = d"), &phi_s, "U", "d"),
            Err(TranslateError::ConstantOccurs("d".into()))
        );
    }
}
