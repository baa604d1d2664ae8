//! Satisfaction for hybrid formulas and for first-order formulas.
//!
//! Both evaluators first resolve names (propositions, nominals, variables)
//! to indices, then run a plain recursive evaluation over the resolved tree.
//! `◇` and `∃` scan worlds in declared order.

use std::collections::BTreeMap;

use crate::bits::Bits;
use crate::model::{FolStructure, KripkeModel, World};
use crate::syntax::{prop_of_predicate, FolFormula, HybridFormula, Place, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("world variable `{0}` is free and has no slot")]
    UnresolvedVariable(String),
    #[error("proposition `{0}` is not in the model's signature")]
    UnknownProp(String),
    #[error("nominal `{0}` is not in the model's signature")]
    UnknownNom(String),
    #[error("predicate `{0}` is not interpreted")]
    UnknownPredicate(String),
    #[error("constant `{0}` is not interpreted")]
    UnknownConstant(String),
    #[error("expected {expected} slot value(s), got {found}")]
    TupleLength { expected: usize, found: usize },
    #[error("world index {0} outside the model")]
    OutOfRange(usize),
}

/// `x1, ..., xk`: the default slot names.
pub fn slot_names(k: usize) -> Vec<String> {
    (1..=k).map(|j| format!("x{j}")).collect()
}

/// A model, an assignment tuple with named slots, and a point.
#[derive(Debug, Clone)]
pub struct HybridContext<'a> {
    pub model: &'a KripkeModel,
    pub slots: Vec<String>,
    pub tuple: Vec<World>,
    pub point: World,
}

impl<'a> HybridContext<'a> {
    /// Slots named `x1..xk` after the tuple's length.
    pub fn new(model: &'a KripkeModel, tuple: Vec<World>, point: World) -> Self {
        HybridContext {
            model,
            slots: slot_names(tuple.len()),
            tuple,
            point,
        }
    }

    /// Empty assignment.
    pub fn at(model: &'a KripkeModel, point: World) -> Self {
        HybridContext::new(model, Vec::new(), point)
    }

    pub fn named(model: &'a KripkeModel, slots: Vec<String>, tuple: Vec<World>, point: World) -> Self {
        HybridContext {
            model,
            slots,
            tuple,
            point,
        }
    }
}

pub fn sat_hybrid(ctx: &HybridContext<'_>, phi: &HybridFormula) -> Result<bool, SemanticsError> {
    let compiled = CompiledHybrid::compile(phi, ctx.model, &ctx.slots)?;
    compiled.eval(ctx.model, &ctx.tuple, ctx.point)
}

/// For a formula headed by `◇`, `∃` or `↓`, the first world (in declared
/// order) witnessing its body: the successor, the value of the bound
/// variable, or the point itself. `None` when the formula is false or has
/// another head.
pub fn witness(ctx: &HybridContext<'_>, phi: &HybridFormula) -> Result<Option<World>, SemanticsError> {
    let (body, var) = match phi {
        HybridFormula::Dia(a) => (a.as_ref(), None),
        HybridFormula::Exists(x, a) | HybridFormula::Down(x, a) => (a.as_ref(), Some(x.clone())),
        _ => return Ok(None),
    };
    let mut slots = ctx.slots.clone();
    let mut tuple = ctx.tuple.clone();
    let slot = var.map(|x| match slots.iter().position(|s| *s == x) {
        Some(j) => j,
        None => {
            slots.push(x);
            tuple.push(ctx.point);
            slots.len() - 1
        }
    });
    let compiled = CompiledHybrid::compile(body, ctx.model, &slots)?;
    let candidates: Vec<World> = match phi {
        HybridFormula::Dia(_) => ctx.model.successors(ctx.point).collect(),
        HybridFormula::Down(..) => vec![ctx.point],
        _ => ctx.model.worlds().collect(),
    };
    for w in candidates {
        let found = match (phi, slot) {
            (HybridFormula::Dia(_), _) => compiled.eval(ctx.model, &tuple, w)?,
            (_, Some(j)) => {
                tuple[j] = w;
                compiled.eval(ctx.model, &tuple, ctx.point)?
            }
            _ => unreachable!(),
        };
        if found {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
enum HNode {
    Bot,
    Top,
    Prop(usize),
    Nom(usize),
    Var(usize),
    Not(Box<HNode>),
    Or(Box<HNode>, Box<HNode>),
    And(Box<HNode>, Box<HNode>),
    Implies(Box<HNode>, Box<HNode>),
    Dia(Box<HNode>),
    Nec(Box<HNode>),
    Down(usize, Box<HNode>),
    AtNom(usize, Box<HNode>),
    AtVar(usize, Box<HNode>),
    Exists(usize, Box<HNode>),
}

/// A hybrid formula resolved against one model's signature and a list of
/// slot names, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct CompiledHybrid {
    root: HNode,
    free_slots: usize,
    total_slots: usize,
}

struct HScope<'s> {
    names: Vec<(&'s str, usize)>,
    next: usize,
}

impl<'s> HScope<'s> {
    fn lookup(&self, x: &str) -> Option<usize> {
        self.names.iter().rev().find(|(n, _)| *n == x).map(|(_, s)| *s)
    }
}

impl CompiledHybrid {
    pub fn compile(phi: &HybridFormula, model: &KripkeModel, slots: &[String]) -> Result<Self, SemanticsError> {
        let mut scope = HScope {
            names: slots.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect(),
            next: slots.len(),
        };
        let root = Self::node(phi, model, &mut scope)?;
        Ok(CompiledHybrid {
            root,
            free_slots: slots.len(),
            total_slots: scope.next,
        })
    }

    fn node<'s>(phi: &'s HybridFormula, model: &KripkeModel, scope: &mut HScope<'s>) -> Result<HNode, SemanticsError> {
        use HybridFormula as H;
        let sig = model.signature();
        let var = |x: &str, scope: &HScope<'_>| {
            scope
                .lookup(x)
                .ok_or_else(|| SemanticsError::UnresolvedVariable(x.to_string()))
        };
        let nom = |s: &str| {
            sig.nom_index(s)
                .ok_or_else(|| SemanticsError::UnknownNom(s.to_string()))
        };
        Ok(match phi {
            H::Bot => HNode::Bot,
            H::Top => HNode::Top,
            H::Prop(p) => HNode::Prop(
                sig.prop_index(p)
                    .ok_or_else(|| SemanticsError::UnknownProp(p.clone()))?,
            ),
            H::Nom(s) => HNode::Nom(nom(s)?),
            H::WVar(x) => HNode::Var(var(x, scope)?),
            H::Not(a) => HNode::Not(Box::new(Self::node(a, model, scope)?)),
            H::Or(a, b) => HNode::Or(
                Box::new(Self::node(a, model, scope)?),
                Box::new(Self::node(b, model, scope)?),
            ),
            H::And(a, b) => HNode::And(
                Box::new(Self::node(a, model, scope)?),
                Box::new(Self::node(b, model, scope)?),
            ),
            H::Implies(a, b) => HNode::Implies(
                Box::new(Self::node(a, model, scope)?),
                Box::new(Self::node(b, model, scope)?),
            ),
            H::Dia(a) => HNode::Dia(Box::new(Self::node(a, model, scope)?)),
            H::Nec(a) => HNode::Nec(Box::new(Self::node(a, model, scope)?)),
            H::At(Place::Nom(s), a) => HNode::AtNom(nom(s)?, Box::new(Self::node(a, model, scope)?)),
            H::At(Place::Var(x), a) => {
                HNode::AtVar(var(x, scope)?, Box::new(Self::node(a, model, scope)?))
            }
            H::Down(x, a) | H::Exists(x, a) => {
                let slot = match scope.lookup(x) {
                    Some(s) => s,
                    None => {
                        scope.next += 1;
                        scope.next - 1
                    }
                };
                scope.names.push((x.as_str(), slot));
                let body = Box::new(Self::node(a, model, scope)?);
                scope.names.pop();
                if matches!(phi, H::Down(..)) {
                    HNode::Down(slot, body)
                } else {
                    HNode::Exists(slot, body)
                }
            }
        })
    }

    /// Evaluate at `(tuple, point)`; the tuple fills the free slots.
    pub fn eval(&self, model: &KripkeModel, tuple: &[World], point: World) -> Result<bool, SemanticsError> {
        if tuple.len() != self.free_slots {
            return Err(SemanticsError::TupleLength {
                expected: self.free_slots,
                found: tuple.len(),
            });
        }
        if let Some(w) = tuple.iter().chain([&point]).find(|w| w.0 >= model.len()) {
            return Err(SemanticsError::OutOfRange(w.0));
        }
        let mut env: Vec<usize> = tuple.iter().map(|w| w.0).collect();
        env.resize(self.total_slots, 0);
        Ok(Self::run(&self.root, model, &mut env, point.0))
    }

    /// Evaluate with raw indices; `env` must hold at least the free slots.
    pub(crate) fn eval_raw(&self, model: &KripkeModel, env: &mut Vec<usize>, point: usize) -> bool {
        env.resize(self.total_slots.max(env.len()), 0);
        Self::run(&self.root, model, env, point)
    }

    fn run(node: &HNode, m: &KripkeModel, env: &mut Vec<usize>, point: usize) -> bool {
        match node {
            HNode::Bot => false,
            HNode::Top => true,
            HNode::Prop(i) => m.holds(*i, World(point)),
            HNode::Nom(i) => m.nominal(*i).0 == point,
            HNode::Var(s) => env[*s] == point,
            HNode::Not(a) => !Self::run(a, m, env, point),
            HNode::Or(a, b) => Self::run(a, m, env, point) || Self::run(b, m, env, point),
            HNode::And(a, b) => Self::run(a, m, env, point) && Self::run(b, m, env, point),
            HNode::Implies(a, b) => !Self::run(a, m, env, point) || Self::run(b, m, env, point),
            HNode::Dia(a) => m.succ_raw(point).iter().any(|&v| Self::run(a, m, env, v)),
            HNode::Nec(a) => m.succ_raw(point).iter().all(|&v| Self::run(a, m, env, v)),
            HNode::AtNom(i, a) => Self::run(a, m, env, m.nominal(*i).0),
            HNode::AtVar(s, a) => {
                let target = env[*s];
                Self::run(a, m, env, target)
            }
            HNode::Down(s, a) => {
                let saved = env[*s];
                env[*s] = point;
                let r = Self::run(a, m, env, point);
                env[*s] = saved;
                r
            }
            HNode::Exists(s, a) => {
                let saved = env[*s];
                let mut r = false;
                for w in 0..m.len() {
                    env[*s] = w;
                    if Self::run(a, m, env, point) {
                        r = true;
                        break;
                    }
                }
                env[*s] = saved;
                r
            }
        }
    }
}

/// Values of first-order variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FolValuation(BTreeMap<String, World>);

impl FolValuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(x: impl Into<String>, w: World) -> Self {
        FolValuation::new().with(x, w)
    }

    pub fn with(mut self, x: impl Into<String>, w: World) -> Self {
        self.0.insert(x.into(), w);
        self
    }

    pub fn get(&self, x: &str) -> Option<World> {
        self.0.get(x).copied()
    }
}

pub fn sat_fol(structure: &FolStructure, eta: &FolValuation, phi: &FolFormula) -> Result<bool, SemanticsError> {
    let free: Vec<String> = phi.free_vars().into_iter().collect();
    let compiled = CompiledFol::compile(phi, structure, &free)?;
    let values = free
        .iter()
        .map(|x| eta.get(x).ok_or_else(|| SemanticsError::UnresolvedVariable(x.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    compiled.eval(structure, &values)
}

#[derive(Debug, Clone)]
enum FTerm {
    Var(usize),
    World(usize),
}

#[derive(Debug, Clone)]
enum FNode {
    Bot,
    Top,
    Pred(Bits, FTerm),
    Rel(FTerm, FTerm),
    Eq(FTerm, FTerm),
    Not(Box<FNode>),
    Or(Box<FNode>, Box<FNode>),
    And(Box<FNode>, Box<FNode>),
    Implies(Box<FNode>, Box<FNode>),
    Exists(usize, Box<FNode>),
    Forall(usize, Box<FNode>),
}

/// A first-order formula resolved against one structure.
#[derive(Debug, Clone)]
pub struct CompiledFol {
    root: FNode,
    free_slots: usize,
    total_slots: usize,
}

impl CompiledFol {
    /// `free` names the variables filled by `eval`'s value list, in order.
    pub fn compile(phi: &FolFormula, structure: &FolStructure, free: &[String]) -> Result<Self, SemanticsError> {
        let mut scope = HScope {
            names: free.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect(),
            next: free.len(),
        };
        let root = Self::node(phi, structure, &mut scope)?;
        Ok(CompiledFol {
            root,
            free_slots: free.len(),
            total_slots: scope.next,
        })
    }

    fn term(t: &Term, structure: &FolStructure, scope: &HScope<'_>) -> Result<FTerm, SemanticsError> {
        match t {
            Term::Var(x) => scope
                .lookup(x)
                .map(FTerm::Var)
                .ok_or_else(|| SemanticsError::UnresolvedVariable(x.clone())),
            Term::Const(c) => structure
                .model()
                .nominal_named(c)
                .or_else(|| structure.expansion().constant(c))
                .map(|w| FTerm::World(w.0))
                .ok_or_else(|| SemanticsError::UnknownConstant(c.clone())),
        }
    }

    fn node<'s>(phi: &'s FolFormula, st: &FolStructure, scope: &mut HScope<'s>) -> Result<FNode, SemanticsError> {
        use FolFormula as G;
        Ok(match phi {
            G::Bot => FNode::Bot,
            G::Top => FNode::Top,
            G::Pred(p, t) => {
                let m = st.model();
                let ext = if let Some(ws) = st.expansion().pred(p) {
                    Bits::from_fn(m.len(), |i| ws.contains(&World(i)))
                } else {
                    let starts_upper = p.chars().next().is_some_and(|c| c.is_ascii_uppercase());
                    let idx = m
                        .signature()
                        .prop_index(&prop_of_predicate(p))
                        .filter(|_| starts_upper)
                        .ok_or_else(|| SemanticsError::UnknownPredicate(p.clone()))?;
                    Bits::from_fn(m.len(), |i| m.holds(idx, World(i)))
                };
                FNode::Pred(ext, Self::term(t, st, scope)?)
            }
            G::Rel(a, b) => FNode::Rel(Self::term(a, st, scope)?, Self::term(b, st, scope)?),
            G::Eq(a, b) => FNode::Eq(Self::term(a, st, scope)?, Self::term(b, st, scope)?),
            G::Not(a) => FNode::Not(Box::new(Self::node(a, st, scope)?)),
            G::Or(a, b) => FNode::Or(Box::new(Self::node(a, st, scope)?), Box::new(Self::node(b, st, scope)?)),
            G::And(a, b) => FNode::And(Box::new(Self::node(a, st, scope)?), Box::new(Self::node(b, st, scope)?)),
            G::Implies(a, b) => {
                FNode::Implies(Box::new(Self::node(a, st, scope)?), Box::new(Self::node(b, st, scope)?))
            }
            G::Exists(x, a) | G::Forall(x, a) => {
                let slot = match scope.lookup(x) {
                    Some(s) => s,
                    None => {
                        scope.next += 1;
                        scope.next - 1
                    }
                };
                scope.names.push((x.as_str(), slot));
                let body = Box::new(Self::node(a, st, scope)?);
                scope.names.pop();
                if matches!(phi, G::Exists(..)) {
                    FNode::Exists(slot, body)
                } else {
                    FNode::Forall(slot, body)
                }
            }
        })
    }

    pub fn eval(&self, structure: &FolStructure, values: &[World]) -> Result<bool, SemanticsError> {
        if values.len() != self.free_slots {
            return Err(SemanticsError::TupleLength {
                expected: self.free_slots,
                found: values.len(),
            });
        }
        let m = structure.model();
        if let Some(w) = values.iter().find(|w| w.0 >= m.len()) {
            return Err(SemanticsError::OutOfRange(w.0));
        }
        let mut env: Vec<usize> = values.iter().map(|w| w.0).collect();
        env.resize(self.total_slots, 0);
        Ok(Self::run(&self.root, m, &mut env))
    }

    fn value(t: &FTerm, env: &[usize]) -> usize {
        match t {
            FTerm::Var(s) => env[*s],
            FTerm::World(w) => *w,
        }
    }

    fn run(node: &FNode, m: &KripkeModel, env: &mut Vec<usize>) -> bool {
        match node {
            FNode::Bot => false,
            FNode::Top => true,
            FNode::Pred(ext, t) => ext.get(Self::value(t, env)),
            FNode::Rel(a, b) => m
                .succ_raw(Self::value(a, env))
                .binary_search(&Self::value(b, env))
                .is_ok(),
            FNode::Eq(a, b) => Self::value(a, env) == Self::value(b, env),
            FNode::Not(a) => !Self::run(a, m, env),
            FNode::Or(a, b) => Self::run(a, m, env) || Self::run(b, m, env),
            FNode::And(a, b) => Self::run(a, m, env) && Self::run(b, m, env),
            FNode::Implies(a, b) => !Self::run(a, m, env) || Self::run(b, m, env),
            FNode::Exists(s, a) | FNode::Forall(s, a) => {
                let want = matches!(node, FNode::Exists(..));
                let saved = env[*s];
                let mut r = !want;
                for w in 0..m.len() {
                    env[*s] = w;
                    if Self::run(a, m, env) == want {
                        r = want;
                        break;
                    }
                }
                env[*s] = saved;
                r
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures;
    use crate::model::Expansion;
    use crate::syntax::{parse_fol, parse_hybrid, FolSignature};

    fn hyb(m: &KripkeModel, w: &str, text: &str) -> bool {
        let phi = parse_hybrid(text, m.signature()).unwrap();
        sat_hybrid(&HybridContext::at(m, m.world(w).unwrap()), &phi).unwrap()
    }

    #[test]
    fn figure_one_nominals() {
        let f = fixtures::fig1();
        assert!(hyb(&f.right, "n1", "'t"));
        assert!(!hyb(&f.left, "m2", "'t"));
        assert!(hyb(&f.left, "m0", "<>'t & <>~'t"));
        assert!(hyb(&f.left, "m2", "@'t p & @'s <>'t"));
    }

    #[test]
    fn figure_two_binder() {
        let cycle = fixtures::fig2_cycle();
        let chain = fixtures::fig2_chain(4).unwrap();
        assert!(hyb(&cycle, "n0", "down x.<><>?x"));
        assert!(!hyb(&chain, "m0", "down x.<><>?x"));
        for w in chain.worlds() {
            assert!(hyb(&chain, chain.name(w), "down x.(?x)"));
        }
    }

    #[test]
    fn shadowing_and_restoring() {
        let cycle = fixtures::fig2_cycle();
        // inner x rebinds to n1; after it, the outer x (n0) is visible again
        assert!(hyb(&cycle, "n0", "down x . <>(down x . <>~?x) & <>~?x"));
        assert!(hyb(&cycle, "n0", "exists y . ~?y & @?y <>~?y"));
    }

    #[test]
    fn unresolved_variable() {
        let cycle = fixtures::fig2_cycle();
        let phi = parse_hybrid("<>?z", cycle.signature()).unwrap();
        assert_eq!(
            sat_hybrid(&HybridContext::at(&cycle, World(0)), &phi),
            Err(SemanticsError::UnresolvedVariable("z".into()))
        );
        let ctx = HybridContext::new(&cycle, vec![World(1)], World(0));
        let psi = parse_hybrid("<>?x1", cycle.signature()).unwrap();
        assert_eq!(sat_hybrid(&ctx, &psi), Ok(true));
    }

    #[test]
    fn witnesses_are_first_in_order() {
        let f = fixtures::fig1();
        let ctx = HybridContext::at(&f.left, World(0));
        let dia = parse_hybrid("<>p", f.left.signature()).unwrap();
        assert_eq!(witness(&ctx, &dia).unwrap(), Some(World(1)));
        let ex = parse_hybrid("exists y . ~?y", f.left.signature()).unwrap();
        assert_eq!(witness(&ctx, &ex).unwrap(), Some(World(1)));
        let never = parse_hybrid("<>'s", f.left.signature()).unwrap();
        assert_eq!(witness(&ctx, &never).unwrap(), None);
    }

    #[test]
    fn first_order_satisfaction() {
        let f = fixtures::fig1();
        let st = FolStructure::plain(f.left.clone());
        let sig = FolSignature::new(f.left.signature().clone());
        let eq = parse_fol("x = x", &sig).unwrap();
        assert!(sat_fol(&st, &FolValuation::single("x", World(2)), &eq).unwrap());
        let rel = parse_fol("R(x,y)", &sig).unwrap();
        let eta = FolValuation::new().with("x", World(0)).with("y", World(1));
        assert!(sat_fol(&st, &eta, &rel).unwrap());
        let closed = parse_fol("forall x . (x = 's | R('s,x))", &sig).unwrap();
        assert!(sat_fol(&st, &FolValuation::new(), &closed).unwrap());
        assert_eq!(
            sat_fol(&st, &FolValuation::new(), &rel),
            Err(SemanticsError::UnresolvedVariable("x".into()))
        );
    }

    #[test]
    fn extra_symbols_need_an_expansion() {
        let f = fixtures::fig1();
        let sig = FolSignature::with_extra(f.left.signature().clone(), ["U"], ["d"]).unwrap();
        let phi = parse_fol("U(d) & exists y . (U(y) & ~y = d)", &sig).unwrap();
        let plain = FolStructure::plain(f.left.clone());
        assert_eq!(
            sat_fol(&plain, &FolValuation::new(), &phi),
            Err(SemanticsError::UnknownPredicate("U".into()))
        );
        let ex = Expansion::new().with_pred("U", [World(1), World(2)]).with_const("d", World(1));
        let st = FolStructure::new(f.left.clone(), ex).unwrap();
        assert!(sat_fol(&st, &FolValuation::new(), &phi).unwrap());
    }
}
