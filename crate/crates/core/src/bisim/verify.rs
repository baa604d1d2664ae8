use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{conds, ext_enforced, same_signature, BisimError, BisimFamily, ConditionTag};
use crate::model::{fixtures, ContextPair, KripkeModel, PairRelation, World};
use crate::syntax::FeatureSet;

/// Which stored pairs get checked. Witnesses may come from anywhere in
/// the family; scoping only skips the obligations of out-of-scope pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Scope {
    #[default]
    All,
    /// Pairs whose two points both have depth below `below`.
    Depth {
        left: Vec<usize>,
        right: Vec<usize>,
        below: usize,
    },
}

impl Scope {
    /// Depth scope using the digits in the world names of fixture models.
    pub fn fixture_depth(left: &KripkeModel, right: &KripkeModel, below: usize) -> Scope {
        Scope::Depth {
            left: fixtures::depths(left),
            right: fixtures::depths(right),
            below,
        }
    }

    pub fn contains(&self, pair: &ContextPair) -> bool {
        match self {
            Scope::All => true,
            Scope::Depth { left, right, below } => {
                left[pair.left.point.0] < *below && right[pair.right.point.0] < *below
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub tag: ConditionTag,
    pub level: usize,
    pub k: usize,
    pub pair: Option<ContextPair>,
    pub detail: String,
}

impl Violation {
    pub fn render(&self, left: &KripkeModel, right: &KripkeModel) -> String {
        let at = match &self.pair {
            Some(p) => format!(" at {}", p.render(left, right)),
            None => String::new(),
        };
        format!("({}) k={} i={}{at}: {}", self.tag, self.k, self.level, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        VerifyReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn tags(&self) -> BTreeSet<ConditionTag> {
        self.violations.iter().map(|v| v.tag).collect()
    }

    pub fn has(&self, tag: ConditionTag) -> bool {
        self.violations.iter().any(|v| v.tag == tag)
    }

    pub fn first(&self, tag: ConditionTag) -> Option<&Violation> {
        self.violations.iter().find(|v| v.tag == tag)
    }

    pub fn render(&self, left: &KripkeModel, right: &KripkeModel) -> String {
        if self.ok {
            return "ok\n".to_string();
        }
        let mut out = format!("{} violation(s)\n", self.violations.len());
        for v in &self.violations {
            let _ = writeln!(out, "{}", v.render(left, right));
        }
        out
    }

    pub fn to_json_value(&self, left: &KripkeModel, right: &KripkeModel) -> serde_json::Value {
        let names = |ctx: &crate::model::Context, m: &KripkeModel| -> Vec<String> {
            ctx.tuple
                .iter()
                .chain(std::iter::once(&ctx.point))
                .map(|w| m.name(*w).to_string())
                .collect()
        };
        let violations: Vec<_> = self
            .violations
            .iter()
            .map(|v| {
                serde_json::json!({
                    "condition": v.tag.name(),
                    "level": v.level,
                    "k": v.k,
                    "pair": v.pair.as_ref().map(|p| serde_json::json!({
                        "left": names(&p.left, left),
                        "right": names(&p.right, right),
                    })),
                    "detail": v.detail,
                })
            })
            .collect();
        serde_json::json!({ "ok": self.ok, "violations": violations })
    }
}

struct Checker<'a> {
    left: &'a KripkeModel,
    right: &'a KripkeModel,
    conds: BTreeSet<ConditionTag>,
    out: Vec<Violation>,
}

struct Targets<'a> {
    here: &'a PairRelation,
    next: Option<&'a PairRelation>,
    ext: Option<&'a PairRelation>,
}

impl Checker<'_> {
    fn report(&mut self, tag: ConditionTag, level: usize, k: usize, pair: &ContextPair, detail: String) {
        self.out.push(Violation {
            tag,
            level,
            k,
            pair: Some(pair.clone()),
            detail,
        });
    }

    fn check(&mut self, pair: &ContextPair, k: usize, level: usize, t: &Targets<'_>) {
        let (l, r) = (&pair.left, &pair.right);
        let (m, n) = (l.point, r.point);
        let (lm, rm) = (self.left, self.right);
        let sig = lm.signature().clone();
        for (p, name) in sig.props().iter().enumerate() {
            if lm.holds(p, m) != rm.holds(p, n) {
                let (yes, no) = if lm.holds(p, m) { (lm.name(m), rm.name(n)) } else { (rm.name(n), lm.name(m)) };
                self.report(ConditionTag::Prop, level, k, pair, format!("{name} holds at {yes} but not at {no}"));
            }
        }
        for j in 0..k {
            if (l.tuple[j] == m) != (r.tuple[j] == n) {
                self.report(ConditionTag::Wvar, level, k, pair, format!("x{} names the point on one side only", j + 1));
            }
        }
        if self.conds.contains(&ConditionTag::Nom) {
            for (s, name) in sig.noms().iter().enumerate() {
                let (a, b) = (lm.nominal(s) == m, rm.nominal(s) == n);
                if a != b {
                    let (yes, no) = if a { (lm.name(m), rm.name(n)) } else { (rm.name(n), lm.name(m)) };
                    self.report(ConditionTag::Nom, level, k, pair, format!("{name} holds at {yes} but not at {no}"));
                }
            }
        }
        if self.conds.contains(&ConditionTag::Atv) {
            for j in 0..k {
                let shifted = ContextPair::new(l.at(l.tuple[j]), r.at(r.tuple[j]));
                if !t.here.contains(&shifted) {
                    let detail = format!("missing @x{} shift {}", j + 1, shifted.render(lm, rm));
                    self.report(ConditionTag::Atv, level, k, pair, detail);
                }
            }
        }
        if self.conds.contains(&ConditionTag::Atn) {
            for (s, name) in sig.noms().iter().enumerate() {
                let shifted = ContextPair::new(l.at(lm.nominal(s)), r.at(rm.nominal(s)));
                if !t.here.contains(&shifted) {
                    let detail = format!("missing @{name} shift {}", shifted.render(lm, rm));
                    self.report(ConditionTag::Atn, level, k, pair, detail);
                }
            }
        }
        if let Some(next) = t.next {
            for m2 in lm.successors(m) {
                if !rm.successors(n).any(|n2| next.contains(&ContextPair::new(l.at(m2), r.at(n2)))) {
                    let detail = format!("no answer to {} -> {}", lm.name(m), lm.name(m2));
                    self.report(ConditionTag::Forth, level, k, pair, detail);
                }
            }
            for n2 in rm.successors(n) {
                if !lm.successors(m).any(|m2| next.contains(&ContextPair::new(l.at(m2), r.at(n2)))) {
                    let detail = format!("no answer to {} -> {}", rm.name(n), rm.name(n2));
                    self.report(ConditionTag::Back, level, k, pair, detail);
                }
            }
            if self.conds.contains(&ConditionTag::Bind) {
                for j in 0..k {
                    let bound = ContextPair::new(l.rebind(j, m), r.rebind(j, n));
                    if !next.contains(&bound) {
                        let detail = format!("missing rebinding of x{} {}", j + 1, bound.render(lm, rm));
                        self.report(ConditionTag::Bind, level, k, pair, detail);
                    }
                }
            }
            if self.conds.contains(&ConditionTag::ExF) {
                for j in 0..k {
                    for a in lm.worlds() {
                        let ok = rm
                            .worlds()
                            .any(|b| next.contains(&ContextPair::new(l.rebind(j, a), r.rebind(j, b))));
                        if !ok {
                            let detail = format!("no answer to x{} := {}", j + 1, lm.name(a));
                            self.report(ConditionTag::ExF, level, k, pair, detail);
                        }
                    }
                }
            }
            if self.conds.contains(&ConditionTag::ExB) {
                for j in 0..k {
                    for b in rm.worlds() {
                        let ok = lm
                            .worlds()
                            .any(|a| next.contains(&ContextPair::new(l.rebind(j, a), r.rebind(j, b))));
                        if !ok {
                            let detail = format!("no answer to x{} := {}", j + 1, rm.name(b));
                            self.report(ConditionTag::ExB, level, k, pair, detail);
                        }
                    }
                }
            }
        }
        if let Some(ext) = t.ext {
            let extended = ContextPair::new(l.extend(), r.extend());
            if !ext.contains(&extended) {
                let detail = format!("missing extension {}", extended.render(lm, rm));
                self.report(ConditionTag::Ext, level, k, pair, detail);
            }
        }
    }
}

fn check_relations<'r>(
    left: &KripkeModel,
    right: &KripkeModel,
    rels: impl IntoIterator<Item = &'r PairRelation>,
) -> Result<(), BisimError> {
    same_signature(left, right)?;
    for rel in rels {
        rel.check_worlds(left, right)?;
    }
    Ok(())
}

/// Check a graded family against the base conditions and `conds(features)`,
/// stepping from level `i` to `i + 1`, plus (chain), (ext) when the features
/// contain a binder, and the constant-tuple seed when one is given.
pub fn verify_kl_family(
    left: &KripkeModel,
    right: &KripkeModel,
    fam: &BisimFamily,
    features: FeatureSet,
    seed: Option<(World, World)>,
    scope: &Scope,
) -> Result<VerifyReport, BisimError> {
    check_relations(left, right, fam.levels.iter().flatten())?;
    if let Some((m, n)) = seed {
        if m.0 >= left.len() || n.0 >= right.len() {
            return Err(BisimError::Malformed("seed outside the models".into()));
        }
    }
    let (kk, ll) = (fam.k_max(), fam.l_max());
    let ext = ext_enforced(features);
    let mut c = Checker {
        left,
        right,
        conds: conds(features),
        out: Vec::new(),
    };
    for k in 0..=kk {
        for i in 0..=ll {
            let here = fam.get(k, i);
            let targets = Targets {
                here,
                next: (i < ll).then(|| fam.get(k, i + 1)),
                ext: (ext && k < kk && i < ll).then(|| fam.get(k + 1, i + 1)),
            };
            for pair in here.iter().filter(|p| scope.contains(p)) {
                c.check(pair, k, i, &targets);
                if let Some(next) = targets.next {
                    if !next.contains(pair) {
                        c.report(ConditionTag::Chain, i, k, pair, format!("absent from level {}", i + 1));
                    }
                }
            }
        }
    }
    if let Some((m, n)) = seed {
        for k in 0..=kk {
            let pair = ContextPair::constant(k, m, n);
            if !fam.get(k, 0).contains(&pair) {
                c.report(ConditionTag::Seed, 0, k, &pair, "constant seed absent from level 0".into());
            }
        }
    }
    Ok(VerifyReport::from_violations(c.out))
}

/// Check `B_0, ..., B_Kbound` as an ungraded family: every condition is
/// answered inside the same `B_k`, and (ext) maps `B_k` into `B_(k+1)`.
pub fn verify_omega_family(
    left: &KripkeModel,
    right: &KripkeModel,
    family: &[PairRelation],
    features: FeatureSet,
    kbound: usize,
    scope: &Scope,
) -> Result<VerifyReport, BisimError> {
    if family.len() != kbound + 1 {
        return Err(BisimError::Malformed(format!(
            "expected {} relations, got {}",
            kbound + 1,
            family.len()
        )));
    }
    if let Some((k, rel)) = family.iter().enumerate().find(|(k, r)| r.k() != *k) {
        return Err(BisimError::Malformed(format!("relation {k} has tuple length {}", rel.k())));
    }
    check_relations(left, right, family)?;
    let mut c = Checker {
        left,
        right,
        conds: conds(features),
        out: Vec::new(),
    };
    for (k, here) in family.iter().enumerate() {
        let targets = Targets {
            here,
            next: Some(here),
            ext: family.get(k + 1),
        };
        for pair in here.iter().filter(|p| scope.contains(p)) {
            c.check(pair, k, 0, &targets);
        }
    }
    if family.iter().all(PairRelation::is_empty) {
        c.out.push(Violation {
            tag: ConditionTag::Seed,
            level: 0,
            k: 0,
            pair: None,
            detail: "family is empty".into(),
        });
    }
    Ok(VerifyReport::from_violations(c.out))
}

/// Plain bisimulation between states, optionally preserving nominals.
pub fn verify_plain_bisim(
    left: &KripkeModel,
    right: &KripkeModel,
    rel: &PairRelation,
    with_nom: bool,
    scope: &Scope,
) -> Result<VerifyReport, BisimError> {
    if rel.k() != 0 {
        return Err(BisimError::Malformed("expected a relation between plain states".into()));
    }
    check_relations(left, right, [rel])?;
    let mut c = Checker {
        left,
        right,
        conds: if with_nom { BTreeSet::from([ConditionTag::Nom]) } else { BTreeSet::new() },
        out: Vec::new(),
    };
    let targets = Targets {
        here: rel,
        next: Some(rel),
        ext: None,
    };
    for pair in rel.iter().filter(|p| scope.contains(p)) {
        c.check(pair, 0, 0, &targets);
    }
    Ok(VerifyReport::from_violations(c.out))
}
