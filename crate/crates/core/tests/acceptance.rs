//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use hybis::bisim::{
    decide_equiv, example46_family, is_quasi_injective, qinj_to_family, verify_omega_family, verify_plain_bisim,
    ConditionTag, Scope,
};
use hybis::model::random::{random_model, random_pointed, RandomModelSpec};
use hybis::model::{fixtures, ContextPair, Expansion, FolStructure, KripkeModel, PointedModel, World};
use hybis::oracle::{agree_up_to, axiomatise, enumerate, separating_formula, Oracle, OracleConfig, DEFAULT_CAP};
use hybis::semantics::{sat_fol, sat_hybrid, FolValuation, HybridContext};
use hybis::syntax::{parse_hybrid, FeatureSet, FolFormula, HybridFormula, Signature, Term};
use hybis::translate::{relativise, sbt, sbt_from, st, Target, STX, STY};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fs(text: &str) -> FeatureSet {
    text.parse().expect("feature set")
}

fn sig_ps() -> Signature {
    Signature::new(["p"], ["s"]).expect("signature")
}

/// fig1 without `t`, and the other fixtures with `s` placed at each world.
fn sweep_fixtures() -> Vec<(String, KripkeModel)> {
    let fig = fixtures::fig1();
    let mut out = vec![
        ("fig1.M".to_string(), fig.left.without_nominal("t").unwrap()),
        ("fig1.N".to_string(), fig.right.without_nominal("t").unwrap()),
    ];
    let bases = [
        ("fig2_chain(4)", fixtures::fig2_chain(4).unwrap()),
        ("fig2_cycle", fixtures::fig2_cycle()),
        ("fig3_N(4)", fixtures::fig3_n(4).unwrap()),
    ];
    for (name, m) in bases {
        for w in m.worlds() {
            out.push((format!("{name}[s={}]", m.name(w)), m.with_nominal("s", w).unwrap()));
        }
    }
    out
}

fn sweep_sentences(models: &[(String, KripkeModel)]) -> Vec<HybridFormula> {
    let refs: Vec<&KripkeModel> = models.iter().map(|(_, m)| m).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let config = OracleConfig::default();
    let joint = enumerate(&refs, FeatureSet::full(), 1, 2, &config).expect("joint enumeration");
    let singles: Vec<_> = refs
        .iter()
        .map(|m| enumerate(&[*m], FeatureSet::full(), 1, 2, &config).expect("enumeration"))
        .collect();
    for e in std::iter::once(&joint).chain(&singles) {
        for r in e.sentences() {
            if seen.insert(r.formula.clone()) {
                out.push(r.formula.clone());
            }
        }
    }
    out
}

fn holds_at(model: &KripkeModel, w: World, phi: &HybridFormula) -> bool {
    sat_hybrid(&HybridContext::at(model, w), phi).expect("evaluation")
}

fn criterion_1() -> Outcome {
    let models = sweep_fixtures();
    let sentences = sweep_sentences(&models);
    let mut checks = 0usize;
    let mut degrees = BTreeMap::new();
    for phi in &sentences {
        ensure(phi.degree() <= 2 && phi.is_sentence(), || format!("bad enumerated formula {phi}"))?;
        *degrees.entry(phi.degree()).or_insert(0usize) += 1;
        let tx = st(phi, Target::X).map_err(|e| format!("{phi}: {e}"))?;
        let ty = st(phi, Target::Y).map_err(|e| format!("{phi}: {e}"))?;
        for (name, m) in &models {
            let structure = FolStructure::plain(m.clone());
            for w in m.worlds() {
                let direct = holds_at(m, w, phi);
                let via_x = sat_fol(&structure, &FolValuation::single(STX, w), &tx).map_err(|e| e.to_string())?;
                let via_y = sat_fol(&structure, &FolValuation::single(STY, w), &ty).map_err(|e| e.to_string())?;
                ensure(direct == via_x && direct == via_y, || {
                    format!("{phi} at {name}/{}: hybrid {direct}, ST_x {via_x}, ST_y {via_y}", m.name(w))
                })?;
                checks += 2;
            }
        }
    }
    Ok(format!(
        "{} sentences (by degree {degrees:?}), {} fixtures, {checks} comparisons, 0 mismatches",
        sentences.len(),
        models.len()
    ))
}

fn criterion_2() -> Outcome {
    let models = sweep_fixtures();
    let sentences = sweep_sentences(&models);
    let sig = sig_ps();
    let (mut closed, mut checks) = (0usize, 0usize);
    for phi in &sentences {
        let tr = st(phi, Target::X).map_err(|e| format!("{phi}: {e}"))?;
        let back = sbt_from(&tr, STX, &sig).map_err(|e| format!("{phi}: {e}"))?;
        if tr.free_vars().is_empty() {
            closed += 1;
        } else {
            ensure(sbt(&tr, &sig).as_ref() == Ok(&back), || format!("sbt and sbt_from differ on {tr}"))?;
        }
        for (name, m) in &models {
            for w in m.worlds() {
                let (a, b) = (holds_at(m, w, phi), holds_at(m, w, &back));
                ensure(a == b, || format!("{phi} vs {back} at {name}/{}", m.name(w)))?;
                checks += 1;
            }
        }
    }
    Ok(format!(
        "{} sentences ({closed} with closed translations), {checks} point comparisons, 0 mismatches",
        sentences.len()
    ))
}

const CORPUS_FEATURES: [&str; 8] = ["none", "down", "nom", "down,nom", "at", "at,nom", "exists", "at,down"];

/// `decide_equiv` results on the random corpus, keyed by
/// `(pair, features, k, l)`.
struct Corpus {
    pairs: usize,
    seconds: f64,
    verdicts: BTreeMap<(usize, usize, usize, usize), bool>,
    agreements: usize,
}

fn corpus() -> Result<Corpus, String> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut verdicts = BTreeMap::new();
    let mut agreements = 0;
    let pairs = 120;
    for i in 0..pairs {
        let sig = if rng.gen_bool(0.5) {
            sig_ps()
        } else {
            Signature::new(["p"], Vec::<String>::new()).unwrap()
        };
        let mut spec = RandomModelSpec::new(sig, 4);
        spec.edge_density = Some(rng.gen_range(0.1..0.7));
        let a = random_pointed(&mut rng, &spec);
        let b = if rng.gen_bool(0.3) {
            PointedModel::new(a.model.clone(), World(rng.gen_range(0..a.model.len())))
        } else {
            random_pointed(&mut rng, &spec)
        };
        for (fi, f) in CORPUS_FEATURES.iter().enumerate() {
            let f = fs(f);
            for k in 0..=2 {
                for l in 0..=2 {
                    let d = decide_equiv(&a, &b, f, l, Some(k)).map_err(|e| e.to_string())?;
                    let o = agree_up_to(&a, &b, f, k, l, DEFAULT_CAP).map_err(|e| e.to_string())?;
                    ensure(d == o, || {
                        format!(
                            "pair {i}, F={f}, k={k}, L={l}: decide_equiv {d}, oracle {o}\n{}\n{}",
                            a.model.to_json(),
                            b.model.to_json()
                        )
                    })?;
                    agreements += usize::from(d);
                    verdicts.insert((i, fi, k, l), d);
                }
            }
        }
    }
    Ok(Corpus {
        pairs,
        seconds: started.elapsed().as_secs_f64(),
        verdicts,
        agreements,
    })
}

fn criterion_3(c: &Corpus) -> Outcome {
    Ok(format!(
        "{} pairs, {} runs, {} equivalent / {} not, all matching the oracle (corpus built in {:.2}s)",
        c.pairs,
        c.verdicts.len(),
        c.agreements,
        c.verdicts.len() - c.agreements,
        c.seconds
    ))
}

fn criterion_4() -> Outcome {
    let fig = fixtures::fig1();
    let (m, n) = (&fig.left, &fig.right);
    let plain = verify_plain_bisim(m, n, &fig.relation, false, &Scope::All).map_err(|e| e.to_string())?;
    ensure(plain.ok, || plain.render(m, n))?;
    let nom = verify_plain_bisim(m, n, &fig.relation, true, &Scope::All).map_err(|e| e.to_string())?;
    let target = ContextPair::states(m.world("m2").unwrap(), n.world("n1").unwrap());
    let v = nom
        .violations
        .iter()
        .find(|v| v.tag == ConditionTag::Nom && v.pair.as_ref() == Some(&target))
        .ok_or_else(|| nom.render(m, n))?;
    ensure(v.detail == "t holds at n1 but not at m2", || v.detail.clone())?;
    Ok(format!("without (nom): ok; with (nom): {}", v.render(m, n)))
}

fn criterion_5() -> Outcome {
    let chain = PointedModel::new(fixtures::fig2_chain(4).unwrap(), World(0));
    let cycle = PointedModel::new(fixtures::fig2_cycle(), World(0));
    let e = |f: &str, l, k| decide_equiv(&chain, &cycle, fs(f), l, k).map_err(|e| e.to_string());
    ensure(e("none", 3, None)?, || "chain and cycle differ at degree 3 without binders".into())?;
    ensure(!e("down", 3, Some(1))?, || "chain and cycle agree with down at degree 3".into())?;
    let phi = separating_formula(&chain, &cycle, fs("down"), 1, 3, &OracleConfig::default())
        .map_err(|e| e.to_string())?
        .ok_or("no separator found")?;
    ensure(phi.degree() == 3, || format!("separator {phi} has degree {}", phi.degree()))?;
    let oracle = Oracle::new(&[&chain.model, &cycle.model], fs("down"), 1, DEFAULT_CAP).map_err(|e| e.to_string())?;
    let target = parse_hybrid("down x . <><>?x", chain.model.signature()).unwrap();
    let (v1, v2) = (oracle.vector(&phi).unwrap(), oracle.vector(&target).unwrap());
    ensure(v1 == v2, || format!("{phi} is not vector-equal to {target}"))?;
    Ok(format!("L=3 plain: equivalent; {{down}} K=1: not, separated by {phi}"))
}

fn criterion_6() -> Outcome {
    let d = 5;
    let mn = fixtures::fig3_mn(d).unwrap();
    let un = fixtures::fig3_un(d).unwrap();
    let scope = |f: &fixtures::Related, below| Scope::fixture_depth(&f.left, &f.right, below);
    let q_mn = is_quasi_injective(&mn.left, &mn.right, &mn.relation, &scope(&mn, d)).map_err(|e| e.to_string())?;
    let q_un = is_quasi_injective(&un.left, &un.right, &un.relation, &scope(&un, d)).map_err(|e| e.to_string())?;
    ensure(!q_mn, || "M-N relation reported quasi-injective".into())?;
    ensure(q_un, || "U-N relation reported not quasi-injective".into())?;
    let fam = qinj_to_family(&un.left, &un.right, &un.relation, 2, &scope(&un, d)).map_err(|e| e.to_string())?;
    let report = verify_omega_family(&un.left, &un.right, &fam, fs("down"), 2, &scope(&un, 4)).map_err(|e| e.to_string())?;
    ensure(report.ok, || report.render(&un.left, &un.right))?;
    let sizes: Vec<usize> = fam.iter().map(|b| b.len()).collect();
    Ok(format!("M-N not quasi-injective, U-N quasi-injective; B_k sizes {sizes:?} verify for {{down}}"))
}

fn criterion_7() -> Outcome {
    let ex = example46_family(5, 2).map_err(|e| e.to_string())?;
    let scope = Scope::fixture_depth(&ex.left, &ex.right, 4);
    let report = verify_omega_family(&ex.left, &ex.right, &ex.family, fs("at,down,nom"), 2, &scope)
        .map_err(|e| e.to_string())?;
    let tags = report.tags();
    ensure(tags.len() == 1 && tags.contains(&ConditionTag::Atv), || report.render(&ex.left, &ex.right))?;
    let v = report
        .violations
        .iter()
        .find(|v| v.pair.is_some())
        .ok_or("no concrete violation")?;
    Ok(format!(
        "{} violation(s), all (atv); e.g. {}",
        report.violations.len(),
        v.render(&ex.left, &ex.right)
    ))
}

fn criterion_8(c: &Corpus) -> Outcome {
    let sets: Vec<FeatureSet> = CORPUS_FEATURES.iter().map(|f| fs(f)).collect();
    let (mut checked, mut violations) = (0usize, Vec::new());
    for (&(i, fi, k, l), &d) in &c.verdicts {
        if !d {
            continue;
        }
        for (gi, g) in sets.iter().enumerate() {
            if gi != fi && g.is_subset(sets[fi]) {
                checked += 1;
                if !c.verdicts[&(i, gi, k, l)] {
                    violations.push(format!("pair {i}: F'={} true but F={g} false (k={k}, L={l})", sets[fi]));
                }
            }
        }
        for lower in 0..l {
            checked += 1;
            if !c.verdicts[&(i, fi, k, lower)] {
                violations.push(format!("pair {i}: L'={l} true but L={lower} false (F={}, k={k})", sets[fi]));
            }
        }
    }
    ensure(violations.is_empty(), || violations.join("\n"))?;
    Ok(format!("{checked} implications checked, 0 violations"))
}

/// Closed first-order formulas over `P`, `R`, `=`, `'s` with variables
/// `x`, `y`, by size up to `max`.
fn fol_formulas(max: usize) -> Vec<FolFormula> {
    let terms = [Term::var("x"), Term::var("y"), Term::constant("s")];
    let mut by_size: Vec<Vec<FolFormula>> = vec![Vec::new(); max + 1];
    for t in &terms {
        by_size[1].push(FolFormula::pred("P", t.clone()));
        for u in &terms {
            by_size[1].push(FolFormula::Rel(t.clone(), u.clone()));
            by_size[1].push(FolFormula::Eq(t.clone(), u.clone()));
        }
    }
    for s in 2..=max {
        let mut next = Vec::new();
        for a in &by_size[s - 1] {
            next.push(FolFormula::not(a.clone()));
            for v in ["x", "y"] {
                if a.free_vars().contains(v) {
                    next.push(FolFormula::exists(v, a.clone()));
                    next.push(FolFormula::forall(v, a.clone()));
                }
            }
        }
        for sa in 1..s - 1 {
            let sb = s - 1 - sa;
            for a in &by_size[sa] {
                for b in &by_size[sb] {
                    next.push(FolFormula::and(a.clone(), b.clone()));
                    next.push(FolFormula::or(a.clone(), b.clone()));
                }
            }
        }
        by_size[s] = next;
    }
    by_size.into_iter().flatten().filter(FolFormula::is_closed).collect()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let spec = RandomModelSpec::new(sig_ps(), 3);
    let none = FolValuation::new();
    let mut cases = Vec::new();
    for _ in 0..20 {
        let a = FolStructure::plain(random_model(&mut rng, &spec));
        let b = FolStructure::plain(random_model(&mut rng, &spec));
        let union = a.disjoint_union(&b).map_err(|e| e.to_string())?;
        let marked = union
            .with_expansion(Expansion::new().with_pred("U", a.model().worlds()))
            .map_err(|e| e.to_string())?;
        cases.push((a, union, marked));
    }
    let mut seen = HashSet::new();
    let mut chosen = Vec::new();
    for phi in fol_formulas(4) {
        let vector: Vec<bool> = cases
            .iter()
            .flat_map(|(a, union, _)| [a, union])
            .map(|s| sat_fol(s, &none, &phi).expect("evaluation"))
            .collect();
        if seen.insert(vector) {
            chosen.push(phi);
        }
        if chosen.len() == 50 {
            break;
        }
    }
    ensure(chosen.len() == 50, || format!("only {} distinct formulas", chosen.len()))?;
    let mut differs = 0;
    for phi in &chosen {
        let rel = relativise(phi, "U").map_err(|e| e.to_string())?;
        for (i, (a, union, marked)) in cases.iter().enumerate() {
            let in_a = sat_fol(a, &none, phi).expect("evaluation");
            let in_union = sat_fol(union, &none, phi).expect("evaluation");
            let relativised = sat_fol(marked, &none, &rel).expect("evaluation");
            ensure(in_a == relativised, || format!("pair {i}: {phi} is {in_a} in A but {rel} is {relativised}"))?;
            differs += usize::from(in_a != in_union);
        }
    }
    Ok(format!(
        "20 pairs x 50 formulas, 0 mismatches ({differs} cases where the unrelativised formula changes)"
    ))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let spec = RandomModelSpec::new(sig_ps(), 3);
    let settings = [
        ("none", 0, 2),
        ("down", 1, 2),
        ("nom", 0, 2),
        ("at,nom", 0, 2),
        ("exists", 1, 1),
        ("at,down", 1, 2),
        ("down,nom", 1, 1),
        ("at", 1, 2),
        ("nom,down,at,exists", 1, 1),
        ("exists,nom", 1, 1),
    ];
    let (mut probed, mut inside) = (0usize, 0usize);
    for (ci, (f, k, l)) in settings.iter().enumerate() {
        let f = fs(f);
        let size = rng.gen_range(1..=3);
        let ks: Vec<PointedModel> = (0..size).map(|_| random_pointed(&mut rng, &spec)).collect();
        let phi = axiomatise(&ks, f, *k, *l, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let holds = |p: &PointedModel| {
            sat_hybrid(&HybridContext::new(&p.model, vec![p.point; *k], p.point), &phi).expect("evaluation")
        };
        for (mi, m) in ks.iter().enumerate() {
            ensure(holds(m), || format!("class {ci}: member {mi} fails the axiom"))?;
        }
        for _ in 0..300 {
            let probe = random_pointed(&mut rng, &spec);
            probed += 1;
            if holds(&probe) {
                inside += 1;
                let agrees = ks
                    .iter()
                    .any(|m| agree_up_to(m, &probe, f, *k, *l, DEFAULT_CAP).expect("oracle"));
                ensure(agrees, || format!("class {ci}: probe {} satisfies the axiom but agrees with no member", probe.model.to_json()))?;
            }
        }
    }
    ensure(inside > 0, || "no probe satisfied any axiom".into())?;
    Ok(format!("10 classes, {probed} probes, {inside} satisfying probes each agree with a member"))
}

fn main() {
    let started = Instant::now();
    let corpus_result = catch_unwind(corpus).unwrap_or_else(|_| Err("corpus construction panicked".into()));
    let corpus_err = corpus_result.as_ref().err().cloned();
    let with_corpus = |f: fn(&Corpus) -> Outcome| -> Outcome {
        match &corpus_result {
            Ok(c) => f(c),
            Err(e) => Err(e.clone()),
        }
    };
    let criteria: Vec<Criterion> = vec![
        ("translation truth sweep", Box::new(criterion_1)),
        ("SBT round trip", Box::new(criterion_2)),
        ("master equivalence", Box::new(move || with_corpus(criterion_3))),
        ("fig1 nominals", Box::new(criterion_4)),
        ("fig2 chain and cycle", Box::new(criterion_5)),
        ("fig3 quasi-injectivity", Box::new(criterion_6)),
        ("run family except (atv)", Box::new(criterion_7)),
        ("monotonicity", Box::new(move || with_corpus(criterion_8))),
        ("disjoint union relativisation", Box::new(criterion_9)),
        ("axiomatisation", Box::new(criterion_10)),
    ];
    if let Some(e) = &corpus_err {
        eprintln!("corpus: {e}");
    }
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{secs:.2}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{secs:.2}s]: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
