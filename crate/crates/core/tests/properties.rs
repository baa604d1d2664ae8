use hybis::model::random::{random_model, RandomModelSpec};
use hybis::model::{FolStructure, KripkeModel, World};
use hybis::semantics::{sat_fol, sat_hybrid, FolValuation, HybridContext};
use hybis::syntax::{parse_fol, parse_hybrid, FolSignature, HybridFormula as H, Signature};
use hybis::translate::{sbt_from, st, Target, STX};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sig() -> Signature {
    Signature::new(["p", "q"], ["s"]).unwrap()
}

fn formula() -> impl Strategy<Value = H> {
    let vars = prop::sample::select(vec!["x", "y"]);
    let leaf = prop_oneof![
        Just(H::Bot),
        Just(H::Top),
        Just(H::prop("p")),
        Just(H::prop("q")),
        Just(H::nom("s")),
        vars.clone().prop_map(H::var),
    ];
    leaf.prop_recursive(5, 40, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(H::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| H::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| H::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| H::implies(a, b)),
            inner.clone().prop_map(H::dia),
            inner.clone().prop_map(H::nec),
            (vars.clone(), inner.clone()).prop_map(|(x, a)| H::down(x, a)),
            (vars.clone(), inner.clone()).prop_map(|(x, a)| H::exists(x, a)),
            inner.clone().prop_map(|a| H::at_nom("s", a)),
            (vars.clone(), inner).prop_map(|(x, a)| H::at_var(x, a)),
        ]
    })
}

/// Bind any free variables at the front so the result is a sentence.
fn close(phi: H) -> H {
    phi.free_wvars().into_iter().fold(phi, |acc, x| H::down(x, acc))
}

fn model(seed: u64) -> KripkeModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_model(&mut rng, &RandomModelSpec::new(sig(), 4))
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(phi in formula()) {
        let text = phi.to_string();
        prop_assert_eq!(parse_hybrid(&text, &sig()).unwrap(), phi);
    }

    #[test]
    fn degree_counts_nested_modalities_and_binders(phi in formula()) {
        prop_assert_eq!(H::dia(phi.clone()).degree(), phi.degree() + 1);
        prop_assert_eq!(H::down("x", phi.clone()).degree(), phi.degree() + 1);
        prop_assert_eq!(H::at_nom("s", phi.clone()).degree(), phi.degree());
        prop_assert_eq!(H::not(phi.clone()).degree(), phi.degree());
        prop_assert!(phi.desugar().degree() == phi.degree());
    }

    #[test]
    fn translation_preserves_truth(phi in formula(), seed in 0u64..500) {
        let phi = close(phi);
        let m = model(seed);
        let structure = FolStructure::plain(m.clone());
        let tr = st(&phi, Target::X).unwrap();
        let back = sbt_from(&tr, STX, m.signature()).unwrap();
        let text = tr.to_string();
        let reparsed = parse_fol(&text, &FolSignature::new(sig())).unwrap();
        prop_assert_eq!(&reparsed, &tr);
        for w in m.worlds() {
            let direct = sat_hybrid(&HybridContext::at(&m, w), &phi).unwrap();
            prop_assert_eq!(direct, sat_fol(&structure, &FolValuation::single(STX, w), &tr).unwrap());
            prop_assert_eq!(direct, sat_hybrid(&HybridContext::at(&m, w), &back).unwrap());
        }
    }

    #[test]
    fn desugaring_preserves_truth(phi in formula(), seed in 0u64..500) {
        let phi = close(phi);
        let m = model(seed);
        let core = phi.desugar();
        prop_assert!(core.is_core());
        for w in m.worlds() {
            let ctx = HybridContext::at(&m, w);
            prop_assert_eq!(sat_hybrid(&ctx, &phi).unwrap(), sat_hybrid(&ctx, &core).unwrap());
        }
    }

    #[test]
    fn model_documents_round_trip(seed in 0u64..500) {
        let m = model(seed);
        let back = KripkeModel::from_json(&m.to_json(), m.signature()).unwrap();
        prop_assert_eq!(back, m);
    }
}

#[test]
fn open_formulas_evaluate_under_assignments() {
    let m = model(1);
    let phi = parse_hybrid("<>?x | @?x p", &sig()).unwrap();
    for v in m.worlds() {
        let ctx = HybridContext::named(&m, vec!["x".into()], vec![v], World(0));
        let expected = m.has_edge(World(0), v) || m.holds_named("p", v).unwrap();
        assert_eq!(sat_hybrid(&ctx, &phi).unwrap(), expected);
    }
}
