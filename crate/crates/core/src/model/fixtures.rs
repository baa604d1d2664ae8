//! The small structures used throughout the test suite and examples.
//!
//! Infinite chains are truncated: `fig2_chain(len)` has worlds
//! `m0..m{len-1}`; the `fig3_*` structures keep indices `0..=d` and their
//! relations keep every pair whose indices stay within that range. Pairs near
//! the truncation frontier generally fail (forth)/(back), so checks against
//! these fixtures are restricted to pairs of small depth (see [`depth`]).

use super::{KripkeModel, PairRelation, World};
use crate::syntax::Signature;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    Unknown(String),
    #[error("fixture `{name}` needs a size of at least {min}, got {got}")]
    TooSmall { name: String, min: usize, got: usize },
    #[error("fixture `{name}` takes {expected} parameter(s), got {got}")]
    Params {
        name: String,
        expected: usize,
        got: usize,
    },
}

/// Two models and a relation between their states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Related {
    pub left: KripkeModel,
    pub right: KripkeModel,
    pub relation: PairRelation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fixture {
    Model(KripkeModel),
    Related(Related),
}

/// Name, parameter description, summary.
pub const CATALOGUE: &[(&str, &str, &str)] = &[
    ("fig1", "", "M, N and a bisimulation B that does not preserve nominals"),
    ("fig2", "LEN", "chain, two-cycle and the alternating relation"),
    ("fig2_chain", "LEN", "chain m0 -> ... -> m{LEN-1}"),
    ("fig2_cycle", "", "two worlds n0 <-> n1"),
    ("fig3_M", "D", "M: branching root then a chain, truncated at depth D"),
    ("fig3_N", "D", "chain n0 -> ... -> nD"),
    ("fig3_U", "D", "unravelling of fig3_M(D)"),
    ("fig3_MN", "D", "fig3_M, fig3_N and their relation"),
    ("fig3_UN", "D", "fig3_U, fig3_N and their relation"),
];

fn sig_p() -> Signature {
    Signature::new(["p"], Vec::<String>::new()).expect("static signature")
}

fn too_small(name: &str, min: usize, got: usize) -> Result<(), FixtureError> {
    if got < min {
        return Err(FixtureError::TooSmall {
            name: name.to_string(),
            min,
            got,
        });
    }
    Ok(())
}

/// `M` has `m0 -> m1, m0 -> m2`; `N` has `n0 -> n1`; `s` names
/// the roots, `t` names `m1` and `n1`.
pub fn fig1() -> Related {
    let sig = Signature::new(["p"], ["s", "t"]).expect("static signature");
    let left = KripkeModel::builder(sig.clone())
        .worlds(["m0", "m1", "m2"])
        .edge("m0", "m1")
        .edge("m0", "m2")
        .prop_everywhere("p")
        .nom("s", "m0")
        .nom("t", "m1")
        .build()
        .expect("static fixture");
    let right = KripkeModel::builder(sig)
        .worlds(["n0", "n1"])
        .edge("n0", "n1")
        .prop_everywhere("p")
        .nom("s", "n0")
        .nom("t", "n1")
        .build()
        .expect("static fixture");
    let relation = PairRelation::from_state_names(&left, &right, &[("m0", "n0"), ("m1", "n1"), ("m2", "n1")])
        .expect("static fixture");
    Related { left, right, relation }
}

pub fn fig2_chain(len: usize) -> Result<KripkeModel, FixtureError> {
    too_small("fig2_chain", 1, len)?;
    let names: Vec<String> = (0..len).map(|i| format!("m{i}")).collect();
    let mut b = KripkeModel::builder(sig_p()).worlds(names.clone());
    for w in names.windows(2) {
        b = b.edge(w[0].clone(), w[1].clone());
    }
    Ok(b.prop_everywhere("p").build().expect("static fixture"))
}

pub fn fig2_cycle() -> KripkeModel {
    KripkeModel::builder(sig_p())
        .worlds(["n0", "n1"])
        .edge("n0", "n1")
        .edge("n1", "n0")
        .prop_everywhere("p")
        .build()
        .expect("static fixture")
}

/// Chain and two-cycle with the relation `m_i ~ n_(i mod 2)`.
pub fn fig2(len: usize) -> Result<Related, FixtureError> {
    let left = fig2_chain(len)?;
    let right = fig2_cycle();
    let relation = PairRelation::from_states((0..len).map(|i| (World(i), World(i % 2))));
    Ok(Related { left, right, relation })
}

/// `M`: `m0 -> m1`, `m0 -> m2`, `m1 -> m2`, then `m_i -> m_(i+1)`.
pub fn fig3_m(d: usize) -> Result<KripkeModel, FixtureError> {
    too_small("fig3_M", 2, d)?;
    let mut b = KripkeModel::builder(sig_p())
        .worlds((0..=d).map(|i| format!("m{i}")))
        .edge("m0", "m1")
        .edge("m0", "m2")
        .edge("m1", "m2");
    for i in 2..d {
        b = b.edge(format!("m{i}"), format!("m{}", i + 1));
    }
    Ok(b.prop_everywhere("p").build().expect("static fixture"))
}

pub fn fig3_n(d: usize) -> Result<KripkeModel, FixtureError> {
    too_small("fig3_N", 1, d)?;
    let mut b = KripkeModel::builder(sig_p()).worlds((0..=d).map(|i| format!("n{i}")));
    for i in 0..d {
        b = b.edge(format!("n{i}"), format!("n{}", i + 1));
    }
    Ok(b.prop_everywhere("p").build().expect("static fixture"))
}

/// Unravelling of [`fig3_m`]: a branch `u0 -> u1 -> u2 -> ... -> uD`
/// through `m1` and a branch `u0 -> u'2 -> ... -> u'D` skipping it. Each
/// `u_i` and `u'_i` unravels `m_i`.
pub fn fig3_u(d: usize) -> Result<KripkeModel, FixtureError> {
    too_small("fig3_U", 2, d)?;
    let mut b = KripkeModel::builder(sig_p())
        .worlds((0..=d).map(|i| format!("u{i}")))
        .worlds((2..=d).map(|i| format!("u'{i}")))
        .edge("u0", "u'2");
    for i in 0..d {
        b = b.edge(format!("u{i}"), format!("u{}", i + 1));
    }
    for i in 2..d {
        b = b.edge(format!("u'{i}"), format!("u'{}", i + 1));
    }
    Ok(b.prop_everywhere("p").build().expect("static fixture"))
}

/// `M` to `N`: `(m0,n0)`, `(m_i,n_i)` and `(m_(i+1),n_i)` for `i >= 1`.
pub fn fig3_mn(d: usize) -> Result<Related, FixtureError> {
    let left = fig3_m(d)?;
    let right = fig3_n(d)?;
    let mut pairs = vec![(World(0), World(0))];
    pairs.extend((1..=d).map(|i| (World(i), World(i))));
    pairs.extend((1..d).map(|i| (World(i + 1), World(i))));
    let relation = PairRelation::from_states(pairs);
    Ok(Related { left, right, relation })
}

/// `U` to `N`: `(u0,n0)`, `(u_i,n_i)` and `(u'_(i+1),n_i)` for `i >= 1`.
pub fn fig3_un(d: usize) -> Result<Related, FixtureError> {
    let left = fig3_u(d)?;
    let right = fig3_n(d)?;
    let mut pairs = vec![(World(0), World(0))];
    pairs.extend((1..=d).map(|i| (World(i), World(i))));
    let primed = |i: usize| left.world(&format!("u'{i}")).expect("primed world exists");
    pairs.extend((1..d).map(|i| (primed(i + 1), World(i))));
    let relation = PairRelation::from_states(pairs);
    Ok(Related { left, right, relation })
}

/// Depth of a fixture world: the index in its name (`m3`, `u'3` and `n3`
/// all have depth 3).
pub fn depth(model: &KripkeModel, w: World) -> usize {
    let digits: String = model.name(w).chars().filter(char::is_ascii_digit).collect();
    digits.parse().unwrap_or(0)
}

/// Depths of all worlds, in declared order.
pub fn depths(model: &KripkeModel) -> Vec<usize> {
    model.worlds().map(|w| depth(model, w)).collect()
}

fn one_param(name: &str, params: &[usize]) -> Result<usize, FixtureError> {
    match params {
        [n] => Ok(*n),
        _ => Err(FixtureError::Params {
            name: name.to_string(),
            expected: 1,
            got: params.len(),
        }),
    }
}

fn no_params(name: &str, params: &[usize]) -> Result<(), FixtureError> {
    if params.is_empty() {
        Ok(())
    } else {
        Err(FixtureError::Params {
            name: name.to_string(),
            expected: 0,
            got: params.len(),
        })
    }
}

/// Look up a fixture by catalogue name.
pub fn fixture(name: &str, params: &[usize]) -> Result<Fixture, FixtureError> {
    Ok(match name {
        "fig1" => {
            no_params(name, params)?;
            Fixture::Related(fig1())
        }
        "fig2" => Fixture::Related(fig2(one_param(name, params)?)?),
        "fig2_chain" => Fixture::Model(fig2_chain(one_param(name, params)?)?),
        "fig2_cycle" => {
            no_params(name, params)?;
            Fixture::Model(fig2_cycle())
        }
        "fig3_M" => Fixture::Model(fig3_m(one_param(name, params)?)?),
        "fig3_N" => Fixture::Model(fig3_n(one_param(name, params)?)?),
        "fig3_U" => Fixture::Model(fig3_u(one_param(name, params)?)?),
        "fig3_MN" => Fixture::Related(fig3_mn(one_param(name, params)?)?),
        "fig3_UN" => Fixture::Related(fig3_un(one_param(name, params)?)?),
        other => return Err(FixtureError::Unknown(other.to_string())),
    })
}
