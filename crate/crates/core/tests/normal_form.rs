mod common;

use std::collections::HashMap;

use common::{Bs12Oracle, F2zOracle, FreeOracle, ModularOracle, Oracle};
use gogauto::fixtures;
use gogauto::gog::{reverse, GraphOfGroups, Letter, NormalForm};
use gogauto::structure::{language_words, GammaBall, LanguageFsa};
use proptest::prelude::*;

fn word(g: &GraphOfGroups, raw: &[u16]) -> Vec<Letter> {
    let n = g.alphabet().len() as u16;
    raw.iter().map(|&l| l % n).collect()
}

/// Ball of the library against the ball of the model: the normal forms must
/// be in bijection with model values, sphere by sphere.
fn ball_matches_model<O: Oracle>(name: &str, o: &O, r: usize) {
    let g = fixtures::load(name).unwrap();
    let ball = GammaBall::new(&g, r, 1 << 22).unwrap();
    let mut seen: HashMap<O::V, NormalForm> = HashMap::new();
    for nf in ball.elements() {
        let v = o.eval(&g, &g.serialize(nf));
        if let Some(prev) = seen.insert(v.clone(), nf.clone()) {
            panic!(
                "{name}: {} and {} both evaluate to {v:?}",
                g.format_nf(&prev),
                g.format_nf(nf)
            );
        }
    }
    let model = common::oracle_ball(o, &g, r);
    assert_eq!(ball.len(), model.len(), "{name}: ball sizes at radius {r}");
}

#[test]
fn ball_bijection_free() {
    ball_matches_model("f2", &FreeOracle, 5);
}

#[test]
fn ball_bijection_modular() {
    ball_matches_model("modular", &ModularOracle, 6);
}

#[test]
fn ball_bijection_bs12() {
    ball_matches_model("bs12", &Bs12Oracle, 5);
}

#[test]
fn ball_bijection_f2z() {
    ball_matches_model("f2z", &F2zOracle, 4);
}

#[test]
fn free_group_normal_forms_are_reduced_words() {
    let g = fixtures::load("f2").unwrap();
    for raw in common::all_words(g.alphabet().len(), 5) {
        let nf = g.normalize_word(&raw).unwrap();
        assert!(nf.syllables.is_empty());
        let expected = FreeOracle.eval(&g, &raw);
        assert_eq!(nf.tail.len(), expected.len());
    }
}

/// Soundness, idempotence and the algebra of normal forms for one fixture.
fn check_word<O: Oracle>(
    g: &GraphOfGroups,
    o: &O,
    u: &[Letter],
    v: &[Letter],
) -> Result<(), TestCaseError> {
    let nu = g.normalize_word(u).unwrap();
    let nv = g.normalize_word(v).unwrap();
    let su = g.serialize(&nu);
    prop_assert_eq!(o.eval(g, &su), o.eval(g, u));
    prop_assert_eq!(&g.normalize_word(&su).unwrap(), &nu);
    prop_assert!(g.is_reduced(&nu));

    let folded = u
        .iter()
        .try_fold(NormalForm::identity(), |acc, &l| g.nf_append(&acc, l))
        .unwrap();
    prop_assert_eq!(&folded, &nu);

    let uv: Vec<Letter> = u.iter().chain(v).copied().collect();
    prop_assert_eq!(g.nf_multiply(&nu, &nv), g.normalize_word(&uv).unwrap());

    let inv = g.nf_inverse(&nu);
    prop_assert_eq!(
        &inv,
        &g.normalize_word(&g.alphabet().invert_word(u)).unwrap()
    );
    prop_assert_eq!(inv.tree_level(), nu.tree_level());

    for pair in nu.syllables.windows(2) {
        prop_assert!(
            !(pair[1].rep == 0 && pair[1].edge == reverse(pair[0].edge)),
            "backtrack in {}",
            g.format_nf(&nu)
        );
    }
    Ok(())
}

fn check_language<O: Oracle>(
    g: &GraphOfGroups,
    lang: &LanguageFsa,
    o: &O,
    u: &[Letter],
) -> Result<(), TestCaseError> {
    let nu = g.normalize_word(u).unwrap();
    let value = o.eval(g, u);
    for w in language_words(g, &nu) {
        prop_assert!(
            lang.accepts(&w).unwrap(),
            "{} rejected",
            g.alphabet().format_word(&w)
        );
        prop_assert_eq!(&o.eval(g, &w), &value);
    }
    Ok(())
}

macro_rules! fixture_props {
    ($modname:ident, $fixture:literal, $oracle:expr) => {
        mod $modname {
            use super::*;

            proptest! {
                #![proptest_config(ProptestConfig::with_cases(256))]

                #[test]
                fn algebra(u in prop::collection::vec(any::<u16>(), 0..14), v in prop::collection::vec(any::<u16>(), 0..8)) {
                    let g = fixtures::load($fixture).unwrap();
                    check_word(&g, &$oracle, &word(&g, &u), &word(&g, &v))?;
                }

                #[test]
                fn representatives_accepted(u in prop::collection::vec(any::<u16>(), 0..10)) {
                    let g = fixtures::load($fixture).unwrap();
                    let lang = LanguageFsa::build(&g);
                    check_language(&g, &lang, &$oracle, &word(&g, &u))?;
                }
            }
        }
    };
}

fixture_props!(f2, "f2", FreeOracle);
fixture_props!(modular, "modular", ModularOracle);
fixture_props!(bs12, "bs12", Bs12Oracle);
fixture_props!(f2z, "f2z", F2zOracle);

proptest! {
    #[test]
    fn free_reduce_idempotent(w in prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2]), 0..24)) {
        let r = common::free_reduce(&w);
        prop_assert_eq!(common::free_reduce(&r), r.clone());
        prop_assert!(r.windows(2).all(|p| p[0] != -p[1]));
    }
}

#[test]
fn conjugate_in_bs12_lands_in_base() {
    let g = fixtures::load("bs12").unwrap();
    let w = g.alphabet().parse_word("t' a t").unwrap();
    let nf = g.normalize_word(&w).unwrap();
    assert_eq!(nf.tree_level(), 0);
    assert_eq!(g.base_generators().format_word(&nf.tail), "a a");
    assert_eq!(
        Bs12Oracle.eval(&g, &w),
        Bs12Oracle.eval(&g, &g.serialize(&nf))
    );
}
