mod common;

use std::collections::{HashMap, HashSet};

use common::{Bs12Oracle, F2zOracle, FreeOracle, ModularOracle, Oracle};
use gogauto::fixtures;
use gogauto::gog::{GraphOfGroups, Letter};
use gogauto::structure::{
    build_multiplier, compute_eta, compute_zeta, default_k, letter_length, measure_kappa,
    verify_multiplier, DepartureRegistry, DepartureRequest, LanguageFsa,
};
use gogauto::Error;

const CAP: usize = 1 << 22;

/// Every pair of language words with `|W_L| <= n` and `|W_R| <= n + 2` is
/// accepted exactly when the model says `W_L x = W_R`.
fn multipliers_match_model<O: Oracle>(name: &str, o: &O, n: usize) {
    let g = fixtures::load(name).unwrap();
    let lang = LanguageFsa::build(&g);
    let kappa = measure_kappa(&g, &lang, 5, CAP).unwrap().kappa();
    let eta = compute_eta(&g);
    let lefts = lang.fsa.enumerate(n, CAP).unwrap();
    let rights = lang.fsa.enumerate(n + 2, CAP).unwrap();
    let mut by_value: HashMap<O::V, Vec<&Vec<Letter>>> = HashMap::new();
    for w in &rights {
        by_value.entry(o.eval(&g, w)).or_default().push(w);
    }
    for x in g.alphabet().letters() {
        let k = default_k(&g, kappa, eta, x);
        let m = build_multiplier(&g, &lang, x, k, CAP).unwrap();
        assert!(
            m.automaton.validate_shape().passed(),
            "{name} {}",
            g.alphabet().name(x)
        );
        let xv = o.letter(g.alphabet().name(x));
        for wl in &lefts {
            let want: HashSet<&Vec<Letter>> = by_value
                .get(&o.mul(&o.eval(&g, wl), &xv))
                .into_iter()
                .flatten()
                .copied()
                .collect();
            for wr in &rights {
                assert_eq!(
                    m.automaton.accepts_pair(wl, wr),
                    want.contains(wr),
                    "{name}: {} · {} vs {}",
                    g.alphabet().format_word(wl),
                    g.alphabet().name(x),
                    g.alphabet().format_word(wr)
                );
            }
        }
    }
}

#[test]
fn multipliers_free() {
    multipliers_match_model("f2", &FreeOracle, 3);
}

#[test]
fn multipliers_modular() {
    multipliers_match_model("modular", &ModularOracle, 5);
}

#[test]
fn multipliers_bs12() {
    multipliers_match_model("bs12", &Bs12Oracle, 4);
}

#[test]
fn multipliers_f2z() {
    multipliers_match_model("f2z", &F2zOracle, 3);
}

fn letter(g: &GraphOfGroups, name: &str) -> Letter {
    g.alphabet().lookup(name).unwrap()
}

/// Growing `K` only adds accepted pairs, and never wrong ones.
#[test]
fn k_monotone() {
    for (name, x) in [
        ("bs12", "t.0"),
        ("bs12", "t"),
        ("modular", "e~.1"),
        ("f2z", "t"),
    ] {
        let g = fixtures::load(name).unwrap();
        let lang = LanguageFsa::build(&g);
        let x = letter(&g, x);
        let d = letter_length(&g, x);
        if d > 0 {
            assert!(matches!(
                build_multiplier(&g, &lang, x, d - 1, CAP),
                Err(Error::Parameter(_))
            ));
        }
        let mut prev = usize::MAX;
        for k in d..=d + 6 {
            let m = build_multiplier(&g, &lang, x, k, CAP).unwrap();
            let rep = verify_multiplier(&g, &lang, &m, 5, CAP).unwrap();
            assert!(rep.false_accepts.is_empty(), "{name} K={k}");
            assert!(rep.false_rejects.len() <= prev, "{name} K={k}");
            prev = rep.false_rejects.len();
        }
        assert_eq!(prev, 0, "{name}");
    }
}

#[test]
fn undersized_k_rejects() {
    let g = fixtures::load("bs12").unwrap();
    let lang = LanguageFsa::build(&g);
    let m = build_multiplier(&g, &lang, letter(&g, "t.0"), 0, CAP).unwrap();
    let rep = verify_multiplier(&g, &lang, &m, 5, CAP).unwrap();
    assert!(rep.false_accepts.is_empty());
    assert!(!rep.false_rejects.is_empty());
    assert!(!rep.passed());
}

#[test]
fn free_group_departure_is_identity() {
    let g = fixtures::load("f2").unwrap();
    let lang = LanguageFsa::build(&g);
    let req = DepartureRequest {
        gog: &g,
        lang: &lang,
        r_max: 4,
        cap: CAP,
        max_len: 8,
    };
    let reg = DepartureRegistry::default();
    for method in ["exact", "empirical"] {
        assert_eq!(
            reg.compute(method, &req).unwrap().values,
            vec![0, 1, 2, 3, 4],
            "{method}"
        );
    }
}

#[test]
fn exact_departure_bounds_empirical() {
    for name in ["modular", "bs12"] {
        let g = fixtures::load(name).unwrap();
        let lang = LanguageFsa::build(&g);
        let req = DepartureRequest {
            gog: &g,
            lang: &lang,
            r_max: 3,
            cap: CAP,
            max_len: 9,
        };
        let reg = DepartureRegistry::default();
        let exact = reg.compute("exact", &req).unwrap();
        let emp = reg.compute("empirical", &req).unwrap();
        assert!(exact.is_monotone(), "{name}");
        assert!(
            exact.violations_by(&emp).is_empty(),
            "{name}: {exact} vs {emp}"
        );
        assert_eq!(exact.get(0), Some(0));
    }
}

#[test]
fn constants() {
    let expected = [
        ("f2", 0, 1, 1),
        ("modular", 2, 9, 1),
        ("bs12", 1, 6, 2),
        ("f2z", 1, 5, 1),
    ];
    for (name, eta, zeta, kappa) in expected {
        let g = fixtures::load(name).unwrap();
        let lang = LanguageFsa::build(&g);
        assert_eq!(compute_eta(&g), eta, "{name}");
        assert_eq!(compute_zeta(&g, eta, CAP).unwrap(), zeta, "{name}");
        let k = measure_kappa(&g, &lang, 5, CAP).unwrap();
        assert_eq!(k.kappa(), kappa, "{name}");
        assert!(k.stabilized(), "{name}");
    }
}
