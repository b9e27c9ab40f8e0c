mod common;

use std::collections::HashMap;

use common::{ModularOracle, Oracle};
use gogauto::fixtures;
use gogauto::gog::{GraphOfGroups, Letter};
use gogauto::gogfile::{parse_spec, print_spec};
use gogauto::structure::{verify_language, LanguageFsa, LanguageOptions};
use gogauto::Error;

#[test]
fn free_group_growth() {
    let g = fixtures::load("f2").unwrap();
    let lang = LanguageFsa::build(&g);
    let counts = lang.fsa.count_by_length(6);
    assert_eq!(counts, vec![1, 4, 12, 36, 108, 324, 972]);
}

/// Level-two loops `s₁ e s₂ e~ h`: two choices of `s₁`, two
/// non-backtracking `s₂` and two tails.
#[test]
fn modular_level_two() {
    let g = fixtures::load("modular").unwrap();
    let lang = LanguageFsa::build(&g);
    let mut level_two = std::collections::HashSet::new();
    for w in lang.fsa.enumerate(8, 1 << 20).unwrap() {
        let nf = g.normalize_word(&w).unwrap();
        if nf.tree_level() == 2 {
            level_two.insert(ModularOracle.eval(&g, &w));
        }
    }
    assert_eq!(level_two.len(), 8);
}

#[test]
fn every_fixture_language_verifies() {
    for name in fixtures::NAMES {
        let g = fixtures::load(name).unwrap();
        let lang = LanguageFsa::build(&g);
        let rep = verify_language(&g, &lang, 6, 1 << 22).unwrap();
        assert!(rep.passed(), "{name}: {:?}", rep.counterexample(&g));
        assert_eq!(rep.accepted, rep.expected);
    }
}

#[test]
fn census_totals() {
    let expected = [("f2", 5), ("modular", 11), ("bs12", 13), ("f2z", 11)];
    for (name, total) in expected {
        let g = fixtures::load(name).unwrap();
        let lang = LanguageFsa::build(&g);
        assert_eq!(lang.census.total(), total, "{name}");
        assert_eq!(lang.fsa.state_count(), total, "{name}");
        assert!(lang.fsa.is_deterministic(), "{name}");
    }
}

#[test]
fn backtracking_language_is_caught() {
    let g = fixtures::load("modular").unwrap();
    let bad = LanguageFsa::build_with(
        &g,
        LanguageOptions {
            allow_backtrack: true,
        },
    );
    let rep = verify_language(&g, &bad, 6, 1 << 22).unwrap();
    assert!(!rep.passed());
    assert!(!rep.extra.is_empty());
    assert!(rep
        .counterexample(&g)
        .unwrap()
        .starts_with("accepted but not"));
    let good = LanguageFsa::build(&g);
    for w in &rep.extra {
        assert!(!good.accepts(w).unwrap());
        assert!(bad.accepts(w).unwrap());
    }
}

/// Words with the same value share their edge path; the tail in `Z/2` has
/// the two geodesics `a` and `a'`.
#[test]
fn modular_fibres() {
    let g = fixtures::load("modular").unwrap();
    let lang = LanguageFsa::build(&g);
    let mut by_value: HashMap<_, Vec<Vec<Letter>>> = HashMap::new();
    for w in lang.fsa.enumerate(7, 1 << 20).unwrap() {
        by_value
            .entry(ModularOracle.eval(&g, &w))
            .or_default()
            .push(w);
    }
    for words in by_value.values() {
        let path = |w: &Vec<Letter>| {
            w.iter()
                .copied()
                .filter(|&l| !g.alphabet().is_base(l))
                .collect::<Vec<_>>()
        };
        assert!(words.iter().all(|w| path(w) == path(&words[0])));
        let tail = words[0].len() - path(&words[0]).len();
        assert_eq!(
            words.len(),
            if tail == 0 { 1 } else { 2 },
            "{}",
            g.alphabet().format_word(&words[0])
        );
    }
}

fn round_trip(g: &GraphOfGroups) {
    let text = print_spec(g.spec());
    let back = parse_spec(&text, None).unwrap();
    assert_eq!(&back, g.spec(), "{text}");
}

#[test]
fn gogfile_round_trip() {
    for name in fixtures::NAMES {
        round_trip(&fixtures::load(name).unwrap());
    }
}

#[test]
fn gogfile_errors_carry_positions() {
    let dup = "[graph]\nvertex c\nedge t: c -> c\nedge t: c -> c\nbase c\n[vertex c]\nkind = free\ngenerators = a\n";
    let e = parse_spec(dup, None).unwrap_err();
    assert!(matches!(e, Error::Parse { .. }), "{e}");
    assert!(e.to_string().contains("lines 3 and 4"), "{e}");

    let e = parse_spec("vertex c\n", None).unwrap_err();
    assert!(e.is_input_error());

    let unknown = fixtures::text("f2")
        .unwrap()
        .replace("kind = free", "kind = lattice");
    let e = parse_spec(&unknown, None)
        .and_then(GraphOfGroups::build)
        .map(|_| ())
        .unwrap_err();
    assert!(e.is_input_error(), "{e}");
}
