mod common;

use std::collections::BTreeSet;

use gogauto::automata::{dot_counts, fsa_from_text, fsa_to_dot, fsa_to_text, Fsa};
use gogauto::gog::Letter;
use proptest::prelude::*;

const LABELS: usize = 3;

#[derive(Debug, Clone)]
struct Spec {
    finals: Vec<bool>,
    edges: Vec<(usize, u16, usize)>,
}

fn spec() -> impl Strategy<Value = Spec> {
    (1usize..7).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec((0..n, 0..LABELS as u16, 0..n), 0..3 * n),
        )
            .prop_map(|(finals, edges)| Spec { finals, edges })
    })
}

fn build(s: &Spec) -> Fsa {
    let mut m = Fsa::new((0..LABELS).map(|i| format!("l{i}")).collect());
    for (i, &f) in s.finals.iter().enumerate() {
        m.add_state(format!("q{i}"), f);
    }
    m.set_initial(0);
    for &(a, l, b) in &s.edges {
        m.add_edge(a as u32, l, b as u32);
    }
    m
}

/// Subset simulation straight from the edge list.
fn brute_accepts(s: &Spec, w: &[Letter]) -> bool {
    let mut cur: BTreeSet<usize> = BTreeSet::from([0]);
    for &l in w {
        cur = s
            .edges
            .iter()
            .filter(|(a, el, _)| cur.contains(a) && *el == l)
            .map(|e| e.2)
            .collect();
    }
    cur.iter().any(|&q| s.finals[q])
}

const N: usize = 5;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn acceptance_matches_subset_simulation(s in spec()) {
        let m = build(&s);
        for w in common::all_words(LABELS, N) {
            prop_assert_eq!(m.accepts(&w).unwrap(), brute_accepts(&s, &w));
        }
    }

    #[test]
    fn enumerate_is_filtered_brute_force(s in spec()) {
        let m = build(&s);
        let expected: Vec<Vec<Letter>> =
            common::all_words(LABELS, N).into_iter().filter(|w| brute_accepts(&s, w)).collect();
        prop_assert_eq!(&m.enumerate(N, 1 << 20).unwrap(), &expected);
        let mut counts = vec![0u128; N + 1];
        for w in &expected {
            counts[w.len()] += 1;
        }
        prop_assert_eq!(m.count_by_length(N), counts);
    }

    #[test]
    fn trim_and_determinize_preserve_language(s in spec()) {
        let m = build(&s);
        let (t, _) = m.trim();
        let d = m.determinize();
        prop_assert!(d.is_deterministic());
        prop_assert!(t.state_count() <= m.state_count());
        for w in common::all_words(LABELS, N) {
            let a = m.accepts(&w).unwrap();
            prop_assert_eq!(t.accepts(&w).unwrap(), a);
            prop_assert_eq!(d.accepts(&w).unwrap(), a);
        }
    }

    #[test]
    fn text_round_trip(s in spec()) {
        let m = build(&s);
        let back = fsa_from_text(&fsa_to_text(&m), m.labels().to_vec()).unwrap();
        prop_assert_eq!(&back, &m);
        let (nodes, edges) = dot_counts(&fsa_to_dot(&m));
        prop_assert_eq!(nodes, m.state_count());
        prop_assert_eq!(edges, m.edge_count());
    }
}

#[test]
fn foreign_letter_rejected() {
    let m = build(&Spec {
        finals: vec![true],
        edges: vec![],
    });
    assert!(m.accepts(&[LABELS as Letter]).is_err());
}

#[test]
fn enumerate_respects_cap() {
    let m = build(&Spec {
        finals: vec![true],
        edges: (0..LABELS as u16).map(|l| (0, l, 0)).collect(),
    });
    assert!(m.enumerate(6, 100).is_err());
    assert_eq!(m.enumerate(2, 100).unwrap().len(), 1 + 3 + 9);
}
