use std::collections::{BTreeSet, HashMap};

use super::ball::{lift_base_word, GammaBall};
use super::language::LanguageFsa;
use crate::error::Result;
use crate::gog::{reverse, GraphOfGroups, Letter, LetterKind, NormalForm};
use crate::group::{geodesic_words, is_geodesic, LetterId, VertexGroup};

/// Outcome of checking the language automaton against an independent
/// generation of normal-form words.
#[derive(Debug, Clone, Default)]
pub struct LanguageReport {
    pub max_len: usize,
    pub accepted: usize,
    pub expected: usize,
    /// Accepted by the automaton, not generated independently.
    pub extra: Vec<Vec<Letter>>,
    /// Generated independently, rejected by the automaton.
    pub missing: Vec<Vec<Letter>>,
    pub counts_by_length: Vec<usize>,
    pub ball_radius: usize,
    pub ball_size: usize,
    /// Ball elements whose serialized normal form is rejected or evaluates
    /// elsewhere.
    pub unrepresented: Vec<NormalForm>,
    /// `(element, accepted words, geodesic tail words)` where they differ.
    pub fiber_mismatch: Vec<(NormalForm, usize, usize)>,
    pub elements: usize,
}

impl LanguageReport {
    pub fn passed(&self) -> bool {
        self.extra.is_empty()
            && self.missing.is_empty()
            && self.unrepresented.is_empty()
            && self.fiber_mismatch.is_empty()
    }

    /// Human-readable first counterexample.
    pub fn counterexample(&self, g: &GraphOfGroups) -> Option<String> {
        let a = g.alphabet();
        if let Some(w) = self.extra.first() {
            return Some(format!(
                "accepted but not a normal-form word: {}",
                a.format_word(w)
            ));
        }
        if let Some(w) = self.missing.first() {
            return Some(format!("normal-form word rejected: {}", a.format_word(w)));
        }
        if let Some(nf) = self.unrepresented.first() {
            return Some(format!(
                "element without accepted representative: {}",
                g.format_nf(nf)
            ));
        }
        self.fiber_mismatch.first().map(|(nf, got, want)| {
            format!(
                "fiber of {} has {got} words, expected {want}",
                g.format_nf(nf)
            )
        })
    }
}

/// Every word `s₁e₁⋯sₙeₙ·u` of length at most `max_len`, generated directly
/// from the graph of groups: edge paths are loops at the base vertex obeying
/// the backtrack condition, `u` ranges over geodesic words of the base group.
pub fn generate_normal_form_words(g: &GraphOfGroups, max_len: usize) -> BTreeSet<Vec<Letter>> {
    let mut out = BTreeSet::new();
    let tails = geodesic_base_words(g.base_group().as_ref(), max_len);
    let mut stack: Vec<(Vec<Letter>, usize, Option<usize>)> = vec![(Vec::new(), g.base(), None)];
    let a = g.alphabet();
    while let Some((w, v, prev)) = stack.pop() {
        if v == g.base() {
            for t in tails.iter().filter(|t| w.len() + t.len() <= max_len) {
                let mut full = w.clone();
                full.extend(lift_base_word(g, t));
                out.insert(full);
            }
        }
        if w.len() + 2 > max_len {
            continue;
        }
        for e in (0..g.edges().len()).filter(|&e| g.origin(e) == v) {
            for k in 0..g.transversal(e).len() as u32 {
                if k == 0 && prev == Some(reverse(e)) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(a.letter(LetterKind::Transversal(e, k)).expect("letter"));
                w2.push(a.letter(LetterKind::Edge(e)).expect("letter"));
                stack.push((w2, g.edge(e).terminus, Some(e)));
            }
        }
    }
    out
}

/// Geodesic words over `B` up to `max_len`, checked against the word metric.
fn geodesic_base_words(group: &dyn VertexGroup, max_len: usize) -> Vec<Vec<LetterId>> {
    let mut out = Vec::new();
    let mut stack = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        if w.len() < max_len {
            for l in group.generators().all_letters() {
                let mut w2 = w.clone();
                w2.push(l);
                if is_geodesic(group, &w2) {
                    stack.push(w2);
                }
            }
        }
        out.push(w);
    }
    out
}

/// Compares the automaton with [`generate_normal_form_words`] up to
/// `max_len`, checks that every element of the ball of radius
/// `max(1, max_len / 3)` has an accepted representative, and that the number
/// of accepted words per element equals the number of geodesic words of its
/// tail.
pub fn verify_language(
    g: &GraphOfGroups,
    m: &LanguageFsa,
    max_len: usize,
    cap: usize,
) -> Result<LanguageReport> {
    let mut report = LanguageReport {
        max_len,
        counts_by_length: vec![0; max_len + 1],
        ..Default::default()
    };
    let expected = generate_normal_form_words(g, max_len);
    report.expected = expected.len();
    let mut fibers: HashMap<NormalForm, usize> = HashMap::new();
    let mut seen = BTreeSet::new();
    m.fsa.for_each_accepted(max_len, |w| {
        report.accepted += 1;
        report.counts_by_length[w.len()] += 1;
        if !expected.contains(w) {
            if report.extra.len() < 16 {
                report.extra.push(w.to_vec());
            }
        } else {
            seen.insert(w.to_vec());
        }
        *fibers.entry(g.normalize_word(w)?).or_default() += 1;
        if report.accepted > cap {
            return Err(crate::Error::Capacity {
                what: "accepted words".into(),
                limit: cap,
            });
        }
        Ok(())
    })?;
    report.missing = expected
        .iter()
        .filter(|w| !seen.contains(*w))
        .take(16)
        .cloned()
        .collect();

    let radius = (max_len / 3).max(1);
    let ball = GammaBall::new(g, radius, cap)?;
    report.ball_radius = radius;
    report.ball_size = ball.len();
    for nf in ball.elements() {
        let w = g.serialize(nf);
        if !m.accepts(&w)? || g.normalize_word(&w)? != *nf {
            report.unrepresented.push(nf.clone());
        }
    }
    report.elements = fibers.len();
    let base = g.base_group();
    let mut elems: Vec<_> = fibers.into_iter().collect();
    elems.sort_by_key(|a| g.serialize(&a.0));
    for (nf, got) in elems {
        // only elements whose whole fiber fits in the length bound
        let longest = 2 * nf.tree_level() + base.length(&nf.tail);
        if longest > max_len {
            continue;
        }
        let want = geodesic_words(base.as_ref(), &nf.tail).len();
        if got != want {
            report.fiber_mismatch.push((nf, got, want));
        }
    }
    Ok(report)
}
