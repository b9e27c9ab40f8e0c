use std::collections::HashMap;

use super::{is_geodesic, LetterId, VertexGroup, Word};
use crate::error::{Error, Result};

/// Deterministic automaton whose states are cone types of geodesic words.
///
/// `transitions[class][letter]` is the cone type of `U·letter` when that word is
/// still geodesic, `None` otherwise. Every class is accepting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeTypeTable {
    transitions: Vec<Vec<Option<u32>>>,
    start: u32,
}

impl ConeTypeTable {
    pub(super) fn from_parts(transitions: Vec<Vec<Option<u32>>>, start: u32) -> Self {
        ConeTypeTable { transitions, start }
    }

    /// Moore partition refinement of an all-accepting partial DFA.
    pub(super) fn minimise(trans: Vec<Vec<Option<u32>>>, start: u32) -> Self {
        let n = trans.len();
        let mut class = vec![0u32; n];
        let mut count = 1;
        loop {
            let mut sigs: HashMap<(u32, Vec<Option<u32>>), u32> = HashMap::new();
            let mut next = vec![0u32; n];
            for s in 0..n {
                let sig: Vec<Option<u32>> = trans[s]
                    .iter()
                    .map(|t| t.map(|t| class[t as usize]))
                    .collect();
                let key = (class[s], sig);
                let len = sigs.len() as u32;
                next[s] = *sigs.entry(key).or_insert(len);
            }
            let new_count = sigs.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // renumber classes by first occurrence so the start class is 0
        let mut renumber: HashMap<u32, u32> = HashMap::new();
        let mut order = vec![start as usize];
        order.extend((0..n).filter(|&s| s != start as usize));
        for s in order {
            let len = renumber.len() as u32;
            renumber.entry(class[s]).or_insert(len);
        }
        let k = renumber.len();
        let letters = trans.first().map_or(0, Vec::len);
        let mut transitions = vec![vec![None; letters]; k];
        for s in 0..n {
            let c = renumber[&class[s]] as usize;
            for (l, t) in trans[s].iter().enumerate() {
                transitions[c][l] = t.map(|t| renumber[&class[t as usize]]);
            }
        }
        ConeTypeTable {
            transitions,
            start: 0,
        }
    }

    pub fn class_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn next(&self, class: u32, letter: LetterId) -> Option<u32> {
        self.transitions[class as usize]
            .get(letter as usize)
            .copied()
            .flatten()
    }

    /// Cone type of a word, `None` when the word is not geodesic.
    pub fn class_of(&self, word: &[LetterId]) -> Option<u32> {
        word.iter().try_fold(self.start, |c, &l| self.next(c, l))
    }

    pub fn accepts(&self, word: &[LetterId]) -> bool {
        self.class_of(word).is_some()
    }

    pub fn letter_count(&self) -> usize {
        self.transitions.first().map_or(0, Vec::len)
    }
}

/// Cone-type automaton of the oracle, checked against the word metric on every
/// word of length at most `check_length`.
pub fn build_geodesic_recognizer(
    oracle: &dyn VertexGroup,
    check_length: usize,
) -> Result<ConeTypeTable> {
    let table = oracle.cone_types();
    let letters: Vec<LetterId> = oracle.generators().all_letters().collect();
    let mut stack: Vec<Word> = vec![Vec::new()];
    while let Some(w) = stack.pop() {
        let accepted = table.accepts(&w);
        let geodesic = is_geodesic(oracle, &w);
        if accepted != geodesic {
            return Err(Error::ConeMismatch {
                word: w,
                accepted,
                geodesic,
            });
        }
        if w.len() < check_length {
            for &l in &letters {
                let mut v = w.clone();
                v.push(l);
                stack.push(v);
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::finite::parse_cycles;
    use crate::group::{FiniteGroup, FreeGroup};

    /// Brute-force cone comparison: two geodesics have the same cone type up to
    /// depth `d` when the same continuations of length ≤ d stay geodesic.
    fn cone_signature(g: &dyn VertexGroup, u: &[LetterId], depth: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut stack = vec![Vec::new()];
        while let Some(v) = stack.pop() {
            let mut uv = u.to_vec();
            uv.extend(&v);
            if !is_geodesic(g, &uv) {
                continue;
            }
            out.push(v.clone());
            if v.len() < depth {
                for l in g.generators().all_letters() {
                    let mut v2 = v.clone();
                    v2.push(l);
                    stack.push(v2);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn free_rank_two_has_five_classes() {
        let f2 = FreeGroup::new(&["x", "y"]).unwrap();
        let t = build_geodesic_recognizer(&f2, 6).unwrap();
        assert_eq!(t.class_count(), 5);
        // brute force: distinct cone signatures among geodesics of length ≤ 2
        let mut sigs = std::collections::BTreeSet::new();
        let mut words = vec![vec![]];
        for l in 1..5u16 {
            words.push(vec![l]);
            for m in 1..5u16 {
                words.push(vec![l, m]);
            }
        }
        for w in words.iter().filter(|w| is_geodesic(&f2, w)) {
            sigs.insert(cone_signature(&f2, w, 4));
        }
        assert_eq!(sigs.len(), 5);
    }

    #[test]
    fn z2_accepts_exactly_short_words() {
        let z2 =
            FiniteGroup::from_permutations(&["a".into()], &[parse_cycles("(1 2)").unwrap()], 10)
                .unwrap();
        let t = build_geodesic_recognizer(&z2, 5).unwrap();
        assert!(t.accepts(&[]));
        assert!(t.accepts(&[1]));
        assert!(t.accepts(&[2]));
        assert!(!t.accepts(&[1, 1]));
        assert!(!t.accepts(&[0]));
    }

    #[test]
    fn cone_classes_are_transition_consistent() {
        let s3 = FiniteGroup::from_permutations(
            &["s".into(), "t".into()],
            &[
                parse_cycles("(1 2)").unwrap(),
                parse_cycles("(1 2 3)").unwrap(),
            ],
            100,
        )
        .unwrap();
        let t = build_geodesic_recognizer(&s3, 5).unwrap();
        let mut by_class: HashMap<u32, Vec<Word>> = HashMap::new();
        let mut stack = vec![vec![]];
        while let Some(w) = stack.pop() {
            if let Some(c) = t.class_of(&w) {
                by_class.entry(c).or_default().push(w.clone());
                if w.len() < 4 {
                    for l in 0..5u16 {
                        let mut v = w.clone();
                        v.push(l);
                        stack.push(v);
                    }
                }
            }
        }
        for words in by_class.values() {
            let sig = cone_signature(&s3, &words[0], 3);
            for w in words {
                assert_eq!(cone_signature(&s3, w, 3), sig);
            }
        }
    }
}
