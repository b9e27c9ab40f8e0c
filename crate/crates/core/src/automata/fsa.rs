use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

pub type StateId = u32;
/// Edge label: index into the automaton's label list.
pub type Label = u16;

/// A finite state automaton over a fixed label list. Several edges with the
/// same label may leave a state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fsa {
    labels: Vec<String>,
    names: Vec<String>,
    finals: Vec<bool>,
    initial: Option<StateId>,
    /// Out-edges per state, sorted by `(label, target)`.
    edges: Vec<Vec<(Label, StateId)>>,
}

impl Fsa {
    pub fn new(labels: Vec<String>) -> Self {
        Fsa {
            labels,
            names: Vec::new(),
            finals: Vec::new(),
            initial: None,
            edges: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>, is_final: bool) -> StateId {
        self.names.push(name.into());
        self.finals.push(is_final);
        self.edges.push(Vec::new());
        (self.names.len() - 1) as StateId
    }

    pub fn set_initial(&mut self, s: StateId) {
        self.initial = Some(s);
    }

    pub fn set_final(&mut self, s: StateId, is_final: bool) {
        self.finals[s as usize] = is_final;
    }

    pub fn add_edge(&mut self, from: StateId, label: Label, to: StateId) {
        assert!(
            (label as usize) < self.labels.len(),
            "label outside alphabet"
        );
        let out = &mut self.edges[from as usize];
        if let Err(p) = out.binary_search(&(label, to)) {
            out.insert(p, (label, to));
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.names.len() as StateId
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s as usize]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|p| p as StateId)
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn is_final(&self, s: StateId) -> bool {
        self.finals[s as usize]
    }

    pub fn out_edges(&self, s: StateId) -> &[(Label, StateId)] {
        &self.edges[s as usize]
    }

    pub fn successors(&self, s: StateId, l: Label) -> impl Iterator<Item = StateId> + '_ {
        let out = &self.edges[s as usize];
        let start = out.partition_point(|&(m, _)| m < l);
        out[start..]
            .iter()
            .take_while(move |&&(m, _)| m == l)
            .map(|&(_, t)| t)
    }

    /// The unique successor in a deterministic automaton.
    pub fn step(&self, s: StateId, l: Label) -> Option<StateId> {
        self.successors(s, l).next()
    }

    pub fn is_deterministic(&self) -> bool {
        self.edges
            .iter()
            .all(|out| out.windows(2).all(|w| w[0].0 != w[1].0))
    }

    fn check_word(&self, w: &[Label]) -> Result<()> {
        match w.iter().find(|&&l| l as usize >= self.labels.len()) {
            Some(l) => Err(Error::UnknownLetter(format!("#{l}"))),
            None => Ok(()),
        }
    }

    /// States reachable from the initial state along `w`.
    pub fn run(&self, w: &[Label]) -> Result<BTreeSet<StateId>> {
        self.check_word(w)?;
        let mut cur: BTreeSet<StateId> = self.initial.into_iter().collect();
        for &l in w {
            cur = cur.iter().flat_map(|&s| self.successors(s, l)).collect();
            if cur.is_empty() {
                break;
            }
        }
        Ok(cur)
    }

    pub fn accepts(&self, w: &[Label]) -> Result<bool> {
        Ok(self.run(w)?.iter().any(|&s| self.is_final(s)))
    }

    pub fn accessible(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue: VecDeque<StateId> = self.initial.into_iter().collect();
        for &s in &queue {
            seen[s as usize] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &(_, t) in self.out_edges(s) {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Minimum number of letters needed to reach a final state, per state.
    pub fn distance_to_final(&self) -> Vec<Option<usize>> {
        let n = self.state_count();
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for s in self.states() {
            for &(_, t) in self.out_edges(s) {
                rev[t as usize].push(s);
            }
        }
        let mut dist = vec![None; n];
        let mut queue = VecDeque::new();
        for s in self.states().filter(|&s| self.is_final(s)) {
            dist[s as usize] = Some(0);
            queue.push_back(s);
        }
        while let Some(t) = queue.pop_front() {
            let d = dist[t as usize].expect("queued");
            for &s in &rev[t as usize] {
                if dist[s as usize].is_none() {
                    dist[s as usize] = Some(d + 1);
                    queue.push_back(s);
                }
            }
        }
        dist
    }

    /// Restriction to accessible and live states, with the old-to-new state map.
    pub fn trim(&self) -> (Fsa, Vec<Option<StateId>>) {
        let acc = self.accessible();
        let live = self.distance_to_final();
        let mut map = vec![None; self.state_count()];
        let mut out = Fsa::new(self.labels.clone());
        for s in self.states() {
            if acc[s as usize] && live[s as usize].is_some() {
                map[s as usize] = Some(out.add_state(self.name(s), self.is_final(s)));
            }
        }
        for s in self.states() {
            let Some(ns) = map[s as usize] else { continue };
            for &(l, t) in self.out_edges(s) {
                if let Some(nt) = map[t as usize] {
                    out.add_edge(ns, l, nt);
                }
            }
        }
        if let Some(i) = self.initial.and_then(|i| map[i as usize]) {
            out.set_initial(i);
        }
        (out, map)
    }

    /// Subset construction over accessible subsets.
    pub fn determinize(&self) -> Fsa {
        let mut out = Fsa::new(self.labels.clone());
        let Some(init) = self.initial else { return out };
        let mut index: BTreeMap<BTreeSet<StateId>, StateId> = BTreeMap::new();
        let mut queue = VecDeque::new();
        let start = BTreeSet::from([init]);
        let s0 = out.add_state("{0}", self.is_final(init));
        out.set_initial(s0);
        index.insert(start.clone(), s0);
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            let from = index[&set];
            let mut by_label: BTreeMap<Label, BTreeSet<StateId>> = BTreeMap::new();
            for &s in &set {
                for &(l, t) in self.out_edges(s) {
                    by_label.entry(l).or_default().insert(t);
                }
            }
            for (l, next) in by_label {
                let to = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        let fin = next.iter().any(|&s| self.is_final(s));
                        let t = out.add_state(format!("{{{}}}", index.len()), fin);
                        index.insert(next.clone(), t);
                        queue.push_back(next);
                        t
                    }
                };
                out.add_edge(from, l, to);
            }
        }
        out
    }

    /// `live[k][s]`: some word of length exactly `k` leads from `s` to a final state.
    fn exact_liveness(&self, max_len: usize) -> Vec<Vec<bool>> {
        let mut live = vec![self.finals.clone()];
        for k in 1..=max_len {
            let prev = &live[k - 1];
            let row = self
                .states()
                .map(|s| self.out_edges(s).iter().any(|&(_, t)| prev[t as usize]))
                .collect();
            live.push(row);
        }
        live
    }

    /// Accepted words of length at most `max_len` in shortlex order. Fails
    /// once more than `cap` words would be produced.
    pub fn enumerate(&self, max_len: usize, cap: usize) -> Result<Vec<Vec<Label>>> {
        let mut out = Vec::new();
        self.for_each_accepted(max_len, |w| {
            if out.len() >= cap {
                return Err(Error::Capacity {
                    what: "enumerated words".into(),
                    limit: cap,
                });
            }
            out.push(w.to_vec());
            Ok(())
        })?;
        Ok(out)
    }

    /// Calls `f` on every accepted word of length at most `max_len`, in
    /// shortlex order.
    pub fn for_each_accepted(
        &self,
        max_len: usize,
        mut f: impl FnMut(&[Label]) -> Result<()>,
    ) -> Result<()> {
        let Some(init) = self.initial else {
            return Ok(());
        };
        let live = self.exact_liveness(max_len);
        let mut word = Vec::new();
        for len in 0..=max_len {
            let start = vec![init];
            if live[len][init as usize] {
                self.emit(&start, len, &live, &mut word, &mut f)?;
            }
        }
        Ok(())
    }

    fn emit(
        &self,
        set: &[StateId],
        remaining: usize,
        live: &[Vec<bool>],
        word: &mut Vec<Label>,
        f: &mut impl FnMut(&[Label]) -> Result<()>,
    ) -> Result<()> {
        if remaining == 0 {
            return f(word);
        }
        let mut by_label: BTreeMap<Label, BTreeSet<StateId>> = BTreeMap::new();
        for &s in set {
            for &(l, t) in self.out_edges(s) {
                if live[remaining - 1][t as usize] {
                    by_label.entry(l).or_default().insert(t);
                }
            }
        }
        for (l, next) in by_label {
            word.push(l);
            let next: Vec<StateId> = next.into_iter().collect();
            self.emit(&next, remaining - 1, live, word, f)?;
            word.pop();
        }
        Ok(())
    }

    /// Number of accepted words of each length `0..=max_len`.
    pub fn count_by_length(&self, max_len: usize) -> Vec<u128> {
        let d = if self.is_deterministic() {
            self.clone()
        } else {
            self.determinize()
        };
        let mut counts = vec![0u128; max_len + 1];
        let Some(init) = d.initial else { return counts };
        let mut cur = vec![0u128; d.state_count()];
        cur[init as usize] = 1;
        for count in counts.iter_mut() {
            *count = d
                .states()
                .filter(|&s| d.is_final(s))
                .map(|s| cur[s as usize])
                .sum();
            let mut next = vec![0u128; d.state_count()];
            for s in d.states() {
                for &(_, t) in d.out_edges(s) {
                    next[t as usize] += cur[s as usize];
                }
            }
            cur = next;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("l{i}")).collect()
    }

    #[test]
    fn trim_drops_unreachable_and_dead_states() {
        let mut m = Fsa::new(labels(2));
        let a = m.add_state("a", false);
        let b = m.add_state("b", true);
        let unreachable = m.add_state("u", true);
        let dead = m.add_state("d", false);
        m.set_initial(a);
        m.add_edge(a, 0, b);
        m.add_edge(a, 1, dead);
        m.add_edge(unreachable, 0, b);
        let (t, map) = m.trim();
        assert_eq!(t.state_count(), 2);
        assert_eq!(map[unreachable as usize], None);
        assert_eq!(map[dead as usize], None);
        assert!(t.accepts(&[0]).unwrap());
    }

    #[test]
    fn unreachable_final_gives_empty_automaton() {
        let mut m = Fsa::new(labels(1));
        let a = m.add_state("a", false);
        let b = m.add_state("b", true);
        m.set_initial(a);
        m.add_edge(b, 0, b);
        let (t, _) = m.trim();
        assert_eq!(t.state_count(), 0);
        assert!(t.enumerate(3, 10).unwrap().is_empty());
    }

    #[test]
    fn nondeterministic_enumeration_is_shortlex_and_duplicate_free() {
        let mut m = Fsa::new(labels(2));
        let a = m.add_state("a", true);
        let b = m.add_state("b", true);
        m.set_initial(a);
        m.add_edge(a, 1, a);
        m.add_edge(a, 1, b);
        m.add_edge(a, 0, b);
        m.add_edge(b, 0, b);
        let words = m.enumerate(2, 100).unwrap();
        assert_eq!(
            words,
            vec![vec![], vec![0], vec![1], vec![0, 0], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(m.count_by_length(2), vec![1, 2, 3]);
        assert!(matches!(m.enumerate(2, 3), Err(Error::Capacity { .. })));
        assert!(m.accepts(&[5]).is_err());
    }
}
