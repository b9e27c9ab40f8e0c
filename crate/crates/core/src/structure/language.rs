use std::collections::HashMap;
use std::fmt;

use crate::automata::{Fsa, StateId};
use crate::gog::{reverse, EdgeId, GraphOfGroups, Letter, LetterKind};

/// What a state of the language automaton stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LangState {
    /// The initial state `o`.
    Origin,
    /// `(o, s, e)` with `ι(e) = c`: the first transversal letter was read.
    Start { rep: u32, edge: EdgeId },
    /// `(s, e) ∈ Q`: a full syllable `s e` was read.
    Syllable { rep: u32, edge: EdgeId },
    /// `(e, s', e')`: after syllable edge `e`, transversal letter `s'` of `e'`.
    Between {
        prev: EdgeId,
        rep: u32,
        edge: EdgeId,
    },
    /// Cone type of the geodesic tail read so far.
    Cone(u32),
}

/// Number of states of each kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Census {
    pub origin: usize,
    pub start: usize,
    pub syllable: usize,
    pub between: usize,
    pub cone: usize,
}

impl Census {
    pub fn total(&self) -> usize {
        self.origin + self.start + self.syllable + self.between + self.cone
    }
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "origin={} start={} syllable={} between={} cone={} total={}",
            self.origin,
            self.start,
            self.syllable,
            self.between,
            self.cone,
            self.total()
        )
    }
}

/// The trimmed automaton accepting `L = W_T · W_B`.
#[derive(Debug, Clone)]
pub struct LanguageFsa {
    pub fsa: Fsa,
    pub kinds: Vec<LangState>,
    pub census: Census,
    /// Built with the backtrack condition switched off (negative control).
    pub corrupt: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LanguageOptions {
    /// Allow `(s', e') = (1, ē)` after edge `e`.
    pub allow_backtrack: bool,
}

impl LanguageFsa {
    pub fn build(g: &GraphOfGroups) -> Self {
        Self::build_with(g, LanguageOptions::default())
    }

    pub fn build_with(g: &GraphOfGroups, opts: LanguageOptions) -> Self {
        let a = g.alphabet();
        let c = g.base();
        let cone = g.cone_types();
        let mut fsa = Fsa::new(a.names().to_vec());
        let mut kinds = Vec::new();
        let mut ids: HashMap<LangState, StateId> = HashMap::new();
        let name = |k: &LangState| -> String {
            match *k {
                LangState::Origin => "o".into(),
                LangState::Start { rep, edge } => {
                    format!("(o,{},{})", a.name(tr(g, edge, rep)), g.edge(edge).name)
                }
                LangState::Syllable { rep, edge } => {
                    format!("({},{})", a.name(tr(g, edge, rep)), g.edge(edge).name)
                }
                LangState::Between { prev, rep, edge } => format!(
                    "({}|{},{})",
                    g.edge(prev).name,
                    a.name(tr(g, edge, rep)),
                    g.edge(edge).name
                ),
                LangState::Cone(k) => format!("CT{k}"),
            }
        };
        let is_final = |k: &LangState| match *k {
            LangState::Origin | LangState::Cone(_) => true,
            LangState::Syllable { edge, .. } => g.edge(edge).terminus == c,
            _ => false,
        };
        let mut state = |fsa: &mut Fsa, kinds: &mut Vec<LangState>, k: LangState| -> StateId {
            *ids.entry(k).or_insert_with(|| {
                kinds.push(k);
                fsa.add_state(name(&k), is_final(&k))
            })
        };

        let o = state(&mut fsa, &mut kinds, LangState::Origin);
        fsa.set_initial(o);
        let edges = 0..g.edges().len();
        for e in edges.clone() {
            for rep in 0..g.transversal(e).len() as u32 {
                let syl = state(&mut fsa, &mut kinds, LangState::Syllable { rep, edge: e });
                if g.origin(e) == c {
                    let st = state(&mut fsa, &mut kinds, LangState::Start { rep, edge: e });
                    fsa.add_edge(o, tr(g, e, rep), st);
                    fsa.add_edge(st, edge_letter(g, e), syl);
                }
                // continue the path from ι(ē)
                for e2 in edges
                    .clone()
                    .filter(|&e2| g.origin(e2) == g.edge(e).terminus)
                {
                    for rep2 in 0..g.transversal(e2).len() as u32 {
                        if rep2 == 0 && e2 == reverse(e) && !opts.allow_backtrack {
                            continue;
                        }
                        let mid = state(
                            &mut fsa,
                            &mut kinds,
                            LangState::Between {
                                prev: e,
                                rep: rep2,
                                edge: e2,
                            },
                        );
                        let syl2 = state(
                            &mut fsa,
                            &mut kinds,
                            LangState::Syllable {
                                rep: rep2,
                                edge: e2,
                            },
                        );
                        fsa.add_edge(syl, tr(g, e2, rep2), mid);
                        fsa.add_edge(mid, edge_letter(g, e2), syl2);
                    }
                }
            }
        }
        // geodesic tails
        let base_letters: Vec<(Letter, crate::group::LetterId)> = a
            .letters()
            .filter_map(|l| match a.kind(l) {
                LetterKind::Base(b) => Some((l, b)),
                _ => None,
            })
            .collect();
        for k in 0..cone.class_count() as u32 {
            let s = state(&mut fsa, &mut kinds, LangState::Cone(k));
            for &(l, b) in &base_letters {
                if let Some(t) = cone.next(k, b) {
                    let t = state(&mut fsa, &mut kinds, LangState::Cone(t));
                    fsa.add_edge(s, l, t);
                }
            }
        }
        let tail_entries: Vec<StateId> = (0..kinds.len() as StateId)
            .filter(|&s| match kinds[s as usize] {
                LangState::Origin => true,
                LangState::Syllable { edge, .. } => g.edge(edge).terminus == c,
                _ => false,
            })
            .collect();
        for s in tail_entries {
            for &(l, b) in &base_letters {
                if let Some(t) = cone.next(cone.start(), b) {
                    let t = ids[&LangState::Cone(t)];
                    fsa.add_edge(s, l, t);
                }
            }
        }

        let (trimmed, map) = fsa.trim();
        let mut new_kinds = vec![LangState::Origin; trimmed.state_count()];
        for (old, new) in map.iter().enumerate() {
            if let Some(n) = new {
                new_kinds[*n as usize] = kinds[old];
            }
        }
        let mut census = Census::default();
        for k in &new_kinds {
            match k {
                LangState::Origin => census.origin += 1,
                LangState::Start { .. } => census.start += 1,
                LangState::Syllable { .. } => census.syllable += 1,
                LangState::Between { .. } => census.between += 1,
                LangState::Cone(_) => census.cone += 1,
            }
        }
        LanguageFsa {
            fsa: trimmed,
            kinds: new_kinds,
            census,
            corrupt: opts.allow_backtrack,
        }
    }

    pub fn kind(&self, s: StateId) -> LangState {
        self.kinds[s as usize]
    }

    pub fn accepts(&self, w: &[Letter]) -> crate::Result<bool> {
        self.fsa.accepts(w)
    }
}

fn tr(g: &GraphOfGroups, e: EdgeId, rep: u32) -> Letter {
    g.alphabet()
        .letter(LetterKind::Transversal(e, rep))
        .expect("transversal letter")
}

fn edge_letter(g: &GraphOfGroups, e: EdgeId) -> Letter {
    g.alphabet()
        .letter(LetterKind::Edge(e))
        .expect("edge letter")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn modular_backtrack_rule() {
        let g = fixtures::load("modular").unwrap();
        let m = LanguageFsa::build(&g);
        let a = g.alphabet();
        assert!(m.accepts(&a.parse_word("e.1 e e~.1 e~").unwrap()).unwrap());
        assert!(!m.accepts(&a.parse_word("e.0 e e~.0 e~").unwrap()).unwrap());
        assert!(m.accepts(&[]).unwrap());
        assert!(m.fsa.is_deterministic());
        let bad = LanguageFsa::build_with(
            &g,
            LanguageOptions {
                allow_backtrack: true,
            },
        );
        assert!(bad
            .accepts(&a.parse_word("e.0 e e~.0 e~").unwrap())
            .unwrap());
    }

    #[test]
    fn free_counts() {
        let g = fixtures::load("f2").unwrap();
        let m = LanguageFsa::build(&g);
        assert_eq!(m.fsa.count_by_length(4), vec![1, 4, 12, 36, 108]);
        // `o` plays the part of the cone type of ε
        assert_eq!(m.census.cone + m.census.origin, 5);
    }
}
