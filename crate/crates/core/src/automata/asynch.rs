use std::collections::BTreeMap;
use std::fmt;

use super::fsa::{Label, StateId};
use crate::error::{Error, Result};

/// The five state classes of an asynchronous two-tape automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateClass {
    /// Reads the left tape, right tape unfinished.
    Left,
    /// Reads the left tape after the right tape's `$`.
    LeftEnd,
    Right,
    RightEnd,
    /// The accepting state `s^$`.
    End,
}

impl StateClass {
    pub const ALL: [StateClass; 5] = [
        StateClass::Left,
        StateClass::LeftEnd,
        StateClass::Right,
        StateClass::RightEnd,
        StateClass::End,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StateClass::Left => "SL",
            StateClass::LeftEnd => "SL$",
            StateClass::Right => "SR",
            StateClass::RightEnd => "SR$",
            StateClass::End => "S$",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Tape fed to a state of this class.
    pub fn tape(self) -> Option<Tape> {
        match self {
            StateClass::Left | StateClass::LeftEnd => Some(Tape::Left),
            StateClass::Right | StateClass::RightEnd => Some(Tape::Right),
            StateClass::End => None,
        }
    }
}

impl fmt::Display for StateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tape {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Letter(Label),
    /// End-of-tape marker `$`.
    End,
}

/// An interleaving of `W_L$` and `W_R$` with the tape of each position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Shuffle {
    pub symbols: Vec<Symbol>,
    pub tapes: Vec<Tape>,
}

impl Shuffle {
    /// The word read from one tape, including its `$`.
    pub fn project(&self, tape: Tape) -> Vec<Symbol> {
        self.symbols
            .iter()
            .zip(&self.tapes)
            .filter(|(_, &t)| t == tape)
            .map(|(&s, _)| s)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// Deterministic partial automaton over `A ∪ {$}` with the five-class state
/// partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsyncAutomaton {
    labels: Vec<String>,
    names: Vec<String>,
    classes: Vec<StateClass>,
    initial: Option<StateId>,
    trans: Vec<BTreeMap<Symbol, StateId>>,
}

/// Outcome of [`AsyncAutomaton::validate_shape`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShapeReport {
    pub violations: Vec<String>,
}

impl ShapeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl AsyncAutomaton {
    pub fn new(labels: Vec<String>) -> Self {
        AsyncAutomaton {
            labels,
            names: Vec::new(),
            classes: Vec::new(),
            initial: None,
            trans: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>, class: StateClass) -> StateId {
        self.names.push(name.into());
        self.classes.push(class);
        self.trans.push(BTreeMap::new());
        (self.names.len() - 1) as StateId
    }

    pub fn set_initial(&mut self, s: StateId) {
        self.initial = Some(s);
    }

    /// Adds a transition; a second transition on the same symbol is an error.
    pub fn add_transition(&mut self, from: StateId, sym: Symbol, to: StateId) -> Result<()> {
        if let Symbol::Letter(l) = sym {
            if l as usize >= self.labels.len() {
                return Err(Error::UnknownLetter(format!("#{l}")));
            }
        }
        match self.trans[from as usize].insert(sym, to) {
            Some(prev) if prev != to => Err(Error::Internal(format!(
                "state `{}` has two transitions on {}",
                self.names[from as usize],
                self.symbol_name(sym)
            ))),
            _ => Ok(()),
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn symbol_name(&self, sym: Symbol) -> &str {
        match sym {
            Symbol::Letter(l) => &self.labels[l as usize],
            Symbol::End => "$",
        }
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.names.len() as StateId
    }

    pub fn edge_count(&self) -> usize {
        self.trans.iter().map(BTreeMap::len).sum()
    }

    pub fn name(&self, s: StateId) -> &str {
        &self.names[s as usize]
    }

    pub fn class(&self, s: StateId) -> StateClass {
        self.classes[s as usize]
    }

    pub fn initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn is_final(&self, s: StateId) -> bool {
        self.classes[s as usize] == StateClass::End
    }

    pub fn transitions(&self, s: StateId) -> impl Iterator<Item = (Symbol, StateId)> + '_ {
        self.trans[s as usize].iter().map(|(&k, &v)| (k, v))
    }

    pub fn next(&self, s: StateId, sym: Symbol) -> Option<StateId> {
        self.trans[s as usize].get(&sym).copied()
    }

    /// Checks every edge against the class rules and the uniqueness of `s^$`.
    pub fn validate_shape(&self) -> ShapeReport {
        use StateClass::*;
        let mut report = ShapeReport::default();
        let ends: Vec<_> = self.states().filter(|&s| self.is_final(s)).collect();
        if ends.len() > 1 {
            report
                .violations
                .push(format!("{} states in class S$, expected one", ends.len()));
        }
        for s in self.states() {
            let from = self.class(s);
            for (sym, t) in self.transitions(s) {
                let to = self.class(t);
                let ok = match (from, sym) {
                    (End, _) => false,
                    (Left | Right, Symbol::Letter(_)) => matches!(to, Left | Right),
                    (LeftEnd, Symbol::Letter(_)) => to == LeftEnd,
                    (RightEnd, Symbol::Letter(_)) => to == RightEnd,
                    (Left, Symbol::End) => to == RightEnd,
                    (Right, Symbol::End) => to == LeftEnd,
                    (LeftEnd | RightEnd, Symbol::End) => to == End,
                };
                if !ok {
                    report.violations.push(format!(
                        "edge {} -{}-> {} goes from {} to {}",
                        self.name(s),
                        self.symbol_name(sym),
                        self.name(t),
                        from,
                        to
                    ));
                }
            }
        }
        report
    }

    /// The accepted shuffle of `(W_L$, W_R$)`, if any. Each state's class
    /// names the tape it reads and transitions are deterministic, so the run
    /// on a pair of words is unique.
    pub fn accepting_shuffle(&self, wl: &[Label], wr: &[Label]) -> Option<Shuffle> {
        let mut s = self.initial?;
        let (mut i, mut j) = (0usize, 0usize);
        let mut sh = Shuffle::default();
        loop {
            let class = self.class(s);
            let Some(tape) = class.tape() else {
                return (i == wl.len() + 1 && j == wr.len() + 1).then_some(sh);
            };
            let (w, pos) = match tape {
                Tape::Left => (wl, &mut i),
                Tape::Right => (wr, &mut j),
            };
            let sym = match (*pos).cmp(&w.len()) {
                std::cmp::Ordering::Less => Symbol::Letter(w[*pos]),
                std::cmp::Ordering::Equal => Symbol::End,
                std::cmp::Ordering::Greater => return None,
            };
            s = self.next(s, sym)?;
            *pos += 1;
            sh.symbols.push(sym);
            sh.tapes.push(tape);
        }
    }

    pub fn accepts_pair(&self, wl: &[Label], wr: &[Label]) -> bool {
        self.accepting_shuffle(wl, wr).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Accepts `(w, w)` for words over one letter, alternating tapes.
    fn diagonal() -> AsyncAutomaton {
        let mut m = AsyncAutomaton::new(vec!["a".into()]);
        let l = m.add_state("l", StateClass::Left);
        let r = m.add_state("r", StateClass::Right);
        let re = m.add_state("re", StateClass::RightEnd);
        let end = m.add_state("end", StateClass::End);
        m.set_initial(l);
        m.add_transition(l, Symbol::Letter(0), r).unwrap();
        m.add_transition(r, Symbol::Letter(0), l).unwrap();
        m.add_transition(l, Symbol::End, re).unwrap();
        m.add_transition(re, Symbol::End, end).unwrap();
        m
    }

    #[test]
    fn diagonal_pairs() {
        let m = diagonal();
        assert!(m.validate_shape().passed());
        assert!(m.accepts_pair(&[], &[]));
        assert!(m.accepts_pair(&[0, 0], &[0, 0]));
        assert!(!m.accepts_pair(&[0], &[]));
        let sh = m.accepting_shuffle(&[0, 0], &[0, 0]).unwrap();
        assert_eq!(sh.len(), 6);
        assert_eq!(
            sh.project(Tape::Left),
            vec![Symbol::Letter(0), Symbol::Letter(0), Symbol::End]
        );
    }

    #[test]
    fn shape_violation_is_reported() {
        let mut m = diagonal();
        let le = m.add_state("le", StateClass::LeftEnd);
        m.add_transition(le, Symbol::Letter(0), 1).unwrap();
        let report = m.validate_shape();
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0].contains("le -a-> r"));
    }

    #[test]
    fn lone_end_state() {
        let mut m = AsyncAutomaton::new(vec![]);
        let s = m.add_state("s", StateClass::End);
        m.set_initial(s);
        assert!(m.validate_shape().passed());
        assert!(!m.accepts_pair(&[], &[]));
    }

    #[test]
    fn determinism_enforced() {
        let mut m = diagonal();
        assert!(m.add_transition(0, Symbol::Letter(0), 0).is_err());
    }
}
