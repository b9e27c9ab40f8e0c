use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rayon::prelude::*;

use super::ball::{language_words, GammaBall};
use super::language::LanguageFsa;
use crate::automata::{Fsa, StateId};
use crate::error::{Error, Result};
use crate::gog::{GraphOfGroups, Letter, NormalForm};

/// `values[r] = D(r)` for `r = 0..=r_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepartureTable {
    pub values: Vec<usize>,
    pub method: String,
    /// Bound that limited the computation, as `KEY=VALUE`.
    pub caps: String,
}

impl DepartureTable {
    pub fn r_max(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn get(&self, r: usize) -> Option<usize> {
        self.values.get(r).copied()
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }

    /// Radii where `other` needs a larger value than `self`, i.e. where a
    /// witness counted by `other` violates this table.
    pub fn violations_by(&self, other: &DepartureTable) -> Vec<usize> {
        self.values
            .iter()
            .zip(&other.values)
            .enumerate()
            .filter(|(_, (a, b))| b > a)
            .map(|(r, _)| r)
            .collect()
    }
}

impl fmt::Display for DepartureTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DEPARTURE.METHOD={}", self.method)?;
        writeln!(f, "DEPARTURE.CAPS={}", self.caps)?;
        for (r, d) in self.values.iter().enumerate() {
            writeln!(f, "DEPARTURE.{r}={d}")?;
        }
        Ok(())
    }
}

pub struct DepartureRequest<'a> {
    pub gog: &'a GraphOfGroups,
    pub lang: &'a LanguageFsa,
    pub r_max: usize,
    /// Element cap for balls and word sets.
    pub cap: usize,
    /// Word-length bound for scanning methods.
    pub max_len: usize,
}

/// A way of computing a departure function for the language automaton.
pub trait DepartureMethod: Send + Sync {
    fn name(&self) -> &'static str;
    fn compute(&self, req: &DepartureRequest) -> Result<DepartureTable>;
}

/// Departure methods selectable by name.
pub struct DepartureRegistry {
    methods: BTreeMap<&'static str, Box<dyn DepartureMethod>>,
}

impl Default for DepartureRegistry {
    fn default() -> Self {
        let mut r = DepartureRegistry {
            methods: BTreeMap::new(),
        };
        r.register(Box::new(ExactDeparture));
        r.register(Box::new(EmpiricalDeparture));
        r
    }
}

impl DepartureRegistry {
    pub fn register(&mut self, m: Box<dyn DepartureMethod>) {
        self.methods.insert(m.name(), m);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.methods.keys().copied()
    }

    pub fn get(&self, name: &str) -> Result<&dyn DepartureMethod> {
        self.methods.get(name).map(|m| m.as_ref()).ok_or_else(|| {
            Error::Input(format!(
                "unknown departure method `{name}` (known: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })
    }

    pub fn compute(&self, name: &str, req: &DepartureRequest) -> Result<DepartureTable> {
        self.get(name)?.compute(req)
    }
}

/// The exact table, or the empirical one when the exact computation runs
/// into its cap; the method tag records which one was produced.
pub fn exact_or_empirical(req: &DepartureRequest) -> Result<DepartureTable> {
    match ExactDeparture.compute(req) {
        Err(Error::Capacity { what, limit }) => {
            let mut t = EmpiricalDeparture.compute(req)?;
            t.caps = format!("{} exact_cap_hit={what}@{limit}", t.caps);
            Ok(t)
        }
        other => other,
    }
}

/// Shortlex-least word from the initial state to each state.
fn access_words(m: &Fsa) -> Vec<Option<Vec<Letter>>> {
    let mut out: Vec<Option<Vec<Letter>>> = vec![None; m.state_count()];
    let Some(init) = m.initial() else { return out };
    out[init as usize] = Some(Vec::new());
    let mut queue = VecDeque::from([init]);
    while let Some(s) = queue.pop_front() {
        for &(l, t) in m.out_edges(s) {
            if out[t as usize].is_none() {
                let mut w = out[s as usize].clone().expect("visited");
                w.push(l);
                out[t as usize] = Some(w);
                queue.push_back(t);
            }
        }
    }
    out
}

/// A shortest word from each state to a final state.
fn coaccess_words(m: &Fsa) -> Vec<Option<Vec<Letter>>> {
    let dist = m.distance_to_final();
    m.states()
        .map(|s| {
            let mut d = dist[s as usize]?;
            let mut cur = s;
            let mut w = Vec::new();
            while d > 0 {
                let &(l, t) = m
                    .out_edges(cur)
                    .iter()
                    .find(|&&(_, t)| dist[t as usize] == Some(d - 1))
                    .expect("distance decreases along some edge");
                w.push(l);
                cur = t;
                d -= 1;
            }
            Some(w)
        })
        .collect()
}

fn run_from(m: &Fsa, mut s: StateId, w: &[Letter]) -> Option<StateId> {
    for &l in w {
        s = m.step(s, l)?;
    }
    Some(s)
}

/// Exact departure function of a deterministic trimmed language automaton.
///
/// For states `s`, `t` with access word `U` and co-access word `W`, a word
/// `V` labels a path `s → t` with `π(V) = g` iff `U V W` is a language word
/// for `π(U) g π(W)`. Those words are listed from the normal form, so the
/// sets `V_{s,t}(g)` are enumerated completely for every `g` in the ball of
/// radius `r_max - 1`.
pub struct ExactDeparture;

impl DepartureMethod for ExactDeparture {
    fn name(&self) -> &'static str {
        "exact"
    }

    fn compute(&self, req: &DepartureRequest) -> Result<DepartureTable> {
        let (g, m) = (req.gog, &req.lang.fsa);
        if !m.is_deterministic() {
            return Err(Error::Departure(
                "exact method needs a deterministic automaton; a supplied automaton with repeated labels \
                 may have infinite word sets"
                    .into(),
            ));
        }
        let r_max = req.r_max;
        let mut values = vec![0; r_max + 1];
        if r_max == 0 || m.initial().is_none() {
            return Ok(DepartureTable {
                values,
                method: self.name().into(),
                caps: format!("cap={}", req.cap),
            });
        }
        let ball = GammaBall::new(g, r_max - 1, req.cap)?;
        let access = access_words(m);
        let coaccess = coaccess_words(m);
        let images = |w: &[Letter]| g.normalize_word(w).expect("letters");
        let states: Vec<StateId> = m.states().collect();
        let pairs: Vec<(StateId, StateId)> = states
            .iter()
            .flat_map(|&s| states.iter().map(move |&t| (s, t)))
            .collect();
        // best[d] = longest V over pairs with d_A(1, π(V)) = d
        let best = pairs
            .par_iter()
            .map(|&(s, t)| -> Result<Vec<usize>> {
                let mut best = vec![0usize; r_max];
                let (Some(u), Some(w)) = (&access[s as usize], &coaccess[t as usize]) else {
                    return Ok(best);
                };
                let (pu, pw) = (images(u), images(w));
                for (i, x) in ball.elements().iter().enumerate() {
                    let d = ball.distance_at(i);
                    let target = g.nf_multiply(&g.nf_multiply(&pu, x), &pw);
                    let words = language_words(g, &target);
                    if words.len() > req.cap {
                        return Err(Error::Capacity {
                            what: "language words of one element".into(),
                            limit: req.cap,
                        });
                    }
                    for l in words {
                        if l.len() < u.len() + w.len() || !l.starts_with(u) || !l.ends_with(w) {
                            continue;
                        }
                        let v = &l[u.len()..l.len() - w.len()];
                        if run_from(m, s, v) == Some(t) {
                            best[d] = best[d].max(v.len());
                        }
                    }
                }
                Ok(best)
            })
            .try_reduce(
                || vec![0; r_max],
                |a, b| Ok(a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect()),
            )?;
        let mut longest = 0;
        for r in 1..=r_max {
            longest = longest.max(best[r - 1]);
            values[r] = longest + 1;
        }
        Ok(DepartureTable {
            values,
            method: self.name().into(),
            caps: format!("ball={}", ball.len()),
        })
    }
}

/// Lower bound from all subwords of language words of length at most
/// `max_len`: `D(r) = 1 + max { t : d_A(Ŵ(s), Ŵ(s+t)) < r }`.
pub struct EmpiricalDeparture;

struct Scan<'a> {
    g: &'a GraphOfGroups,
    m: &'a Fsa,
    ball: &'a GammaBall,
    live: &'a [Option<usize>],
    max_len: usize,
    r_max: usize,
}

impl Scan<'_> {
    /// `infix[i] = π(W[i..k])` for the current prefix of length `k`.
    fn visit(&self, q: StateId, infix: &[NormalForm], best: &mut [usize]) {
        let k = infix.len() - 1;
        if k == self.max_len {
            return;
        }
        for &(l, q2) in self.m.out_edges(q) {
            if self.live[q2 as usize].is_none_or(|d| k + 1 + d > self.max_len) {
                continue;
            }
            let mut next: Vec<NormalForm> = infix
                .iter()
                .map(|x| self.g.nf_append(x, l).expect("letter"))
                .collect();
            next.push(NormalForm::identity());
            for (i, x) in next.iter().enumerate() {
                if let Some(d) = self.ball.distance(x) {
                    let t = k + 1 - i;
                    for b in best.iter_mut().take(self.r_max + 1).skip(d + 1) {
                        *b = (*b).max(t);
                    }
                }
            }
            self.visit(q2, &next, best);
        }
    }
}

impl DepartureMethod for EmpiricalDeparture {
    fn name(&self) -> &'static str {
        "empirical"
    }

    fn compute(&self, req: &DepartureRequest) -> Result<DepartureTable> {
        let (g, m) = (req.gog, &req.lang.fsa);
        let r_max = req.r_max;
        let mut values = vec![0; r_max + 1];
        let caps = format!("max_len={}", req.max_len);
        let Some(init) = m.initial() else {
            return Ok(DepartureTable {
                values,
                method: self.name().into(),
                caps,
            });
        };
        let ball = GammaBall::new(g, r_max.saturating_sub(1), req.cap)?;
        let live = m.distance_to_final();
        let scan = Scan {
            g,
            m,
            ball: &ball,
            live: &live,
            max_len: req.max_len,
            r_max,
        };
        // split the scan at the first letter
        let root = [NormalForm::identity()];
        let mut firsts: Vec<(Letter, StateId)> = m.out_edges(init).to_vec();
        firsts.retain(|&(_, q)| live[q as usize].is_some_and(|d| d < req.max_len));
        let mut best = firsts
            .par_iter()
            .map(|&(l, q)| {
                let mut best = vec![0usize; r_max + 1];
                let next = vec![
                    g.nf_append(&root[0], l).expect("letter"),
                    NormalForm::identity(),
                ];
                for (i, x) in next.iter().enumerate() {
                    if let Some(d) = ball.distance(x) {
                        for b in best.iter_mut().skip(d + 1) {
                            *b = (*b).max(1 - i);
                        }
                    }
                }
                scan.visit(q, &next, &mut best);
                best
            })
            .reduce(
                || vec![0; r_max + 1],
                |a, b| a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect(),
            );
        best[0] = 0;
        for r in 1..=r_max {
            values[r] = best[r] + 1;
        }
        Ok(DepartureTable {
            values,
            method: self.name().into(),
            caps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn tables(name: &str, r_max: usize, max_len: usize) -> (DepartureTable, DepartureTable) {
        let g = fixtures::load(name).unwrap();
        let lang = LanguageFsa::build(&g);
        let req = DepartureRequest {
            gog: &g,
            lang: &lang,
            r_max,
            cap: 1 << 20,
            max_len,
        };
        let reg = DepartureRegistry::default();
        (
            reg.compute("exact", &req).unwrap(),
            reg.compute("empirical", &req).unwrap(),
        )
    }

    #[test]
    fn free_departure_is_identity() {
        let (exact, emp) = tables("f2", 3, 6);
        assert_eq!(exact.values, vec![0, 1, 2, 3]);
        assert_eq!(emp.values, vec![0, 1, 2, 3]);
    }

    #[test]
    fn modular_exact_dominates_empirical() {
        let (exact, emp) = tables("modular", 3, 8);
        assert!(exact.values[1] >= 3, "{exact}");
        assert!(exact.violations_by(&emp).is_empty(), "{exact}{emp}");
        assert!(exact.is_monotone());
    }

    #[test]
    fn unknown_method() {
        assert!(DepartureRegistry::default().get("fast").is_err());
    }
}
