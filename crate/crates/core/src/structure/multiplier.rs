use std::collections::{BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;

use super::ball::{language_words, GammaBall};
use super::language::LanguageFsa;
use crate::automata::{AsyncAutomaton, ShapeReport, StateClass, StateId, Symbol};
use crate::error::{Error, Result};
use crate::gog::{GraphOfGroups, Letter, LetterKind, NormalForm};

/// Asynchronous automaton accepting `(W_L, W_R)` with `π(W_L x) = π(W_R)`.
#[derive(Debug, Clone)]
pub struct Multiplier {
    pub letter: Letter,
    pub k: usize,
    pub automaton: AsyncAutomaton,
    pub target: NormalForm,
}

/// A state of the product: the language-automaton state of each tape (`None`
/// once its `$` was read), the word difference as an index into the ball of
/// radius `K`, and the edge-count difference while both tapes read edge paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Key {
    left: Option<StateId>,
    right: Option<StateId>,
    delta: u32,
    level: i8,
}

const LEVEL_BOUND: i8 = 8;

struct Builder<'a> {
    g: &'a GraphOfGroups,
    lang: &'a LanguageFsa,
    ball: GammaBall,
    target: usize,
    /// States with an outgoing transversal or edge letter.
    path_phase: Vec<bool>,
    inverse_images: Vec<NormalForm>,
    left_cache: HashMap<(u32, Letter), Option<u32>>,
    right_cache: HashMap<(u32, Letter), Option<u32>>,
}

impl Builder<'_> {
    fn left_update(&mut self, delta: u32, a: Letter) -> Option<u32> {
        if let Some(&r) = self.left_cache.get(&(delta, a)) {
            return r;
        }
        let x = self.g.nf_multiply(
            &self.inverse_images[a as usize],
            &self.ball.elements()[delta as usize],
        );
        let r = self.ball.index_of(&x).map(|i| i as u32);
        self.left_cache.insert((delta, a), r);
        r
    }

    fn right_update(&mut self, delta: u32, a: Letter) -> Option<u32> {
        if let Some(&r) = self.right_cache.get(&(delta, a)) {
            return r;
        }
        let x = self
            .g
            .nf_append(&self.ball.elements()[delta as usize], a)
            .expect("letter");
        let r = self.ball.index_of(&x).map(|i| i as u32);
        self.right_cache.insert((delta, a), r);
        r
    }

    fn dist(&self, delta: Option<u32>) -> usize {
        delta.map_or(usize::MAX, |d| self.ball.distance_at(d as usize))
    }

    /// Smallest word difference reachable by the next symbol on one tape.
    fn score(&mut self, q: StateId, delta: u32, left: bool) -> usize {
        let fsa = &self.lang.fsa;
        let mut best = if fsa.is_final(q) {
            self.dist(Some(delta))
        } else {
            usize::MAX
        };
        let edges: Vec<Letter> = fsa.out_edges(q).iter().map(|&(l, _)| l).collect();
        for a in edges {
            let next = if left {
                self.left_update(delta, a)
            } else {
                self.right_update(delta, a)
            };
            best = best.min(self.dist(next));
        }
        best
    }

    fn class(&mut self, k: Key) -> StateClass {
        match (k.left, k.right) {
            (None, None) => StateClass::End,
            (None, Some(_)) => StateClass::RightEnd,
            (Some(_), None) => StateClass::LeftEnd,
            (Some(l), Some(r)) => {
                match (self.path_phase[l as usize], self.path_phase[r as usize]) {
                    (true, true) if k.level <= 0 => StateClass::Left,
                    (true, true) => StateClass::Right,
                    (true, false) => StateClass::Left,
                    (false, true) => StateClass::Right,
                    (false, false) => {
                        if self.score(l, k.delta, true) <= self.score(r, k.delta, false) {
                            StateClass::Left
                        } else {
                            StateClass::Right
                        }
                    }
                }
            }
        }
    }

    fn normalize(&self, mut k: Key) -> Key {
        let both = matches!((k.left, k.right), (Some(l), Some(r)) if self.path_phase[l as usize] && self.path_phase[r as usize]);
        if !both {
            k.level = 0;
        }
        k
    }
}

/// `d_A(1, π(x))` for a letter: 0 when it evaluates to the identity, else 1.
pub fn letter_length(g: &GraphOfGroups, x: Letter) -> usize {
    usize::from(
        !g.nf_append(&NormalForm::identity(), x)
            .expect("letter")
            .is_identity(),
    )
}

/// Builds the multiplier for `x` with word differences bounded by `k`.
///
/// Tape schedule: while both tapes read edge paths, the tape with fewer
/// edges read so far goes next (ties to the left); a tape still reading its
/// edge path goes before one reading its tail; when both read tails, the
/// tape whose next symbol can give the smaller word difference goes next
/// (ties to the left).
pub fn build_multiplier(
    g: &GraphOfGroups,
    lang: &LanguageFsa,
    x: Letter,
    k: usize,
    cap: usize,
) -> Result<Multiplier> {
    if x as usize >= g.alphabet().len() {
        return Err(Error::UnknownLetter(format!("#{x}")));
    }
    let need = letter_length(g, x);
    if k < need {
        return Err(Error::Parameter(format!(
            "K = {k} is smaller than d_A(1, π({})) = {need}",
            g.alphabet().name(x)
        )));
    }
    let a = g.alphabet();
    let ball = GammaBall::new(g, k, cap)?;
    let target_nf = g.nf_append(&NormalForm::identity(), x)?;
    let target = ball.index_of(&target_nf).expect("within radius");
    let fsa = &lang.fsa;
    let path_phase = fsa
        .states()
        .map(|q| fsa.out_edges(q).iter().any(|&(l, _)| !a.is_base(l)))
        .collect();
    let letter_images: Vec<NormalForm> = a
        .letters()
        .map(|l| g.nf_append(&NormalForm::identity(), l))
        .collect::<Result<_>>()?;
    let inverse_images = a
        .letters()
        .map(|l| letter_images[a.inverse(l) as usize].clone())
        .collect();
    let mut b = Builder {
        g,
        lang,
        ball,
        target,
        path_phase,
        inverse_images,
        left_cache: HashMap::new(),
        right_cache: HashMap::new(),
    };
    let identity = b.ball.index_of(&NormalForm::identity()).expect("identity") as u32;

    let mut m = AsyncAutomaton::new(a.names().to_vec());
    let mut ids: HashMap<Key, StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let name = |k: &Key| -> String {
        let q = |s: Option<StateId>| s.map_or("$".to_string(), |s| s.to_string());
        format!("({},{},d{},l{})", q(k.left), q(k.right), k.delta, k.level)
    };
    let Some(init) = fsa.initial() else {
        let s = m.add_state("accept", StateClass::End);
        m.set_initial(s);
        return Ok(Multiplier {
            letter: x,
            k,
            automaton: m,
            target: target_nf,
        });
    };
    let start = Key {
        left: Some(init),
        right: Some(init),
        delta: identity,
        level: 0,
    };
    let start = b.normalize(start);
    let class = b.class(start);
    let s0 = m.add_state(name(&start), class);
    m.set_initial(s0);
    ids.insert(start, s0);
    queue.push_back(start);
    let accept_key = Key {
        left: None,
        right: None,
        delta: target as u32,
        level: 0,
    };
    let mut accept: Option<StateId> = None;

    while let Some(key) = queue.pop_front() {
        let from = ids[&key];
        let class = m.class(from);
        let mut targets: Vec<(Symbol, Key)> = Vec::new();
        match class {
            StateClass::Left | StateClass::LeftEnd => {
                let q = key.left.expect("left tape open");
                for &(l, q2) in fsa.out_edges(q) {
                    if let Some(d) = b.left_update(key.delta, l) {
                        let step = i8::from(matches!(
                            a.kind(l),
                            LetterKind::Edge(_) | LetterKind::EdgeInverse(_)
                        ));
                        targets.push((
                            Symbol::Letter(l),
                            Key {
                                left: Some(q2),
                                right: key.right,
                                delta: d,
                                level: (key.level + step).clamp(-LEVEL_BOUND, LEVEL_BOUND),
                            },
                        ));
                    }
                }
                if fsa.is_final(q) {
                    if class == StateClass::Left {
                        targets.push((Symbol::End, Key { left: None, ..key }));
                    } else if key.delta as usize == b.target {
                        targets.push((Symbol::End, accept_key));
                    }
                }
            }
            StateClass::Right | StateClass::RightEnd => {
                let q = key.right.expect("right tape open");
                for &(l, q2) in fsa.out_edges(q) {
                    if let Some(d) = b.right_update(key.delta, l) {
                        let step = i8::from(matches!(
                            a.kind(l),
                            LetterKind::Edge(_) | LetterKind::EdgeInverse(_)
                        ));
                        targets.push((
                            Symbol::Letter(l),
                            Key {
                                left: key.left,
                                right: Some(q2),
                                delta: d,
                                level: (key.level - step).clamp(-LEVEL_BOUND, LEVEL_BOUND),
                            },
                        ));
                    }
                }
                if fsa.is_final(q) {
                    if class == StateClass::Right {
                        targets.push((Symbol::End, Key { right: None, ..key }));
                    } else if key.delta as usize == b.target {
                        targets.push((Symbol::End, accept_key));
                    }
                }
            }
            StateClass::End => {}
        }
        for (sym, k2) in targets {
            let k2 = if k2 == accept_key {
                k2
            } else {
                b.normalize(k2)
            };
            let to = match ids.get(&k2) {
                Some(&t) => t,
                None => {
                    if ids.len() >= cap {
                        return Err(Error::Capacity {
                            what: "multiplier states".into(),
                            limit: cap,
                        });
                    }
                    let (nm, cl) = if k2 == accept_key {
                        ("accept".to_string(), StateClass::End)
                    } else {
                        (name(&k2), b.class(k2))
                    };
                    let t = m.add_state(nm, cl);
                    ids.insert(k2, t);
                    if cl == StateClass::End {
                        accept = Some(t);
                    } else {
                        queue.push_back(k2);
                    }
                    t
                }
            };
            m.add_transition(from, sym, to)?;
        }
    }
    if accept.is_none() {
        m.add_state("accept", StateClass::End);
    }
    Ok(Multiplier {
        letter: x,
        k,
        automaton: m,
        target: target_nf,
    })
}

/// `(W_L, W_R)`.
pub type WordPair = (Vec<Letter>, Vec<Letter>);

/// Comparison of a multiplier with the relation it should recognise on
/// language words of length at most `max_len`.
#[derive(Debug, Clone, Default)]
pub struct MultiplierReport {
    pub letter: String,
    pub k: usize,
    pub max_len: usize,
    pub states: usize,
    pub shape: ShapeReport,
    pub left_words: usize,
    pub accepted_pairs: usize,
    pub false_accepts: Vec<WordPair>,
    pub false_rejects: Vec<WordPair>,
    pub escalations: usize,
}

impl MultiplierReport {
    pub fn passed(&self) -> bool {
        self.shape.passed() && self.false_accepts.is_empty() && self.false_rejects.is_empty()
    }
}

/// Right words `W_R` with `|W_R| ≤ max_len` accepted together with `wl`.
fn accepted_partners(m: &AsyncAutomaton, wl: &[Letter], max_len: usize) -> BTreeSet<Vec<Letter>> {
    let mut out = BTreeSet::new();
    let Some(init) = m.initial() else { return out };
    let mut stack = vec![(init, 0usize, Vec::new())];
    while let Some((s, i, wr)) = stack.pop() {
        match m.class(s).tape() {
            None => {
                if i == wl.len() + 1 {
                    out.insert(wr);
                }
            }
            Some(crate::automata::Tape::Left) => {
                let sym = match i.cmp(&wl.len()) {
                    std::cmp::Ordering::Less => Symbol::Letter(wl[i]),
                    std::cmp::Ordering::Equal => Symbol::End,
                    std::cmp::Ordering::Greater => continue,
                };
                if let Some(t) = m.next(s, sym) {
                    stack.push((t, i + 1, wr));
                }
            }
            Some(crate::automata::Tape::Right) => {
                for (sym, t) in m.transitions(s) {
                    match sym {
                        Symbol::Letter(l) if wr.len() < max_len => {
                            let mut w2 = wr.clone();
                            w2.push(l);
                            stack.push((t, i, w2));
                        }
                        Symbol::Letter(_) => {}
                        Symbol::End => stack.push((t, i, wr.clone())),
                    }
                }
            }
        }
    }
    out
}

/// Checks `accept(W_L, W_R) ⇔ π(W_L x) = π(W_R)` for all language words of
/// length at most `max_len`.
pub fn verify_multiplier(
    g: &GraphOfGroups,
    lang: &LanguageFsa,
    mult: &Multiplier,
    max_len: usize,
    cap: usize,
) -> Result<MultiplierReport> {
    let left_words = lang.fsa.enumerate(max_len, cap)?;
    let x = mult.letter;
    // (accepted pairs, false accepts, false rejects) per left word
    type Row = (usize, Vec<WordPair>, Vec<WordPair>);
    let results: Vec<Result<Row>> = left_words
        .par_iter()
        .map(|wl| {
            let got = accepted_partners(&mult.automaton, wl, max_len);
            let y = g.nf_append(&g.normalize_word(wl)?, x)?;
            let want: BTreeSet<Vec<Letter>> = language_words(g, &y)
                .into_iter()
                .filter(|w| w.len() <= max_len)
                .collect();
            let fa = got
                .difference(&want)
                .map(|wr| (wl.clone(), wr.clone()))
                .collect();
            let fr = want
                .difference(&got)
                .map(|wr| (wl.clone(), wr.clone()))
                .collect();
            Ok((got.len(), fa, fr))
        })
        .collect();
    let mut report = MultiplierReport {
        letter: g.alphabet().name(x).to_string(),
        k: mult.k,
        max_len,
        states: mult.automaton.state_count(),
        shape: mult.automaton.validate_shape(),
        left_words: left_words.len(),
        ..Default::default()
    };
    for r in results {
        let (n, fa, fr) = r?;
        report.accepted_pairs += n;
        report.false_accepts.extend(fa);
        report.false_rejects.extend(fr);
    }
    Ok(report)
}

/// Default starting bound `κ + 2η + d_A(1, π(x)) + 1`.
pub fn default_k(g: &GraphOfGroups, kappa: usize, eta: usize, x: Letter) -> usize {
    kappa + 2 * eta + letter_length(g, x) + 1
}

/// Builds and verifies the multiplier for `x`, raising `K` by one after a
/// verification with false rejections, at most `escalations` times.
pub fn build_verified_multiplier(
    g: &GraphOfGroups,
    lang: &LanguageFsa,
    x: Letter,
    k: usize,
    escalations: usize,
    max_len: usize,
    cap: usize,
) -> Result<(Multiplier, MultiplierReport)> {
    let mut k = k;
    let mut round = 0;
    loop {
        let mult = build_multiplier(g, lang, x, k, cap)?;
        let mut report = verify_multiplier(g, lang, &mult, max_len, cap)?;
        report.escalations = round;
        if report.false_rejects.is_empty()
            || !report.false_accepts.is_empty()
            || round == escalations
        {
            return Ok((mult, report));
        }
        round += 1;
        k += 1;
    }
}
