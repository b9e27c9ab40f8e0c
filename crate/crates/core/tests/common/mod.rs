//! Models of the fixture groups that share no code with the library: words
//! over the structure alphabet are evaluated letter by letter from their
//! names.
#![allow(dead_code)]

use std::fmt::Debug;
use std::hash::Hash;

use gogauto::gog::{GraphOfGroups, Letter};
use num::rational::Ratio;
use num::{One, Zero};

pub trait Oracle {
    type V: Clone + Eq + Hash + Debug + Send + Sync;
    fn identity(&self) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn inv(&self, a: &Self::V) -> Self::V;
    /// Value of a letter name without a trailing `'`.
    fn atom(&self, name: &str) -> Self::V;

    fn letter(&self, name: &str) -> Self::V {
        match name.strip_suffix('\'') {
            Some(n) => self.inv(&self.atom(n)),
            None => self.atom(name),
        }
    }

    fn eval(&self, g: &GraphOfGroups, w: &[Letter]) -> Self::V {
        w.iter().fold(self.identity(), |acc, &l| {
            self.mul(&acc, &self.letter(g.alphabet().name(l)))
        })
    }
}

/// Reduced words over `x, y` as signed generator indices (`±1`, `±2`).
pub fn free_reduce(w: &[i8]) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn free_atom(name: &str) -> Vec<i8> {
    match name {
        "1" => vec![],
        "x" => vec![1],
        "y" => vec![2],
        _ => panic!("no free-group letter {name}"),
    }
}

pub struct FreeOracle;

impl Oracle for FreeOracle {
    type V = Vec<i8>;
    fn identity(&self) -> Vec<i8> {
        vec![]
    }
    fn mul(&self, a: &Vec<i8>, b: &Vec<i8>) -> Vec<i8> {
        free_reduce(&[a.as_slice(), b.as_slice()].concat())
    }
    fn inv(&self, a: &Vec<i8>) -> Vec<i8> {
        a.iter().rev().map(|l| -l).collect()
    }
    fn atom(&self, name: &str) -> Vec<i8> {
        free_atom(name)
    }
}

/// `Z/2 * Z/3` as alternating words: `(0, 1)` is `a`, `(1, k)` is `b^k`.
pub struct ModularOracle;

impl Oracle for ModularOracle {
    type V = Vec<(u8, u8)>;
    fn identity(&self) -> Self::V {
        vec![]
    }
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V {
        let mut out = a.clone();
        for &(f, k) in b {
            match out.last_mut() {
                Some(last) if last.0 == f => {
                    let order = if f == 0 { 2 } else { 3 };
                    last.1 = (last.1 + k) % order;
                    if last.1 == 0 {
                        out.pop();
                    }
                }
                _ => out.push((f, k)),
            }
        }
        out
    }
    fn inv(&self, a: &Self::V) -> Self::V {
        a.iter()
            .rev()
            .map(|&(f, k)| (f, if f == 0 { k } else { 3 - k }))
            .collect()
    }
    fn atom(&self, name: &str) -> Self::V {
        match name {
            "1" | "e" | "e~" | "e.0" | "e~.0" => vec![],
            "a" | "e.1" => vec![(0, 1)],
            "b" | "e~.1" => vec![(1, 1)],
            "e~.2" => vec![(1, 2)],
            _ => panic!("no modular letter {name}"),
        }
    }
}

pub type Q = Ratio<i64>;

/// `BS(1,2)` as the affine maps `[[u, v], [0, 1]]` with `a = [[1, 1], [0, 1]]`
/// and `t = [[1/2, 0], [0, 1]]`, so that `t⁻¹ a t = a²`.
pub struct Bs12Oracle;

impl Oracle for Bs12Oracle {
    type V = (Q, Q);
    fn identity(&self) -> Self::V {
        (Q::one(), Q::zero())
    }
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V {
        (a.0 * b.0, a.0 * b.1 + a.1)
    }
    fn inv(&self, a: &Self::V) -> Self::V {
        let u = Q::one() / a.0;
        (u, -u * a.1)
    }
    fn atom(&self, name: &str) -> Self::V {
        match name {
            "1" | "t.0" | "t~.0" => self.identity(),
            "a" | "t~.1" => (Q::one(), Q::one()),
            "t" => (Q::new(1, 2), Q::zero()),
            "t~" => (Q::from_integer(2), Q::zero()),
            _ => panic!("no bs12 letter {name}"),
        }
    }
}

/// `F2 × Z` with the loop letter generating the centre.
pub struct F2zOracle;

impl Oracle for F2zOracle {
    type V = (Vec<i8>, i64);
    fn identity(&self) -> Self::V {
        (vec![], 0)
    }
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V {
        (
            free_reduce(&[a.0.as_slice(), b.0.as_slice()].concat()),
            a.1 + b.1,
        )
    }
    fn inv(&self, a: &Self::V) -> Self::V {
        (FreeOracle.inv(&a.0), -a.1)
    }
    fn atom(&self, name: &str) -> Self::V {
        match name {
            "t" => (vec![], 1),
            "t~" => (vec![], -1),
            "t.0" | "t~.0" => (vec![], 0),
            n => (free_atom(n), 0),
        }
    }
}

/// Number of elements in the ball of radius `r` of the model, by BFS over
/// letter values.
pub fn oracle_ball<O: Oracle>(o: &O, g: &GraphOfGroups, r: usize) -> Vec<O::V> {
    use std::collections::HashSet;
    let gens: Vec<O::V> = g
        .alphabet()
        .letters()
        .map(|l| o.letter(g.alphabet().name(l)))
        .collect();
    let mut seen: HashSet<O::V> = HashSet::from([o.identity()]);
    let mut frontier = vec![o.identity()];
    let mut all = frontier.clone();
    for _ in 0..r {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &gens {
                let y = o.mul(x, s);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

/// Every word of length at most `n` over `k` letters, shortlex order.
pub fn all_words(k: usize, n: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<Letter>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::with_capacity(layer.len() * k);
        for w in &layer {
            for l in 0..k {
                let mut v = w.clone();
                v.push(l as Letter);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
