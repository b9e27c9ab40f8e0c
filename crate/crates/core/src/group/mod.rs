//! Vertex-group oracles.
//!
//! A vertex group is presented to the rest of the crate through the
//! [`VertexGroup`] trait: canonical element words, multiplication, the word
//! metric `d_B`, cone types of geodesics and subgroup structures used for coset
//! transversals. Two kinds ship, registered by name in [`KindRegistry`]:
//! `finite` (permutation generators or a multiplication table) and `free`.

mod cone;
mod finite;
mod free;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use cone::{build_geodesic_recognizer, ConeTypeTable};
pub use finite::FiniteGroup;
pub use free::{free_reduce, FreeGroup};

/// Index of a letter inside a [`GeneratorSet`].
pub type LetterId = u16;

/// A word over a generator set.
pub type Word = Vec<LetterId>;

/// Canonical representation of a vertex-group element: the shortlex-least word
/// for finite groups, the freely reduced word for free groups.
pub type Elem = Vec<LetterId>;

/// Symmetric generating set with a distinguished identity letter.
///
/// Letter layout is `1, g₀, g₀', g₁, g₁', ...`; the order is the shortlex order
/// used throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    names: Vec<String>,
    inverse: Vec<LetterId>,
}

impl GeneratorSet {
    pub const IDENTITY: LetterId = 0;

    pub fn new<S: AsRef<str>>(generators: &[S]) -> Self {
        let mut names = vec!["1".to_string()];
        let mut inverse = vec![0];
        for (i, g) in generators.iter().enumerate() {
            let pos = (1 + 2 * i) as LetterId;
            names.push(g.as_ref().to_string());
            names.push(format!("{}'", g.as_ref()));
            inverse.push(pos + 1);
            inverse.push(pos);
        }
        GeneratorSet { names, inverse }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn rank(&self) -> usize {
        (self.names.len() - 1) / 2
    }

    pub fn identity(&self) -> LetterId {
        Self::IDENTITY
    }

    pub fn inverse(&self, l: LetterId) -> LetterId {
        self.inverse[l as usize]
    }

    pub fn name(&self, l: LetterId) -> &str {
        &self.names[l as usize]
    }

    /// Letter of the `i`-th declared generator.
    pub fn generator(&self, i: usize) -> LetterId {
        (1 + 2 * i) as LetterId
    }

    pub fn generator_names(&self) -> Vec<String> {
        (0..self.rank())
            .map(|i| self.names[1 + 2 * i].clone())
            .collect()
    }

    /// All letters except the identity letter.
    pub fn letters(&self) -> impl Iterator<Item = LetterId> + '_ {
        (1..self.names.len()).map(|l| l as LetterId)
    }

    pub fn all_letters(&self) -> impl Iterator<Item = LetterId> + '_ {
        (0..self.names.len()).map(|l| l as LetterId)
    }

    pub fn lookup(&self, name: &str) -> Option<LetterId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|p| p as LetterId)
    }

    /// Parses whitespace-separated letter names; a trailing `'` inverts.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "ε" {
                continue;
            }
            if let Some(l) = self.lookup(tok) {
                out.push(l);
                continue;
            }
            // allow `a''` style double inversion
            let trimmed = tok.trim_end_matches('\'');
            let primes = tok.len() - trimmed.len();
            match self.lookup(trimmed) {
                Some(l) if primes % 2 == 0 => out.push(l),
                Some(l) => out.push(self.inverse(l)),
                None => return Err(Error::UnknownLetter(tok.to_string())),
            }
        }
        Ok(out)
    }

    pub fn format_word(&self, w: &[LetterId]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        w.iter()
            .map(|&l| self.name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn check_letters(&self, w: &[LetterId]) -> Result<()> {
        match w.iter().find(|&&l| l as usize >= self.names.len()) {
            Some(l) => Err(Error::UnknownLetter(format!("#{l}"))),
            None => Ok(()),
        }
    }

    /// Inverse-pairing is an involution and the identity letter is self-inverse.
    pub fn is_symmetric(&self) -> bool {
        self.inverse[0] == 0
            && self
                .inverse
                .iter()
                .enumerate()
                .all(|(l, &i)| self.inverse[i as usize] as usize == l)
    }

    pub fn invert_word(&self, w: &[LetterId]) -> Word {
        w.iter().rev().map(|&l| self.inverse(l)).collect()
    }
}

/// Resource limits shared by enumerations.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    /// Maximum number of rows in a coset table or elements in a finite closure.
    pub coset_cap: usize,
    /// Maximum number of elements in a Cayley-graph ball.
    pub ball_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            coset_cap: 1_000_000,
            ball_cap: 2_000_000,
        }
    }
}

/// Index of a subgroup in its ambient vertex group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Index {
    Finite(usize),
    Infinite,
}

/// A computable vertex group.
pub trait VertexGroup: Send + Sync + fmt::Debug {
    fn kind(&self) -> &'static str;

    fn generators(&self) -> &GeneratorSet;

    /// Canonical element of an arbitrary word. Letters must be valid.
    fn reduce(&self, word: &[LetterId]) -> Elem;

    fn multiply(&self, g: &Elem, h: &Elem) -> Elem {
        let mut w = g.clone();
        w.extend_from_slice(h);
        self.reduce(&w)
    }

    fn inverse(&self, g: &Elem) -> Elem {
        self.reduce(&self.generators().invert_word(g))
    }

    /// Word-metric distance `d_B(1, g)`.
    fn length(&self, g: &Elem) -> usize;

    /// Group order, `None` when infinite.
    fn order(&self) -> Option<usize>;

    /// Cone-type automaton recognising the geodesic words over `B`.
    fn cone_types(&self) -> ConeTypeTable;

    /// Subgroup generated by `gens` together with the homomorphism sending
    /// `gens[i]` to `images[i]` in `target`.
    fn subgroup(
        &self,
        gens: &[Elem],
        images: &[Elem],
        target: Arc<dyn VertexGroup>,
        limits: &Limits,
    ) -> Result<Box<dyn SubgroupStructure>>;

    /// Tail radius used to identify cone types in hyperbolic groups whose
    /// cone types are not computed exactly. The shipped kinds compute them
    /// exactly and return `None`.
    fn hyperbolicity_radius(&self) -> Option<usize> {
        None
    }

    fn identity(&self) -> Elem {
        Vec::new()
    }

    fn letter_elem(&self, l: LetterId) -> Elem {
        self.reduce(&[l])
    }
}

/// Membership and coset data for a subgroup `H` of a vertex group, with a
/// homomorphism from `H` into a target group.
pub trait SubgroupStructure: Send + Sync + fmt::Debug {
    fn contains(&self, g: &Elem) -> bool;

    /// Image of `g` under the homomorphism, `None` when `g ∉ H`.
    fn transport(&self, g: &Elem) -> Option<Elem>;

    fn index(&self) -> Index;

    /// Shortlex-least representatives of the left cosets `gH`, identity first.
    fn transversal(&self) -> Option<Vec<Elem>>;

    /// Position in [`transversal`](Self::transversal) of the coset `gH`.
    fn coset_index(&self, g: &Elem) -> Option<usize>;
}

/// A subgroup together with its transversal, ready for factorisation.
#[derive(Debug)]
pub struct SubgroupHandle {
    ambient: Arc<dyn VertexGroup>,
    generators: Vec<Elem>,
    structure: Box<dyn SubgroupStructure>,
    transversal: Option<Vec<Elem>>,
}

impl SubgroupHandle {
    pub fn new(
        ambient: Arc<dyn VertexGroup>,
        generators: Vec<Elem>,
        images: &[Elem],
        target: Arc<dyn VertexGroup>,
        limits: &Limits,
    ) -> Result<Self> {
        let structure = ambient.subgroup(&generators, images, target, limits)?;
        let transversal = structure.transversal();
        Ok(SubgroupHandle {
            ambient,
            generators,
            structure,
            transversal,
        })
    }

    /// Subgroup without a transport map (identity into the ambient group).
    pub fn plain(
        ambient: Arc<dyn VertexGroup>,
        generators: Vec<Elem>,
        limits: &Limits,
    ) -> Result<Self> {
        let images = generators.clone();
        let target = ambient.clone();
        Self::new(ambient, generators, &images, target, limits)
    }

    pub fn ambient(&self) -> &Arc<dyn VertexGroup> {
        &self.ambient
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn index(&self) -> Index {
        self.structure.index()
    }

    /// Membership of the element represented by an arbitrary ambient word.
    pub fn contains_word(&self, w: &[LetterId]) -> Result<bool> {
        self.ambient.generators().check_letters(w)?;
        Ok(self.structure.contains(&self.ambient.reduce(w)))
    }

    pub fn contains(&self, g: &Elem) -> bool {
        self.structure.contains(g)
    }

    pub fn transport(&self, g: &Elem) -> Option<Elem> {
        self.structure.transport(g)
    }

    pub fn transversal(&self) -> Option<&[Elem]> {
        self.transversal.as_deref()
    }

    /// Writes `g = s·h` with `s` the transversal representative of `gH` and
    /// `h ∈ H`; returns `(coset index, s, h)`.
    pub fn factor(&self, g: &Elem) -> Option<(usize, &Elem, Elem)> {
        let reps = self.transversal.as_ref()?;
        let k = self.structure.coset_index(g)?;
        let s = &reps[k];
        let h = self.ambient.multiply(&self.ambient.inverse(s), g);
        Some((k, s, h))
    }
}

/// Coset transversal, or the "tree not locally finite" error.
pub fn coset_transversal(h: &SubgroupHandle, edge: &str, vertex: &str) -> Result<Vec<Elem>> {
    match h.transversal() {
        Some(t) => Ok(t.to_vec()),
        None => Err(Error::InfiniteIndex {
            edge: edge.to_string(),
            vertex: vertex.to_string(),
        }),
    }
}

/// `g·π(w)` for a word `w` over the oracle's generators.
pub fn oracle_multiply(oracle: &dyn VertexGroup, g: &Elem, w: &[LetterId]) -> Result<Elem> {
    oracle.generators().check_letters(w)?;
    Ok(oracle.multiply(g, &oracle.reduce(w)))
}

/// A ball in the Cayley graph of a vertex group.
#[derive(Debug, Clone)]
pub struct VertexBall {
    /// Elements in BFS order (shortlex order of their canonical words).
    pub elements: Vec<Elem>,
    pub distance: HashMap<Elem, usize>,
    /// Labelled edges `(from, letter, to)` between ball elements.
    pub edges: Vec<(usize, LetterId, usize)>,
}

impl VertexBall {
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let max = self.distance.values().copied().max().unwrap_or(0);
        let mut sizes = vec![0; max + 1];
        for d in self.distance.values() {
            sizes[*d] += 1;
        }
        sizes
    }
}

pub fn cayley_ball(oracle: &dyn VertexGroup, radius: usize, cap: usize) -> Result<VertexBall> {
    let gens = oracle.generators();
    let mut elements = vec![oracle.identity()];
    let mut distance = HashMap::from([(oracle.identity(), 0usize)]);
    let mut index = HashMap::from([(oracle.identity(), 0usize)]);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let g = elements[i].clone();
        let d = distance[&g];
        for l in gens.letters() {
            let h = oracle.multiply(&g, &oracle.letter_elem(l));
            if let Some(&j) = index.get(&h) {
                edges.push((i, l, j));
                continue;
            }
            if d == radius {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::Capacity {
                    what: "vertex-group ball".into(),
                    limit: cap,
                });
            }
            let j = elements.len();
            elements.push(h.clone());
            distance.insert(h.clone(), d + 1);
            index.insert(h, j);
            edges.push((i, l, j));
            queue.push_back(j);
        }
    }
    Ok(VertexBall {
        elements,
        distance,
        edges,
    })
}

pub fn is_geodesic(oracle: &dyn VertexGroup, w: &[LetterId]) -> bool {
    w.len() == oracle.length(&oracle.reduce(w))
}

/// All geodesic words for `g`, in shortlex order.
pub fn geodesic_words(oracle: &dyn VertexGroup, g: &Elem) -> Vec<Word> {
    let mut memo: HashMap<Elem, Vec<Word>> = HashMap::new();
    let mut out = geodesics_rec(oracle, g, &mut memo);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn geodesics_rec(
    oracle: &dyn VertexGroup,
    g: &Elem,
    memo: &mut HashMap<Elem, Vec<Word>>,
) -> Vec<Word> {
    if g.is_empty() {
        return vec![Vec::new()];
    }
    if let Some(v) = memo.get(g) {
        return v.clone();
    }
    let gens = oracle.generators();
    let len = oracle.length(g);
    let mut out = Vec::new();
    for l in gens.letters() {
        let prev = oracle.multiply(g, &oracle.letter_elem(gens.inverse(l)));
        if oracle.length(&prev) + 1 == len {
            for mut w in geodesics_rec(oracle, &prev, memo) {
                w.push(l);
                out.push(w);
            }
        }
    }
    memo.insert(g.clone(), out.clone());
    out
}

/// Kind-specific description of a vertex group as read from a `.gog` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSpec {
    pub name: String,
    pub kind: String,
    pub generators: Vec<String>,
    pub entries: Vec<SpecEntry>,
}

/// A `key [arg] = value` line of a vertex section.
#[derive(Debug, Clone, Eq)]
pub struct SpecEntry {
    pub key: String,
    pub arg: Option<String>,
    pub value: String,
    pub line: usize,
}

impl PartialEq for SpecEntry {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.arg == other.arg && self.value == other.value
    }
}

impl VertexSpec {
    pub fn entries<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a SpecEntry> + 'a {
        self.entries.iter().filter(move |e| e.key == key)
    }
}

pub type VertexGroupBuilder = fn(&VertexSpec, &Limits) -> Result<Arc<dyn VertexGroup>>;

/// Vertex-group kinds available to the `.gog` loader, keyed by `kind = ...`.
#[derive(Clone)]
pub struct KindRegistry {
    builders: BTreeMap<String, VertexGroupBuilder>,
}

impl fmt::Debug for KindRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.builders.keys()).finish()
    }
}

impl Default for KindRegistry {
    fn default() -> Self {
        let mut r = KindRegistry {
            builders: BTreeMap::new(),
        };
        r.register("finite", finite::build_from_spec);
        r.register("free", free::build_from_spec);
        r
    }
}

impl KindRegistry {
    pub fn register(&mut self, kind: &str, builder: VertexGroupBuilder) {
        self.builders.insert(kind.to_string(), builder);
    }

    pub fn kinds(&self) -> impl Iterator<Item = &str> {
        self.builders.keys().map(String::as_str)
    }

    pub fn build(&self, spec: &VertexSpec, limits: &Limits) -> Result<Arc<dyn VertexGroup>> {
        let builder = self.builders.get(&spec.kind).ok_or_else(|| {
            Error::Input(format!(
                "vertex `{}`: unknown kind `{}` (known: {})",
                spec.name,
                spec.kind,
                self.kinds().collect::<Vec<_>>().join(", ")
            ))
        })?;
        builder(spec, limits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_layout_is_symmetric() {
        let g = GeneratorSet::new(&["x", "y"]);
        assert_eq!(g.len(), 5);
        assert!(g.is_symmetric());
        assert_eq!(g.name(2), "x'");
        assert_eq!(g.inverse(3), 4);
        assert_eq!(g.parse_word("x y' x''").unwrap(), vec![1, 4, 1]);
        assert!(matches!(g.parse_word("z"), Err(Error::UnknownLetter(_))));
    }
}
