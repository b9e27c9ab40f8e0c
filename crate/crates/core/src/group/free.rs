use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use super::cone::ConeTypeTable;
use super::{
    Elem, GeneratorSet, Index, LetterId, Limits, SubgroupStructure, VertexGroup, VertexSpec, Word,
};
use crate::error::{Error, Result};

/// Freely reduces a word, dropping identity letters.
pub fn free_reduce(gens: &GeneratorSet, word: &[LetterId]) -> Result<Word> {
    gens.check_letters(word)?;
    Ok(reduce_unchecked(gens, word))
}

fn reduce_unchecked(gens: &GeneratorSet, word: &[LetterId]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if l == GeneratorSet::IDENTITY {
            continue;
        }
        if out.last() == Some(&gens.inverse(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free group on the declared generators.
#[derive(Debug, Clone)]
pub struct FreeGroup {
    gens: GeneratorSet,
}

impl FreeGroup {
    pub fn new<S: AsRef<str>>(generators: &[S]) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Input("free group rank must be positive".into()));
        }
        Ok(FreeGroup {
            gens: GeneratorSet::new(generators),
        })
    }
}

pub(super) fn build_from_spec(spec: &VertexSpec, _limits: &Limits) -> Result<Arc<dyn VertexGroup>> {
    let mut generators = spec.generators.clone();
    if let Some(rank) = spec.entries("rank").last() {
        let k: i64 = rank.value.trim().parse().map_err(|_| {
            Error::parse(
                rank.line,
                1,
                format!("rank `{}` is not an integer", rank.value),
            )
        })?;
        if k <= 0 {
            return Err(Error::parse(
                rank.line,
                1,
                format!("rank must be positive, got {k}"),
            ));
        }
        if generators.is_empty() {
            generators = (1..=k).map(|i| format!("x{i}")).collect();
        } else if generators.len() as i64 != k {
            return Err(Error::parse(
                rank.line,
                1,
                format!(
                    "rank {k} disagrees with {} declared generators",
                    generators.len()
                ),
            ));
        }
    }
    if generators.is_empty() {
        return Err(Error::Input(format!(
            "vertex `{}`: free group needs generators or rank > 0",
            spec.name
        )));
    }
    Ok(Arc::new(FreeGroup::new(&generators)?))
}

impl VertexGroup for FreeGroup {
    fn kind(&self) -> &'static str {
        "free"
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn reduce(&self, word: &[LetterId]) -> Elem {
        reduce_unchecked(&self.gens, word)
    }

    fn length(&self, g: &Elem) -> usize {
        g.len()
    }

    fn order(&self) -> Option<usize> {
        None
    }

    /// Closed form: the cone type of a reduced word is determined by its last
    /// letter.
    fn cone_types(&self) -> ConeTypeTable {
        let n = self.gens.len();
        let mut transitions = vec![vec![None; n]; n];
        for (from, row) in transitions.iter_mut().enumerate() {
            for l in self.gens.letters() {
                if from != 0 && self.gens.inverse(from as LetterId) == l {
                    continue;
                }
                row[l as usize] = Some(l as u32);
            }
        }
        // class 0 is the empty word; class l is "ends in letter l"
        ConeTypeTable::from_parts(transitions, 0)
    }

    fn subgroup(
        &self,
        gens: &[Elem],
        images: &[Elem],
        target: Arc<dyn VertexGroup>,
        limits: &Limits,
    ) -> Result<Box<dyn SubgroupStructure>> {
        Ok(Box::new(LabeledFolding::build(
            self.gens.clone(),
            gens,
            images,
            target,
            limits,
        )?))
    }
}

const BASE: usize = 0;

/// Stallings graph of a subgroup of a free group whose edges carry labels in a
/// target group, so that reading a loop at the base multiplies out the image
/// of the loop's element under the homomorphism.
///
/// Folding two edges with the same source and letter re-gauges one endpoint:
/// labels on edges leaving vertex `v` are multiplied on the left by `c⁻¹` and
/// labels on edges entering `v` on the right by `c`. The base is never
/// re-gauged, so loop values are preserved.
#[derive(Debug)]
pub struct LabeledFolding {
    gens: GeneratorSet,
    target: Arc<dyn VertexGroup>,
    /// adjacency of live vertices: letter → (vertex, label)
    adj: Vec<BTreeMap<LetterId, (usize, Elem)>>,
    alive: Vec<bool>,
    coset_of_vertex: Vec<usize>,
    transversal: Option<Vec<Elem>>,
}

impl LabeledFolding {
    fn build(
        gens: GeneratorSet,
        sub_gens: &[Elem],
        images: &[Elem],
        target: Arc<dyn VertexGroup>,
        limits: &Limits,
    ) -> Result<Self> {
        let mut f = Folder {
            gens: &gens,
            target: target.as_ref(),
            adj: vec![BTreeMap::new()],
            forward: vec![None],
            pending: Vec::new(),
        };
        for (w, img) in sub_gens.iter().zip(images) {
            let w = reduce_unchecked(&gens, w);
            if w.is_empty() {
                if !img.is_empty() {
                    return Err(Error::Embedding {
                        edge: String::new(),
                        detail: "a generator with trivial image has a non-trivial partner".into(),
                    });
                }
                continue;
            }
            let mut prev = BASE;
            for (i, &l) in w.iter().enumerate() {
                let next = if i + 1 == w.len() {
                    BASE
                } else {
                    f.new_vertex()
                };
                let label = if i == 0 { img.clone() } else { Vec::new() };
                f.pending.push((prev, l, next, label));
                prev = next;
            }
            if f.adj.len() > limits.coset_cap {
                return Err(Error::Capacity {
                    what: "subgroup graph".into(),
                    limit: limits.coset_cap,
                });
            }
        }
        f.run()?;
        let Folder { adj, forward, .. } = f;
        let alive: Vec<bool> = forward.iter().map(Option::is_none).collect();
        let mut out = LabeledFolding {
            gens,
            target,
            adj,
            alive,
            coset_of_vertex: Vec::new(),
            transversal: None,
        };
        out.compute_transversal();
        Ok(out)
    }

    fn live_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.adj.len()).filter(|&v| self.alive[v])
    }

    fn is_complete(&self) -> bool {
        let n = self.gens.len() - 1;
        self.live_vertices().all(|v| self.adj[v].len() == n)
    }

    /// Shortlex-least word leading from each vertex back to the base.
    fn compute_transversal(&mut self) {
        if !self.is_complete() {
            return;
        }
        let mut dist = vec![usize::MAX; self.adj.len()];
        dist[BASE] = 0;
        let mut queue = VecDeque::from([BASE]);
        while let Some(v) = queue.pop_front() {
            for (w, _) in self.adj[v].values() {
                if dist[*w] == usize::MAX {
                    dist[*w] = dist[v] + 1;
                    queue.push_back(*w);
                }
            }
        }
        let mut reps: Vec<(Elem, usize)> = Vec::new();
        for v in self.live_vertices() {
            let mut word = Vec::new();
            let mut cur = v;
            while cur != BASE {
                let (&l, &(next, _)) = self.adj[cur]
                    .iter()
                    .find(|(_, (w, _))| dist[*w] + 1 == dist[cur])
                    .expect("connected subgroup graph");
                word.push(l);
                cur = next;
            }
            reps.push((word, v));
        }
        reps.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        self.coset_of_vertex = vec![usize::MAX; self.adj.len()];
        for (k, (_, v)) in reps.iter().enumerate() {
            self.coset_of_vertex[*v] = k;
        }
        self.transversal = Some(reps.into_iter().map(|(w, _)| w).collect());
    }

    /// Follows `word` from the base; returns the end vertex and label product.
    fn read(&self, word: &[LetterId]) -> Option<(usize, Elem)> {
        let mut v = BASE;
        let mut label = Vec::new();
        for &l in word {
            let (w, lab) = self.adj[v].get(&l)?;
            label = self.target.multiply(&label, lab);
            v = *w;
        }
        Some((v, label))
    }
}

struct Folder<'a> {
    gens: &'a GeneratorSet,
    target: &'a dyn VertexGroup,
    adj: Vec<BTreeMap<LetterId, (usize, Elem)>>,
    /// merged vertex → (replacement, gauge)
    forward: Vec<Option<(usize, Elem)>>,
    pending: Vec<(usize, LetterId, usize, Elem)>,
}

impl Folder<'_> {
    fn new_vertex(&mut self) -> usize {
        self.adj.push(BTreeMap::new());
        self.forward.push(None);
        self.adj.len() - 1
    }

    fn resolve(&self, mut u: usize, mut v: usize, mut label: Elem) -> (usize, usize, Elem) {
        while let Some((d, c)) = &self.forward[u] {
            label = self.target.multiply(&self.target.inverse(c), &label);
            u = *d;
        }
        while let Some((d, c)) = &self.forward[v] {
            label = self.target.multiply(&label, c);
            v = *d;
        }
        (u, v, label)
    }

    fn run(&mut self) -> Result<()> {
        while let Some((u, l, v, label)) = self.pending.pop() {
            let (u, v, label) = self.resolve(u, v, label);
            let inv = self.gens.inverse(l);
            if let Some((v2, l2)) = self.adj[u].get(&l).cloned() {
                if v2 == v {
                    if l2 != label {
                        return Err(Error::Embedding {
                            edge: String::new(),
                            detail: "homomorphism is not well defined on the subgroup (embedding not injective)".into(),
                        });
                    }
                    continue;
                }
                // merge: keep the base fixed
                let (src, src_label, dst, dst_label) = if v == BASE {
                    (v2, l2, v, label.clone())
                } else {
                    (v, label.clone(), v2, l2)
                };
                let gauge = self
                    .target
                    .multiply(&self.target.inverse(&src_label), &dst_label);
                self.merge(src, dst, gauge);
                self.pending.push((u, l, v, label));
                continue;
            }
            if self.adj[v].contains_key(&inv) {
                let lab_inv = self.target.inverse(&label);
                self.pending.push((v, inv, u, lab_inv));
                continue;
            }
            let lab_inv = self.target.inverse(&label);
            self.adj[u].insert(l, (v, label));
            self.adj[v].insert(inv, (u, lab_inv));
        }
        Ok(())
    }

    fn merge(&mut self, src: usize, dst: usize, gauge: Elem) {
        let edges = std::mem::take(&mut self.adj[src]);
        for (l, (w, label)) in edges {
            if w != src {
                self.adj[w].remove(&self.gens.inverse(l));
            }
            self.pending.push((src, l, w, label));
        }
        self.forward[src] = Some((dst, gauge));
    }
}

impl SubgroupStructure for LabeledFolding {
    fn contains(&self, g: &Elem) -> bool {
        matches!(self.read(g), Some((BASE, _)))
    }

    fn transport(&self, g: &Elem) -> Option<Elem> {
        match self.read(g) {
            Some((BASE, label)) => Some(label),
            _ => None,
        }
    }

    fn index(&self) -> Index {
        match &self.transversal {
            Some(t) => Index::Finite(t.len()),
            None => Index::Infinite,
        }
    }

    fn transversal(&self) -> Option<Vec<Elem>> {
        self.transversal.clone()
    }

    fn coset_index(&self, g: &Elem) -> Option<usize> {
        self.transversal.as_ref()?;
        let (v, _) = self.read(&self.gens.invert_word(g))?;
        Some(self.coset_of_vertex[v])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SubgroupHandle;

    fn stack_reduce(gens: &GeneratorSet, w: &[LetterId]) -> Word {
        // independent: repeatedly delete the leftmost cancelling pair
        let mut v: Word = w.iter().copied().filter(|&l| l != 0).collect();
        loop {
            let pos = v.windows(2).position(|p| gens.inverse(p[0]) == p[1]);
            match pos {
                Some(i) => {
                    v.drain(i..i + 2);
                }
                None => return v,
            }
        }
    }

    #[test]
    fn reduce_examples() {
        let g = GeneratorSet::new(&["x", "y"]);
        let w = g.parse_word("x x'").unwrap();
        assert!(free_reduce(&g, &w).unwrap().is_empty());
        assert!(free_reduce(&g, &[]).unwrap().is_empty());
        let w = g.parse_word("x y y' x").unwrap();
        let expected = stack_reduce(&g, &w);
        assert_eq!(free_reduce(&g, &w).unwrap(), expected);
        assert_eq!(g.format_word(&expected), "x x");
        assert!(free_reduce(&g, &[9]).is_err());
    }

    #[test]
    fn even_powers_in_z() {
        let z: Arc<dyn VertexGroup> = Arc::new(FreeGroup::new(&["a"]).unwrap());
        let h = SubgroupHandle::plain(z.clone(), vec![vec![1, 1]], &Limits::default()).unwrap();
        assert!(h.contains_word(&[1, 1]).unwrap());
        assert!(!h.contains_word(&[1]).unwrap());
        assert_eq!(h.index(), Index::Finite(2));
        assert_eq!(h.transversal().unwrap(), &[vec![], vec![1]]);
    }

    #[test]
    fn labels_track_homomorphism() {
        // ⟨a⟩ → ⟨a²⟩ in Z, a ↦ a a
        let z: Arc<dyn VertexGroup> = Arc::new(FreeGroup::new(&["a"]).unwrap());
        let h = SubgroupHandle::new(
            z.clone(),
            vec![vec![1]],
            &[vec![1, 1]],
            z.clone(),
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(h.transport(&vec![1, 1, 1]), Some(vec![1; 6]));
        assert_eq!(h.transport(&vec![2, 2]), Some(vec![2; 4]));
        // and back
        let h2 = SubgroupHandle::new(
            z.clone(),
            vec![vec![1, 1]],
            &[vec![1]],
            z,
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(h2.transport(&vec![1; 4]), Some(vec![1, 1]));
        assert_eq!(h2.transport(&vec![1]), None);
        assert_eq!(
            h2.factor(&vec![1, 1, 1]).map(|(k, _, r)| (k, r)),
            Some((1, vec![1, 1]))
        );
    }

    #[test]
    fn inconsistent_labels_are_rejected() {
        // generators a and a a a' both equal a but map to different images
        let z: Arc<dyn VertexGroup> = Arc::new(FreeGroup::new(&["a"]).unwrap());
        let err = SubgroupHandle::new(
            z.clone(),
            vec![vec![1], vec![1, 1, 2]],
            &[vec![1], vec![1, 1]],
            z,
            &Limits::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Embedding { .. }));
    }

    #[test]
    fn infinite_index_has_no_transversal() {
        let f2: Arc<dyn VertexGroup> = Arc::new(FreeGroup::new(&["x", "y"]).unwrap());
        let h = SubgroupHandle::plain(f2, vec![vec![1]], &Limits::default()).unwrap();
        assert_eq!(h.index(), Index::Infinite);
        assert!(h.transversal().is_none());
    }

    #[test]
    fn index_two_in_f2() {
        // kernel of F2 → Z/2 sending both generators to 1: generated by x², xy, xy'
        let f2: Arc<dyn VertexGroup> = Arc::new(FreeGroup::new(&["x", "y"]).unwrap());
        let h = SubgroupHandle::plain(
            f2.clone(),
            vec![vec![1, 1], vec![1, 3], vec![1, 4]],
            &Limits::default(),
        )
        .unwrap();
        assert_eq!(h.index(), Index::Finite(2));
        assert_eq!(h.transversal().unwrap(), &[vec![], vec![1]]);
        assert!(h.contains(&vec![3, 3]));
        assert!(!h.contains(&vec![3]));
    }
}
