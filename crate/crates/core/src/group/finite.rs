use std::collections::{HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use super::cone::ConeTypeTable;
use super::{
    Elem, GeneratorSet, Index, LetterId, Limits, SubgroupStructure, VertexGroup, VertexSpec,
};
use crate::error::{Error, Result};

/// A finite group given by right-multiplication tables on its generators.
///
/// Elements are numbered in BFS order from the identity, exploring letters in
/// generator-set order, so element `i`'s canonical word is shortlex-least and
/// element numbering agrees with shortlex order of canonical words.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    gens: GeneratorSet,
    /// right[i][l] = element i · letter l
    right: Vec<Vec<u32>>,
    words: Vec<Elem>,
    index: HashMap<Elem, u32>,
}

impl FiniteGroup {
    /// Closes the generators under multiplication in an arbitrary faithful
    /// representation.
    pub fn from_closure<T, F>(
        generators: &[String],
        identity: T,
        images: &[T],
        inverse_images: &[T],
        mul: F,
        cap: usize,
    ) -> Result<Self>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let gens = GeneratorSet::new(generators);
        let mut letter_rep = vec![identity.clone()];
        for (a, b) in images.iter().zip(inverse_images) {
            letter_rep.push(a.clone());
            letter_rep.push(b.clone());
        }
        let mut reps = vec![identity.clone()];
        let mut seen = HashMap::from([(identity, 0u32)]);
        let mut words: Vec<Elem> = vec![Vec::new()];
        let mut right: Vec<Vec<u32>> = Vec::new();
        let mut i = 0;
        while i < reps.len() {
            let mut row = vec![0u32; gens.len()];
            for l in gens.all_letters() {
                let r = mul(&reps[i], &letter_rep[l as usize]);
                let j = match seen.get(&r) {
                    Some(&j) => j,
                    None => {
                        if reps.len() >= cap {
                            return Err(Error::Capacity {
                                what: "finite group closure".into(),
                                limit: cap,
                            });
                        }
                        let j = reps.len() as u32;
                        let mut w = words[i].clone();
                        w.push(l);
                        words.push(w);
                        reps.push(r.clone());
                        seen.insert(r, j);
                        j
                    }
                };
                row[l as usize] = j;
            }
            right.push(row);
            i += 1;
        }
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        Ok(FiniteGroup {
            gens,
            right,
            words,
            index,
        })
    }

    /// Permutation generators on points `0..degree`.
    pub fn from_permutations(
        generators: &[String],
        perms: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self> {
        let degree = perms.iter().map(Vec::len).max().unwrap_or(0);
        let pad = |p: &Vec<usize>| {
            let mut q = p.clone();
            q.extend(p.len()..degree);
            q
        };
        let images: Vec<Vec<usize>> = perms.iter().map(pad).collect();
        let inverses: Vec<Vec<usize>> = images
            .iter()
            .map(|p| {
                let mut inv = vec![0; degree];
                for (i, &j) in p.iter().enumerate() {
                    inv[j] = i;
                }
                inv
            })
            .collect();
        let identity: Vec<usize> = (0..degree).collect();
        // x·y acts as "x first, then y" on points
        let mul = |x: &Vec<usize>, y: &Vec<usize>| x.iter().map(|&i| y[i]).collect::<Vec<usize>>();
        Self::from_closure(generators, identity, &images, &inverses, mul, cap)
    }

    /// Multiplication table rows (`table[i][j]` = i·j) with generator elements.
    pub fn from_table(
        generators: &[String],
        table: &[Vec<usize>],
        gen_elems: &[usize],
        cap: usize,
    ) -> Result<Self> {
        validate_table(table)?;
        let n = table.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Input("multiplication table has no identity".into()))?;
        for &g in gen_elems {
            if g >= n {
                return Err(Error::Input(format!(
                    "generator element {g} out of range 0..{n}"
                )));
            }
        }
        let inverse = |g: usize| {
            (0..n)
                .find(|&h| table[g][h] == identity)
                .expect("latin square")
        };
        let images: Vec<usize> = gen_elems.to_vec();
        let inverses: Vec<usize> = gen_elems.iter().map(|&g| inverse(g)).collect();
        Self::from_closure(
            generators,
            identity,
            &images,
            &inverses,
            |a, b| table[*a][*b],
            cap,
        )
    }

    fn idx(&self, g: &Elem) -> u32 {
        match self.index.get(g) {
            Some(&i) => i,
            None => self.walk(0, g),
        }
    }

    fn walk(&self, mut i: u32, w: &[LetterId]) -> u32 {
        for &l in w {
            i = self.right[i as usize][l as usize];
        }
        i
    }

    pub fn elements(&self) -> &[Elem] {
        &self.words
    }

    pub fn element_index(&self, g: &Elem) -> usize {
        self.idx(g) as usize
    }

    /// right-multiplication by a letter, on element indices
    pub fn step(&self, i: usize, l: LetterId) -> usize {
        self.right[i][l as usize] as usize
    }
}

fn validate_table(table: &[Vec<usize>]) -> Result<()> {
    let n = table.len();
    if n == 0 {
        return Err(Error::Input("empty multiplication table".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Input(format!(
                "table row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        let mut seen = vec![false; n];
        for &x in row {
            if x >= n || seen[x] {
                return Err(Error::Input(format!(
                    "table row {i} is not a permutation of 0..{n}"
                )));
            }
            seen[x] = true;
        }
    }
    for j in 0..n {
        let mut seen = vec![false; n];
        for row in table {
            if seen[row[j]] {
                return Err(Error::Input(format!("table column {j} repeats an entry")));
            }
            seen[row[j]] = true;
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::Input(format!(
                        "table is not associative at ({a}, {b}, {c})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Parses cycle notation over points `1..`, e.g. `(1 2)(3 4 5)`; `()` is the identity.
pub fn parse_cycles(text: &str) -> std::result::Result<Vec<usize>, String> {
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected `(` in cycle notation `{text}`"))?;
        let close = open
            .find(')')
            .ok_or_else(|| format!("unclosed cycle in `{text}`"))?;
        let body = &open[..close];
        let mut cyc = Vec::new();
        for tok in body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let p: usize = tok.parse().map_err(|_| format!("bad point `{tok}`"))?;
            if p == 0 {
                return Err("points are numbered from 1".into());
            }
            if cyc.contains(&(p - 1)) || cycles.iter().any(|c| c.contains(&(p - 1))) {
                return Err(format!("point {p} repeated"));
            }
            cyc.push(p - 1);
        }
        cycles.push(cyc);
        rest = open[close + 1..].trim_start();
    }
    let degree = cycles.iter().flatten().map(|&p| p + 1).max().unwrap_or(0);
    let mut perm: Vec<usize> = (0..degree).collect();
    for c in &cycles {
        for (i, &p) in c.iter().enumerate() {
            perm[p] = c[(i + 1) % c.len()];
        }
    }
    Ok(perm)
}

pub(super) fn build_from_spec(spec: &VertexSpec, limits: &Limits) -> Result<Arc<dyn VertexGroup>> {
    let gens = &spec.generators;
    let perms: Vec<_> = spec.entries("perm").collect();
    let rows: Vec<_> = spec.entries("row").collect();
    let group = if !rows.is_empty() {
        let mut table = Vec::new();
        for r in &rows {
            let row: std::result::Result<Vec<usize>, _> = r
                .value
                .split_whitespace()
                .map(str::parse::<usize>)
                .collect();
            table.push(
                row.map_err(|_| Error::parse(r.line, 1, "table row must be element indices"))?,
            );
        }
        let mut elems = Vec::new();
        for g in gens {
            let e = spec
                .entries("element")
                .find(|e| e.arg.as_deref() == Some(g.as_str()))
                .ok_or_else(|| {
                    Error::Input(format!(
                        "vertex `{}`: missing `element {g} = <index>`",
                        spec.name
                    ))
                })?;
            elems.push(
                e.value
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(e.line, 1, "element index must be an integer"))?,
            );
        }
        FiniteGroup::from_table(gens, &table, &elems, limits.coset_cap)?
    } else {
        let mut ps = Vec::new();
        for g in gens {
            let e = perms
                .iter()
                .find(|e| e.arg.as_deref() == Some(g.as_str()))
                .ok_or_else(|| {
                    Error::Input(format!(
                        "vertex `{}`: missing `perm {g} = (...)`",
                        spec.name
                    ))
                })?;
            ps.push(parse_cycles(&e.value).map_err(|m| Error::parse(e.line, 1, m))?);
        }
        FiniteGroup::from_permutations(gens, &ps, limits.coset_cap)?
    };
    Ok(Arc::new(group))
}

impl VertexGroup for FiniteGroup {
    fn kind(&self) -> &'static str {
        "finite"
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn reduce(&self, word: &[LetterId]) -> Elem {
        self.words[self.walk(0, word) as usize].clone()
    }

    fn multiply(&self, g: &Elem, h: &Elem) -> Elem {
        self.words[self.walk(self.idx(g), h) as usize].clone()
    }

    fn length(&self, g: &Elem) -> usize {
        self.words[self.idx(g) as usize].len()
    }

    fn order(&self) -> Option<usize> {
        Some(self.words.len())
    }

    /// Exact cone types: the cone of a geodesic depends only on its endpoint,
    /// so the geodesic automaton on elements is minimised by partition
    /// refinement.
    fn cone_types(&self) -> ConeTypeTable {
        let n = self.words.len();
        let letters = self.gens.len();
        let mut trans = vec![vec![None; letters]; n];
        for (i, row) in trans.iter_mut().enumerate() {
            for l in self.gens.letters() {
                let j = self.right[i][l as usize] as usize;
                if self.words[j].len() == self.words[i].len() + 1 {
                    row[l as usize] = Some(j as u32);
                }
            }
        }
        ConeTypeTable::minimise(trans, 0)
    }

    fn subgroup(
        &self,
        gens: &[Elem],
        images: &[Elem],
        target: Arc<dyn VertexGroup>,
        limits: &Limits,
    ) -> Result<Box<dyn SubgroupStructure>> {
        Ok(Box::new(FiniteSubgroup::build(
            self, gens, images, target, limits,
        )?))
    }
}

/// Subgroup of a finite group as an explicit element list with its coset table.
#[derive(Debug)]
pub struct FiniteSubgroup {
    transport: HashMap<Elem, Elem>,
    coset: HashMap<Elem, usize>,
    transversal: Vec<Elem>,
}

impl FiniteSubgroup {
    fn build(
        ambient: &FiniteGroup,
        gens: &[Elem],
        images: &[Elem],
        target: Arc<dyn VertexGroup>,
        limits: &Limits,
    ) -> Result<Self> {
        let mut transport: HashMap<Elem, Elem> = HashMap::from([(Vec::new(), Vec::new())]);
        let mut reverse: HashMap<Elem, Elem> = HashMap::from([(Vec::new(), Vec::new())]);
        let mut queue = VecDeque::from([Vec::new()]);
        let steps: Vec<(Elem, Elem)> = gens
            .iter()
            .zip(images)
            .flat_map(|(g, i)| {
                let g = ambient.reduce(g);
                [
                    (g.clone(), i.clone()),
                    (ambient.inverse(&g), target.inverse(i)),
                ]
            })
            .collect();
        while let Some(h) = queue.pop_front() {
            let img = transport[&h].clone();
            for (g, gi) in &steps {
                let h2 = ambient.multiply(&h, g);
                let i2 = target.multiply(&img, gi);
                match transport.get(&h2) {
                    Some(prev) if *prev != i2 => {
                        return Err(Error::Embedding {
                            edge: String::new(),
                            detail: format!("element {:?} has two images", h2),
                        })
                    }
                    Some(_) => {}
                    None => {
                        if let Some(other) = reverse.get(&i2) {
                            if *other != h2 {
                                return Err(Error::Embedding {
                                    edge: String::new(),
                                    detail: "two subgroup elements share an image (embedding not injective)".into(),
                                });
                            }
                        }
                        if transport.len() >= limits.coset_cap {
                            return Err(Error::Capacity {
                                what: "subgroup closure".into(),
                                limit: limits.coset_cap,
                            });
                        }
                        reverse.insert(i2.clone(), h2.clone());
                        transport.insert(h2.clone(), i2);
                        queue.push_back(h2);
                    }
                }
            }
        }
        let members: Vec<&Elem> = transport.keys().collect();
        let mut coset = HashMap::new();
        let mut transversal = Vec::new();
        // elements are already in shortlex order of their canonical words
        for g in ambient.elements() {
            if coset.contains_key(g) {
                continue;
            }
            let k = transversal.len();
            transversal.push(g.clone());
            for h in &members {
                coset.insert(ambient.multiply(g, h), k);
            }
        }
        Ok(FiniteSubgroup {
            transport,
            coset,
            transversal,
        })
    }
}

impl SubgroupStructure for FiniteSubgroup {
    fn contains(&self, g: &Elem) -> bool {
        self.transport.contains_key(g)
    }

    fn transport(&self, g: &Elem) -> Option<Elem> {
        self.transport.get(g).cloned()
    }

    fn index(&self) -> Index {
        Index::Finite(self.transversal.len())
    }

    fn transversal(&self) -> Option<Vec<Elem>> {
        Some(self.transversal.clone())
    }

    fn coset_index(&self, g: &Elem) -> Option<usize> {
        self.coset.get(g).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cayley_ball, oracle_multiply, SubgroupHandle};

    fn cyclic(name: &str, n: usize) -> FiniteGroup {
        let cyc = format!(
            "({})",
            (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
        );
        FiniteGroup::from_permutations(&[name.to_string()], &[parse_cycles(&cyc).unwrap()], 1000)
            .unwrap()
    }

    #[test]
    fn cycle_parsing() {
        assert_eq!(parse_cycles("(1 2 3)").unwrap(), vec![1, 2, 0]);
        assert_eq!(parse_cycles("(1 2)(3 4)").unwrap(), vec![1, 0, 3, 2]);
        assert_eq!(parse_cycles("()").unwrap(), Vec::<usize>::new());
        assert!(parse_cycles("(1 1)").is_err());
        assert!(parse_cycles("1 2").is_err());
    }

    #[test]
    fn z2_and_z3_multiplication() {
        let z2 = cyclic("a", 2);
        assert_eq!(z2.order(), Some(2));
        assert!(oracle_multiply(&z2, &vec![], &[1, 1]).unwrap().is_empty());
        let z3 = cyclic("b", 3);
        // from the 3×3 table: b·b = b², whose shortlex-least word is b'
        let r = oracle_multiply(&z3, &vec![1], &[1]).unwrap();
        assert_eq!(r, vec![2]);
        assert_eq!(z3.reduce(&r), r);
    }

    #[test]
    fn balls() {
        let z2 = cyclic("a", 2);
        let b = cayley_ball(&z2, 1, 100).unwrap();
        assert_eq!(b.distance.len(), 2);
        assert_eq!(b.distance[&vec![1]], 1);
        let z3 = cyclic("b", 3);
        let b = cayley_ball(&z3, 1, 100).unwrap();
        assert_eq!(b.sphere_sizes(), vec![1, 2]);
    }

    #[test]
    fn table_input_matches_permutations() {
        let table = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let g = FiniteGroup::from_table(&["b".into()], &table, &[1], 100).unwrap();
        assert_eq!(g.order(), Some(3));
        assert_eq!(g.elements(), cyclic("b", 3).elements());
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table(&["b".into()], &bad, &[1], 100).is_err());
    }

    #[test]
    fn associativity_exhaustive_s3() {
        let s3 = FiniteGroup::from_permutations(
            &["s".into(), "t".into()],
            &[
                parse_cycles("(1 2)").unwrap(),
                parse_cycles("(1 2 3)").unwrap(),
            ],
            100,
        )
        .unwrap();
        let els = s3.elements().to_vec();
        assert_eq!(els.len(), 6);
        for a in &els {
            assert_eq!(s3.multiply(a, &vec![]), *a);
            for b in &els {
                for c in &els {
                    assert_eq!(
                        s3.multiply(&s3.multiply(a, b), c),
                        s3.multiply(a, &s3.multiply(b, c))
                    );
                }
            }
        }
    }

    #[test]
    fn transversals() {
        let z3: Arc<dyn VertexGroup> = Arc::new(cyclic("b", 3));
        let h = SubgroupHandle::plain(z3.clone(), vec![], &Limits::default()).unwrap();
        assert_eq!(h.index(), Index::Finite(3));
        assert_eq!(h.transversal().unwrap(), &[vec![], vec![1], vec![2]]);
        assert!(h.contains_word(&[]).unwrap());
        let whole = SubgroupHandle::plain(z3, vec![vec![1]], &Limits::default()).unwrap();
        assert_eq!(whole.transversal().unwrap(), &[Vec::<LetterId>::new()]);
    }
}
