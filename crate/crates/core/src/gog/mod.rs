//! Graphs of groups, the structure alphabet and Bass–Serre normal forms.

mod alphabet;
mod normal_form;

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{
    build_geodesic_recognizer, coset_transversal, ConeTypeTable, Elem, GeneratorSet, Index,
    KindRegistry, LetterId, Limits, SubgroupHandle, VertexGroup, VertexSpec,
};

pub use alphabet::{Letter, LetterKind, StructureAlphabet};
pub use normal_form::{NormalForm, Syllable};

pub type VertexId = usize;
/// Directed edge; declared edge `i` yields `2i` (as declared) and `2i + 1` (reversed).
pub type EdgeId = usize;

/// An undirected edge as written in the input, `name: from -> to`, with the
/// edge group's abstract generators and their images on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub name: String,
    pub from: String,
    pub to: String,
    pub generators: Vec<String>,
    /// `i_e(g)` as a word over the generators of `from`, per generator.
    pub fwd: Vec<String>,
    /// `i_ē(g)` as a word over the generators of `to`, per generator.
    pub bwd: Vec<String>,
}

/// Parsed, not yet validated, description of a graph of groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GogSpec {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
    pub base: String,
}

#[derive(Debug, Clone)]
pub struct DirectedEdge {
    pub name: String,
    pub origin: VertexId,
    pub terminus: VertexId,
    pub declared: usize,
}

pub fn reverse(e: EdgeId) -> EdgeId {
    e ^ 1
}

/// A validated graph of groups with its transversals, spanning tree and
/// structure alphabet.
#[derive(Debug)]
pub struct GraphOfGroups {
    spec: GogSpec,
    vertex_names: Vec<String>,
    groups: Vec<Arc<dyn VertexGroup>>,
    edges: Vec<DirectedEdge>,
    base: VertexId,
    in_tree: Vec<bool>,
    tree_paths: Vec<Vec<EdgeId>>,
    subgroups: Vec<SubgroupHandle>,
    transversals: Vec<Vec<Elem>>,
    alphabet: StructureAlphabet,
    cone: ConeTypeTable,
    limits: Limits,
}

/// Default length up to which cone-type automata are checked against the metric.
pub const CONE_CHECK_LENGTH: usize = 5;

impl GraphOfGroups {
    pub fn build(spec: GogSpec) -> Result<Self> {
        Self::build_with(spec, &KindRegistry::default(), Limits::default())
    }

    pub fn build_with(spec: GogSpec, registry: &KindRegistry, limits: Limits) -> Result<Self> {
        let mut vertex_names = Vec::new();
        let mut vid = HashMap::new();
        let mut groups = Vec::new();
        for v in &spec.vertices {
            if vid.insert(v.name.clone(), vertex_names.len()).is_some() {
                return Err(Error::Graph(format!("duplicate vertex `{}`", v.name)));
            }
            vertex_names.push(v.name.clone());
            groups.push(registry.build(v, &limits)?);
        }
        if vertex_names.is_empty() {
            return Err(Error::Graph("no vertices".into()));
        }
        let lookup = |name: &str| {
            vid.get(name)
                .copied()
                .ok_or_else(|| Error::Graph(format!("undeclared vertex `{name}`")))
        };
        let base = lookup(&spec.base)?;
        let mut edges = Vec::new();
        let mut seen_edges = HashMap::new();
        for (i, e) in spec.edges.iter().enumerate() {
            if seen_edges.insert(e.name.clone(), i).is_some() {
                return Err(Error::Graph(format!("duplicate edge `{}`", e.name)));
            }
            let (u, v) = (lookup(&e.from)?, lookup(&e.to)?);
            if e.fwd.len() != e.generators.len() || e.bwd.len() != e.generators.len() {
                return Err(Error::Graph(format!(
                    "edge `{}`: every generator needs a `fwd` and a `bwd` image",
                    e.name
                )));
            }
            edges.push(DirectedEdge {
                name: e.name.clone(),
                origin: u,
                terminus: v,
                declared: i,
            });
            edges.push(DirectedEdge {
                name: format!("{}~", e.name),
                origin: v,
                terminus: u,
                declared: i,
            });
        }

        let (in_tree, tree_paths) = spanning_tree(vertex_names.len(), &edges, base)?;

        let mut subgroups = Vec::new();
        let mut transversals = Vec::new();
        for (d, edge) in edges.iter().enumerate() {
            let es = &spec.edges[edge.declared];
            let (own, other) = if d % 2 == 0 {
                (&es.fwd, &es.bwd)
            } else {
                (&es.bwd, &es.fwd)
            };
            let ambient = groups[edge.origin].clone();
            let target = groups[edge.terminus].clone();
            let parse = |g: &Arc<dyn VertexGroup>, w: &String| -> Result<Elem> {
                let word = g.generators().parse_word(w).map_err(|err| {
                    Error::Graph(format!("edge `{}`: embedding word `{w}`: {err}", es.name))
                })?;
                Ok(g.reduce(&word))
            };
            let gens: Vec<Elem> = own
                .iter()
                .map(|w| parse(&ambient, w))
                .collect::<Result<_>>()?;
            let images: Vec<Elem> = other
                .iter()
                .map(|w| parse(&target, w))
                .collect::<Result<_>>()?;
            let handle =
                SubgroupHandle::new(ambient, gens, &images, target, &limits).map_err(|err| {
                    match err {
                        Error::Embedding { detail, .. } => Error::Embedding {
                            edge: edge.name.clone(),
                            detail,
                        },
                        other => other,
                    }
                })?;
            let t = coset_transversal(&handle, &edge.name, &vertex_names[edge.origin])?;
            subgroups.push(handle);
            transversals.push(t);
        }

        let cone = build_geodesic_recognizer(groups[base].as_ref(), CONE_CHECK_LENGTH)?;
        let alphabet =
            StructureAlphabet::new(&edges, groups[base].generators(), &transversals, |d, s| {
                groups[edges[d].origin].generators().format_word(s)
            });
        for name in alphabet.names() {
            if name.is_empty() {
                return Err(Error::Graph("empty letter name".into()));
            }
        }
        if let Some(dup) = alphabet.duplicate_name() {
            return Err(Error::Graph(format!("letter name `{dup}` is ambiguous")));
        }
        Ok(GraphOfGroups {
            spec,
            vertex_names,
            groups,
            edges,
            base,
            in_tree,
            tree_paths,
            subgroups,
            transversals,
            alphabet,
            cone,
            limits,
        })
    }

    pub fn spec(&self) -> &GogSpec {
        &self.spec
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v]
    }

    pub fn group(&self, v: VertexId) -> &Arc<dyn VertexGroup> {
        &self.groups[v]
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn base_group(&self) -> &Arc<dyn VertexGroup> {
        &self.groups[self.base]
    }

    pub fn base_generators(&self) -> &GeneratorSet {
        self.groups[self.base].generators()
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &DirectedEdge {
        &self.edges[e]
    }

    pub fn origin(&self, e: EdgeId) -> VertexId {
        self.edges[e].origin
    }

    pub fn in_tree(&self, e: EdgeId) -> bool {
        self.in_tree[e]
    }

    /// Declared edges of the spanning tree.
    pub fn spanning_tree(&self) -> Vec<&str> {
        (0..self.edges.len())
            .step_by(2)
            .filter(|&e| self.in_tree[e])
            .map(|e| self.edges[e].name.as_str())
            .collect()
    }

    pub fn tree_path(&self, v: VertexId) -> &[EdgeId] {
        &self.tree_paths[v]
    }

    pub fn subgroup(&self, e: EdgeId) -> &SubgroupHandle {
        &self.subgroups[e]
    }

    pub fn transversal(&self, e: EdgeId) -> &[Elem] {
        &self.transversals[e]
    }

    pub fn alphabet(&self) -> &StructureAlphabet {
        &self.alphabet
    }

    pub fn cone_types(&self) -> &ConeTypeTable {
        &self.cone
    }

    /// Validation diagnostics; `radius` bounds the edge-group ball on which
    /// the two embeddings are compared.
    pub fn validate(&self, radius: usize) -> Result<ValidationReport> {
        let mut report = ValidationReport::default();
        report.push("VERTICES", self.vertex_names.len());
        report.push("EDGES", self.spec.edges.len());
        report.push("BASE", &self.vertex_names[self.base]);
        report.push("CONNECTED", "yes");
        report.push("INVOLUTION", "ok");
        for (d, e) in self.edges.iter().enumerate() {
            let idx = match self.subgroups[d].index() {
                Index::Finite(n) => n.to_string(),
                Index::Infinite => "infinite".into(),
            };
            report.push(&format!("INDEX.{}", e.name), idx);
        }
        for (i, es) in self.spec.edges.iter().enumerate() {
            self.check_injective(i, es, radius)?;
            report.push(
                &format!("INJECTIVE.{}", es.name),
                format!("ok(radius={radius})"),
            );
        }
        report.push("TREE", self.spanning_tree().join(","));
        report.push("ALPHABET", self.alphabet.len());
        report.push("CONE_CLASSES", self.cone.class_count());
        Ok(report)
    }

    /// Both embeddings of an edge group identify the same pairs of words in
    /// the free group on the edge generators, up to `radius`.
    fn check_injective(&self, i: usize, es: &EdgeSpec, radius: usize) -> Result<()> {
        let (gu, gv) = (
            &self.groups[self.edges[2 * i].origin],
            &self.groups[self.edges[2 * i].terminus],
        );
        let parse = |g: &Arc<dyn VertexGroup>, w: &str| {
            g.reduce(&g.generators().parse_word(w).unwrap_or_default())
        };
        let fwd: Vec<Elem> = es.fwd.iter().map(|w| parse(gu, w)).collect();
        let bwd: Vec<Elem> = es.bwd.iter().map(|w| parse(gv, w)).collect();
        let edge_gens = GeneratorSet::new(&es.generators);
        let mut f2b: HashMap<Elem, Elem> = HashMap::new();
        let mut b2f: HashMap<Elem, Elem> = HashMap::new();
        let mut stack: Vec<(Vec<LetterId>, Elem, Elem)> =
            vec![(Vec::new(), Vec::new(), Vec::new())];
        while let Some((w, a, b)) = stack.pop() {
            if f2b.get(&a).is_some_and(|x| *x != b) || b2f.get(&b).is_some_and(|x| *x != a) {
                return Err(Error::Embedding {
                    edge: es.name.clone(),
                    detail: format!(
                        "edge-group word `{}` is identified with another word on one side only",
                        edge_gens.format_word(&w)
                    ),
                });
            }
            f2b.insert(a.clone(), b.clone());
            b2f.insert(b.clone(), a.clone());
            if w.len() >= radius {
                continue;
            }
            for l in edge_gens.letters() {
                if w.last() == Some(&edge_gens.inverse(l)) {
                    continue;
                }
                let k = (l as usize - 1) / 2;
                let (fa, fb) = if l % 2 == 1 {
                    (fwd[k].clone(), bwd[k].clone())
                } else {
                    (gu.inverse(&fwd[k]), gv.inverse(&bwd[k]))
                };
                let mut w2 = w.clone();
                w2.push(l);
                stack.push((w2, gu.multiply(&a, &fa), gv.multiply(&b, &fb)));
            }
        }
        Ok(())
    }
}

/// BFS tree rooted at `base`, exploring declared edges in declaration order.
/// Returns tree membership per directed edge and the tree path from the base
/// to every vertex.
fn spanning_tree(
    n: usize,
    edges: &[DirectedEdge],
    base: VertexId,
) -> Result<(Vec<bool>, Vec<Vec<EdgeId>>)> {
    let mut in_tree = vec![false; edges.len()];
    let mut paths: Vec<Option<Vec<EdgeId>>> = vec![None; n];
    paths[base] = Some(Vec::new());
    let mut queue = VecDeque::from([base]);
    while let Some(x) = queue.pop_front() {
        for d in 0..edges.len() {
            let e = &edges[d];
            if e.origin != x || paths[e.terminus].is_some() {
                continue;
            }
            in_tree[d] = true;
            in_tree[reverse(d)] = true;
            let mut p = paths[x].clone().expect("visited");
            p.push(d);
            paths[e.terminus] = Some(p);
            queue.push_back(e.terminus);
        }
    }
    let paths: Option<Vec<_>> = paths.into_iter().collect();
    let paths = paths.ok_or_else(|| Error::Graph("underlying graph is not connected".into()))?;
    Ok((in_tree, paths))
}

/// Ordered `KEY=VALUE` diagnostics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub entries: Vec<(String, String)>,
}

impl ValidationReport {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}
