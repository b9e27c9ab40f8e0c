use std::collections::HashMap;

use super::{DirectedEdge, EdgeId};
use crate::group::{Elem, GeneratorSet, LetterId};

/// Index of a letter of the structure alphabet `A`.
pub type Letter = u16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LetterKind {
    Edge(EdgeId),
    EdgeInverse(EdgeId),
    /// Generator letter of the base vertex group.
    Base(LetterId),
    /// `k`-th transversal representative of `S(e)`.
    Transversal(EdgeId, u32),
    TransversalInverse(EdgeId, u32),
}

/// The generating set `A = A' ⊔ A'⁻¹` with `A' = E ⊔ B ⊔ ⊔ S(e)`.
///
/// Letter order: directed edges, base letters, transversal letters, then the
/// formal inverses of edge and transversal letters. `B` is already symmetric
/// and is not doubled.
#[derive(Debug, Clone)]
pub struct StructureAlphabet {
    kinds: Vec<LetterKind>,
    names: Vec<String>,
    images: Vec<String>,
    inverse: Vec<Letter>,
    by_kind: HashMap<LetterKind, Letter>,
    by_name: HashMap<String, Letter>,
}

impl StructureAlphabet {
    pub(super) fn new(
        edges: &[DirectedEdge],
        base: &GeneratorSet,
        transversals: &[Vec<Elem>],
        describe: impl Fn(EdgeId, &Elem) -> String,
    ) -> Self {
        let mut a = StructureAlphabet {
            kinds: Vec::new(),
            names: Vec::new(),
            images: Vec::new(),
            inverse: Vec::new(),
            by_kind: HashMap::new(),
            by_name: HashMap::new(),
        };
        for (d, e) in edges.iter().enumerate() {
            a.add(
                LetterKind::Edge(d),
                e.name.clone(),
                format!("edge {}", e.name),
            );
        }
        for l in base.all_letters() {
            a.add(
                LetterKind::Base(l),
                base.name(l).to_string(),
                base.name(l).to_string(),
            );
        }
        for (d, t) in transversals.iter().enumerate() {
            for (k, s) in t.iter().enumerate() {
                a.add(
                    LetterKind::Transversal(d, k as u32),
                    format!("{}.{k}", edges[d].name),
                    describe(d, s),
                );
            }
        }
        for (d, e) in edges.iter().enumerate() {
            a.add(
                LetterKind::EdgeInverse(d),
                format!("{}'", e.name),
                format!("edge {}⁻¹", e.name),
            );
        }
        for (d, t) in transversals.iter().enumerate() {
            for (k, s) in t.iter().enumerate() {
                a.add(
                    LetterKind::TransversalInverse(d, k as u32),
                    format!("{}.{k}'", edges[d].name),
                    format!("({})⁻¹", describe(d, s)),
                );
            }
        }
        a.inverse = a
            .kinds
            .iter()
            .map(|k| {
                let inv = match *k {
                    LetterKind::Edge(d) => LetterKind::EdgeInverse(d),
                    LetterKind::EdgeInverse(d) => LetterKind::Edge(d),
                    LetterKind::Base(l) => LetterKind::Base(base.inverse(l)),
                    LetterKind::Transversal(d, k) => LetterKind::TransversalInverse(d, k),
                    LetterKind::TransversalInverse(d, k) => LetterKind::Transversal(d, k),
                };
                a.by_kind[&inv]
            })
            .collect();
        a
    }

    fn add(&mut self, kind: LetterKind, name: String, image: String) {
        let id = self.kinds.len() as Letter;
        self.kinds.push(kind);
        self.by_kind.insert(kind, id);
        self.by_name.entry(name.clone()).or_insert(id);
        self.names.push(name);
        self.images.push(image);
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.kinds.len() as Letter
    }

    pub fn kind(&self, l: Letter) -> LetterKind {
        self.kinds[l as usize]
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.names[l as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Human-readable description of `π_A(l)`.
    pub fn image(&self, l: Letter) -> &str {
        &self.images[l as usize]
    }

    pub fn inverse(&self, l: Letter) -> Letter {
        self.inverse[l as usize]
    }

    pub fn letter(&self, kind: LetterKind) -> Option<Letter> {
        self.by_kind.get(&kind).copied()
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        self.by_name.get(name).copied()
    }

    pub(super) fn duplicate_name(&self) -> Option<&str> {
        self.names
            .iter()
            .enumerate()
            .find(|(i, n)| self.by_name[*n] as usize != *i)
            .map(|(_, n)| n.as_str())
    }

    pub fn is_base(&self, l: Letter) -> bool {
        matches!(self.kinds[l as usize], LetterKind::Base(_))
    }

    /// Parses whitespace-separated letter names; a trailing `'` inverts.
    pub fn parse_word(&self, text: &str) -> crate::Result<Vec<Letter>> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "ε" {
                continue;
            }
            if let Some(l) = self.lookup(tok) {
                out.push(l);
                continue;
            }
            let trimmed = tok.trim_end_matches('\'');
            let primes = tok.len() - trimmed.len();
            match self.lookup(trimmed) {
                Some(l) if primes % 2 == 0 => out.push(l),
                Some(l) => out.push(self.inverse(l)),
                None => return Err(crate::Error::UnknownLetter(tok.to_string())),
            }
        }
        Ok(out)
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "ε".into();
        }
        w.iter()
            .map(|&l| self.name(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn invert_word(&self, w: &[Letter]) -> Vec<Letter> {
        w.iter().rev().map(|&l| self.inverse(l)).collect()
    }
}
