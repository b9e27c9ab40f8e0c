use super::{reverse, EdgeId, GraphOfGroups, Letter, LetterKind, VertexId};
use crate::error::{Error, Result};
use crate::group::Elem;

/// One `s·e` pair of a normal form: transversal representative `rep` of
/// `S(edge)` followed by the edge letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub edge: EdgeId,
    pub rep: u32,
}

/// The unique expression `s₁e₁⋯sₙeₙ·h` of a group element, where the edge
/// path is a loop at the base vertex and `h` is a canonical element of the
/// base vertex group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NormalForm {
    pub syllables: Vec<Syllable>,
    pub tail: Elem,
}

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm::default()
    }

    /// Distance in the Bass–Serre tree between the base vertex and its
    /// translate.
    pub fn tree_level(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty() && self.tail.is_empty()
    }
}

/// Reduced path word from the base vertex to `vertex`, with tail in the
/// vertex group at `vertex`. Only loops are exposed as [`NormalForm`].
struct PathForm {
    syllables: Vec<Syllable>,
    vertex: VertexId,
    tail: Elem,
}

impl GraphOfGroups {
    fn open(&self, nf: &NormalForm) -> PathForm {
        PathForm {
            syllables: nf.syllables.clone(),
            vertex: self.base(),
            tail: nf.tail.clone(),
        }
    }

    fn close(&self, p: PathForm) -> NormalForm {
        debug_assert_eq!(p.vertex, self.base());
        NormalForm {
            syllables: p.syllables,
            tail: p.tail,
        }
    }

    fn mul_vertex(&self, p: &mut PathForm, g: &Elem) {
        p.tail = self.group(p.vertex).multiply(&p.tail, g);
    }

    /// Appends edge `f` (with `ι(f)` the current vertex): factor the tail as
    /// `s·i_f(k)`, push `(s, f)` and carry `i_f̄(k)` across, or pinch
    /// `e·i_ē(k)·ē` when `s = 1` and the previous edge is `f̄`.
    fn cross(&self, p: &mut PathForm, f: EdgeId) -> Result<()> {
        debug_assert_eq!(self.origin(f), p.vertex);
        let sub = self.subgroup(f);
        let (k, _, rem) = sub.factor(&p.tail).ok_or_else(|| {
            Error::Internal(format!(
                "cannot factor tail over edge {}",
                self.edge(f).name
            ))
        })?;
        let carried = sub.transport(&rem).ok_or_else(|| {
            Error::Internal(format!(
                "transversal inconsistent on edge {}",
                self.edge(f).name
            ))
        })?;
        let pinch = k == 0 && p.syllables.last().is_some_and(|s| s.edge == reverse(f));
        if pinch {
            let last = p.syllables.pop().expect("checked");
            let v = self.origin(last.edge);
            let s = &self.transversal(last.edge)[last.rep as usize];
            p.tail = self.group(v).multiply(s, &carried);
            p.vertex = v;
        } else {
            p.syllables.push(Syllable {
                edge: f,
                rep: k as u32,
            });
            p.tail = carried;
            p.vertex = self.edge(f).terminus;
        }
        Ok(())
    }

    fn walk_to(&self, p: &mut PathForm, v: VertexId) -> Result<()> {
        for &d in self.tree_path(v) {
            self.cross(p, d)?;
        }
        Ok(())
    }

    fn walk_from(&self, p: &mut PathForm, v: VertexId) -> Result<()> {
        for &d in self.tree_path(v).iter().rev() {
            self.cross(p, reverse(d))?;
        }
        Ok(())
    }

    /// `nf · π_A(letter)`, as a normal form.
    pub fn nf_append(&self, nf: &NormalForm, letter: Letter) -> Result<NormalForm> {
        if letter as usize >= self.alphabet().len() {
            return Err(Error::UnknownLetter(format!("#{letter}")));
        }
        let mut p = self.open(nf);
        match self.alphabet().kind(letter) {
            LetterKind::Base(l) => {
                let g = self.base_group().letter_elem(l);
                self.mul_vertex(&mut p, &g);
            }
            LetterKind::Edge(d) | LetterKind::EdgeInverse(d) => {
                let d = if matches!(self.alphabet().kind(letter), LetterKind::Edge(_)) {
                    d
                } else {
                    reverse(d)
                };
                let (u, w) = (self.origin(d), self.edge(d).terminus);
                self.walk_to(&mut p, u)?;
                self.cross(&mut p, d)?;
                self.walk_from(&mut p, w)?;
            }
            LetterKind::Transversal(d, k) | LetterKind::TransversalInverse(d, k) => {
                let v = self.origin(d);
                let group = self.group(v);
                let s = &self.transversal(d)[k as usize];
                let g = if matches!(self.alphabet().kind(letter), LetterKind::Transversal(..)) {
                    s.clone()
                } else {
                    group.inverse(s)
                };
                self.walk_to(&mut p, v)?;
                self.mul_vertex(&mut p, &g);
                self.walk_from(&mut p, v)?;
            }
        }
        Ok(self.close(p))
    }

    pub fn normalize_word(&self, w: &[Letter]) -> Result<NormalForm> {
        w.iter()
            .try_fold(NormalForm::identity(), |nf, &l| self.nf_append(&nf, l))
    }

    /// The normal form written as a word over `A`: `s₁ e₁ ⋯ sₙ eₙ` followed by
    /// the tail's canonical (geodesic) word over `B`.
    pub fn serialize(&self, nf: &NormalForm) -> Vec<Letter> {
        let a = self.alphabet();
        let mut out = self.serialize_path(nf);
        out.extend(
            nf.tail
                .iter()
                .map(|&l| a.letter(LetterKind::Base(l)).expect("base letter")),
        );
        out
    }

    /// Only the `s₁e₁⋯sₙeₙ` part.
    pub fn serialize_path(&self, nf: &NormalForm) -> Vec<Letter> {
        let a = self.alphabet();
        let mut out = Vec::with_capacity(2 * nf.syllables.len() + nf.tail.len());
        for s in &nf.syllables {
            out.push(
                a.letter(LetterKind::Transversal(s.edge, s.rep))
                    .expect("transversal letter"),
            );
            out.push(a.letter(LetterKind::Edge(s.edge)).expect("edge letter"));
        }
        out
    }

    pub fn nf_multiply(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        self.serialize(b)
            .into_iter()
            .try_fold(a.clone(), |nf, l| self.nf_append(&nf, l))
            .expect("serialized letters are valid")
    }

    pub fn nf_inverse(&self, a: &NormalForm) -> NormalForm {
        let w = self.alphabet().invert_word(&self.serialize(a));
        self.normalize_word(&w).expect("valid letters")
    }

    /// Renders a normal form as `s₁ e₁ ⋯ | tail`.
    pub fn format_nf(&self, nf: &NormalForm) -> String {
        let a = self.alphabet();
        let path = self.serialize_path(nf);
        format!(
            "{} | {}",
            a.format_word(&path),
            self.base_generators().format_word(&nf.tail)
        )
    }

    /// The backtrack condition `sᵢ ≠ 1` whenever `eᵢ₋₁ = ēᵢ`, and the edge path
    /// is a loop at the base vertex.
    pub fn is_reduced(&self, nf: &NormalForm) -> bool {
        let mut v = self.base();
        let mut prev: Option<EdgeId> = None;
        for s in &nf.syllables {
            if self.origin(s.edge) != v {
                return false;
            }
            if s.rep == 0 && prev == Some(reverse(s.edge)) {
                return false;
            }
            prev = Some(s.edge);
            v = self.edge(s.edge).terminus;
        }
        v == self.base()
    }
}

#[cfg(test)]
mod tests {
    use crate::fixtures;

    #[test]
    fn modular_examples() {
        let g = fixtures::load("modular").unwrap();
        let a = g.alphabet();
        assert_eq!(a.len(), 2 + 3 + 5 + 2 + 5);
        let w = a.parse_word("a a").unwrap();
        assert!(g.normalize_word(&w).unwrap().is_identity());
        let w = a.parse_word("e.1 e e~.1 e~").unwrap();
        let nf = g.normalize_word(&w).unwrap();
        assert_eq!(nf.tree_level(), 2);
        assert!(nf.tail.is_empty());
        assert_eq!(g.serialize(&nf), w);
        // the tree edge evaluates to 1
        let w = a.parse_word("e.0 e").unwrap();
        assert!(g.normalize_word(&w).unwrap().is_identity());
    }

    #[test]
    fn bs12_conjugation() {
        let g = fixtures::load("bs12").unwrap();
        let a = g.alphabet();
        let nf = g.normalize_word(&a.parse_word("t' a t").unwrap()).unwrap();
        assert_eq!(nf.tree_level(), 0);
        assert_eq!(g.base_generators().format_word(&nf.tail), "a a");
        let nf = g.normalize_word(&a.parse_word("t a t'").unwrap()).unwrap();
        assert_eq!(nf.tree_level(), 2);
        let back = g
            .normalize_word(&a.parse_word("t a t' t a' t'").unwrap())
            .unwrap();
        assert!(back.is_identity());
    }

    #[test]
    fn inverse_has_same_level() {
        let g = fixtures::load("bs12").unwrap();
        let w = g.alphabet().parse_word("t a t~.1 t~ a t' a").unwrap();
        let nf = g.normalize_word(&w).unwrap();
        let inv = g.nf_inverse(&nf);
        assert_eq!(inv.tree_level(), nf.tree_level());
        assert!(g.nf_multiply(&nf, &inv).is_identity());
        assert!(g.is_reduced(&nf));
    }
}
