use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::gog::{GraphOfGroups, Letter, LetterKind, NormalForm};
use crate::group::geodesic_words;

/// A ball in the Cayley graph of `Γ` with respect to `A`, built by
/// breadth-first search through `nf_append`.
#[derive(Debug, Clone)]
pub struct GammaBall {
    radius: usize,
    elements: Vec<NormalForm>,
    dist: Vec<u32>,
    index: HashMap<NormalForm, u32>,
}

impl GammaBall {
    pub fn new(g: &GraphOfGroups, radius: usize, cap: usize) -> Result<Self> {
        let id = NormalForm::identity();
        let mut ball = GammaBall {
            radius,
            elements: vec![id.clone()],
            dist: vec![0],
            index: HashMap::from([(id, 0)]),
        };
        let letters: Vec<Letter> = g.alphabet().letters().collect();
        let mut queue = VecDeque::from([0u32]);
        while let Some(i) = queue.pop_front() {
            let d = ball.dist[i as usize];
            if d as usize == radius {
                continue;
            }
            let x = ball.elements[i as usize].clone();
            for &l in &letters {
                let y = g.nf_append(&x, l)?;
                if ball.index.contains_key(&y) {
                    continue;
                }
                if ball.elements.len() >= cap {
                    return Err(Error::Capacity {
                        what: format!("Cayley ball of radius {radius}"),
                        limit: cap,
                    });
                }
                let j = ball.elements.len() as u32;
                ball.index.insert(y.clone(), j);
                ball.elements.push(y);
                ball.dist.push(d + 1);
                queue.push_back(j);
            }
        }
        Ok(ball)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[NormalForm] {
        &self.elements
    }

    /// `d_A(1, g)`, or `None` when `g` lies outside the ball.
    pub fn distance(&self, g: &NormalForm) -> Option<usize> {
        self.index.get(g).map(|&i| self.dist[i as usize] as usize)
    }

    pub fn index_of(&self, g: &NormalForm) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    pub fn distance_at(&self, i: usize) -> usize {
        self.dist[i] as usize
    }

    /// Elements at distance at most `r`, in BFS order.
    pub fn within(&self, r: usize) -> impl Iterator<Item = &NormalForm> {
        self.elements
            .iter()
            .zip(&self.dist)
            .take_while(move |(_, &d)| d as usize <= r)
            .map(|(x, _)| x)
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius + 1];
        for &d in &self.dist {
            sizes[d as usize] += 1;
        }
        sizes
    }
}

/// Base-letter word over `A` for a word over `B`.
pub fn lift_base_word(g: &GraphOfGroups, w: &[crate::group::LetterId]) -> Vec<Letter> {
    w.iter()
        .map(|&l| {
            g.alphabet()
                .letter(LetterKind::Base(l))
                .expect("base letter")
        })
        .collect()
}

/// Every word of the normal-form language representing `nf`: the serialized
/// edge path followed by each geodesic word of the tail, shortlex ordered.
pub fn language_words(g: &GraphOfGroups, nf: &NormalForm) -> Vec<Vec<Letter>> {
    let path = g.serialize_path(nf);
    geodesic_words(g.base_group().as_ref(), &nf.tail)
        .into_iter()
        .map(|t| {
            let mut w = path.clone();
            w.extend(lift_base_word(g, &t));
            w
        })
        .collect()
}

/// Images of all prefixes of `w`, starting with the identity.
pub fn prefix_images(g: &GraphOfGroups, w: &[Letter]) -> Result<Vec<NormalForm>> {
    let mut out = Vec::with_capacity(w.len() + 1);
    out.push(NormalForm::identity());
    for &l in w {
        let next = g.nf_append(out.last().expect("nonempty"), l)?;
        out.push(next);
    }
    Ok(out)
}
