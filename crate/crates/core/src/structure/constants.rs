use rayon::prelude::*;

use super::ball::{language_words, prefix_images, GammaBall};
use super::language::LanguageFsa;
use crate::error::{Error, Result};
use crate::gog::{GraphOfGroups, Letter, NormalForm};

/// `η`, `ζ` and the measured fellow-traveller constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    pub eta: usize,
    pub zeta: usize,
    pub kappa: usize,
    pub check_length: usize,
    /// `kappa_by_length[n]`: the measured constant over pairs of words of
    /// length at most `n`.
    pub kappa_by_length: Vec<usize>,
}

/// Largest tree displacement `d_T(c̃, a·c̃)` of a letter.
pub fn compute_eta(g: &GraphOfGroups) -> usize {
    g.alphabet()
        .letters()
        .map(|l| {
            g.nf_append(&NormalForm::identity(), l)
                .expect("letter")
                .tree_level()
        })
        .max()
        .unwrap_or(0)
}

/// `ζ = max(4η + 1, max d_B(1, h))` over `h ∈ Γ_c` with `d_A(1, h) ≤ 4η + 1`.
pub fn compute_zeta(g: &GraphOfGroups, eta: usize, cap: usize) -> Result<usize> {
    let r = 4 * eta + 1;
    let ball = GammaBall::new(g, r, cap)?;
    let base = g.base_group();
    let max_tail = ball
        .elements()
        .iter()
        .filter(|nf| nf.tree_level() == 0)
        .map(|nf| base.length(&nf.tail))
        .max()
        .unwrap_or(0);
    Ok(max_tail.max(r))
}

/// Fellow-traveller measurement over pairs of language words of length at
/// most `max_len` whose images differ by at most one letter.
#[derive(Debug, Clone, Default)]
pub struct KappaReport {
    pub max_len: usize,
    pub by_length: Vec<usize>,
    pub pairs: usize,
    /// A pair realising the maximum.
    pub witness: Option<(Vec<Letter>, Vec<Letter>)>,
    pub ball_radius: usize,
}

impl KappaReport {
    pub fn kappa(&self) -> usize {
        self.by_length.last().copied().unwrap_or(0)
    }

    /// The measured constant did not change between the two largest lengths.
    pub fn stabilized(&self) -> bool {
        let n = self.by_length.len();
        n >= 2 && self.by_length[n - 1] == self.by_length[n - 2]
    }
}

/// Hausdorff distance between the vertex sets of two paths given by their
/// prefix images, or `None` when some needed distance exceeds the ball.
fn hausdorff(
    g: &GraphOfGroups,
    ball: &GammaBall,
    pv: &[NormalForm],
    w: &[Letter],
) -> Option<usize> {
    let n = w.len() + 1;
    let mut col_min = vec![usize::MAX; n];
    let mut worst = 0;
    for x in pv {
        let mut z = g.nf_inverse(x);
        let mut row_min = usize::MAX;
        for j in 0..n {
            if j > 0 {
                z = g.nf_append(&z, w[j - 1]).expect("letter");
            }
            if let Some(d) = ball.distance(&z) {
                row_min = row_min.min(d);
                col_min[j] = col_min[j].min(d);
            }
        }
        if row_min == usize::MAX {
            return None;
        }
        worst = worst.max(row_min);
    }
    if col_min.contains(&usize::MAX) {
        return None;
    }
    Some(worst.max(col_min.into_iter().max().unwrap_or(0)))
}

/// (pair length, distance, index of V, W) for one measured pair.
type PairRecord = (usize, usize, usize, Vec<Letter>);

pub fn measure_kappa(
    g: &GraphOfGroups,
    m: &LanguageFsa,
    max_len: usize,
    cap: usize,
) -> Result<KappaReport> {
    let words = m.fsa.enumerate(max_len, cap)?;
    let letters: Vec<Letter> = g.alphabet().letters().collect();
    let mut radius = 2;
    loop {
        let ball = GammaBall::new(g, radius, cap)?;
        // None on overflow
        let results: Vec<Option<Vec<PairRecord>>> = words
            .par_iter()
            .enumerate()
            .map(|(vi, v)| {
                let pv = prefix_images(g, v).expect("letters");
                let end = pv.last().expect("nonempty");
                let mut out = Vec::new();
                for &x in &letters {
                    let y = g.nf_append(end, x).expect("letter");
                    for w in language_words(g, &y)
                        .into_iter()
                        .filter(|w| w.len() <= max_len)
                    {
                        let d = hausdorff(g, &ball, &pv, &w)?;
                        out.push((v.len().max(w.len()), d, vi, w));
                    }
                }
                Some(out)
            })
            .collect();
        if results.iter().any(Option::is_none) {
            radius += 2;
            if radius > 4 * max_len + 4 {
                return Err(Error::Internal(
                    "Hausdorff distances exceed path lengths".into(),
                ));
            }
            continue;
        }
        let mut report = KappaReport {
            max_len,
            by_length: vec![0; max_len + 1],
            ball_radius: radius,
            ..Default::default()
        };
        let mut best: Option<(usize, usize, Vec<Letter>)> = None;
        for (len, d, vi, w) in results.into_iter().flatten().flatten() {
            report.pairs += 1;
            report.by_length[len] = report.by_length[len].max(d);
            if best.as_ref().is_none_or(|b| d > b.0) {
                best = Some((d, vi, w));
            }
        }
        for n in 1..=max_len {
            report.by_length[n] = report.by_length[n].max(report.by_length[n - 1]);
        }
        report.witness = best.map(|(_, vi, w)| (words[vi].clone(), w));
        return Ok(report);
    }
}

pub fn compute_constants(
    g: &GraphOfGroups,
    m: &LanguageFsa,
    max_len: usize,
    cap: usize,
) -> Result<StructureConstants> {
    if max_len == 0 {
        return Err(Error::Parameter(
            "constants need --max-len at least 1".into(),
        ));
    }
    let eta = compute_eta(g);
    let zeta = compute_zeta(g, eta, cap)?;
    let k = measure_kappa(g, m, max_len, cap)?;
    Ok(StructureConstants {
        eta,
        zeta,
        kappa: k.kappa(),
        check_length: max_len,
        kappa_by_length: k.by_length,
    })
}
