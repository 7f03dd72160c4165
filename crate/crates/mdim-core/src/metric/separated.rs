use alloc::vec::Vec;

use super::bits::{self, Mask};
use super::{FiniteMetricSpace, Mode, SearchOptions, MAX_EXACT_POINTS};
use crate::tol::Threshold;
use crate::{Error, Result};

/// Points pairwise at distance `≥ delta`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeparatedCertificate {
    pub delta: f64,
    pub members: Vec<usize>,
}

impl SeparatedCertificate {
    /// First offending pair, if any.
    pub fn verify(&self, space: &FiniteMetricSpace, th: Threshold) -> core::result::Result<(), (usize, usize)> {
        for (a, &i) in self.members.iter().enumerate() {
            if i >= space.len() {
                return Err((i, i));
            }
            for &j in &self.members[a + 1..] {
                if i == j || !th.ge(space.dist(i, j), self.delta) || !th.ge(space.dist(j, i), self.delta) {
                    return Err((i, j));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Maximum `δ`-separated set in [`Mode::Exact`]; in [`Mode::Greedy`] an
/// index-order scan that keeps a point when it is `≥ δ` from all kept ones,
/// which is maximal by inclusion.
pub fn max_separated_set(
    space: &FiniteMetricSpace,
    delta: f64,
    mode: Mode,
    opts: &SearchOptions,
) -> Result<SeparatedCertificate> {
    if !(delta > 0.0) {
        return Err(crate::error::domain("delta must be positive"));
    }
    let th = opts.threshold;
    let members = match mode {
        Mode::Greedy => greedy_separated(space, delta, th),
        Mode::Exact => {
            let limit = opts.packing_exact_limit.min(MAX_EXACT_POINTS);
            if space.len() > limit {
                return Err(Error::ExactLimit {
                    what: "exact separated set",
                    size: space.len(),
                    limit,
                });
            }
            exact_separated(space, delta, th)
        }
    };
    Ok(SeparatedCertificate { delta, members })
}

pub(crate) fn greedy_separated(space: &FiniteMetricSpace, delta: f64, th: Threshold) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for p in 0..space.len() {
        if kept
            .iter()
            .all(|&k| th.ge(space.dist(p, k), delta) && th.ge(space.dist(k, p), delta))
        {
            kept.push(p);
        }
    }
    kept
}

fn exact_separated(space: &FiniteMetricSpace, delta: f64, th: Threshold) -> Vec<usize> {
    let n = space.len();
    // Conflict graph: pairs closer than delta.
    let conflict: Vec<Mask> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && !(th.ge(space.dist(i, j), delta) && th.ge(space.dist(j, i), delta)))
                .fold(0, |m, j| m | bits::bit(j))
        })
        .collect();
    let seed = greedy_separated(space, delta, th);
    let mut s = Mis {
        conflict: &conflict,
        best: seed.iter().fold(0, |m, &i| m | bits::bit(i)),
        best_len: seed.len() as u32,
    };
    s.run(bits::full(n), 0);
    bits::to_vec(s.best)
}

struct Mis<'a> {
    conflict: &'a [Mask],
    best: Mask,
    best_len: u32,
}

impl Mis<'_> {
    fn run(&mut self, cand: Mask, taken: Mask) {
        let size = taken.count_ones();
        if cand == 0 {
            if size > self.best_len {
                self.best_len = size;
                self.best = taken;
            }
            return;
        }
        if size + colour_bound(self.conflict, cand) <= self.best_len {
            return;
        }
        let v = bits::members(cand)
            .max_by_key(|&u| (self.conflict[u] & cand).count_ones())
            .unwrap();
        if self.conflict[v] & cand == 0 {
            // No conflicts left among the candidates.
            self.run(0, taken | cand);
            return;
        }
        self.run(cand & !bits::bit(v) & !self.conflict[v], taken | bits::bit(v));
        self.run(cand & !bits::bit(v), taken);
    }
}

/// Greedy clique partition of the conflict graph on `cand`; an independent
/// set meets each clique at most once.
fn colour_bound(conflict: &[Mask], cand: Mask) -> u32 {
    let mut rest = cand;
    let mut k = 0;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        let mut clique = bits::bit(i);
        let mut pool = rest & conflict[i];
        while pool != 0 {
            let j = pool.trailing_zeros() as usize;
            clique |= bits::bit(j);
            pool &= conflict[j] & !bits::bit(j);
        }
        rest &= !clique;
        k += 1;
    }
    k
}
