use alloc::vec::Vec;

use super::bits::{self, Mask};
use super::separated::greedy_separated;
use super::{FiniteMetricSpace, Mode, SearchOptions, MAX_EXACT_POINTS};
use crate::tol::Threshold;
use crate::{Error, Result};

/// Blocks of diameter `< epsilon` whose union is the whole space.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoverCertificate {
    pub epsilon: f64,
    pub blocks: Vec<Vec<usize>>,
}

/// Why a certificate was rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum CoverDefect {
    Uncovered(usize),
    OutOfRange(usize),
    WideBlock { block: usize, diameter: f64 },
}

impl CoverCertificate {
    /// Checks coverage and every block diameter against `epsilon`.
    pub fn verify(&self, space: &FiniteMetricSpace, th: Threshold) -> core::result::Result<(), CoverDefect> {
        let n = space.len();
        let mut seen = alloc::vec![false; n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                if i >= n {
                    return Err(CoverDefect::OutOfRange(i));
                }
                seen[i] = true;
            }
            for (a, &i) in block.iter().enumerate() {
                for &j in &block[a + 1..] {
                    let d = space.dist(i, j);
                    if !th.lt(d, self.epsilon) {
                        return Err(CoverDefect::WideBlock {
                            block: b,
                            diameter: space.subset_diameter(block),
                        });
                    }
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(i) => Err(CoverDefect::Uncovered(i)),
            None => Ok(()),
        }
    }
}

/// Count and witness returned by [`covering_number`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoverResult {
    pub count: usize,
    pub mode: Mode,
    pub certificate: CoverCertificate,
}

/// `#(X,d,ε)`: exact minimum in [`Mode::Exact`], an upper bound in
/// [`Mode::Greedy`]. The certificate blocks are pairwise disjoint.
pub fn covering_number(
    space: &FiniteMetricSpace,
    epsilon: f64,
    mode: Mode,
    opts: &SearchOptions,
) -> Result<CoverResult> {
    if !(epsilon > 0.0) {
        return Err(crate::error::domain("epsilon must be positive"));
    }
    let th = opts.threshold;
    let blocks = match mode {
        Mode::Greedy => greedy_cover(space, epsilon, th),
        Mode::Exact => {
            let limit = opts.cover_exact_limit.min(MAX_EXACT_POINTS);
            if space.len() > limit {
                return Err(Error::ExactLimit {
                    what: "exact covering number",
                    size: space.len(),
                    limit,
                });
            }
            exact_cover(space, epsilon, th)
        }
    };
    let packing = greedy_separated(space, epsilon, th).len();
    assert!(
        blocks.len() >= packing,
        "cover of size {} below separated set of size {packing}",
        blocks.len()
    );
    Ok(CoverResult {
        count: blocks.len(),
        mode,
        certificate: CoverCertificate { epsilon, blocks },
    })
}

/// Index-order scan: open a block at the first uncovered point, then admit
/// each later uncovered point that is `< ε` from every member.
pub(crate) fn greedy_cover(space: &FiniteMetricSpace, eps: f64, th: Threshold) -> Vec<Vec<usize>> {
    let n = space.len();
    let mut covered = alloc::vec![false; n];
    let mut blocks = Vec::new();
    for p in 0..n {
        if covered[p] {
            continue;
        }
        covered[p] = true;
        let mut block = alloc::vec![p];
        for q in p + 1..n {
            if !covered[q] && block.iter().all(|&m| th.lt(space.dist(q, m), eps)) {
                covered[q] = true;
                block.push(q);
            }
        }
        blocks.push(block);
    }
    blocks
}

fn exact_cover(space: &FiniteMetricSpace, eps: f64, th: Threshold) -> Vec<Vec<usize>> {
    let n = space.len();
    if n == 0 {
        return Vec::new();
    }
    let adj: Vec<Mask> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && th.lt(space.dist(i, j), eps) && th.lt(space.dist(j, i), eps))
                .fold(0, |m, j| m | bits::bit(j))
        })
        .collect();
    let cliques = bits::maximal_cliques(&adj);
    let mut containing: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for (c, &m) in cliques.iter().enumerate() {
        for i in bits::members(m) {
            containing[i].push(c);
        }
    }
    let greedy = greedy_cover(space, eps, th);
    let mut search = SetCover {
        adj: &adj,
        cliques: &cliques,
        containing: &containing,
        best: None,
        best_len: greedy.len(),
        chosen: Vec::new(),
    };
    search.run(bits::full(n));
    match search.best {
        None => greedy,
        Some(chosen) => {
            // Turn the chosen cliques into a partition.
            let mut left = bits::full(n);
            let mut blocks = Vec::with_capacity(chosen.len());
            for c in chosen {
                let b = cliques[c] & left;
                left &= !b;
                if b != 0 {
                    blocks.push(bits::to_vec(b));
                }
            }
            blocks
        }
    }
}

struct SetCover<'a> {
    adj: &'a [Mask],
    cliques: &'a [Mask],
    containing: &'a [Vec<usize>],
    best: Option<Vec<usize>>,
    best_len: usize,
    chosen: Vec<usize>,
}

impl SetCover<'_> {
    /// Uncovered points that pairwise share no block each need their own.
    fn lower_bound(&self, uncovered: Mask) -> usize {
        let mut rest = uncovered;
        let mut k = 0;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= !bits::bit(i) & !self.adj[i];
            k += 1;
        }
        k
    }

    fn run(&mut self, uncovered: Mask) {
        if uncovered == 0 {
            if self.chosen.len() < self.best_len {
                self.best_len = self.chosen.len();
                self.best = Some(self.chosen.clone());
            }
            return;
        }
        if self.chosen.len() + self.lower_bound(uncovered) >= self.best_len {
            return;
        }
        // Branch on the uncovered point with the fewest candidate blocks.
        let e = bits::members(uncovered)
            .min_by_key(|&i| self.containing[i].len())
            .unwrap();
        let mut opts: Vec<usize> = self.containing[e].clone();
        opts.sort_by_key(|&c| core::cmp::Reverse((self.cliques[c] & uncovered).count_ones()));
        for c in opts {
            self.chosen.push(c);
            self.run(uncovered & !self.cliques[c]);
            self.chosen.pop();
        }
    }
}
