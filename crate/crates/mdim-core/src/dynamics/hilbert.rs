//! Explicit cover and separated-set certificates for the Hilbert cube shift
//! under `d_n`.
//!
//! Both families are far too large to list, so they are verified from their
//! product structure, with sampled members checked against [`orbit_metric`].

use alloc::vec::Vec;
use num_bigint::BigUint;
use rand::Rng;
use rand_core::RngCore;

use super::shift::{pow2neg, HilbertCube, ShiftPoint};
use super::{orbit_metric, OrbitKind};
use crate::tol::Threshold;
use crate::util::{ceil_log2, floor_div};
use crate::Result;

/// Blocks `∏_{m∈W} I_{k_m} × ∏_{m∉W} [0,1]` over the window
/// `W = [−l, n+l]`, `l = ⌈log2(4/ε)⌉`, with open intervals
/// `I_k = ((k−1)ε/12, (k+1)ε/12)`, `0 ≤ k ≤ ⌊12/ε⌋`.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertCover {
    pub epsilon: f64,
    pub n: usize,
    pub l: u32,
    pub intervals: Vec<(f64, f64)>,
}

/// Outcome of [`HilbertCover::verify`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HilbertCoverReport {
    pub intervals_cover_unit: bool,
    /// Supremum of the `d_n`-diameter over all blocks.
    pub diameter_sup: f64,
    pub diameter_ok: bool,
    pub block_count: BigUint,
    pub count_matches_formula: bool,
}

impl HilbertCoverReport {
    pub fn valid(&self) -> bool {
        self.intervals_cover_unit && self.diameter_ok && self.count_matches_formula
    }
}

impl HilbertCover {
    pub fn new(epsilon: f64, n: usize) -> Result<Self> {
        if !(epsilon > 0.0) || n == 0 {
            return Err(crate::error::domain("need epsilon > 0 and n ≥ 1"));
        }
        let l = ceil_log2(4.0 / epsilon);
        let step = epsilon / 12.0;
        // Every interval whose left end lies below 1 meets [0,1].
        let mut intervals = Vec::new();
        let mut k = 0u64;
        while (k as f64 - 1.0) * step < 1.0 {
            intervals.push(((k as f64 - 1.0) * step, (k as f64 + 1.0) * step));
            k += 1;
        }
        Ok(Self {
            epsilon,
            n,
            l,
            intervals,
        })
    }

    /// `(lo, hi)` window indices, inclusive.
    pub fn window(&self) -> (i64, i64) {
        (-(self.l as i64), self.n as i64 + self.l as i64)
    }

    /// Product of the per-coordinate interval counts.
    pub fn block_count(&self) -> BigUint {
        let (lo, hi) = self.window();
        BigUint::from(self.intervals.len()).pow((hi - lo + 1) as u32)
    }

    /// `(1 + ⌊12/ε⌋)^{n+2l+1}`.
    pub fn formula_count(&self) -> BigUint {
        BigUint::from(1 + floor_div(12.0, self.epsilon)).pow(self.n as u32 + 2 * self.l + 1)
    }

    fn max_len(&self) -> f64 {
        self.intervals
            .iter()
            .map(|&(a, b)| b.min(1.0) - a.max(0.0))
            .fold(0.0, f64::max)
    }

    /// Supremum over blocks and pairs of `d_n`: the diameter is monotone in
    /// each interval length, so the widest interval in every window slot and
    /// full spread outside the window attains it.
    pub fn diameter_sup(&self) -> f64 {
        let (lo, hi) = self.window();
        let len = self.max_len();
        (0..self.n as i64)
            .map(|j| {
                let inside: f64 = (lo..=hi).map(|i| pow2neg((i - j).unsigned_abs()) * len).sum();
                // Σ_{i<lo} 2^{−(j−i)} + Σ_{i>hi} 2^{−(i−j)}.
                let tail = pow2neg((j - lo + 1) as u64) * 2.0 + pow2neg((hi - j + 1) as u64) * 2.0;
                inside + tail
            })
            .fold(0.0, f64::max)
    }

    pub fn verify(&self, th: Threshold) -> HilbertCoverReport {
        let mut sorted = self.intervals.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let cover = !sorted.is_empty()
            && sorted[0].0 < 0.0
            && sorted.last().map(|iv| iv.1 > 1.0).unwrap_or(false)
            && sorted.windows(2).all(|w| w[1].0 < w[0].1);
        let sup = self.diameter_sup();
        let count = self.block_count();
        let formula = self.formula_count();
        HilbertCoverReport {
            intervals_cover_unit: cover,
            diameter_sup: sup,
            diameter_ok: th.lt(sup, self.epsilon),
            count_matches_formula: count == formula,
            block_count: count,
        }
    }

    /// Closure corners of a random block: lower interval ends in `x`, upper
    /// ends in `y`, and 0 against 1 for `pad` coordinates beyond each side of
    /// the window.
    pub fn random_corners(&self, rng: &mut dyn RngCore, pad: i64) -> (ShiftPoint, ShiftPoint) {
        let (lo, hi) = self.window();
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in lo - pad..=hi + pad {
            if i < lo || i > hi {
                x.push(0.0);
                y.push(1.0);
            } else {
                let (a, b) = self.intervals[rng.gen_range(0..self.intervals.len())];
                x.push(a.max(0.0));
                y.push(b.min(1.0));
            }
        }
        (
            ShiftPoint {
                start: lo - pad,
                coords: x,
            },
            ShiftPoint {
                start: lo - pad,
                coords: y,
            },
        )
    }

    /// Largest `d_n` between corner pairs of `count` random blocks.
    pub fn sampled_corner_diameter(&self, rng: &mut dyn RngCore, count: usize) -> f64 {
        let mut worst = 0.0f64;
        for _ in 0..count {
            let (x, y) = self.random_corners(rng, 60);
            let d = orbit_metric(&HilbertCube, self.n, &OrbitKind::Max, &x, &y).unwrap_or(f64::INFINITY);
            worst = worst.max(d);
        }
        worst
    }
}

/// Points with `x_m ∈ {0, ε, …, ⌊1/ε⌋ε}` for `0 ≤ m < n` and 0 elsewhere.
/// Distinct members differ by at least `ε` in some coordinate `m < n`, and
/// `d_n(x,y) ≥ d(T^m x, T^m y) ≥ |x_m − y_m|`.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertGrid {
    pub epsilon: f64,
    pub n: usize,
    pub levels: Vec<f64>,
}

/// Outcome of [`HilbertGrid::verify`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HilbertGridReport {
    pub levels_in_unit: bool,
    pub min_level_gap: f64,
    pub gaps_ok: bool,
    pub member_count: BigUint,
    pub count_matches_formula: bool,
}

impl HilbertGridReport {
    pub fn valid(&self) -> bool {
        self.levels_in_unit && self.gaps_ok && self.count_matches_formula
    }
}

impl HilbertGrid {
    pub fn new(epsilon: f64, n: usize) -> Result<Self> {
        if !(epsilon > 0.0) || n == 0 {
            return Err(crate::error::domain("need epsilon > 0 and n ≥ 1"));
        }
        let mut levels = Vec::new();
        let mut k = 0u64;
        while k as f64 * epsilon <= 1.0 {
            levels.push(k as f64 * epsilon);
            k += 1;
        }
        Ok(Self { epsilon, n, levels })
    }

    pub fn member_count(&self) -> BigUint {
        BigUint::from(self.levels.len()).pow(self.n as u32)
    }

    /// `(1 + ⌊1/ε⌋)^n`.
    pub fn formula_count(&self) -> BigUint {
        BigUint::from(1 + floor_div(1.0, self.epsilon)).pow(self.n as u32)
    }

    pub fn verify(&self, th: Threshold) -> HilbertGridReport {
        let gap = self
            .levels
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let count = self.member_count();
        HilbertGridReport {
            levels_in_unit: self.levels.iter().all(|v| (0.0..=1.0).contains(v)),
            min_level_gap: gap,
            gaps_ok: self.levels.len() < 2 || th.ge(gap, self.epsilon),
            count_matches_formula: count == self.formula_count(),
            member_count: count,
        }
    }

    /// Member with level indices `digits` on coordinates `0..n`.
    pub fn member(&self, digits: &[usize]) -> ShiftPoint {
        ShiftPoint {
            start: 0,
            coords: digits.iter().map(|&d| self.levels[d]).collect(),
        }
    }

    /// Smallest `d_n` over `count` random distinct pairs; half of the pairs
    /// differ by one level step in a single coordinate.
    pub fn sampled_min_distance(&self, rng: &mut dyn RngCore, count: usize) -> f64 {
        let k = self.levels.len();
        if k < 2 {
            return f64::INFINITY;
        }
        let mut best = f64::INFINITY;
        for t in 0..count {
            let a: Vec<usize> = (0..self.n).map(|_| rng.gen_range(0..k)).collect();
            let mut b = a.clone();
            if t % 2 == 0 {
                let m = rng.gen_range(0..self.n);
                b[m] = if a[m] + 1 < k { a[m] + 1 } else { a[m] - 1 };
            } else {
                while b == a {
                    b = (0..self.n).map(|_| rng.gen_range(0..k)).collect();
                }
            }
            let d = orbit_metric(&HilbertCube, self.n, &OrbitKind::Max, &self.member(&a), &self.member(&b))
                .unwrap_or(0.0);
            best = best.min(d);
        }
        best
    }
}
