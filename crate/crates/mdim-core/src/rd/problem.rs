use alloc::vec::Vec;

use crate::error::{domain, shape};
use crate::info::{Channel, Distribution};
use crate::Result;

/// Nonnegative finite costs `ρ(x, y)`, rows indexed by source symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionMatrix {
    rows: usize,
    cols: usize,
    d: Vec<f64>,
}

impl DistortionMatrix {
    pub fn new(rows: usize, cols: usize, d: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(crate::Error::Empty("distortion matrix"));
        }
        if d.len() != rows * cols {
            return Err(shape("distortion buffer is not rows×cols"));
        }
        if d.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(domain("distortion entries must be finite and nonnegative"));
        }
        Ok(Self { rows, cols, d })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        if rows.iter().any(|v| v.len() != c) {
            return Err(shape("ragged distortion matrix"));
        }
        Self::new(r, c, rows.concat())
    }

    /// `ρ(x,y) = [x ≠ y]` on `k` symbols.
    pub fn hamming(k: usize) -> Self {
        let mut d = alloc::vec![1.0; k * k];
        for i in 0..k {
            d[i * k + i] = 0.0;
        }
        Self { rows: k, cols: k, d }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.d[x * self.cols + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.d[x * self.cols..(x + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn max_entry(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }
}

/// A source pmf and a distortion matrix whose columns are the
/// reproduction alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct RdProblem {
    pub source: Distribution,
    pub distortion: DistortionMatrix,
}

impl RdProblem {
    pub fn new(source: Distribution, distortion: DistortionMatrix) -> Result<Self> {
        if source.len() != distortion.rows() {
            return Err(shape("source size differs from distortion rows"));
        }
        Ok(Self { source, distortion })
    }

    /// `E ρ` under `source × channel`.
    pub fn expected_distortion(&self, ch: &Channel) -> f64 {
        let mut s = 0.0;
        for x in 0..self.distortion.rows() {
            let px = self.source.get(x);
            if px > 0.0 {
                s += px
                    * ch.row(x)
                        .iter()
                        .zip(self.distortion.row(x))
                        .map(|(w, r)| w * r)
                        .sum::<f64>();
            }
        }
        s
    }

    /// `Σ_x p(x) min_y ρ(x,y)`, the least achievable distortion.
    pub fn min_distortion(&self) -> f64 {
        (0..self.distortion.rows())
            .filter(|&x| self.source.get(x) > 0.0)
            .map(|x| self.source.get(x) * self.distortion.row(x).iter().copied().fold(f64::INFINITY, f64::min))
            .sum()
    }

    /// `min_y Σ_x p(x) ρ(x,y)` and its argmin: the zero-rate threshold.
    pub fn zero_rate_distortion(&self) -> (f64, usize) {
        let costs: Vec<f64> = (0..self.distortion.cols())
            .map(|y| {
                (0..self.distortion.rows())
                    .filter(|&x| self.source.get(x) > 0.0)
                    .map(|x| self.source.get(x) * self.distortion.get(x, y))
                    .sum()
            })
            .collect();
        let y = crate::util::argmin(&costs);
        (costs[y], y)
    }
}

/// Fixed slope `s = −β ≤ 0` or a distortion budget `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RdTarget {
    Slope(f64),
    Distortion(f64),
}

/// Solver controls. `tol` bounds the dual gap at a fixed slope and the
/// width of the `[lower_bound, rate]` bracket for a distortion target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub bisection_depth: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 200_000,
            bisection_depth: 60,
        }
    }
}

/// How a solve ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RdStatus {
    /// Bracket or dual gap below `tol`.
    Converged,
    /// `D` at or above the zero-rate threshold; exact.
    ZeroRate,
    /// Iteration or bisection budget exhausted; best iterate returned.
    NotConverged,
}

/// An achievable `(distortion, rate)` pair with its channel and a lower
/// bound on `R(D)` at the target.
#[derive(Debug, Clone, PartialEq)]
pub struct RdPoint {
    /// The requested budget, or the achieved distortion at a fixed slope.
    pub target: f64,
    /// `E ρ` under the returned channel.
    pub distortion: f64,
    /// `I(source, channel)`, an upper bound on `R(target)`.
    pub rate: f64,
    /// Certified lower bound on `R(target)`.
    pub lower_bound: f64,
    pub channel: Channel,
    /// Slope `s = −β` of the last solve.
    pub slope: f64,
    pub iterations: usize,
    pub status: RdStatus,
}

impl RdPoint {
    pub fn converged(&self) -> bool {
        self.status != RdStatus::NotConverged
    }
}
