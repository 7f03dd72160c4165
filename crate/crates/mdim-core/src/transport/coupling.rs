use alloc::vec::Vec;

use crate::error::{domain, shape};
use crate::info::Joint;
use crate::metric::FiniteMetricSpace;
use crate::tol::STRUCTURAL;
use crate::util::sum;
use crate::Result;

/// A joint pmf on `A × B` with its declared marginals.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Coupling {
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    /// Row-major `first.len() × second.len()`.
    pub plan: Vec<f64>,
}

impl Coupling {
    /// Checks that row and column sums match the declared marginals to
    /// [`STRUCTURAL`].
    pub fn new(plan: Vec<f64>, first: Vec<f64>, second: Vec<f64>) -> Result<Self> {
        if plan.len() != first.len() * second.len() {
            return Err(shape("plan is not |first|×|second|"));
        }
        if plan.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(domain("plan entries must be finite and nonnegative"));
        }
        let c = Self { first, second, plan };
        let err = c.marginal_error();
        if err > STRUCTURAL {
            return Err(domain(alloc::format!("plan marginals off by {err}")));
        }
        Ok(c)
    }

    /// Declares the joint's own marginals.
    pub fn from_joint(j: &Joint) -> Self {
        Self {
            first: j.marginal_x(),
            second: j.marginal_y(),
            plan: j.probs().to_vec(),
        }
    }

    pub(crate) fn from_parts_unchecked(plan: Vec<f64>, first: Vec<f64>, second: Vec<f64>) -> Self {
        Self { first, second, plan }
    }

    pub fn rows(&self) -> usize {
        self.first.len()
    }

    pub fn cols(&self) -> usize {
        self.second.len()
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.plan[a * self.second.len() + b]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.plan.chunks(self.cols()).map(sum).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.cols())
            .map(|b| {
                let col: Vec<f64> = (0..self.rows()).map(|a| self.get(a, b)).collect();
                sum(&col)
            })
            .collect()
    }

    /// Largest deviation of a row or column sum from its marginal.
    pub fn marginal_error(&self) -> f64 {
        let r = self.row_sums().into_iter().zip(&self.first).map(|(a, b)| (a - b).abs());
        let c = self.col_sums().into_iter().zip(&self.second).map(|(a, b)| (a - b).abs());
        r.chain(c).fold(0.0, f64::max)
    }

    /// `∫ d dπ` on a square coupling over `space`.
    pub fn cost(&self, space: &FiniteMetricSpace) -> Result<f64> {
        if self.rows() != space.len() || self.cols() != space.len() {
            return Err(shape("coupling and space sizes differ"));
        }
        let terms: Vec<f64> = (0..self.rows())
            .flat_map(|a| (0..self.cols()).map(move |b| (a, b)))
            .map(|(a, b)| self.get(a, b) * space.dist(a, b))
            .collect();
        Ok(sum(&terms))
    }

    pub fn to_joint(&self) -> Joint {
        Joint::from_parts_unchecked(self.rows(), self.cols(), self.plan.clone())
    }
}

/// `τ'(x, y) = Σ_{x'} π(x, x') τ(y | x')` where `τ(·|x')` is `τ`
/// conditioned on its first coordinate; rows of `τ` with `ν(x') = 0` are
/// never used.
pub fn compose_couplings(pi: &Coupling, tau: &Joint) -> Result<Joint> {
    if pi.cols() != tau.nx() {
        return Err(shape("coupling target and joint source differ in size"));
    }
    let nu = tau.marginal_x();
    let err = pi
        .col_sums()
        .iter()
        .zip(&nu)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if err > STRUCTURAL {
        return Err(domain(alloc::format!("second marginal of π differs from τ's first by {err}")));
    }
    let (nx, ny) = (pi.rows(), tau.ny());
    let mut out = alloc::vec![0.0; nx * ny];
    for x in 0..nx {
        for (xp, &m) in nu.iter().enumerate() {
            let w = pi.get(x, xp);
            if m <= 0.0 || w == 0.0 {
                continue;
            }
            for y in 0..ny {
                out[x * ny + y] += w * tau.get(xp, y) / m;
            }
        }
    }
    Joint::new(nx, ny, out)
}

/// Off-diagonal mass of a square plan against the entrywise bound
/// `π(a, b) ≤ W / d(a, b)` that holds for optimal plans.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalReport {
    pub off_diagonal_mass: f64,
    /// `∫ d dπ`; equals `W` when the plan is optimal.
    pub cost: f64,
    pub min_positive_distance: f64,
    /// `cost / min_positive_distance`, a bound on the off-diagonal mass.
    pub mass_bound: f64,
    /// `min_{a≠b} (cost/d(a,b) − π(a,b))`; nonnegative for any plan.
    pub worst_entry_slack: f64,
}

pub fn diagonal_mass_gap(plan: &Coupling, space: &FiniteMetricSpace) -> Result<DiagonalReport> {
    let cost = plan.cost(space)?;
    let k = space.len();
    let mut off = Vec::new();
    let mut min_d = f64::INFINITY;
    let mut worst = f64::INFINITY;
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let d = space.dist(a, b);
            let v = plan.get(a, b);
            off.push(v);
            if d > 0.0 {
                min_d = min_d.min(d);
                worst = worst.min(cost / d - v);
            }
        }
    }
    Ok(DiagonalReport {
        off_diagonal_mass: sum(&off),
        cost,
        min_positive_distance: min_d,
        mass_bound: if min_d.is_finite() { cost / min_d } else { 0.0 },
        worst_entry_slack: if worst.is_finite() { worst } else { 0.0 },
    })
}
