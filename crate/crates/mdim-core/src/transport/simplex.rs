use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::coupling::Coupling;
use crate::error::{domain, shape};
use crate::metric::FiniteMetricSpace;
use crate::tol::STRUCTURAL;
use crate::util::sum;
use crate::{Error, Result};

/// Largest support handled by the exact solver.
pub const MAX_SUPPORT: usize = 512;

/// Optimal plan with dual potentials `u`, `v` satisfying
/// `u_i + v_j ≤ c_ij` and `Σ a_i u_i + Σ b_j v_j = cost` at optimality.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportSolution {
    pub cost: f64,
    pub plan: Coupling,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub pivots: usize,
}

impl TransportSolution {
    /// Largest violation of `u_i + v_j ≤ c_ij`.
    pub fn dual_infeasibility(&self, c: &dyn Fn(usize, usize) -> f64) -> f64 {
        let mut worst = 0.0f64;
        for (i, ui) in self.u.iter().enumerate() {
            for (j, vj) in self.v.iter().enumerate() {
                worst = worst.max(ui + vj - c(i, j));
            }
        }
        worst
    }

    /// `|primal − dual|` objective difference.
    pub fn duality_gap(&self) -> f64 {
        let du: Vec<f64> = self
            .u
            .iter()
            .zip(&self.plan.first)
            .map(|(u, a)| u * a)
            .chain(self.v.iter().zip(&self.plan.second).map(|(v, b)| v * b))
            .collect();
        (self.cost - sum(&du)).abs()
    }
}

/// `W(μ, ν) = min_π ∫ d dπ` over couplings of `μ` and `ν` on `space`.
pub fn wasserstein1(mu: &[f64], nu: &[f64], space: &FiniteMetricSpace) -> Result<TransportSolution> {
    if mu.len() != space.len() || nu.len() != space.len() {
        return Err(shape("measures and space differ in size"));
    }
    transport(mu, nu, &|i, j| space.dist(i, j))
}

/// Balanced transportation problem `min Σ c_ij x_ij` with row sums `a` and
/// column sums `b`, by the transportation simplex.
pub fn transport(a: &[f64], b: &[f64], c: &dyn Fn(usize, usize) -> f64) -> Result<TransportSolution> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("marginals"));
    }
    if a.iter().chain(b).any(|v| !v.is_finite() || *v < 0.0) {
        return Err(domain("marginals must be finite and nonnegative"));
    }
    let (sa, sb) = (sum(a), sum(b));
    if (sa - sb).abs() > STRUCTURAL * sa.max(1.0) {
        return Err(domain(alloc::format!("marginal totals differ: {sa} vs {sb}")));
    }
    // Work on the supports; zero-mass rows and columns carry no flow.
    let rows: Vec<usize> = (0..a.len()).filter(|&i| a[i] > 0.0).collect();
    let cols: Vec<usize> = (0..b.len()).filter(|&j| b[j] > 0.0).collect();
    if rows.len() > MAX_SUPPORT || cols.len() > MAX_SUPPORT {
        return Err(Error::Budget {
            what: "transport support",
            needed: rows.len().max(cols.len()) as u128,
            budget: MAX_SUPPORT as u128,
        });
    }
    let mut plan = alloc::vec![0.0; a.len() * b.len()];
    let (mut u, mut v) = (alloc::vec![0.0; a.len()], alloc::vec![0.0; b.len()]);
    let mut pivots = 0;
    if !rows.is_empty() && !cols.is_empty() {
        let ra: Vec<f64> = rows.iter().map(|&i| a[i]).collect();
        let cb: Vec<f64> = cols.iter().map(|&j| b[j]).collect();
        let cost = |i: usize, j: usize| c(rows[i], cols[j]);
        let sol = Simplex::new(&ra, &cb).solve(&cost)?;
        pivots = sol.pivots;
        for (&(i, j), &x) in sol.basis.iter().zip(&sol.flow) {
            plan[rows[i] * b.len() + cols[j]] = x;
        }
        for (k, &i) in rows.iter().enumerate() {
            u[i] = sol.u[k];
        }
        for (k, &j) in cols.iter().enumerate() {
            v[j] = sol.v[k];
        }
    }
    // Potentials off the support: the largest values keeping u + v ≤ c.
    for j in 0..b.len() {
        if b[j] <= 0.0 {
            v[j] = rows.iter().map(|&i| c(i, j) - u[i]).fold(f64::INFINITY, f64::min);
            if !v[j].is_finite() {
                v[j] = 0.0;
            }
        }
    }
    for i in 0..a.len() {
        if a[i] <= 0.0 {
            u[i] = (0..b.len()).map(|j| c(i, j) - v[j]).fold(f64::INFINITY, f64::min);
        }
    }
    let terms: Vec<f64> = plan
        .iter()
        .enumerate()
        .filter(|(_, x)| **x != 0.0)
        .map(|(k, x)| x * c(k / b.len(), k % b.len()))
        .collect();
    Ok(TransportSolution {
        cost: sum(&terms),
        plan: Coupling::from_parts_unchecked(plan, a.to_vec(), b.to_vec()),
        u,
        v,
        pivots,
    })
}

struct Simplex {
    m: usize,
    n: usize,
    /// Basic cells; always `m + n − 1` of them forming a spanning tree of
    /// the bipartite row/column graph.
    basis: Vec<(usize, usize)>,
    flow: Vec<f64>,
}

struct Solved {
    basis: Vec<(usize, usize)>,
    flow: Vec<f64>,
    u: Vec<f64>,
    v: Vec<f64>,
    pivots: usize,
}

impl Simplex {
    /// Northwest-corner start.
    fn new(a: &[f64], b: &[f64]) -> Self {
        let (m, n) = (a.len(), b.len());
        let (mut ra, mut rb) = (a.to_vec(), b.to_vec());
        let mut basis = Vec::with_capacity(m + n - 1);
        let mut flow = Vec::with_capacity(m + n - 1);
        let (mut i, mut j) = (0, 0);
        loop {
            let x = ra[i].min(rb[j]).max(0.0);
            basis.push((i, j));
            flow.push(x);
            ra[i] -= x;
            rb[j] -= x;
            if i == m - 1 && j == n - 1 {
                break;
            }
            if j == n - 1 || (i < m - 1 && ra[i] <= rb[j]) {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Rounding leftovers land on the last cell, which is in both the
        // last row and the last column.
        let last = flow.len() - 1;
        flow[last] = (flow[last] + ra[m - 1].max(rb[n - 1])).max(0.0);
        Self { m, n, basis, flow }
    }

    /// Node ids: rows `0..m`, columns `m..m+n`.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = alloc::vec![Vec::new(); self.m + self.n];
        for (k, &(i, j)) in self.basis.iter().enumerate() {
            adj[i].push((self.m + j, k));
            adj[self.m + j].push((i, k));
        }
        adj
    }

    fn potentials(&self, adj: &[Vec<(usize, usize)>], c: &dyn Fn(usize, usize) -> f64) -> (Vec<f64>, Vec<f64>) {
        let mut pot = alloc::vec![f64::NAN; self.m + self.n];
        pot[0] = 0.0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(node) = queue.pop_front() {
            for &(next, k) in &adj[node] {
                if pot[next].is_nan() {
                    let (i, j) = self.basis[k];
                    // u_i + v_j = c_ij on basic cells.
                    pot[next] = c(i, j) - pot[node];
                    queue.push_back(next);
                }
            }
        }
        (pot[..self.m].to_vec(), pot[self.m..].to_vec())
    }

    /// Basic cells on the tree path from row `i` to column `j`, in order.
    fn path(&self, adj: &[Vec<(usize, usize)>], i: usize, j: usize) -> Vec<usize> {
        let target = self.m + j;
        let mut parent: Vec<Option<(usize, usize)>> = alloc::vec![None; self.m + self.n];
        let mut seen = alloc::vec![false; self.m + self.n];
        seen[i] = true;
        let mut queue = VecDeque::from([i]);
        while let Some(node) = queue.pop_front() {
            if node == target {
                break;
            }
            for &(next, k) in &adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, k));
                    queue.push_back(next);
                }
            }
        }
        let mut cells = Vec::new();
        let mut node = target;
        while let Some((prev, k)) = parent[node] {
            cells.push(k);
            node = prev;
        }
        cells.reverse();
        cells
    }

    fn solve(mut self, c: &dyn Fn(usize, usize) -> f64) -> Result<Solved> {
        let scale = (0..self.m)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .map(|(i, j)| c(i, j).abs())
            .fold(1.0, f64::max);
        let eps = 1e-12 * scale;
        let cap = 50 * (self.m + self.n) * (self.m + self.n) + 1000;
        let mut degenerate_run = 0;
        let mut pivots = 0;
        loop {
            let adj = self.adjacency();
            let (u, v) = self.potentials(&adj, c);
            let in_basis = {
                let mut b = alloc::vec![false; self.m * self.n];
                for &(i, j) in &self.basis {
                    b[i * self.n + j] = true;
                }
                b
            };
            // Dantzig's rule, or Bland's (first improving cell) after a run
            // of degenerate pivots, which rules out cycling.
            let bland = degenerate_run > self.m + self.n;
            let mut enter = None;
            let mut best = -eps;
            'scan: for i in 0..self.m {
                for j in 0..self.n {
                    if in_basis[i * self.n + j] {
                        continue;
                    }
                    let r = c(i, j) - u[i] - v[j];
                    if r < best {
                        enter = Some((i, j));
                        if bland {
                            break 'scan;
                        }
                        best = r;
                    }
                }
            }
            let Some((ei, ej)) = enter else {
                return Ok(Solved {
                    basis: self.basis,
                    flow: self.flow,
                    u,
                    v,
                    pivots,
                });
            };
            if pivots >= cap {
                return Err(domain("transportation simplex exceeded its pivot cap"));
            }
            // Cycle: entering cell (+), then the tree path from column ej
            // back to row ei alternates (−, +, …).
            let path = self.path(&adj, ei, ej);
            let mut minus: Vec<usize> = Vec::new();
            let mut plus: Vec<usize> = Vec::new();
            for (s, &k) in path.iter().rev().enumerate() {
                if s % 2 == 0 {
                    minus.push(k);
                } else {
                    plus.push(k);
                }
            }
            let (mut leave, mut theta) = (minus[0], self.flow[minus[0]]);
            for &k in &minus[1..] {
                let f = self.flow[k];
                if f < theta || (f == theta && bland && self.basis[k] < self.basis[leave]) {
                    leave = k;
                    theta = f;
                }
            }
            for &k in &minus {
                self.flow[k] = (self.flow[k] - theta).max(0.0);
            }
            for &k in &plus {
                self.flow[k] += theta;
            }
            self.basis[leave] = (ei, ej);
            self.flow[leave] = theta;
            degenerate_run = if theta == 0.0 { degenerate_run + 1 } else { 0 };
            pivots += 1;
        }
    }
}
