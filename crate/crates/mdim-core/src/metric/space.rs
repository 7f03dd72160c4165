use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{domain, shape};
use crate::Result;

/// Points `0..len` with a dense distance matrix and optional labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    d: Vec<f64>,
    labels: Vec<String>,
}

impl FiniteMetricSpace {
    /// Space from a full square matrix. Entries must be finite and
    /// nonnegative; metric axioms are left to [`validate_metric`].
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(crate::Error::Empty("metric space"));
        }
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(shape(alloc::format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, v) in row.into_iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(domain(alloc::format!("entry ({i},{j}) = {v}")));
                }
                d.push(v);
            }
        }
        Ok(Self {
            n,
            d,
            labels: Vec::new(),
        })
    }

    /// Space from a distance function evaluated on every ordered pair.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut d = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                d.push(f(i, j));
            }
        }
        Self {
            n,
            d,
            labels: Vec::new(),
        }
    }

    /// Space from a symmetric distance function, evaluated once per pair.
    pub fn from_symmetric_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut d = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self {
            n,
            d,
            labels: Vec::new(),
        }
    }

    /// Points on the real line with `|a − b|`.
    pub fn line(points: &[f64]) -> Self {
        Self::from_symmetric_fn(points.len(), |i, j| (points[i] - points[j]).abs())
    }

    /// Row-major `n × n` buffer, trusted to be well formed.
    pub fn from_raw(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(shape("distance buffer is not n×n"));
        }
        Ok(Self {
            n,
            d,
            labels: Vec::new(),
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(shape("label count differs from point count"));
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    /// Label of point `i`, or its index when unlabeled.
    pub fn label(&self, i: usize) -> String {
        match self.labels.get(i) {
            Some(l) => l.clone(),
            None => alloc::format!("{i}"),
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// Largest pairwise distance inside `subset`.
    pub fn subset_diameter(&self, subset: &[usize]) -> f64 {
        let mut m = 0.0f64;
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a + 1..] {
                m = m.max(self.dist(i, j)).max(self.dist(j, i));
            }
        }
        m
    }

    /// Induced subspace on `idx` (in the given order).
    pub fn subspace(&self, idx: &[usize]) -> Self {
        let mut s = Self::from_fn(idx.len(), |a, b| self.dist(idx[a], idx[b]));
        if !self.labels.is_empty() {
            s.labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        }
        s
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }
}

/// One failed metric axiom.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Violation {
    Diagonal { i: usize, value: f64 },
    Symmetry { i: usize, j: usize, dij: f64, dji: f64 },
    Triangle { i: usize, j: usize, k: usize, excess: f64 },
}

/// Findings of [`validate_metric`]. Only the first `MAX_LISTED` violations
/// are kept; `total` counts all of them.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MetricReport {
    pub violations: Vec<Violation>,
    pub total: usize,
}

impl MetricReport {
    pub const MAX_LISTED: usize = 1000;

    pub fn is_metric(&self) -> bool {
        self.total == 0
    }

    fn push(&mut self, v: Violation) {
        self.total += 1;
        if self.violations.len() < Self::MAX_LISTED {
            self.violations.push(v);
        }
    }
}

/// Zero diagonal, symmetry and triangle inequality, each up to `tol`.
pub fn validate_metric(space: &FiniteMetricSpace, tol: f64) -> MetricReport {
    let n = space.len();
    let mut rep = MetricReport::default();
    for i in 0..n {
        let v = space.dist(i, i);
        if v.abs() > tol {
            rep.push(Violation::Diagonal { i, value: v });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (space.dist(i, j), space.dist(j, i));
            if (a - b).abs() > tol {
                rep.push(Violation::Symmetry {
                    i,
                    j,
                    dij: a,
                    dji: b,
                });
            }
        }
    }
    for i in 0..n {
        let ri = space.row(i);
        for j in 0..n {
            let dij = ri[j];
            let rj = space.row(j);
            for k in 0..n {
                let excess = ri[k] - (dij + rj[k]);
                if excess > tol {
                    rep.push(Violation::Triangle { i, j, k, excess });
                }
            }
        }
    }
    rep
}
