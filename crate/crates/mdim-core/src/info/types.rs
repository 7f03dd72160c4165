use alloc::vec::Vec;

use crate::error::{domain, shape};
use crate::tol::STRUCTURAL;
use crate::util::sum;
use crate::Result;

fn check_pmf(p: &[f64], what: &str) -> Result<()> {
    if p.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(domain(alloc::format!("{what}: negative or non-finite mass")));
    }
    let s = sum(p);
    if (s - 1.0).abs() > STRUCTURAL {
        return Err(domain(alloc::format!("{what}: total mass {s} differs from 1")));
    }
    Ok(())
}

/// A pmf on `0..len`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Distribution {
    p: Vec<f64>,
}

impl Distribution {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(crate::Error::Empty("distribution"));
        }
        check_pmf(&p, "distribution")?;
        Ok(Self { p })
    }

    /// Normalizes nonnegative weights.
    pub fn from_weights(w: &[f64]) -> Result<Self> {
        let s = sum(w);
        if !(s > 0.0) || w.iter().any(|v| *v < 0.0) {
            return Err(domain("weights must be nonnegative with positive sum"));
        }
        Ok(Self {
            p: w.iter().map(|v| v / s).collect(),
        })
    }

    pub fn uniform(k: usize) -> Self {
        Self {
            p: alloc::vec![1.0 / k as f64; k],
        }
    }

    pub fn point(k: usize, at: usize) -> Self {
        let mut p = alloc::vec![0.0; k];
        p[at] = 1.0;
        Self { p }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, i: usize) -> f64 {
        self.p[i]
    }

    /// `(1−t)·self + t·other`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(shape("mixed distributions differ in support size"));
        }
        Ok(Self {
            p: self
                .p
                .iter()
                .zip(&other.p)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect(),
        })
    }
}

/// A pmf on `0..nx × 0..ny`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    nx: usize,
    ny: usize,
    p: Vec<f64>,
}

impl Joint {
    pub fn new(nx: usize, ny: usize, p: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(crate::Error::Empty("joint distribution"));
        }
        if p.len() != nx * ny {
            return Err(shape("joint buffer is not nx×ny"));
        }
        check_pmf(&p, "joint distribution")?;
        Ok(Self { nx, ny, p })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nx = rows.len();
        let ny = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ny) {
            return Err(shape("ragged joint matrix"));
        }
        Self::new(nx, ny, rows.concat())
    }

    /// `μ ⊗ ν`.
    pub fn product(mu: &Distribution, nu: &Distribution) -> Self {
        let mut p = Vec::with_capacity(mu.len() * nu.len());
        for &a in mu.probs() {
            for &b in nu.probs() {
                p.push(a * b);
            }
        }
        Self {
            nx: mu.len(),
            ny: nu.len(),
            p,
        }
    }

    /// `μ(x) ν(y|x)`.
    pub fn from_source_channel(mu: &Distribution, ch: &Channel) -> Result<Self> {
        if mu.len() != ch.inputs() {
            return Err(shape("source and channel input sizes differ"));
        }
        let mut p = Vec::with_capacity(ch.inputs() * ch.outputs());
        for x in 0..ch.inputs() {
            for &w in ch.row(x) {
                p.push(mu.get(x) * w);
            }
        }
        Ok(Self {
            nx: ch.inputs(),
            ny: ch.outputs(),
            p,
        })
    }

    pub(crate) fn from_parts_unchecked(nx: usize, ny: usize, p: Vec<f64>) -> Self {
        Self { nx, ny, p }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.p[x * self.ny + y]
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.p[x * self.ny..(x + 1) * self.ny]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.nx).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        (0..self.nx).map(|x| sum(self.row(x))).collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        let mut m = alloc::vec![0.0; self.ny];
        for x in 0..self.nx {
            for (y, v) in self.row(x).iter().enumerate() {
                m[y] += v;
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut p = Vec::with_capacity(self.p.len());
        for y in 0..self.ny {
            for x in 0..self.nx {
                p.push(self.get(x, y));
            }
        }
        Self {
            nx: self.ny,
            ny: self.nx,
            p,
        }
    }

    /// Source marginal and the channel `P(y|x)`; rows of zero mass become
    /// uniform placeholders.
    pub fn split(&self) -> (Distribution, Channel) {
        let px = self.marginal_x();
        let mut w = Vec::with_capacity(self.p.len());
        for (x, &m) in px.iter().enumerate() {
            if m > 0.0 {
                w.extend(self.row(x).iter().map(|v| v / m));
            } else {
                w.extend(core::iter::repeat(1.0 / self.ny as f64).take(self.ny));
            }
        }
        (
            Distribution { p: px },
            Channel {
                nx: self.nx,
                ny: self.ny,
                w,
            },
        )
    }
}

/// A conditional pmf `ν(y|x)`; every row sums to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    nx: usize,
    ny: usize,
    w: Vec<f64>,
}

impl Channel {
    pub fn new(nx: usize, ny: usize, w: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(crate::Error::Empty("channel"));
        }
        if w.len() != nx * ny {
            return Err(shape("channel buffer is not nx×ny"));
        }
        for x in 0..nx {
            check_pmf(&w[x * ny..(x + 1) * ny], "channel row")?;
        }
        Ok(Self { nx, ny, w })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nx = rows.len();
        let ny = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ny) {
            return Err(shape("ragged channel matrix"));
        }
        Self::new(nx, ny, rows.concat())
    }

    pub(crate) fn from_parts_unchecked(nx: usize, ny: usize, w: Vec<f64>) -> Self {
        Self { nx, ny, w }
    }

    pub fn identity(k: usize) -> Self {
        let mut w = alloc::vec![0.0; k * k];
        for i in 0..k {
            w[i * k + i] = 1.0;
        }
        Self { nx: k, ny: k, w }
    }

    /// Every input mapped to `y`.
    pub fn constant(nx: usize, ny: usize, y: usize) -> Self {
        let mut w = alloc::vec![0.0; nx * ny];
        for x in 0..nx {
            w[x * ny + y] = 1.0;
        }
        Self { nx, ny, w }
    }

    /// Deterministic channel `x ↦ f[x]`.
    pub fn deterministic(f: &[usize], ny: usize) -> Result<Self> {
        if f.iter().any(|&y| y >= ny) {
            return Err(domain("deterministic channel target out of range"));
        }
        let mut w = alloc::vec![0.0; f.len() * ny];
        for (x, &y) in f.iter().enumerate() {
            w[x * ny + y] = 1.0;
        }
        Ok(Self { nx: f.len(), ny, w })
    }

    pub fn inputs(&self) -> usize {
        self.nx
    }

    pub fn outputs(&self) -> usize {
        self.ny
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.w[x * self.ny + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.w[x * self.ny..(x + 1) * self.ny]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.nx).map(|x| self.row(x).to_vec()).collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    /// Largest `|Σ_y ν(y|x) − 1|`.
    pub fn max_row_error(&self) -> f64 {
        (0..self.nx)
            .map(|x| (sum(self.row(x)) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `(1−t)·self + t·other`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if self.nx != other.nx || self.ny != other.ny {
            return Err(shape("mixed channels differ in shape"));
        }
        Ok(Self {
            nx: self.nx,
            ny: self.ny,
            w: self
                .w
                .iter()
                .zip(&other.w)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect(),
        })
    }
}

/// A map sending each symbol to its cell representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMap {
    map: Vec<usize>,
}

impl PartitionMap {
    /// Requires `map[map[i]] = map[i]`.
    pub fn new(map: Vec<usize>) -> Result<Self> {
        if map.iter().any(|&r| r >= map.len() || map[r] != r) {
            return Err(domain("partition map must be idempotent on representatives"));
        }
        Ok(Self { map })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            map: (0..k).collect(),
        }
    }

    pub fn constant(k: usize, rep: usize) -> Result<Self> {
        Self::new(alloc::vec![rep; k])
    }

    /// Partition whose cell ids are `cell[i]`; the representative of a cell
    /// is its smallest member.
    pub fn from_cells(cell: &[usize]) -> Self {
        let mut first: alloc::collections::BTreeMap<usize, usize> = Default::default();
        for (i, &c) in cell.iter().enumerate() {
            first.entry(c).or_insert(i);
        }
        Self {
            map: cell.iter().map(|c| first[c]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }
}

/// A pmf on `0..nx × 0..ny × 0..nz`, index `(x·ny + y)·nz + z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Joint3 {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    p: Vec<f64>,
}

impl Joint3 {
    pub fn new(nx: usize, ny: usize, nz: usize, p: Vec<f64>) -> Result<Self> {
        if nx * ny * nz == 0 {
            return Err(crate::Error::Empty("triple joint"));
        }
        if p.len() != nx * ny * nz {
            return Err(shape("triple joint buffer has the wrong length"));
        }
        check_pmf(&p, "triple joint")?;
        Ok(Self { nx, ny, nz, p })
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> f64 {
        self.p[(x * self.ny + y) * self.nz + z]
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    fn pair(&self, f: impl Fn(usize, usize, usize) -> (usize, usize), n1: usize, n2: usize) -> Joint {
        let mut p = alloc::vec![0.0; n1 * n2];
        for x in 0..self.nx {
            for y in 0..self.ny {
                for z in 0..self.nz {
                    let (a, b) = f(x, y, z);
                    p[a * n2 + b] += self.get(x, y, z);
                }
            }
        }
        Joint::from_parts_unchecked(n1, n2, p)
    }

    pub fn xy(&self) -> Joint {
        self.pair(|x, y, _| (x, y), self.nx, self.ny)
    }

    pub fn yz(&self) -> Joint {
        self.pair(|_, y, z| (y, z), self.ny, self.nz)
    }

    pub fn xz(&self) -> Joint {
        self.pair(|x, _, z| (x, z), self.nx, self.nz)
    }

    /// `(Y, (X,Z))` as a two-variable joint with `(x,z)` flattened to `x·nz + z`.
    pub fn y_vs_xz(&self) -> Joint {
        self.pair(|x, y, z| (y, x * self.nz + z), self.ny, self.nx * self.nz)
    }
}
