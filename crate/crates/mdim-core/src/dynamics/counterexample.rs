//! The infinite-dimensional counterexample system.
//!
//! `A_n` is a regular simplex with one vertex at the shared origin and
//! pairwise distance `1/n`; simplices of distinct levels span mutually
//! orthogonal subspaces. `X_n` holds the sequences over `A_n` that vanish
//! off one residue class `l + 2^n Z`, and the metric is
//! `d(x,y) = Σ_k 2^{−|k|} ‖x_k − y_k‖`.

use alloc::vec::Vec;
use rand::Rng;
use rand_core::RngCore;

use super::shift::pow2neg;
use super::System;
use crate::Result;

/// Capped size of `A_n`: `min(⌈exp(2^n (ln n)^2)⌉, cap)`, and 2 at `n = 1`.
pub fn alphabet_size(n: u32, cap: u64) -> u64 {
    let cap = cap.max(2);
    if n <= 1 {
        return 2;
    }
    let e = libm::ldexp(1.0, n as i32) * libm::pow(libm::log(n as f64), 2.0);
    if e >= libm::log(cap as f64) {
        cap
    } else {
        (libm::ceil(libm::exp(e)) as u64).clamp(2, cap)
    }
}

/// `A_n` with its capped size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplexAlphabet {
    pub level: u32,
    pub size: u64,
}

impl SimplexAlphabet {
    pub fn new(level: u32, cap: u64) -> Result<Self> {
        if level == 0 {
            return Err(crate::error::domain("levels start at 1"));
        }
        Ok(Self {
            level,
            size: alphabet_size(level, cap),
        })
    }

    /// 0 on the diagonal and `1/n` elsewhere.
    pub fn dist(&self, i: u64, j: u64) -> f64 {
        if i == j {
            0.0
        } else {
            1.0 / self.level as f64
        }
    }
}

/// Vertex `index` of `A_level`; index 0 is the shared origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Symbol {
    pub level: u32,
    pub index: u64,
}

impl Symbol {
    pub const ZERO: Symbol = Symbol { level: 1, index: 0 };

    fn norm(&self) -> f64 {
        if self.index == 0 {
            0.0
        } else {
            1.0 / self.level as f64
        }
    }
}

/// `‖a − b‖` under the orthogonal-simplex embedding.
pub fn counterexample_distance(a: Symbol, b: Symbol) -> f64 {
    match (a.index == 0, b.index == 0) {
        (true, true) => 0.0,
        (true, false) => b.norm(),
        (false, true) => a.norm(),
        (false, false) if a.level == b.level => {
            if a.index == b.index {
                0.0
            } else {
                1.0 / a.level as f64
            }
        }
        (false, false) => libm::hypot(a.norm(), b.norm()),
    }
}

/// A point of `X_n`: nonzero symbols sit at positions `≡ offset (mod 2^n)`
/// inside `window`; every other coordinate is the origin.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CounterexamplePoint {
    pub level: u32,
    pub offset: u64,
    pub window: (i64, i64),
    /// `(position, symbol index)`, sorted by position, indices nonzero.
    pub support: Vec<(i64, u64)>,
}

impl PartialEq for CounterexamplePoint {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support && (self.support.is_empty() || self.level == other.level)
    }
}

impl CounterexamplePoint {
    /// The fixed point `0`.
    pub fn zero() -> Self {
        Self {
            level: 1,
            offset: 0,
            window: (0, 0),
            support: Vec::new(),
        }
    }

    /// Point of `X_level` from explicit coordinates; zero symbols are dropped.
    pub fn new(level: u32, offset: u64, window: (i64, i64), symbols: &[(i64, u64)], size: u64) -> Result<Self> {
        if level == 0 || level > 62 {
            return Err(crate::error::domain("level out of range"));
        }
        let period = 1i64 << level;
        if offset >= period as u64 {
            return Err(crate::error::domain("offset must lie in [0, 2^n)"));
        }
        let mut support: Vec<(i64, u64)> = Vec::new();
        for &(p, s) in symbols {
            if p < window.0 || p > window.1 {
                return Err(crate::error::domain("support position outside window"));
            }
            if (p - offset as i64).rem_euclid(period) != 0 {
                return Err(crate::error::domain("support position off the residue class"));
            }
            if s >= size {
                return Err(crate::error::domain("symbol index outside the alphabet"));
            }
            if s != 0 {
                support.push((p, s));
            }
        }
        support.sort_unstable();
        support.dedup_by_key(|e| e.0);
        Ok(Self {
            level,
            offset,
            window,
            support,
        })
    }

    fn symbol(&self, index: u64) -> Symbol {
        Symbol {
            level: self.level,
            index,
        }
    }

    /// `T x`.
    pub fn shifted(&self) -> Self {
        let period = 1u64 << self.level;
        Self {
            level: self.level,
            offset: (self.offset + period - 1) % period,
            window: (self.window.0 - 1, self.window.1 - 1),
            support: self.support.iter().map(|&(p, s)| (p - 1, s)).collect(),
        }
    }

    /// `(position, ‖x_p − y_p‖)` over positions where the points differ.
    fn differences(&self, other: &Self) -> Vec<(i64, f64)> {
        let (a, b) = (&self.support, &other.support);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() || j < b.len() {
            let pa = a.get(i).map(|e| e.0).unwrap_or(i64::MAX);
            let pb = b.get(j).map(|e| e.0).unwrap_or(i64::MAX);
            let (p, sa, sb) = if pa < pb {
                i += 1;
                (pa, self.symbol(a[i - 1].1), Symbol::ZERO)
            } else if pb < pa {
                j += 1;
                (pb, Symbol::ZERO, other.symbol(b[j - 1].1))
            } else {
                i += 1;
                j += 1;
                (pa, self.symbol(a[i - 1].1), other.symbol(b[j - 1].1))
            };
            let d = counterexample_distance(sa, sb);
            if d > 0.0 {
                out.push((p, d));
            }
        }
        out
    }

    /// `d(x, y)`, exact: both points vanish off their finite supports.
    pub fn distance(&self, other: &Self) -> f64 {
        self.differences(other)
            .iter()
            .map(|&(p, d)| pow2neg(p.unsigned_abs()) * d)
            .sum()
    }

    /// `d̄_N(x, 0) = (1/N) Σ_{i<N} Σ_p 2^{−|p−i|} ‖x_p‖`.
    pub fn avg_orbit_distance_to_zero(&self, big_n: usize) -> f64 {
        let norm = 1.0 / self.level as f64;
        let mut s = 0.0;
        for &(p, _) in &self.support {
            for i in 0..big_n as i64 {
                s += pow2neg((p - i).unsigned_abs());
            }
        }
        s * norm / big_n as f64
    }

    /// `d_N(x, y) = max_{i<N} Σ_p 2^{−|p−i|} ‖x_p − y_p‖`.
    pub fn max_orbit_distance(&self, other: &Self, big_n: usize) -> f64 {
        let diff = self.differences(other);
        (0..big_n as i64)
            .map(|i| {
                diff.iter()
                    .map(|&(p, d)| pow2neg((p - i).unsigned_abs()) * d)
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// `X_n` for one level, with states represented on a finite window.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleSystem {
    pub alphabet: SimplexAlphabet,
    pub window: (i64, i64),
}

impl CounterexampleSystem {
    pub fn new(level: u32, cap: u64, window: (i64, i64)) -> Result<Self> {
        if level > 30 {
            return Err(crate::error::domain("level above 30 is not supported"));
        }
        if window.1 < window.0 {
            return Err(crate::error::domain("empty window"));
        }
        Ok(Self {
            alphabet: SimplexAlphabet::new(level, cap)?,
            window,
        })
    }

    pub fn period(&self) -> i64 {
        1i64 << self.alphabet.level
    }

    /// Support positions of residue class `offset` inside the window.
    pub fn positions(&self, offset: u64) -> Vec<i64> {
        let p = self.period();
        let first = self.window.0 + (offset as i64 - self.window.0).rem_euclid(p);
        (0..)
            .map(|j| first + j * p)
            .take_while(|&q| q <= self.window.1)
            .collect()
    }

    /// Point at `offset` with the given symbols on consecutive positions.
    pub fn point(&self, offset: u64, symbols: &[u64]) -> Result<CounterexamplePoint> {
        let pos = self.positions(offset);
        if symbols.len() > pos.len() {
            return Err(crate::error::shape("more symbols than support positions"));
        }
        let pairs: Vec<(i64, u64)> = pos.iter().copied().zip(symbols.iter().copied()).collect();
        CounterexamplePoint::new(self.alphabet.level, offset, self.window, &pairs, self.alphabet.size)
    }

    /// Uniform offset, then each support symbol uniform over `A_n` (the
    /// origin included) or, when `nonzero`, over the nonzero vertices.
    pub fn sample_point(&self, rng: &mut dyn RngCore, nonzero: bool) -> CounterexamplePoint {
        let offset = rng.gen_range(0..self.period() as u64);
        let lo = if nonzero { 1 } else { 0 };
        let symbols: Vec<u64> = self
            .positions(offset)
            .iter()
            .map(|_| rng.gen_range(lo..self.alphabet.size))
            .collect();
        self.point(offset, &symbols).expect("sampled point is valid")
    }
}

impl System for CounterexampleSystem {
    type State = CounterexamplePoint;

    fn step(&self, x: &CounterexamplePoint) -> CounterexamplePoint {
        x.shifted()
    }

    fn dist(&self, x: &CounterexamplePoint, y: &CounterexamplePoint) -> f64 {
        x.distance(y)
    }

    fn diameter_bound(&self) -> f64 {
        // Sum of weights 3 times the largest symbol distance sqrt(2).
        3.0 * core::f64::consts::SQRT_2
    }

    fn state_count(&self) -> Option<u128> {
        // The origin is counted once, not once per offset.
        let mut total: u128 = 1;
        for off in 0..self.period() as u64 {
            let k = self.positions(off).len() as u32;
            total = total.checked_add((self.alphabet.size as u128).checked_pow(k)? - 1)?;
        }
        Some(total)
    }

    fn enumerate(&self) -> Option<Vec<CounterexamplePoint>> {
        let total = usize::try_from(self.state_count()?).ok()?;
        let mut out = Vec::with_capacity(total);
        out.push(CounterexamplePoint::zero());
        for off in 0..self.period() as u64 {
            let k = self.positions(off).len();
            let mut digits = alloc::vec![0u64; k];
            let count = (self.alphabet.size as u128).pow(k as u32);
            for c in 0..count {
                if c > 0 {
                    out.push(self.point(off, &digits).ok()?);
                }
                for d in digits.iter_mut().rev() {
                    *d += 1;
                    if *d < self.alphabet.size {
                        break;
                    }
                    *d = 0;
                }
            }
        }
        Some(out)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Option<CounterexamplePoint> {
        Some(self.sample_point(rng, false))
    }
}
