use alloc::vec::Vec;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::System;
use crate::metric::FiniteMetricSpace;
use crate::{Error, Result};

/// Which orbit metric to build from the base metric.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum OrbitKind {
    /// `d_n`.
    Max,
    /// `d̄_n`.
    Avg,
    /// `d_A` for `A ⊆ [0,n)`.
    Subset(Vec<usize>),
}

/// `x, Tx, …, T^{n−1}x`.
pub fn orbit<S: System>(sys: &S, x: &S::State, n: usize) -> Vec<S::State> {
    let mut out = Vec::with_capacity(n);
    let mut cur = x.clone();
    for k in 0..n {
        if k + 1 < n {
            let next = sys.step(&cur);
            out.push(cur);
            cur = next;
        } else {
            out.push(cur.clone());
        }
    }
    out
}

/// Orbit metric between two precomputed orbits of equal length `n ≥ 1`.
pub fn orbit_distance<S: System>(sys: &S, ox: &[S::State], oy: &[S::State], kind: &OrbitKind) -> f64 {
    debug_assert_eq!(ox.len(), oy.len());
    match kind {
        OrbitKind::Max => ox
            .iter()
            .zip(oy)
            .map(|(a, b)| sys.dist(a, b))
            .fold(0.0, f64::max),
        OrbitKind::Avg => {
            let s: f64 = ox.iter().zip(oy).map(|(a, b)| sys.dist(a, b)).sum();
            s / ox.len() as f64
        }
        OrbitKind::Subset(idx) => idx
            .iter()
            .map(|&k| sys.dist(&ox[k], &oy[k]))
            .fold(0.0, f64::max),
    }
}

/// `d_n`, `d̄_n` or `d_A` between `x` and `y`.
pub fn orbit_metric<S: System>(
    sys: &S,
    n: usize,
    kind: &OrbitKind,
    x: &S::State,
    y: &S::State,
) -> Result<f64> {
    if n == 0 {
        return Err(crate::error::domain("orbit length must be at least 1"));
    }
    if let OrbitKind::Subset(idx) = kind {
        if idx.iter().any(|&k| k >= n) {
            return Err(crate::error::domain("subset index outside [0, n)"));
        }
    }
    let ox = orbit(sys, x, n);
    let oy = orbit(sys, y, n);
    Ok(orbit_distance(sys, &ox, &oy, kind))
}

/// How to pick the points of a finite orbit-metric surrogate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum OrbitScheme {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

/// Default ceiling on surrogate size; the dense matrix is `8·N²` bytes.
pub const DEFAULT_MAX_POINTS: usize = 2048;

/// Initial states together with their orbit-metric space.
#[derive(Debug, Clone)]
pub struct OrbitSpace<T> {
    pub states: Vec<T>,
    pub space: FiniteMetricSpace,
}

/// Finite surrogate for `(X, d_n)` or `(X, d̄_n)`.
pub fn enumerate_or_sample_orbit_space<S: System>(
    sys: &S,
    n: usize,
    scheme: OrbitScheme,
    kind: &OrbitKind,
    max_points: usize,
) -> Result<OrbitSpace<S::State>> {
    if n == 0 {
        return Err(crate::error::domain("orbit length must be at least 1"));
    }
    let states = match scheme {
        OrbitScheme::Exhaustive => {
            let count = sys
                .state_count()
                .ok_or_else(|| crate::error::domain("system is not enumerable"))?;
            if count > max_points as u128 {
                return Err(Error::Budget {
                    what: "orbit space",
                    needed: count,
                    budget: max_points as u128,
                });
            }
            sys.enumerate()
                .ok_or_else(|| crate::error::domain("system is not enumerable"))?
        }
        OrbitScheme::Sample { count, seed } => {
            if count > max_points {
                return Err(Error::Budget {
                    what: "orbit space",
                    needed: count as u128,
                    budget: max_points as u128,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = Vec::with_capacity(count);
            for _ in 0..count {
                v.push(
                    sys.sample(&mut rng)
                        .ok_or_else(|| crate::error::domain("system has no sampler"))?,
                );
            }
            v
        }
    };
    let orbits: Vec<Vec<S::State>> = states.iter().map(|s| orbit(sys, s, n)).collect();
    let space = FiniteMetricSpace::from_symmetric_fn(states.len(), |i, j| {
        orbit_distance(sys, &orbits[i], &orbits[j], kind)
    });
    Ok(OrbitSpace { states, space })
}
