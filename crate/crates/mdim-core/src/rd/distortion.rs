use alloc::vec::Vec;

use super::problem::DistortionMatrix;
use crate::dynamics::{orbit, System};
use crate::error::domain;
use crate::tol::Threshold;
use crate::Result;

/// Per-step cost aggregated over an `n`-block.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "snake_case"))]
pub enum Family {
    /// `(1/n) Σ_k d(T^k x, y_k)^p`; `p = 1` is the plain average.
    Avg { p: f64 },
    /// `(1/n) #{k : d(T^k x, y_k) ≥ eps}`.
    Counting { eps: f64 },
}

impl Family {
    pub fn average() -> Self {
        Family::Avg { p: 1.0 }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Family::Avg { p } if !(p >= 1.0 && p.is_finite()) => Err(domain("distortion exponent must be ≥ 1")),
            Family::Counting { eps } if !(eps > 0.0) => Err(domain("counting threshold must be positive")),
            _ => Ok(()),
        }
    }
}

/// Reproduction symbols: orbits of states, or explicit `n`-tuples.
#[derive(Debug, Clone, PartialEq)]
pub enum Reproduction<T> {
    Orbits(Vec<T>),
    Tuples(Vec<Vec<T>>),
}

impl<T> Reproduction<T> {
    pub fn len(&self) -> usize {
        match self {
            Reproduction::Orbits(v) => v.len(),
            Reproduction::Tuples(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Distortion between the `n`-orbits of `sources` and each reproduction
/// symbol under `family`.
pub fn build_distortion<S: System>(
    sys: &S,
    n: usize,
    sources: &[S::State],
    repro: &Reproduction<S::State>,
    family: Family,
) -> Result<DistortionMatrix> {
    if n == 0 {
        return Err(domain("block length must be at least 1"));
    }
    family.validate()?;
    let tuples: Vec<Vec<S::State>> = match repro {
        Reproduction::Orbits(states) => states.iter().map(|s| orbit(sys, s, n)).collect(),
        Reproduction::Tuples(t) => {
            if t.iter().any(|v| v.len() != n) {
                return Err(crate::error::shape("reproduction tuple length differs from n"));
            }
            t.clone()
        }
    };
    let orbits: Vec<Vec<S::State>> = sources.iter().map(|s| orbit(sys, s, n)).collect();
    let th = Threshold::default();
    let mut d = Vec::with_capacity(orbits.len() * tuples.len());
    for ox in &orbits {
        for ty in &tuples {
            let v = match family {
                Family::Avg { p } => {
                    let s: f64 = ox
                        .iter()
                        .zip(ty)
                        .map(|(a, b)| {
                            let e = sys.dist(a, b);
                            if p == 1.0 {
                                e
                            } else {
                                libm::pow(e, p)
                            }
                        })
                        .sum();
                    s / n as f64
                }
                Family::Counting { eps } => {
                    let c = ox.iter().zip(ty).filter(|(a, b)| th.ge(sys.dist(a, b), eps)).count();
                    c as f64 / n as f64
                }
            };
            d.push(v);
        }
    }
    DistortionMatrix::new(orbits.len(), tuples.len(), d)
}
