use alloc::vec::Vec;
use rand::Rng;
use rand_core::RngCore;

use super::shift::pow2neg;
use super::System;
use crate::Result;

/// Period-`p` points of the shift on `L^Z`, a finite `T`-invariant subsystem
/// of the level shift. States are level indices of one period.
///
/// With the weighted-sum metric, residue class `r` of a period carries total
/// weight `w_r = Σ_{m ≡ r (mod p)} 2^{−|m|}`; the weights sum to 3.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicShift {
    pub levels: Vec<f64>,
    pub period: usize,
    weights: Vec<f64>,
}

impl PeriodicShift {
    pub fn new(levels: Vec<f64>, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(crate::error::domain("period must be positive"));
        }
        if levels.is_empty() || levels.len() > u16::MAX as usize {
            return Err(crate::error::domain("level count out of range"));
        }
        let q = pow2neg(period as u64);
        let denom = 1.0 - q;
        let weights = (0..period)
            .map(|r| {
                if r == 0 {
                    (1.0 + q) / denom
                } else {
                    (pow2neg(r as u64) + pow2neg((period - r) as u64)) / denom
                }
            })
            .collect();
        Ok(Self {
            levels,
            period,
            weights,
        })
    }

    pub fn binary(period: usize) -> Result<Self> {
        Self::new(alloc::vec![0.0, 1.0], period)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Coordinate `m` of a state.
    pub fn value(&self, x: &[u16], m: i64) -> f64 {
        self.levels[x[m.rem_euclid(self.period as i64) as usize] as usize]
    }
}

impl System for PeriodicShift {
    type State = Vec<u16>;

    fn step(&self, x: &Vec<u16>) -> Vec<u16> {
        let mut y = x.clone();
        y.rotate_left(1);
        y
    }

    fn dist(&self, x: &Vec<u16>, y: &Vec<u16>) -> f64 {
        x.iter()
            .zip(y)
            .zip(&self.weights)
            .map(|((&a, &b), w)| w * (self.levels[a as usize] - self.levels[b as usize]).abs())
            .sum()
    }

    fn diameter_bound(&self) -> f64 {
        3.0
    }

    fn state_count(&self) -> Option<u128> {
        (self.levels.len() as u128).checked_pow(self.period as u32)
    }

    fn enumerate(&self) -> Option<Vec<Vec<u16>>> {
        let total = usize::try_from(self.state_count()?).ok()?;
        let k = self.levels.len();
        let mut out = Vec::with_capacity(total);
        let mut digits = alloc::vec![0u16; self.period];
        for _ in 0..total {
            out.push(digits.clone());
            for d in digits.iter_mut().rev() {
                *d += 1;
                if (*d as usize) < k {
                    break;
                }
                *d = 0;
            }
        }
        Some(out)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Option<Vec<u16>> {
        Some(
            (0..self.period)
                .map(|_| rng.gen_range(0..self.levels.len()) as u16)
                .collect(),
        )
    }
}
