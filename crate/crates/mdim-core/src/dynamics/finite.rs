use alloc::vec::Vec;
use rand::Rng;
use rand_core::RngCore;

use super::System;
use crate::metric::FiniteMetricSpace;
use crate::Result;

/// The one-point system.
#[derive(Debug, Clone, Copy, Default)]
pub struct OnePoint;

impl System for OnePoint {
    type State = ();
    fn step(&self, _: &()) {}
    fn dist(&self, _: &(), _: &()) -> f64 {
        0.0
    }
    fn diameter_bound(&self) -> f64 {
        1.0
    }
    fn state_count(&self) -> Option<u128> {
        Some(1)
    }
    fn enumerate(&self) -> Option<Vec<()>> {
        Some(alloc::vec![()])
    }
    fn sample(&self, _: &mut dyn RngCore) -> Option<()> {
        Some(())
    }
}

/// Identity map on the grid `{0, h, 2h, …} ⊂ [0,1]` with `|a − b|`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityGrid {
    pub levels: Vec<f64>,
}

impl IdentityGrid {
    pub fn new(step: f64) -> Result<Self> {
        Ok(Self {
            levels: super::grid_levels(step)?,
        })
    }
}

impl System for IdentityGrid {
    type State = f64;
    fn step(&self, x: &f64) -> f64 {
        *x
    }
    fn dist(&self, x: &f64, y: &f64) -> f64 {
        (x - y).abs()
    }
    fn diameter_bound(&self) -> f64 {
        1.0
    }
    fn state_count(&self) -> Option<u128> {
        Some(self.levels.len() as u128)
    }
    fn enumerate(&self) -> Option<Vec<f64>> {
        Some(self.levels.clone())
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Option<f64> {
        Some(self.levels[rng.gen_range(0..self.levels.len())])
    }
}

/// A self-map of `0..k` with a distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMap {
    map: Vec<usize>,
    space: FiniteMetricSpace,
}

impl FiniteMap {
    pub fn new(map: Vec<usize>, space: FiniteMetricSpace) -> Result<Self> {
        if map.len() != space.len() {
            return Err(crate::error::shape("map and space sizes differ"));
        }
        if map.iter().any(|&t| t >= map.len()) {
            return Err(crate::error::domain("map leaves the state set"));
        }
        Ok(Self { map, space })
    }

    /// Identity map on `space`.
    pub fn identity(space: FiniteMetricSpace) -> Self {
        let map = (0..space.len()).collect();
        Self { map, space }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = alloc::vec![false; self.map.len()];
        for &t in &self.map {
            if seen[t] {
                return false;
            }
            seen[t] = true;
        }
        true
    }
}

impl System for FiniteMap {
    type State = usize;
    fn step(&self, x: &usize) -> usize {
        self.map[*x]
    }
    fn dist(&self, x: &usize, y: &usize) -> f64 {
        self.space.dist(*x, *y)
    }
    fn diameter_bound(&self) -> f64 {
        self.space.diameter()
    }
    fn state_count(&self) -> Option<u128> {
        Some(self.map.len() as u128)
    }
    fn enumerate(&self) -> Option<Vec<usize>> {
        Some((0..self.map.len()).collect())
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Option<usize> {
        Some(rng.gen_range(0..self.map.len()))
    }
}
