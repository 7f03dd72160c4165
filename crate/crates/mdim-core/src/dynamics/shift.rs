use alloc::vec::Vec;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use super::System;
use crate::Result;

/// A point of `[0,1]^Z` stored on the window `[start, start + len)`; every
/// coordinate outside the window is 0.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShiftPoint {
    pub start: i64,
    pub coords: Vec<f64>,
}

impl ShiftPoint {
    pub fn new(start: i64, coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(crate::error::domain("shift coordinates must lie in [0, 1]"));
        }
        Ok(Self { start, coords })
    }

    /// All zeros on `[lo, hi]`.
    pub fn zeros(lo: i64, hi: i64) -> Self {
        Self {
            start: lo,
            coords: alloc::vec![0.0; (hi - lo + 1).max(0) as usize],
        }
    }

    /// Coordinate `m`.
    #[inline]
    pub fn get(&self, m: i64) -> f64 {
        let k = m - self.start;
        if k >= 0 && (k as usize) < self.coords.len() {
            self.coords[k as usize]
        } else {
            0.0
        }
    }

    /// One past the last stored index.
    pub fn end(&self) -> i64 {
        self.start + self.coords.len() as i64
    }

    /// `T x` with `(Tx)_m = x_{m+1}`.
    pub fn shifted(&self) -> Self {
        Self {
            start: self.start - 1,
            coords: self.coords.clone(),
        }
    }
}

/// `Σ_m 2^{−|m|} |x_m − y_m|`, exact over the union of the two windows.
pub fn hilbert_cube_distance(x: &ShiftPoint, y: &ShiftPoint) -> f64 {
    let lo = x.start.min(y.start);
    let hi = x.end().max(y.end());
    let mut s = 0.0;
    for m in lo..hi {
        let diff = (x.get(m) - y.get(m)).abs();
        if diff != 0.0 {
            s += pow2neg(m.unsigned_abs()) * diff;
        }
    }
    s
}

#[inline]
pub(crate) fn pow2neg(k: u64) -> f64 {
    if k > 1100 {
        0.0
    } else {
        libm::ldexp(1.0, -(k as i32))
    }
}

/// `{0, g, 2g, …, ⌊1/g⌋g}`; when `g` does not divide 1 the last cell is
/// truncated and 1 itself is not a level.
pub fn grid_levels(g: f64) -> Result<Vec<f64>> {
    if !(g > 0.0) || !g.is_finite() {
        return Err(crate::error::domain("grid step must be positive"));
    }
    let k = crate::util::floor_div(1.0, g);
    Ok((0..=k).map(|i| (i as f64 * g).min(1.0)).collect())
}

/// Shift on `L^Z` for a finite level set `L ⊂ [0,1]`, represented on the
/// window `[lo, hi]`. Levels `{0,1}` give the binary full shift; a grid of
/// step `g` gives the quantized Hilbert cube.
#[derive(Debug, Clone, PartialEq)]
pub struct GridShift {
    pub levels: Vec<f64>,
    pub lo: i64,
    pub hi: i64,
}

impl GridShift {
    pub fn new(levels: Vec<f64>, lo: i64, hi: i64) -> Result<Self> {
        if levels.is_empty() {
            return Err(crate::Error::Empty("shift levels"));
        }
        if levels.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(crate::error::domain("shift levels must lie in [0, 1]"));
        }
        if hi < lo {
            return Err(crate::error::domain("empty window"));
        }
        Ok(Self { levels, lo, hi })
    }

    pub fn binary(lo: i64, hi: i64) -> Result<Self> {
        Self::new(alloc::vec![0.0, 1.0], lo, hi)
    }

    pub fn quantized(g: f64, lo: i64, hi: i64) -> Result<Self> {
        Self::new(grid_levels(g)?, lo, hi)
    }

    pub fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }
}

impl System for GridShift {
    type State = ShiftPoint;

    fn step(&self, x: &ShiftPoint) -> ShiftPoint {
        x.shifted()
    }

    fn dist(&self, x: &ShiftPoint, y: &ShiftPoint) -> f64 {
        hilbert_cube_distance(x, y)
    }

    fn diameter_bound(&self) -> f64 {
        3.0
    }

    fn state_count(&self) -> Option<u128> {
        (self.levels.len() as u128).checked_pow(self.width() as u32)
    }

    fn enumerate(&self) -> Option<Vec<ShiftPoint>> {
        let total = usize::try_from(self.state_count()?).ok()?;
        let k = self.levels.len();
        let w = self.width();
        let mut out = Vec::with_capacity(total);
        let mut digits = alloc::vec![0usize; w];
        for _ in 0..total {
            out.push(ShiftPoint {
                start: self.lo,
                coords: digits.iter().map(|&d| self.levels[d]).collect(),
            });
            // Odometer, last window coordinate fastest.
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < k {
                    break;
                }
                *d = 0;
            }
        }
        Some(out)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Option<ShiftPoint> {
        Some(ShiftPoint {
            start: self.lo,
            coords: (0..self.width())
                .map(|_| self.levels[rng.gen_range(0..self.levels.len())])
                .collect(),
        })
    }
}

/// `count` independent draws, uniform over the grid of step `g` in each
/// coordinate of `[lo, hi]`.
pub fn sample_product_lebesgue(lo: i64, hi: i64, g: f64, count: usize, seed: u64) -> Result<Vec<ShiftPoint>> {
    let sys = GridShift::quantized(g, lo, hi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).filter_map(|_| sys.sample(&mut rng)).collect())
}

/// Shift on all of `[0,1]^Z` with the weighted-sum metric; no enumeration
/// or sampler, used to evaluate orbit metrics on explicit points.
#[derive(Debug, Clone, Copy, Default)]
pub struct HilbertCube;

impl System for HilbertCube {
    type State = ShiftPoint;

    fn step(&self, x: &ShiftPoint) -> ShiftPoint {
        x.shifted()
    }

    fn dist(&self, x: &ShiftPoint, y: &ShiftPoint) -> f64 {
        hilbert_cube_distance(x, y)
    }

    fn diameter_bound(&self) -> f64 {
        3.0
    }
}
