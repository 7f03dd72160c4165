use alloc::vec::Vec;

use super::profile::{least_squares, GrowthProfile};
use crate::error::domain;
use crate::Result;

/// One grid point of a slope fit.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SlopePoint {
    pub epsilon: f64,
    /// `|ln ε|`.
    pub log_inv: f64,
    pub value: f64,
    /// `value / |ln ε|`.
    pub ratio: f64,
    /// `value − (slope·|ln ε| + intercept)`.
    pub residual: f64,
}

/// Finite-grid stand-ins for the upper and lower metric mean dimension.
/// None of these is a limit.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MdimEstimate {
    pub points: Vec<SlopePoint>,
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    /// Largest pointwise ratio over the grid.
    pub upper: f64,
    /// Smallest pointwise ratio over the grid.
    pub lower: f64,
}

/// Relative tolerance on the step ratio of a geometric grid.
const GRID_RATIO_TOL: f64 = 1e-6;

/// Least-squares fit of `S(ε)` against `|ln ε|` over a geometric grid of at
/// least three `ε ∈ (0,1)`, with pointwise ratios.
pub fn mdim_slope(points: &[(f64, f64)]) -> Result<MdimEstimate> {
    if points.len() < 3 {
        return Err(domain("slope estimates need at least three epsilon values"));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    if pts.iter().any(|&(e, s)| !(e > 0.0 && e < 1.0) || !s.is_finite()) {
        return Err(domain("epsilons must lie in (0,1) with finite values"));
    }
    let q0 = pts[1].0 / pts[0].0;
    if !(q0 < 1.0) || pts.windows(2).any(|w| libm::fabs(w[1].0 / w[0].0 - q0) > GRID_RATIO_TOL * q0) {
        return Err(domain("epsilon grid must be geometric with distinct values"));
    }
    let xs: Vec<f64> = pts.iter().map(|p| -libm::log(p.0)).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (slope, intercept) = least_squares(&xs, &ys)?;
    let points: Vec<SlopePoint> = pts
        .iter()
        .zip(&xs)
        .map(|(&(epsilon, value), &x)| SlopePoint {
            epsilon,
            log_inv: x,
            value,
            ratio: value / x,
            residual: value - (slope * x + intercept),
        })
        .collect();
    let rms = libm::sqrt(points.iter().map(|p| p.residual * p.residual).sum::<f64>() / points.len() as f64);
    let upper = points.iter().map(|p| p.ratio).fold(f64::NEG_INFINITY, f64::max);
    let lower = points.iter().map(|p| p.ratio).fold(f64::INFINITY, f64::min);
    Ok(MdimEstimate {
        points,
        slope,
        intercept,
        rms_residual: rms,
        upper,
        lower,
    })
}

/// Which collapsed value of a profile feeds the slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileValue {
    /// The exact/upper estimate.
    Estimate,
    /// The certificate lower estimate.
    Lower,
}

/// [`mdim_slope`] over one profile per `ε`.
pub fn mdim_slope_from_profiles(profiles: &[GrowthProfile], which: ProfileValue) -> Result<MdimEstimate> {
    let pts = profiles
        .iter()
        .map(|p| {
            let v = match which {
                ProfileValue::Estimate => p.estimate,
                ProfileValue::Lower => p.lower_estimate,
            };
            v.map(|v| (p.epsilon, v))
                .ok_or_else(|| domain("profile has no value of the requested kind"))
        })
        .collect::<Result<Vec<_>>>()?;
    mdim_slope(&pts)
}
