use alloc::vec::Vec;

use super::blahut::blahut_arimoto;
use super::problem::{DistortionMatrix, RdProblem, RdStatus, RdTarget, SolverOptions};
use crate::error::domain;
use crate::info::Distribution;
use crate::Result;

/// `r(ε)` for the uniform source on `[0,1]` with `E|U − V| ≤ ε`, computed
/// on an `m`-level midpoint discretization, with the two closed-form
/// bounds it is compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarRate {
    pub epsilon: f64,
    pub levels: usize,
    /// Achievable rate of the discretized problem, nats.
    pub rate: f64,
    /// Solver lower bound for the discretized problem, nats.
    pub solver_lower: f64,
    /// Largest of the partition lower bounds over the supplied `D`, clipped
    /// at 0, and the `D` attaining it.
    pub claim_lower: f64,
    pub best_d: Option<f64>,
    /// `ln(1 + ⌊1/(2ε)⌋)`.
    pub quantizer_upper: f64,
    pub status: RdStatus,
}

impl ScalarRate {
    pub fn sandwich_holds(&self) -> bool {
        self.claim_lower <= self.rate && self.rate <= self.quantizer_upper
    }

    /// `r(ε) / |ln ε|`.
    pub fn ratio_to_log(&self) -> f64 {
        self.rate / libm::log(1.0 / self.epsilon).abs()
    }
}

/// `(1 − Dε) ln(1/(Dε)) − ln(1 + ⌊1/(Dε)⌋)/D − ln 3` for `D > 1`.
///
/// Partitioning `[0,1]` into cells of length `Dε` and bounding the
/// conditional entropy of the cell given `V` yields this lower bound on
/// `r(ε)`.
pub fn claim_lower_bound(eps: f64, d: f64) -> Result<f64> {
    if !(eps > 0.0) || !(d > 1.0) {
        return Err(domain("need ε > 0 and D > 1"));
    }
    let de = d * eps;
    let l = crate::util::floor_div(1.0, de) as f64;
    Ok((1.0 - de) * libm::log(1.0 / de) - libm::log(1.0 + l) / d - libm::log(3.0))
}

/// `ln(1 + ⌊1/(2ε)⌋)`: a uniform quantizer with cells of length at most
/// `2ε` has `E|U − V| ≤ ε/2`.
pub fn quantizer_upper_bound(eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(domain("need ε > 0"));
    }
    Ok(libm::log(1.0 + crate::util::floor_div(1.0, 2.0 * eps) as f64))
}

/// Solves the `m`-level problem: source uniform on `{(i + ½)/m}`, the same
/// points as reproductions, cost `|u − v|`, budget `E ≤ ε`.
pub fn r_epsilon_uniform(eps: f64, levels: usize, d_grid: &[f64], opts: &SolverOptions) -> Result<ScalarRate> {
    if !(eps > 0.0) {
        return Err(domain("need ε > 0"));
    }
    let need = libm::ceil(4.0 / eps - 1e-9) as usize;
    if levels < need.max(2) {
        return Err(domain(alloc::format!("{levels} levels is too coarse for ε = {eps}; need ≥ {need}")));
    }
    let pts: Vec<f64> = (0..levels).map(|i| (i as f64 + 0.5) / levels as f64).collect();
    let mut d = Vec::with_capacity(levels * levels);
    for &u in &pts {
        for &v in &pts {
            d.push((u - v).abs());
        }
    }
    let prob = RdProblem::new(Distribution::uniform(levels), DistortionMatrix::new(levels, levels, d)?)?;
    let pt = blahut_arimoto(&prob, RdTarget::Distortion(eps), opts)?;

    let mut claim_lower = 0.0;
    let mut best_d = None;
    for &dd in d_grid {
        let v = claim_lower_bound(eps, dd)?;
        if v > claim_lower {
            claim_lower = v;
            best_d = Some(dd);
        }
    }
    Ok(ScalarRate {
        epsilon: eps,
        levels,
        rate: pt.rate,
        solver_lower: pt.lower_bound,
        claim_lower,
        best_d,
        quantizer_upper: quantizer_upper_bound(eps)?,
        status: pt.status,
    })
}
