use alloc::vec::Vec;

use super::{covering_number, FiniteMetricSpace, Mode, SearchOptions};
use crate::Result;

/// One resolution of a tame-growth profile.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TameGrowthRow {
    pub epsilon: f64,
    pub count: usize,
    pub mode: Mode,
    /// `ε^δ · ln #`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TameGrowthProfile {
    pub delta: f64,
    pub rows: Vec<TameGrowthRow>,
    /// Values are nonincreasing along the (decreasing) ε list.
    pub decreasing: bool,
}

/// `ε^δ ln #(X_ε, d, ε)` for each `(ε, X_ε)`, exact where the space fits the
/// exact limit and greedy otherwise.
pub fn tame_growth_profile(
    family: &[(f64, &FiniteMetricSpace)],
    delta: f64,
    opts: &SearchOptions,
) -> Result<TameGrowthProfile> {
    if !(delta > 0.0) {
        return Err(crate::error::domain("delta must be positive"));
    }
    if family.windows(2).any(|w| !(w[1].0 < w[0].0)) {
        return Err(crate::error::domain("epsilons must be strictly decreasing"));
    }
    let mut rows = Vec::with_capacity(family.len());
    for &(eps, space) in family {
        let mode = if space.len() <= opts.cover_exact_limit {
            Mode::Exact
        } else {
            Mode::Greedy
        };
        let c = covering_number(space, eps, mode, opts)?;
        rows.push(TameGrowthRow {
            epsilon: eps,
            count: c.count,
            mode,
            value: libm::pow(eps, delta) * libm::log(c.count as f64),
        });
    }
    Ok(growth_from_rows(delta, rows))
}

pub(crate) fn growth_from_rows(delta: f64, rows: Vec<TameGrowthRow>) -> TameGrowthProfile {
    let decreasing = rows.windows(2).all(|w| w[1].value <= w[0].value);
    TameGrowthProfile {
        delta,
        rows,
        decreasing,
    }
}
