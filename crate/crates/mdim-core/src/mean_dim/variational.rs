use alloc::string::String;
use alloc::vec::Vec;

use super::profile::{growth_profile, BoundType, GrowthOptions, GrowthProfile};
use crate::dynamics::{OrbitKind, OrbitScheme, System};
use crate::error::domain;
use crate::rd::{estimate_rate, Dictionary, EstimateOptions, Family, RateTable, WeightedStates};
use crate::Result;

/// A named invariant-measure candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate<T> {
    pub name: String,
    pub measure: WeightedStates<T>,
}

/// Parameters of [`variational_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalOptions {
    pub n_list: Vec<usize>,
    /// Exceedance budget `α` of the counting family.
    pub alpha: f64,
    /// `D ≥ 2` in the scaled lower-direction diagnostic.
    pub d_factor: u32,
    /// Allowed excess of a rate over the matching growth estimate.
    pub slack: f64,
    pub estimate: EstimateOptions,
    pub max_points: usize,
}

impl Default for VariationalOptions {
    fn default() -> Self {
        Self {
            n_list: alloc::vec![1, 2, 3],
            alpha: 0.1,
            d_factor: 2,
            slack: 1e-9,
            estimate: EstimateOptions::default(),
            max_points: crate::dynamics::DEFAULT_MAX_POINTS,
        }
    }
}

/// Best rate over candidates for one family.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BestRate {
    pub rate: f64,
    pub candidate: String,
}

/// One `ε` of the sandwich table.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct VariationalRow {
    pub epsilon: f64,
    /// `sup_μ` of the average-family rate estimates.
    pub rate_avg: Option<BestRate>,
    /// `sup_μ` of the counting-family rate estimates.
    pub rate_counting: Option<BestRate>,
    /// `S̃` estimate (`d̄_n`, min over `n`).
    pub s_tilde: f64,
    /// `S` estimate (`d_n`, min over `n`).
    pub s: f64,
    /// `R ≤ S̃` within slack.
    pub avg_below_s_tilde: bool,
    /// `R̃ ≤ S` within slack.
    pub counting_below_s: bool,
    /// `S̃ ≤ S`; decided only when both profiles are exact, since two
    /// greedy covers need not be ordered.
    pub s_tilde_below_s: Option<bool>,
    /// `R(ε) − (1 − 1/D) S̃((12D+4)ε)`; diagnostic only.
    pub avg_lower_gap: Option<f64>,
    /// `R̃(ε) − S(12ε)`; diagnostic only.
    pub counting_lower_gap: Option<f64>,
}

impl VariationalRow {
    /// The asserted upper-bound directions.
    pub fn passes(&self) -> bool {
        self.avg_below_s_tilde && self.counting_below_s && self.s_tilde_below_s != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct VariationalReport {
    pub rows: Vec<VariationalRow>,
    pub alpha: f64,
    pub d_factor: u32,
}

/// Rates of every candidate against the growth estimates of an enumerable
/// system, per `ε`.
///
/// Rates are dictionary-restricted, so they overestimate the true infimum;
/// the upper directions `R ≤ S̃ ≤ S` and `R̃ ≤ S` are asserted, while the
/// scaled lower directions are only reported as gaps.
pub fn variational_report<S: System>(
    sys: &S,
    eps_grid: &[f64],
    candidates: &[Candidate<S::State>],
    dict: &Dictionary<S::State>,
    opts: &VariationalOptions,
) -> Result<VariationalReport> {
    if eps_grid.is_empty() {
        return Err(crate::Error::Empty("epsilon grid"));
    }
    if candidates.is_empty() {
        return Err(crate::Error::Empty("measure candidates"));
    }
    if opts.d_factor < 2 {
        return Err(domain("D must be at least 2"));
    }
    let growth = GrowthOptions {
        search: opts.estimate.search,
        max_points: opts.max_points,
        ..GrowthOptions::default()
    };
    let profile = |eps: f64, kind: OrbitKind| -> Result<GrowthProfile> {
        growth_profile(sys, eps, kind, &opts.n_list, OrbitScheme::Exhaustive, &growth)
    };
    let estimate = |p: &GrowthProfile| p.estimate.unwrap_or(f64::INFINITY);
    let best = |family: Family, level: f64| -> Result<Option<BestRate>> {
        let mut out: Option<BestRate> = None;
        for c in candidates {
            let t: RateTable = estimate_rate(sys, &c.measure, family, level, &opts.n_list, dict, &opts.estimate)?;
            if let Some(r) = t.estimate {
                if out.as_ref().map_or(true, |b| r > b.rate) {
                    out = Some(BestRate {
                        rate: r,
                        candidate: c.name.clone(),
                    });
                }
            }
        }
        Ok(out)
    };

    let d = opts.d_factor as f64;
    let mut rows = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let (avg, max) = (profile(eps, OrbitKind::Avg)?, profile(eps, OrbitKind::Max)?);
        let exact = [&avg, &max].iter().all(|p| p.rows.iter().all(|r| r.bound == BoundType::Exact));
        let (s_tilde, s) = (estimate(&avg), estimate(&max));
        let rate_avg = best(Family::average(), eps)?;
        let rate_counting = best(Family::Counting { eps }, opts.alpha)?;
        let scaled_tilde = estimate(&profile((12.0 * d + 4.0) * eps, OrbitKind::Avg)?);
        let scaled_s = estimate(&profile(12.0 * eps, OrbitKind::Max)?);
        rows.push(VariationalRow {
            epsilon: eps,
            avg_below_s_tilde: rate_avg.as_ref().map_or(true, |r| r.rate <= s_tilde + opts.slack),
            counting_below_s: rate_counting.as_ref().map_or(true, |r| r.rate <= s + opts.slack),
            s_tilde_below_s: exact.then_some(s_tilde <= s + opts.slack),
            avg_lower_gap: rate_avg.as_ref().map(|r| r.rate - (1.0 - 1.0 / d) * scaled_tilde),
            counting_lower_gap: rate_counting.as_ref().map(|r| r.rate - scaled_s),
            rate_avg,
            rate_counting,
            s_tilde,
            s,
        });
    }
    Ok(VariationalReport {
        rows,
        alpha: opts.alpha,
        d_factor: opts.d_factor,
    })
}
