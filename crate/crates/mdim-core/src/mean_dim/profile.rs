use alloc::vec::Vec;
use num_bigint::BigUint;

use crate::dynamics::{enumerate_or_sample_orbit_space, HilbertCover, HilbertGrid, OrbitKind, OrbitScheme, System};
use crate::error::domain;
use crate::metric::{covering_number, max_separated_set, Mode, SearchOptions};
use crate::tol::Threshold;
use crate::Result;

/// What a row's count says about the covering number it stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BoundType {
    Exact,
    Upper,
    Lower,
}

/// How the per-`n` rows are collapsed into one number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Estimator {
    /// `min_n (1/n) log #`: an upper bound on the limit by subadditivity.
    #[default]
    MinOverN,
    /// Least-squares slope of `log #` against `n`.
    Fit,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GrowthRow {
    pub n: usize,
    pub count: BigUint,
    pub log_count: f64,
    /// `log_count / n`.
    pub per_step: f64,
    /// Search mode behind the count; `None` for certificate rows.
    pub mode: Option<Mode>,
    pub bound: BoundType,
}

/// Covering-number growth of `(X, d_n)` or `(X, d̄_n)` at one `ε`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GrowthProfile {
    pub epsilon: f64,
    pub kind: OrbitKind,
    pub rows: Vec<GrowthRow>,
    pub estimator: Estimator,
    /// Collapsed exact/upper rows; `None` when there are none.
    pub estimate: Option<f64>,
    /// `min_n` over lower rows of `log_count / n`.
    pub lower_estimate: Option<f64>,
}

/// One instance of `#_{n+m} ≤ #_n · #_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SubadditivityCheck {
    pub n: usize,
    pub m: usize,
    /// Decided on the integer counts.
    pub holds: bool,
    /// `log #_n + log #_m − log #_{n+m}`.
    pub slack: f64,
}

impl GrowthProfile {
    fn from_rows(epsilon: f64, kind: OrbitKind, rows: Vec<GrowthRow>, estimator: Estimator) -> Result<Self> {
        let upper: Vec<&GrowthRow> = rows.iter().filter(|r| r.bound != BoundType::Lower).collect();
        let estimate = match estimator {
            Estimator::MinOverN => upper.iter().map(|r| r.per_step).reduce(f64::min),
            Estimator::Fit => {
                if upper.len() < 2 {
                    None
                } else {
                    let xs: Vec<f64> = upper.iter().map(|r| r.n as f64).collect();
                    let ys: Vec<f64> = upper.iter().map(|r| r.log_count).collect();
                    Some(least_squares(&xs, &ys)?.0)
                }
            }
        };
        let lower_estimate = rows
            .iter()
            .filter(|r| r.bound == BoundType::Lower)
            .map(|r| r.per_step)
            .reduce(f64::min);
        Ok(Self {
            epsilon,
            kind,
            rows,
            estimator,
            estimate,
            lower_estimate,
        })
    }

    /// Rows of one bound type.
    pub fn rows_of(&self, bound: BoundType) -> impl Iterator<Item = &GrowthRow> {
        self.rows.iter().filter(move |r| r.bound == bound)
    }

    /// Subadditivity over exact rows with all three lengths present.
    pub fn subadditivity(&self) -> Vec<SubadditivityCheck> {
        let exact: Vec<&GrowthRow> = self.rows_of(BoundType::Exact).collect();
        let find = |n: usize| exact.iter().find(|r| r.n == n);
        let mut out = Vec::new();
        for a in &exact {
            for b in &exact {
                if a.n > b.n {
                    continue;
                }
                if let Some(c) = find(a.n + b.n) {
                    out.push(SubadditivityCheck {
                        n: a.n,
                        m: b.n,
                        holds: c.count <= &a.count * &b.count,
                        slack: a.log_count + b.log_count - c.log_count,
                    });
                }
            }
        }
        out
    }
}

/// Options for [`growth_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthOptions {
    pub search: SearchOptions,
    /// Ceiling on surrogate size.
    pub max_points: usize,
    /// Also emit a lower row from a greedy `ε`-separated set.
    pub separated: bool,
    pub estimator: Estimator,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self {
            search: SearchOptions::default(),
            max_points: crate::dynamics::DEFAULT_MAX_POINTS,
            separated: false,
            estimator: Estimator::MinOverN,
        }
    }
}

/// `log #(X_n, ρ_n, ε)` for each `n`, where `X_n` is the finite surrogate
/// picked by `scheme` and `ρ_n` is `d_n` or `d̄_n`.
///
/// Counts are exact when the surrogate fits the exact cover limit and greedy
/// (upper) otherwise. Labels refer to the surrogate.
pub fn growth_profile<S: System>(
    sys: &S,
    epsilon: f64,
    kind: OrbitKind,
    n_list: &[usize],
    scheme: OrbitScheme,
    opts: &GrowthOptions,
) -> Result<GrowthProfile> {
    if !(epsilon > 0.0) {
        return Err(domain("epsilon must be positive"));
    }
    if !matches!(kind, OrbitKind::Max | OrbitKind::Avg) {
        return Err(domain("growth profiles use d_n or the averaged d̄_n"));
    }
    if n_list.is_empty() {
        return Err(crate::Error::Empty("block lengths"));
    }
    let mut rows = Vec::new();
    for &n in n_list {
        let orb = enumerate_or_sample_orbit_space(sys, n, scheme, &kind, opts.max_points)?;
        let mode = if orb.space.len() <= opts.search.cover_exact_limit {
            Mode::Exact
        } else {
            Mode::Greedy
        };
        let cover = covering_number(&orb.space, epsilon, mode, &opts.search)?;
        let bound = match mode {
            Mode::Exact => BoundType::Exact,
            Mode::Greedy => BoundType::Upper,
        };
        rows.push(count_row(n, BigUint::from(cover.count), Some(mode), bound));
        if opts.separated {
            let sep = max_separated_set(&orb.space, epsilon, Mode::Greedy, &opts.search)?;
            rows.push(count_row(n, BigUint::from(sep.len()), Some(Mode::Greedy), BoundType::Lower));
        }
    }
    GrowthProfile::from_rows(epsilon, kind, rows, opts.estimator)
}

/// Certificate rows for the Hilbert cube shift under `d_n`: the product
/// cover gives an upper row and the coordinate grid a lower row, each
/// counted exactly. Fails when a certificate does not verify.
pub fn hilbert_profile(epsilon: f64, n_list: &[usize]) -> Result<GrowthProfile> {
    if n_list.is_empty() {
        return Err(crate::Error::Empty("block lengths"));
    }
    let th = Threshold::default();
    let mut rows = Vec::new();
    for &n in n_list {
        let cover = HilbertCover::new(epsilon, n)?.verify(th);
        if !cover.valid() {
            return Err(domain("Hilbert cover certificate failed to verify"));
        }
        let grid = HilbertGrid::new(epsilon, n)?.verify(th);
        if !grid.valid() {
            return Err(domain("Hilbert grid certificate failed to verify"));
        }
        rows.push(count_row(n, cover.block_count, None, BoundType::Upper));
        rows.push(count_row(n, grid.member_count, None, BoundType::Lower));
    }
    GrowthProfile::from_rows(epsilon, OrbitKind::Max, rows, Estimator::MinOverN)
}

fn count_row(n: usize, count: BigUint, mode: Option<Mode>, bound: BoundType) -> GrowthRow {
    let log_count = ln_biguint(&count);
    GrowthRow {
        n,
        count,
        log_count,
        per_step: log_count / n as f64,
        mode,
        bound,
    }
}

/// `ln x` for counts beyond the `f64` range; `ln 0` is reported as 0.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return 0.0;
    }
    if bits <= 1000 {
        let v: f64 = num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY);
        return libm::log(v);
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    let v: f64 = num_traits::ToPrimitive::to_f64(&top).unwrap_or(0.0);
    libm::log(v) + shift as f64 * core::f64::consts::LN_2
}

/// Ordinary least squares `y ≈ a x + b`; returns `(a, b)`.
pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if !(sxx > 0.0) {
        return Err(domain("regression needs two distinct abscissae"));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let a = sxy / sxx;
    Ok((a, my - a * mx))
}
