use alloc::vec::Vec;

use super::blahut::blahut_arimoto;
use super::codebook::{codebook_rate, CodebookRate};
use super::distortion::{build_distortion, Family, Reproduction};
use super::invariant::WeightedStates;
use super::problem::{RdProblem, RdStatus, RdTarget, SolverOptions};
use crate::dynamics::{orbit, orbit_distance, OrbitKind, System};
use crate::error::domain;
use crate::info::{entropy_of, Channel};
use crate::metric::{covering_number, FiniteMetricSpace, Mode, SearchOptions};
use crate::{Error, Result};

/// Relative margin turning the strict constraint `E ρ < level` into
/// `E ρ ≤ level − margin`.
pub const STRICT_MARGIN: f64 = 1e-9;

/// Where reproduction symbols come from at each block length.
#[derive(Debug, Clone, PartialEq)]
pub enum Dictionary<T> {
    /// Orbits of the source points themselves.
    SourceOrbits,
    /// Orbits of the given states.
    Orbits(Vec<T>),
    /// Time-constant tuples `(t, t, …, t)`.
    Constant(Vec<T>),
    /// One representative per block of a cover of `states` under `d̄_n`
    /// (average families) or `d_n` (counting), blocks of diameter `< ε`.
    /// Every source point must be one of `states`.
    CoverRepresentatives { states: Vec<T>, mode: Mode },
}

/// One block length of a rate table. Rates are per step, in nats.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub n: usize,
    pub dictionary_size: usize,
    /// Budget on `E ρ` after the strict-inequality margin.
    pub target: f64,
    /// `None` when no channel into the dictionary meets the budget.
    pub rate: Option<f64>,
    pub lower_bound: Option<f64>,
    pub distortion: Option<f64>,
    pub status: Option<RdStatus>,
    /// Blahut–Arimoto iterations; 0 when no solve ran.
    pub iterations: usize,
    /// Size of the cover behind a representative codebook.
    pub cover_count: Option<usize>,
    /// The representative map itself, when its weights are integral.
    pub codebook: Option<CodebookRate>,
}

/// Rates over block lengths and their minimum. Every rate is an upper
/// bound on the dictionary-free infimum at that `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateTable {
    pub family: Family,
    /// `ε` for average families, `α` for counting.
    pub level: f64,
    pub rows: Vec<RateRow>,
    /// Minimum over feasible rows.
    pub estimate: Option<f64>,
}

/// Limits for [`estimate_rate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    pub solver: SolverOptions,
    pub search: SearchOptions,
    /// Largest `|source| × |dictionary|` distortion matrix.
    pub max_cells: usize,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions {
                tol: 1e-7,
                ..SolverOptions::default()
            },
            search: SearchOptions::default(),
            max_cells: 1 << 22,
        }
    }
}

fn target_for<S: System>(sys: &S, family: Family, level: f64) -> Result<f64> {
    if !(level > 0.0) {
        return Err(domain("distortion level must be positive"));
    }
    Ok(match family {
        Family::Avg { p } => libm::pow(level, p) - STRICT_MARGIN * libm::pow(sys.diameter_bound(), p),
        Family::Counting { .. } => level - STRICT_MARGIN,
    })
}

/// Solves `min I(X;Y)/n` over channels into the dictionary subject to the
/// family's budget at each `n` in `n_list`.
///
/// `level` is `ε` for [`Family::Avg`] (budget `ε^p`) and `α` for
/// [`Family::Counting`] (budget `α`).
pub fn estimate_rate<S: System>(
    sys: &S,
    mu: &WeightedStates<S::State>,
    family: Family,
    level: f64,
    n_list: &[usize],
    dict: &Dictionary<S::State>,
    opts: &EstimateOptions,
) -> Result<RateTable> {
    if n_list.is_empty() {
        return Err(crate::Error::Empty("block lengths"));
    }
    let target = target_for(sys, family, level)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        rows.push(rate_row(sys, mu, family, level, target, n, dict, opts)?);
    }
    let estimate = rows
        .iter()
        .filter_map(|r| r.rate)
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))));
    Ok(RateTable {
        family,
        level,
        rows,
        estimate,
    })
}

#[allow(clippy::too_many_arguments)]
fn rate_row<S: System>(
    sys: &S,
    mu: &WeightedStates<S::State>,
    family: Family,
    level: f64,
    target: f64,
    n: usize,
    dict: &Dictionary<S::State>,
    opts: &EstimateOptions,
) -> Result<RateRow> {
    if n == 0 {
        return Err(domain("block length must be at least 1"));
    }
    let mut cover_count = None;
    let mut representative: Option<Vec<usize>> = None;
    let repro = match dict {
        Dictionary::SourceOrbits => Reproduction::Orbits(mu.states.clone()),
        Dictionary::Orbits(v) => Reproduction::Orbits(v.clone()),
        Dictionary::Constant(v) => Reproduction::Tuples(v.iter().map(|t| alloc::vec![t.clone(); n]).collect()),
        Dictionary::CoverRepresentatives { states, mode } => {
            let (kind, eps) = match family {
                Family::Avg { .. } => (OrbitKind::Avg, level),
                Family::Counting { eps } => (OrbitKind::Max, eps),
            };
            let orbits: Vec<Vec<S::State>> = states.iter().map(|s| orbit(sys, s, n)).collect();
            let space = FiniteMetricSpace::from_symmetric_fn(states.len(), |i, j| {
                orbit_distance(sys, &orbits[i], &orbits[j], &kind)
            });
            let cover = covering_number(&space, eps, *mode, &opts.search)?;
            let mut block_of = alloc::vec![0usize; states.len()];
            for (b, block) in cover.certificate.blocks.iter().enumerate() {
                for &i in block {
                    block_of[i] = b;
                }
            }
            let map = mu
                .states
                .iter()
                .map(|s| {
                    states
                        .iter()
                        .position(|t| t == s)
                        .map(|i| block_of[i])
                        .ok_or_else(|| domain("source point missing from the covered state list"))
                })
                .collect::<Result<Vec<usize>>>()?;
            cover_count = Some(cover.count);
            representative = Some(map);
            Reproduction::Orbits(cover.certificate.blocks.iter().map(|b| states[b[0]].clone()).collect())
        }
    };
    let cells = (mu.len() as u128) * (repro.len() as u128);
    if cells > opts.max_cells as u128 {
        return Err(Error::Budget {
            what: "rate dictionary",
            needed: cells,
            budget: opts.max_cells as u128,
        });
    }
    let matrix = build_distortion(sys, n, &mu.states, &repro, family)?;
    let prob = RdProblem::new(mu.weights.clone(), matrix)?;
    let dictionary_size = repro.len();

    let mut row = RateRow {
        n,
        dictionary_size,
        target,
        rate: None,
        lower_bound: None,
        distortion: None,
        status: None,
        iterations: 0,
        cover_count,
        codebook: None,
    };
    match blahut_arimoto(&prob, RdTarget::Distortion(target), &opts.solver) {
        Ok(pt) => {
            row.rate = Some(pt.rate / n as f64);
            row.lower_bound = Some(pt.lower_bound / n as f64);
            row.distortion = Some(pt.distortion);
            row.status = Some(pt.status);
            row.iterations = pt.iterations;
        }
        Err(Error::Infeasible { .. }) => {}
        Err(e) => return Err(e),
    }

    // The representative map is itself a feasible channel when every block
    // meets the budget; its rate caps the solver's.
    if let Some(map) = representative {
        let ch = Channel::deterministic(&map, dictionary_size)?;
        let dist = prob.expected_distortion(&ch);
        if dist <= target {
            // For a deterministic channel I(X;Y) = H(f(X)).
            let h = match &mu.counts {
                Some(counts) => {
                    let mut per = alloc::vec![0u64; dictionary_size];
                    for (&b, &c) in map.iter().zip(counts) {
                        per[b] += c;
                    }
                    let cb = codebook_rate(&per, dictionary_size as u64);
                    let h = cb.entropy;
                    row.codebook = Some(cb);
                    h
                }
                None => {
                    let mut push = alloc::vec![0.0; dictionary_size];
                    for (&b, &p) in map.iter().zip(prob.source.probs()) {
                        push[b] += p;
                    }
                    entropy_of(&push)
                }
            };
            let r = h / n as f64;
            if row.rate.map_or(true, |v| r <= v) {
                row.rate = Some(r);
                row.distortion = Some(dist);
                if row.status.is_none() {
                    row.status = Some(RdStatus::Converged);
                }
            }
        }
    }
    Ok(row)
}
