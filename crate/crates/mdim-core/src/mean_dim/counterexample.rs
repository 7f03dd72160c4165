use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{alphabet_size, CounterexamplePoint, CounterexampleSystem};
use crate::error::domain;
use crate::tol::Threshold;
use crate::Result;

/// Parameters of [`counterexample_report`].
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleOptions {
    /// Cap on `|A_n|`.
    pub cap: u64,
    pub levels: Vec<u32>,
    pub eps_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    /// Random points per triple, on top of the per-offset worst case.
    pub samples: usize,
    /// Random pairs per level in the separation check.
    pub pairs: usize,
    /// The separated family lives on `N = blocks · 2^n`.
    pub blocks: usize,
    /// Coordinates kept beyond `[0, N)` on each side; the rest is bounded.
    pub pad: i64,
    pub seed: u64,
}

impl Default for CounterexampleOptions {
    fn default() -> Self {
        Self {
            cap: 4096,
            levels: (1..=10).collect(),
            eps_grid: alloc::vec![1.0, 0.5, 0.25],
            n_grid: alloc::vec![24, 520, 1040, 2080],
            samples: 1000,
            pairs: 200,
            blocks: 2,
            pad: 64,
            seed: 0,
        }
    }
}

/// `L(ε) = ⌈log2(8/ε)⌉`, the tail cutoff with `Σ_{|k|>L} 2^{−|k|} ≤ ε/4`.
pub fn tail_cutoff(epsilon: f64) -> u32 {
    crate::util::ceil_log2(8.0 / epsilon)
}

/// Hypotheses `N ≥ 2L + 2^n` and `n > log2(1/ε) + log2(48L + 24)`.
pub fn collapse_hypotheses(level: u32, epsilon: f64, big_n: usize) -> core::result::Result<(), String> {
    let l = tail_cutoff(epsilon) as f64;
    let need_n = 2.0 * l + libm::ldexp(1.0, level as i32);
    if (big_n as f64) < need_n {
        return Err(format!("N = {big_n} < 2L + 2^n = {need_n}"));
    }
    let need_level = libm::log2(1.0 / epsilon) + libm::log2(48.0 * l + 24.0);
    if !(level as f64 > need_level) {
        return Err(format!("n = {level} ≤ log2(1/ε) + log2(48L+24) = {need_level:.4}"));
    }
    Ok(())
}

/// One `(n, ε, N)` triple meeting the hypotheses.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CollapseRow {
    pub level: u32,
    pub epsilon: f64,
    pub big_l: u32,
    pub big_n: usize,
    /// Upper bound on `sup_{x ∈ X_n} d̄_N(x, 0)`: full support at every
    /// offset plus the bounded tail.
    pub worst: f64,
    /// Largest bound over the random points.
    pub sampled: f64,
    pub samples: usize,
    /// `worst < ε/2` and `sampled < ε/2`.
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SkippedTriple {
    pub level: u32,
    pub epsilon: f64,
    pub big_n: usize,
    pub reason: String,
}

/// Separation of the product family at one level.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SeparationRow {
    pub level: u32,
    pub big_n: usize,
    pub alphabet: u64,
    /// `(N/2^n) ln |A_n|`.
    pub log_family_size: f64,
    pub pairs: usize,
    /// Smallest `d_N` over the checked pairs.
    pub min_distance: f64,
    /// `min_distance ≥ 1/n`.
    pub passed: bool,
}

/// Growth contrast at one `ε`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ContrastRow {
    pub epsilon: f64,
    /// Level with the best separated growth among levels `n ≤ 1/ε`.
    pub separated_level: Option<u32>,
    /// `2^{−n} ln |A_n|`, a lower bound on `(1/N) log #(X_n, d_N, ε)`
    /// for `N` a multiple of `2^n`.
    pub separated_growth: f64,
    /// `separated_growth / |ln ε|`; `None` at `ε = 1`.
    pub separated_ratio: Option<f64>,
    /// Levels whose every tested `N` collapsed into one `d̄_N` ball of
    /// radius `ε/2`, so `(1/N) log #(X_n, d̄_N, ε) = 0` there.
    pub collapsed_levels: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CounterexampleReport {
    pub cap: u64,
    pub triples: Vec<CollapseRow>,
    pub skipped: Vec<SkippedTriple>,
    pub separation: Vec<SeparationRow>,
    pub contrast: Vec<ContrastRow>,
}

impl CounterexampleReport {
    /// Every tested triple and every separation row passed, and at least
    /// one triple was tested.
    pub fn passed(&self) -> bool {
        !self.triples.is_empty() && self.triples.iter().all(|t| t.passed) && self.separation.iter().all(|s| s.passed)
    }
}

/// Upper bound on the `d̄_N(x, 0)` contribution of coordinates outside
/// `[−pad, N−1+pad]`: each side adds at most `2^{−(distance to the window
/// edge)}` times the symbol norm `1/n` per step.
fn tail_bound(level: u32, big_n: usize, pad: i64) -> f64 {
    4.0 * libm::ldexp(1.0, -(pad as i32)) / (level as f64 * big_n as f64)
}

/// Checks the `d̄_N` collapse, the `d_N` separation of the product family
/// and reports the growth contrast between them.
pub fn counterexample_report(opts: &CounterexampleOptions) -> Result<CounterexampleReport> {
    if opts.levels.is_empty() || opts.eps_grid.is_empty() || opts.n_grid.is_empty() {
        return Err(crate::Error::Empty("counterexample grids"));
    }
    if opts.eps_grid.iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
        return Err(domain("epsilons must lie in (0, 1]"));
    }
    let max_n = *opts.n_grid.iter().max().unwrap_or(&0);
    if opts.levels.iter().any(|&n| n == 0 || n > 30 || (1usize << n) > max_n) {
        return Err(domain("every level needs 1 ≤ n and 2^n ≤ max N"));
    }
    if opts.pad < 1 || opts.pad > 1000 || opts.blocks == 0 {
        return Err(domain("pad must lie in [1, 1000] and blocks ≥ 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut triples = Vec::new();
    let mut skipped = Vec::new();
    for &level in &opts.levels {
        for &eps in &opts.eps_grid {
            for &big_n in &opts.n_grid {
                if let Err(reason) = collapse_hypotheses(level, eps, big_n) {
                    skipped.push(SkippedTriple {
                        level,
                        epsilon: eps,
                        big_n,
                        reason,
                    });
                    continue;
                }
                triples.push(collapse_row(level, eps, big_n, opts, &mut rng)?);
            }
        }
    }

    let mut separation = Vec::new();
    for &level in &opts.levels {
        separation.push(separation_row(level, opts, &mut rng)?);
    }

    let contrast = opts
        .eps_grid
        .iter()
        .map(|&eps| {
            let best = opts
                .levels
                .iter()
                .filter(|&&n| n as f64 * eps <= 1.0)
                .map(|&n| (n, libm::ldexp(libm::log(alphabet_size(n, opts.cap) as f64), -(n as i32))))
                .fold(None, |acc: Option<(u32, f64)>, v| match acc {
                    Some(a) if a.1 >= v.1 => Some(a),
                    _ => Some(v),
                });
            let collapsed_levels = opts
                .levels
                .iter()
                .copied()
                .filter(|&n| {
                    let rows: Vec<&CollapseRow> = triples.iter().filter(|t| t.level == n && t.epsilon == eps).collect();
                    !rows.is_empty() && rows.iter().all(|t| t.passed)
                })
                .collect();
            let growth = best.map_or(0.0, |b| b.1);
            let log_inv = -libm::log(eps);
            ContrastRow {
                epsilon: eps,
                separated_level: best.map(|b| b.0),
                separated_growth: growth,
                separated_ratio: (log_inv > 0.0).then(|| growth / log_inv),
                collapsed_levels,
            }
        })
        .collect();

    Ok(CounterexampleReport {
        cap: opts.cap,
        triples,
        skipped,
        separation,
        contrast,
    })
}

fn collapse_row(level: u32, eps: f64, big_n: usize, opts: &CounterexampleOptions, rng: &mut ChaCha8Rng) -> Result<CollapseRow> {
    let window = (-opts.pad, big_n as i64 - 1 + opts.pad);
    let sys = CounterexampleSystem::new(level, opts.cap, window)?;
    let tail = tail_bound(level, big_n, opts.pad);
    // d̄_N(x, 0) depends only on which coordinates are nonzero, so the full
    // support at each offset dominates every point with that offset.
    let mut worst = 0.0f64;
    for offset in 0..sys.period() as u64 {
        let full = alloc::vec![1u64; sys.positions(offset).len()];
        let x = sys.point(offset, &full)?;
        worst = worst.max(x.avg_orbit_distance_to_zero(big_n) + tail);
    }
    let mut sampled = 0.0f64;
    for _ in 0..opts.samples {
        let x = sys.sample_point(rng, false);
        sampled = sampled.max(x.avg_orbit_distance_to_zero(big_n) + tail);
    }
    let half = eps / 2.0;
    Ok(CollapseRow {
        level,
        epsilon: eps,
        big_l: tail_cutoff(eps),
        big_n,
        worst,
        sampled,
        samples: opts.samples,
        passed: worst < half && sampled < half,
    })
}

/// Members of the family: offset 0, free symbols on `0, 2^n, …, N − 2^n`.
fn separation_row(level: u32, opts: &CounterexampleOptions, rng: &mut ChaCha8Rng) -> Result<SeparationRow> {
    let period = 1usize << level;
    let big_n = opts.blocks * period;
    let size = alphabet_size(level, opts.cap);
    let window = (0, big_n as i64 - 1);
    let member = |symbols: &[u64]| -> Result<CounterexamplePoint> {
        let pairs: Vec<(i64, u64)> = symbols.iter().enumerate().map(|(j, &s)| ((j * period) as i64, s)).collect();
        CounterexamplePoint::new(level, 0, window, &pairs, size)
    };
    let mut min_distance = f64::INFINITY;
    let mut pairs = 0;
    // The pair differing only in the first symbol, then random distinct pairs.
    let mut first = alloc::vec![0u64; opts.blocks];
    let mut second = first.clone();
    second[0] = 1;
    for t in 0..=opts.pairs {
        if t > 0 {
            first = (0..opts.blocks).map(|_| rng.gen_range(0..size)).collect();
            second = (0..opts.blocks).map(|_| rng.gen_range(0..size)).collect();
            if first == second {
                let j = rng.gen_range(0..opts.blocks);
                second[j] = (second[j] + 1) % size;
            }
        }
        let d = member(&first)?.max_orbit_distance(&member(&second)?, big_n);
        min_distance = min_distance.min(d);
        pairs += 1;
    }
    let delta = 1.0 / level as f64;
    Ok(SeparationRow {
        level,
        big_n,
        alphabet: size,
        log_family_size: opts.blocks as f64 * libm::log(size as f64),
        pairs,
        min_distance,
        passed: Threshold::default().ge(min_distance, delta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_cutoff_bounds_the_weight_tail() {
        for eps in [1.0, 0.5, 0.3, 0.1, 0.01, 1e-4] {
            let l = tail_cutoff(eps);
            // Σ_{|k|>L} 2^{−|k|} = 2^{1−L}.
            assert!(libm::ldexp(1.0, 1 - l as i32) <= eps / 4.0, "{eps}");
            assert!(l == 0 || libm::ldexp(1.0, 2 - l as i32) > eps / 4.0, "{eps}: L not minimal");
        }
    }

    #[test]
    fn tail_bound_dominates_the_outside_sum() {
        // Worst case outside the window: symbol norm 1/n at every
        // coordinate beyond the pad on both sides, averaged over N shifts.
        let (level, big_n, pad) = (3u32, 40usize, 6i64);
        let mut direct = 0.0;
        for k in 0..big_n as i64 {
            for j in (big_n as i64 + pad)..(big_n as i64 + pad + 200) {
                direct += libm::ldexp(1.0, -((j - k) as i32)) / level as f64;
            }
            for j in (-pad - 200)..-pad {
                direct += libm::ldexp(1.0, -((k - j) as i32)) / level as f64;
            }
        }
        direct /= big_n as f64;
        assert!(direct <= tail_bound(level, big_n, pad) * (1.0 + 1e-12));
    }

    #[test]
    fn hypotheses_name_the_failing_condition() {
        assert!(collapse_hypotheses(1, 0.5, 4).unwrap_err().contains("2L + 2^n"));
        assert!(collapse_hypotheses(2, 0.5, 1000).is_err());
    }
}
