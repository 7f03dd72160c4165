//! Randomized sweeps of the information inequalities on small alphabets.
//!
//! Every instance is built so that the hypotheses of its inequality hold by
//! construction; the recorded slack is signed so that `≥ 0` means the
//! inequality held. A sweep fails when any slack drops below `−SLACK_TOL`.

use mdim_core::info::{
    additivity_checks, concavity_in_source, convexity_in_channel, fano_gap, mutual_information, quantize_y,
    separated_mi_lower_bounds, Channel, Distribution, Joint, Joint3, PartitionMap,
};
use mdim_core::metric::{max_separated_set, FiniteMetricSpace, Mode, SearchOptions};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{no_system, only_params, run_tasks, task, Ctx, Job, Outcome, TaskFn};
use crate::config::ExperimentConfig;
use crate::error::{Result, RunError};
use crate::output::{json_bytes, Table, Unit};

pub const DEFAULT_INSTANCES: usize = 1000;
pub const SLACK_TOL: f64 = 1e-10;
/// Largest alphabet drawn for any single variable.
pub const MAX_SUPPORT: usize = 8;
const MIX_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    DataProcessing,
    Fano,
    SeparatedAverage,
    SeparatedCounting,
    Subadditivity,
    Superadditivity,
    ConcavityInSource,
    ConvexityInChannel,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::DataProcessing,
        Check::Fano,
        Check::SeparatedAverage,
        Check::SeparatedCounting,
        Check::Subadditivity,
        Check::Superadditivity,
        Check::ConcavityInSource,
        Check::ConvexityInChannel,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Check::DataProcessing => "data_processing",
            Check::Fano => "fano",
            Check::SeparatedAverage => "separated_average",
            Check::SeparatedCounting => "separated_counting",
            Check::Subadditivity => "subadditivity",
            Check::Superadditivity => "superadditivity",
            Check::ConcavityInSource => "concavity_in_source",
            Check::ConvexityInChannel => "convexity_in_channel",
        }
    }

    fn index(self) -> u64 {
        Check::ALL.iter().position(|&c| c == self).expect("listed") as u64
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub check: Check,
    pub instances: usize,
    pub min_slack: f64,
    /// Seed of the instance attaining `min_slack`.
    pub worst_seed: u64,
    pub failures: usize,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Each check draws from its own stream, so adding a check does not move
/// the instances of the others.
fn rng_for(check: Check, seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(check.index());
    rng
}

/// Random weights with about a fifth of the entries zeroed, never all.
fn weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k)
        .map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen::<f64>() })
        .collect();
    if w.iter().all(|&v| v == 0.0) {
        let i = rng.gen_range(0..k);
        w[i] = 1.0;
    }
    w
}

fn pmf(rng: &mut ChaCha8Rng, k: usize) -> Result<Distribution> {
    Ok(Distribution::from_weights(&weights(rng, k))?)
}

fn channel(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> Result<Channel> {
    let rows: Vec<Vec<f64>> = (0..nx)
        .map(|_| pmf(rng, ny).map(|d| d.probs().to_vec()))
        .collect::<Result<_>>()?;
    Ok(Channel::from_rows(&rows)?)
}

fn joint(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> Result<Joint> {
    Ok(Joint::new(nx, ny, pmf(rng, nx * ny)?.probs().to_vec())?)
}

fn size(rng: &mut ChaCha8Rng) -> usize {
    rng.gen_range(2..=MAX_SUPPORT)
}

fn data_processing(rng: &mut ChaCha8Rng) -> Result<f64> {
    let (nx, ny) = (size(rng), size(rng));
    let j = joint(rng, nx, ny)?;
    let cells = rng.gen_range(1..=ny);
    let labels: Vec<usize> = (0..ny).map(|_| rng.gen_range(0..cells)).collect();
    let q = PartitionMap::from_cells(&labels);
    Ok(mutual_information(&j) - mutual_information(&quantize_y(&j, &q)?))
}

fn fano(rng: &mut ChaCha8Rng) -> Result<f64> {
    let (nx, ny) = (size(rng), size(rng));
    let j = joint(rng, nx, ny)?;
    let decoder: Vec<usize> = if rng.gen_bool(0.5) {
        (0..ny).map(|_| rng.gen_range(0..nx)).collect()
    } else {
        // MAP decoder: the smallest error any decoder can reach.
        (0..ny)
            .map(|y| (0..nx).fold(0, |b, x| if j.get(x, y) > j.get(b, y) { x } else { b }))
            .collect()
    };
    Ok(fano_gap(&j, &decoder)?.slack)
}

fn subadditivity(rng: &mut ChaCha8Rng) -> Result<f64> {
    let (nx, ny, nz) = (size(rng), size(rng), size(rng));
    let py = pmf(rng, ny)?;
    let (cx, cz) = (channel(rng, ny, nx)?, channel(rng, ny, nz)?);
    let mut p = vec![0.0; nx * ny * nz];
    for x in 0..nx {
        for y in 0..ny {
            for z in 0..nz {
                p[(x * ny + y) * nz + z] = py.get(y) * cx.get(y, x) * cz.get(y, z);
            }
        }
    }
    let rep = additivity_checks(&Joint3::new(nx, ny, nz, p)?);
    if !rep.cond_indep_given_y {
        return Err(RunError::Task("constructed chain X − Y − Z not detected".into()));
    }
    Ok(rep.sub_slack)
}

fn superadditivity(rng: &mut ChaCha8Rng) -> Result<f64> {
    let (nx, ny, nz) = (size(rng), size(rng), size(rng));
    let (px, pz) = (pmf(rng, nx)?, pmf(rng, nz)?);
    let ch = channel(rng, nx * nz, ny)?;
    let mut p = vec![0.0; nx * ny * nz];
    for x in 0..nx {
        for y in 0..ny {
            for z in 0..nz {
                p[(x * ny + y) * nz + z] = px.get(x) * pz.get(z) * ch.get(x * nz + z, y);
            }
        }
    }
    let rep = additivity_checks(&Joint3::new(nx, ny, nz, p)?);
    if !rep.indep_xz {
        return Err(RunError::Task("constructed independence of X and Z not detected".into()));
    }
    Ok(rep.super_slack)
}

fn min_slack(rows: impl IntoIterator<Item = f64>) -> f64 {
    rows.into_iter().fold(f64::INFINITY, f64::min)
}

fn concavity(rng: &mut ChaCha8Rng) -> Result<f64> {
    let (nx, ny) = (size(rng), size(rng));
    let (m1, m2, ch) = (pmf(rng, nx)?, pmf(rng, nx)?, channel(rng, nx, ny)?);
    Ok(min_slack(concavity_in_source(&m1, &m2, &ch, &MIX_GRID)?.iter().map(|r| r.slack)))
}

fn convexity(rng: &mut ChaCha8Rng) -> Result<f64> {
    let (nx, ny) = (size(rng), size(rng));
    let (mu, c1, c2) = (pmf(rng, nx)?, channel(rng, nx, ny)?, channel(rng, nx, ny)?);
    Ok(min_slack(convexity_in_channel(&mu, &c1, &c2, &MIX_GRID)?.iter().map(|r| r.slack)))
}

/// Alphabet size and block length pairs with `|A|^n ≤ MAX_SUPPORT`.
const WORD_SHAPES: [(usize, usize); 9] = [(2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (7, 1), (8, 1), (2, 2), (2, 3)];

/// Counting bound. `A` is a random point set on a line, `S ⊂ A^n` a greedy
/// `2ε`-separated set under the max-coordinate metric, and `Y` replaces
/// each coordinate by a uniform letter with probability `r`. The expected
/// number of far coordinates is computed exactly and `α` is drawn above it.
fn separated_counting(rng: &mut ChaCha8Rng) -> Result<f64> {
    let (a, n) = *WORD_SHAPES.choose(rng).expect("nonempty");
    let letters: Vec<f64> = (0..a).map(|_| rng.gen::<f64>()).collect();
    let eps = rng.gen_range(0.02..0.4);
    let words = a.pow(n as u32);
    let letter = |w: usize, k: usize| (w / a.pow(k as u32)) % a;
    let dn = |u: usize, v: usize| (0..n).map(|k| (letters[letter(u, k)] - letters[letter(v, k)]).abs()).fold(0.0, f64::max);

    let mut order: Vec<usize> = (0..words).collect();
    order.shuffle(rng);
    let mut s: Vec<usize> = Vec::new();
    for w in order {
        if s.iter().all(|&u| dn(u, w) >= 2.0 * eps) {
            s.push(w);
        }
    }

    // Far letters per letter, and the expected far count per unit of `r`.
    let far: Vec<usize> = (0..a)
        .map(|i| (0..a).filter(|&b| (letters[i] - letters[b]).abs() >= eps).count())
        .collect();
    let per_r: f64 = s
        .iter()
        .map(|&w| (0..n).map(|k| far[letter(w, k)] as f64 / a as f64).sum::<f64>())
        .sum::<f64>()
        / s.len() as f64;
    let mut r: f64 = rng.gen();
    if r * per_r >= 0.45 * n as f64 {
        r = 0.45 * n as f64 / per_r;
    }
    let expected = r * per_r / n as f64;
    let alpha = expected + rng.gen_range(0.01..=1.0) * (0.5 - expected);

    let mut rows = vec![vec![0.0; words]; s.len()];
    for (i, &w) in s.iter().enumerate() {
        for (v, p) in rows[i].iter_mut().enumerate() {
            *p = (0..n)
                .map(|k| {
                    let same = if letter(w, k) == letter(v, k) { 1.0 - r } else { 0.0 };
                    same + r / a as f64
                })
                .product();
        }
    }
    let mu = Distribution::uniform(s.len());
    let j = Joint::from_source_channel(&mu, &Channel::from_rows(&rows)?)?;
    let bound = separated_mi_lower_bounds(s.len() as f64, 3.0, n, alpha, a as f64)?.counting;
    Ok(mutual_information(&j) - bound)
}

/// Average-distortion bound with its decoding step. `S` is a greedy
/// `2Dε`-separated set in a random 20-point plane space. From `x ∈ S`, `Y`
/// is uniform on the open `ε`-ball with probability `1 − q_x` and uniform on
/// the space otherwise, with `q_x` small enough that `E d(x, Y) < ε`. Returns
/// the least of the mutual information slack, the margin of the
/// nearest-point decoder below `1/D`, and its Fano slack.
fn separated_average(rng: &mut ChaCha8Rng) -> Result<f64> {
    const POINTS: usize = 20;
    let pts: Vec<(f64, f64)> = (0..POINTS).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let space = FiniteMetricSpace::from_symmetric_fn(POINTS, |i, j| {
        (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1)
    });
    let d_ratio = rng.gen_range(2.05..=6.0);
    let sep = rng.gen_range(0.15..0.6);
    let eps = sep / (2.0 * d_ratio);
    let s = max_separated_set(&space, sep, Mode::Greedy, &SearchOptions::default())?.members;

    let mut rows = Vec::with_capacity(s.len());
    for &x in &s {
        let ball: Vec<usize> = (0..POINTS).filter(|&y| space.dist(x, y) < eps).collect();
        let near = ball.iter().map(|&y| space.dist(x, y)).sum::<f64>() / ball.len() as f64;
        let spread = (0..POINTS).map(|y| space.dist(x, y)).sum::<f64>() / POINTS as f64;
        let q = if spread > near {
            rng.gen_range(0.0..0.95) * (eps - near) / (spread - near)
        } else {
            rng.gen_range(0.0..0.95)
        };
        let mut row = vec![q / POINTS as f64; POINTS];
        for &y in &ball {
            row[y] += (1.0 - q) / ball.len() as f64;
        }
        rows.push(row);
    }
    let mu = Distribution::uniform(s.len());
    let j = Joint::from_source_channel(&mu, &Channel::from_rows(&rows)?)?;
    let mean_dist: f64 = (0..s.len())
        .map(|i| (0..POINTS).map(|y| j.get(i, y) * space.dist(s[i], y)).sum::<f64>())
        .sum();
    if !(mean_dist < eps) {
        return Err(RunError::Task("constructed channel misses E d(X, Y) < ε".into()));
    }
    let bound = separated_mi_lower_bounds(s.len() as f64, d_ratio, 1, 0.5, 1.0)?.average;
    let decoder: Vec<usize> = (0..POINTS)
        .map(|y| (0..s.len()).fold(0, |b, i| if space.dist(s[i], y) < space.dist(s[b], y) { i } else { b }))
        .collect();
    let f = fano_gap(&j, &decoder)?;
    Ok((mutual_information(&j) - bound).min(1.0 / d_ratio - f.p_error).min(f.slack))
}

/// Slack of one instance of `check` drawn from `seed`.
pub fn instance_slack(check: Check, seed: u64) -> Result<f64> {
    let rng = &mut rng_for(check, seed);
    match check {
        Check::DataProcessing => data_processing(rng),
        Check::Fano => fano(rng),
        Check::SeparatedAverage => separated_average(rng),
        Check::SeparatedCounting => separated_counting(rng),
        Check::Subadditivity => subadditivity(rng),
        Check::Superadditivity => superadditivity(rng),
        Check::ConcavityInSource => concavity(rng),
        Check::ConvexityInChannel => convexity(rng),
    }
}

/// Sweeps `instances` consecutive seeds from `base`. An instance that
/// cannot be built counts as a failure.
pub fn run_check(check: Check, base: u64, instances: usize) -> Result<CheckSummary> {
    let mut out = CheckSummary {
        check,
        instances,
        min_slack: f64::INFINITY,
        worst_seed: base,
        failures: 0,
    };
    for i in 0..instances as u64 {
        let seed = base.wrapping_add(i);
        let slack = instance_slack(check, seed).unwrap_or(f64::NEG_INFINITY);
        if !(slack >= -SLACK_TOL) {
            out.failures += 1;
        }
        if !(slack >= out.min_slack) {
            out.min_slack = slack;
            out.worst_seed = seed;
        }
    }
    Ok(out)
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Job> {
    no_system(cfg)?;
    only_params(cfg, &["instances"])?;
    let instances = cfg.params.instances.unwrap_or(DEFAULT_INSTANCES);
    let base = cfg.seed;
    Ok(Box::new(move |ctx: &Ctx| {
        let tasks: Vec<(String, TaskFn<'_, CheckSummary>)> = Check::ALL
            .iter()
            .map(|&c| (c.key().to_string(), task(move || run_check(c, base, instances))))
            .collect();
        let (sums, mut tasks) = run_tasks(tasks);
        for (rec, s) in tasks.iter_mut().zip(&sums) {
            if let Some(s) = s {
                rec.check(s.passed(), || format!("{} instances below tolerance", s.failures));
            }
        }
        let sums: Vec<CheckSummary> = sums.into_iter().flatten().collect();
        let mut t = Table::new(&[
            ("check", Unit::Text),
            ("instances", Unit::Dimensionless),
            ("min_slack", Unit::Dimensionless),
            ("worst_seed", Unit::Dimensionless),
            ("failures", Unit::Dimensionless),
            ("passed", Unit::Text),
        ]);
        for s in &sums {
            t.push(vec![
                s.check.key().into(),
                s.instances.into(),
                s.min_slack.into(),
                s.worst_seed.into(),
                s.failures.into(),
                s.passed().into(),
            ]);
        }
        Ok(Outcome {
            files: vec![(".csv".into(), t.to_bytes(ctx.bits)?), (".json".into(), json_bytes(&sums)?)],
            tasks,
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible_and_streams_differ() {
        for c in Check::ALL {
            assert_eq!(instance_slack(c, 17).unwrap(), instance_slack(c, 17).unwrap(), "{}", c.key());
        }
        let a: Vec<f64> = (0..5).map(|s| instance_slack(Check::Fano, s).unwrap()).collect();
        let b: Vec<f64> = (0..5).map(|s| instance_slack(Check::DataProcessing, s).unwrap()).collect();
        assert_ne!(a, b);
    }

    #[test]
    fn summaries_track_the_worst_instance() {
        let s = run_check(Check::ConcavityInSource, 100, 30).unwrap();
        let worst = (100..130).map(|seed| instance_slack(Check::ConcavityInSource, seed).unwrap()).fold(f64::INFINITY, f64::min);
        assert_eq!(s.min_slack, worst);
        assert_eq!(instance_slack(Check::ConcavityInSource, s.worst_seed).unwrap(), worst);
        assert!(s.passed());
    }

    #[test]
    fn uniform_mixture_is_a_fixed_point_of_concavity() {
        // At t ∈ {0, 1} the mixture is an endpoint, so the minimum slack over
        // the grid is at most 0 up to rounding.
        for seed in 0..20 {
            assert!(instance_slack(Check::ConcavityInSource, seed).unwrap() <= 1e-12);
            assert!(instance_slack(Check::ConvexityInChannel, seed).unwrap() <= 1e-12);
        }
    }
}
