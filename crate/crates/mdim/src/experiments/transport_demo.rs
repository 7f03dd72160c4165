//! Optimal and greedy couplings on random plane configurations, and the
//! convergence of `W(μ_k, μ)` along `μ_k = (1 − 2^{−k})μ + 2^{−k}ν`.

use mdim_core::metric::FiniteMetricSpace;
use mdim_core::transport::{diagonal_mass_gap, greedy_cyclic_coupling, wasserstein1, Coupling};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{no_system, only_params, run_tasks, task, Ctx, Job, Outcome, TaskFn};
use crate::config::ExperimentConfig;
use crate::error::{Result, RunError};
use crate::formats::SpaceFile;
use crate::output::{json_bytes, Table, Unit};

pub const DEFAULT_SUPPORT: usize = 6;
pub const DEFAULT_INSTANCES: usize = 20;
/// Mass units per measure; greedy plans on integer units are exact.
pub const UNITS: i64 = 1000;
/// Steps of the convergence sequence.
pub const STEPS: u32 = 10;

/// `UNITS` split into `k` nonnegative parts uniformly at random.
fn composition(rng: &mut ChaCha8Rng, k: usize) -> Vec<i64> {
    let mut cuts: Vec<i64> = (0..k - 1).map(|_| rng.gen_range(0..=UNITS)).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts.into_iter().chain([UNITS]) {
        out.push(c - prev);
        prev = c;
    }
    out
}

pub struct Instance {
    pub space: FiniteMetricSpace,
    pub mu: Vec<i64>,
    pub nu: Vec<i64>,
}

/// `k` uniform points of the unit square with Euclidean distance and two
/// random measures in integer units.
pub fn random_instance(seed: u64, k: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..k).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let space = FiniteMetricSpace::from_symmetric_fn(k, |i, j| {
        let (a, b) = (pts[i], pts[j]);
        (a.0 - b.0).hypot(a.1 - b.1)
    });
    let mu = composition(&mut rng, k);
    let nu = composition(&mut rng, k);
    Instance { space, mu, nu }
}

fn probs(units: &[i64]) -> Vec<f64> {
    units.iter().map(|&u| u as f64 / UNITS as f64).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceRow {
    pub seed: u64,
    pub support: usize,
    pub w1: f64,
    pub greedy_cost: f64,
    /// Greedy plan marginals equal the inputs exactly in integer units.
    pub greedy_exact: bool,
    pub duality_gap: f64,
    pub dual_infeasibility: f64,
    pub off_diagonal_mass: f64,
    pub mass_bound: f64,
    pub worst_entry_slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRow {
    pub k: u32,
    pub w1: f64,
    pub off_diagonal_mass: f64,
    pub greedy_off_diagonal_mass: f64,
}

fn greedy_units(a: &[i64], b: &[i64]) -> Result<(Vec<i64>, bool)> {
    let g = greedy_cyclic_coupling(a, b, None)?;
    let k = a.len();
    let exact = (0..k).all(|i| (0..k).map(|j| g.get(i, j)).sum::<i64>() == a[i])
        && (0..k).all(|j| (0..k).map(|i| g.get(i, j)).sum::<i64>() == b[j]);
    Ok((g.plan, exact))
}

pub fn instance_row(seed: u64, k: usize) -> Result<(InstanceRow, Coupling, FiniteMetricSpace)> {
    let inst = random_instance(seed, k);
    let (mu, nu) = (probs(&inst.mu), probs(&inst.nu));
    let sol = wasserstein1(&mu, &nu, &inst.space)?;
    let diag = diagonal_mass_gap(&sol.plan, &inst.space)?;
    let (plan, greedy_exact) = greedy_units(&inst.mu, &inst.nu)?;
    let greedy_cost = plan
        .iter()
        .enumerate()
        .map(|(i, &u)| u as f64 / UNITS as f64 * inst.space.dist(i / k, i % k))
        .sum();
    let c = |i: usize, j: usize| inst.space.dist(i, j);
    let row = InstanceRow {
        seed,
        support: k,
        w1: sol.cost,
        greedy_cost,
        greedy_exact,
        duality_gap: sol.duality_gap(),
        dual_infeasibility: sol.dual_infeasibility(&c),
        off_diagonal_mass: diag.off_diagonal_mass,
        mass_bound: diag.mass_bound,
        worst_entry_slack: diag.worst_entry_slack,
    };
    Ok((row, sol.plan, inst.space))
}

/// `μ_k = (1 − 2^{−k})μ + 2^{−k}ν` in units of `2^{−STEPS}/UNITS`, so the
/// greedy plans stay exact.
pub fn convergence(seed: u64, k: usize) -> Result<Vec<StepRow>> {
    let inst = random_instance(seed, k);
    let scale = 1i64 << STEPS;
    let mu: Vec<i64> = inst.mu.iter().map(|&m| m * scale).collect();
    let total = (UNITS * scale) as f64;
    (1..=STEPS)
        .map(|step| {
            let w = 1i64 << (STEPS - step);
            let mk: Vec<i64> = inst
                .mu
                .iter()
                .zip(&inst.nu)
                .map(|(&m, &n)| m * (scale - w) + n * w)
                .collect();
            let f = |v: &[i64]| v.iter().map(|&u| u as f64 / total).collect::<Vec<f64>>();
            let sol = wasserstein1(&f(&mk), &f(&mu), &inst.space)?;
            let diag = diagonal_mass_gap(&sol.plan, &inst.space)?;
            let (plan, exact) = greedy_units(&mk, &mu)?;
            if !exact {
                return Err(RunError::Task("greedy marginals are not exact".into()));
            }
            let off: i64 = plan.iter().enumerate().filter(|(i, _)| i / k != i % k).map(|(_, &u)| u).sum();
            Ok(StepRow {
                k: step,
                w1: sol.cost,
                off_diagonal_mass: diag.off_diagonal_mass,
                greedy_off_diagonal_mass: off as f64 / total,
            })
        })
        .collect()
}

#[derive(Serialize)]
struct Example<'a> {
    seed: u64,
    space: SpaceFile,
    w1: f64,
    coupling: &'a Coupling,
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Job> {
    no_system(cfg)?;
    only_params(cfg, &["support", "instances"])?;
    let k = cfg.params.support.unwrap_or(DEFAULT_SUPPORT);
    if !(2..=mdim_core::transport::MAX_SUPPORT).contains(&k) {
        return Err(crate::error::usage("params.support", "must lie in [2, 512]"));
    }
    let seeds = cfg.seed_list(cfg.params.instances.unwrap_or(DEFAULT_INSTANCES))?;
    Ok(Box::new(move |ctx: &Ctx| {
        let tasks: Vec<(String, TaskFn<'_, _>)> = seeds
            .iter()
            .map(|&s| (format!("seed={s}"), task(move || instance_row(s, k))))
            .collect();
        let first = seeds[0];
        let (conv, mut conv_rec) = run_tasks(vec![(
            format!("convergence/seed={first}"),
            task(move || convergence(first, k)),
        )]);
        let (rows, mut recs) = run_tasks(tasks);

        let tol = 1e-9;
        for (rec, r) in recs.iter_mut().zip(&rows) {
            if let Some((r, _, _)) = r {
                rec.check(r.greedy_exact, || "greedy marginals are not exact".into());
                rec.check(r.duality_gap <= tol && r.dual_infeasibility <= tol, || "dual certificate failed".into());
                rec.check(r.worst_entry_slack >= -1e-12, || "entrywise plan bound failed".into());
                rec.check(r.greedy_cost >= r.w1 - tol, || "greedy plan beats the optimum".into());
            }
        }
        if let Some(steps) = &conv[0] {
            let mono = steps.windows(2).all(|w| w[1].w1 <= w[0].w1 + 1e-12);
            conv_rec[0].check(mono, || "W(μ_k, μ) is not monotone".into());
        }
        recs.extend(conv_rec);

        let mut t = Table::new(&[
            ("seed", Unit::Dimensionless),
            ("support", Unit::Dimensionless),
            ("w1", Unit::Dimensionless),
            ("greedy_cost", Unit::Dimensionless),
            ("greedy_exact", Unit::Text),
            ("duality_gap", Unit::Dimensionless),
            ("dual_infeasibility", Unit::Dimensionless),
            ("off_diagonal_mass", Unit::Dimensionless),
            ("mass_bound", Unit::Dimensionless),
            ("worst_entry_slack", Unit::Dimensionless),
        ]);
        let mut example = None;
        for (r, plan, space) in rows.iter().flatten() {
            if example.is_none() {
                example = Some(Example {
                    seed: r.seed,
                    space: SpaceFile::from_space(space),
                    w1: r.w1,
                    coupling: plan,
                });
            }
            t.push(vec![
                r.seed.into(),
                r.support.into(),
                r.w1.into(),
                r.greedy_cost.into(),
                r.greedy_exact.into(),
                r.duality_gap.into(),
                r.dual_infeasibility.into(),
                r.off_diagonal_mass.into(),
                r.mass_bound.into(),
                r.worst_entry_slack.into(),
            ]);
        }
        let mut c = Table::new(&[
            ("k", Unit::Dimensionless),
            ("w1", Unit::Dimensionless),
            ("off_diagonal_mass", Unit::Dimensionless),
            ("greedy_off_diagonal_mass", Unit::Dimensionless),
        ]);
        for s in conv[0].iter().flatten() {
            c.push(vec![s.k.into(), s.w1.into(), s.off_diagonal_mass.into(), s.greedy_off_diagonal_mass.into()]);
        }
        let mut files = vec![
            (".csv".into(), t.to_bytes(ctx.bits)?),
            ("_convergence.csv".into(), c.to_bytes(ctx.bits)?),
        ];
        if let Some(ex) = example {
            files.push((".json".into(), json_bytes(&ex)?));
        }
        Ok(Outcome { files, tasks: recs })
    }))
}
