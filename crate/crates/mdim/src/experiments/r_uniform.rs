//! `r(ε)` of the uniform source on `[0,1]` against its closed-form bounds.

use mdim_core::rd::{r_epsilon_uniform, RdStatus, ScalarRate, SolverOptions};
use serde::Serialize;

use super::{no_system, only_params, run_tasks, task, Ctx, Job, Outcome, TaskFn};
use crate::config::ExperimentConfig;
use crate::error::{usage, Result};
use crate::output::{json_bytes, Table, Unit};

pub const DEFAULT_LEVELS: usize = 400;
pub const DEFAULT_D_GRID: [f64; 5] = [2.0, 3.0, 4.0, 6.0, 10.0];
/// Width of the solver's `[lower, rate]` bracket.
pub const DEFAULT_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Serialize)]
struct RowOut {
    epsilon: f64,
    levels: usize,
    rate_nats: f64,
    solver_lower_nats: f64,
    lower_bound: f64,
    best_d: Option<f64>,
    upper_bound: f64,
    ratio_to_log: f64,
    status: RdStatus,
    sandwich_holds: bool,
}

impl From<&ScalarRate> for RowOut {
    fn from(r: &ScalarRate) -> Self {
        Self {
            epsilon: r.epsilon,
            levels: r.levels,
            rate_nats: r.rate,
            solver_lower_nats: r.solver_lower,
            lower_bound: r.claim_lower,
            best_d: r.best_d,
            upper_bound: r.quantizer_upper,
            ratio_to_log: r.ratio_to_log(),
            status: r.status,
            sandwich_holds: r.sandwich_holds(),
        }
    }
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Job> {
    no_system(cfg)?;
    only_params(cfg, &["levels", "d_grid", "tol"])?;
    let eps = cfg.epsilons(None)?;
    if let Some(i) = eps.iter().position(|&e| e >= 1.0) {
        return Err(usage(format!("epsilons[{i}]"), "must lie in (0, 1)"));
    }
    let levels = cfg.params.levels.unwrap_or(DEFAULT_LEVELS);
    let d_grid = cfg.params.d_grid.clone().unwrap_or_else(|| DEFAULT_D_GRID.to_vec());
    if let Some(i) = d_grid.iter().position(|&d| !(d > 1.0)) {
        return Err(usage(format!("params.d_grid[{i}]"), "D must exceed 1"));
    }
    let opts = SolverOptions {
        tol: cfg.params.tol.unwrap_or(DEFAULT_TOL),
        max_iter: cfg.budgets.max_iter,
        ..SolverOptions::default()
    };
    Ok(Box::new(move |ctx: &Ctx| {
        let tasks: Vec<(String, TaskFn<'_, ScalarRate>)> = eps
            .iter()
            .map(|&e| {
                let d_grid = &d_grid;
                (format!("eps={e}"), task(move || Ok(r_epsilon_uniform(e, levels, d_grid, &opts)?)))
            })
            .collect();
        let (rates, mut tasks) = run_tasks(tasks);
        for (rec, r) in tasks.iter_mut().zip(&rates) {
            if let Some(r) = r {
                rec.check(r.sandwich_holds(), || "rate outside [lower_bound, upper_bound]".into());
                rec.check(r.status != RdStatus::NotConverged, || "solver did not converge".into());
            }
        }
        let rows: Vec<RowOut> = rates.iter().flatten().map(RowOut::from).collect();
        let mut t = Table::new(&[
            ("epsilon", Unit::Dimensionless),
            ("rate_nats", Unit::Nats),
            ("lower_bound", Unit::Nats),
            ("upper_bound", Unit::Nats),
            ("ratio_to_log", Unit::Dimensionless),
        ]);
        for r in &rows {
            t.push(vec![
                r.epsilon.into(),
                r.rate_nats.into(),
                r.lower_bound.into(),
                r.upper_bound.into(),
                r.ratio_to_log.into(),
            ]);
        }
        Ok(Outcome {
            files: vec![(".csv".into(), t.to_bytes(ctx.bits)?), (".json".into(), json_bytes(&rows)?)],
            tasks,
        })
    }))
}
