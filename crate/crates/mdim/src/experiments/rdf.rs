//! Rate distortion rows: Blahut–Arimoto on a loaded problem, or per-step
//! rate estimates of a system's uniform measure over block lengths.

use mdim_core::dynamics::{enumerate_or_sample_orbit_space, OrbitKind, OrbitScheme, System};
use mdim_core::rd::{
    blahut_arimoto, estimate_rate, Dictionary, EstimateOptions, Family, RdStatus, RdTarget, SolverOptions,
    WeightedStates,
};
use mdim_core::metric::Mode;
use serde::Serialize;

use super::{only_params, run_tasks, search_options, task, Ctx, Outcome, Prepared, TaskFn};
use crate::config::{DictionaryKey, ExperimentConfig};
use crate::error::{usage, Result};
use crate::manifest::{FileEntry, TaskRecord};
use crate::output::{json_bytes, Table, Unit};
use crate::systems::{build_system, SystemVisitor};

#[derive(Debug, Clone, Serialize)]
pub struct RdfRow {
    pub family: &'static str,
    pub epsilon: f64,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub n: usize,
    /// Achievable rate per step; `None` when the dictionary cannot meet
    /// the budget.
    pub rate_nats: Option<f64>,
    pub lower_bound_nats: Option<f64>,
    pub distortion: Option<f64>,
    pub iterations: usize,
    pub status: Option<RdStatus>,
    pub dictionary_size: usize,
}

fn status_converged(s: Option<RdStatus>) -> Option<bool> {
    s.map(|s| s != RdStatus::NotConverged)
}

fn render(rows: &[RdfRow], ctx: &Ctx) -> Result<Vec<(String, Vec<u8>)>> {
    let mut t = Table::new(&[
        ("family", Unit::Text),
        ("epsilon", Unit::Dimensionless),
        ("alpha", Unit::Dimensionless),
        ("p", Unit::Dimensionless),
        ("n", Unit::Dimensionless),
        ("rate_nats", Unit::Nats),
        ("distortion", Unit::Dimensionless),
        ("iterations", Unit::Dimensionless),
        ("converged", Unit::Text),
        ("lower_bound_nats", Unit::Nats),
        ("dictionary_size", Unit::Dimensionless),
    ]);
    for r in rows {
        t.push(vec![
            r.family.into(),
            r.epsilon.into(),
            r.alpha.into(),
            r.p.into(),
            r.n.into(),
            r.rate_nats.into(),
            r.distortion.into(),
            r.iterations.into(),
            status_converged(r.status).map_or(crate::output::Cell::Empty, Into::into),
            r.lower_bound_nats.into(),
            r.dictionary_size.into(),
        ]);
    }
    Ok(vec![(".csv".into(), t.to_bytes(ctx.bits)?), (".json".into(), json_bytes(rows)?)])
}

#[derive(Clone, Copy)]
enum Cell {
    Avg { p: f64, eps: f64 },
    Counting { eps: f64, alpha: f64 },
}

struct Cells<'a> {
    cells: &'a [Cell],
    n_list: &'a [usize],
    dictionary: DictionaryKey,
    opts: EstimateOptions,
    max_points: usize,
}

impl<'a> SystemVisitor for Cells<'a> {
    type Output = Result<(Vec<Option<Vec<RdfRow>>>, Vec<TaskRecord>)>;

    fn visit<S: System + Sync>(self, sys: &S, scheme: OrbitScheme) -> Self::Output
    where
        S::State: Send + Sync,
    {
        let states = enumerate_or_sample_orbit_space(sys, 1, scheme, &OrbitKind::Max, self.max_points)?.states;
        let mu = WeightedStates::uniform(states.clone())?;
        let dict = match self.dictionary {
            DictionaryKey::SourceOrbits => Dictionary::SourceOrbits,
            DictionaryKey::CoverRepresentatives => Dictionary::CoverRepresentatives {
                states,
                mode: Mode::Greedy,
            },
        };
        let (mu, dict) = (&mu, &dict);
        let tasks: Vec<(String, TaskFn<'_, Vec<RdfRow>>)> = self
            .cells
            .iter()
            .map(|&c| {
                let (n_list, opts) = (self.n_list, self.opts);
                let (name, family, level, eps, alpha, p) = match c {
                    Cell::Avg { p, eps } => (format!("avg/p={p}/eps={eps}"), Family::Avg { p }, eps, eps, None, Some(p)),
                    Cell::Counting { eps, alpha } => (
                        format!("counting/eps={eps}/alpha={alpha}"),
                        Family::Counting { eps },
                        alpha,
                        eps,
                        Some(alpha),
                        None,
                    ),
                };
                let label = if alpha.is_some() { "counting" } else { "avg" };
                (
                    name,
                    task(move || {
                        let t = estimate_rate(sys, mu, family, level, n_list, dict, &opts)?;
                        Ok(t.rows
                            .iter()
                            .map(|r| RdfRow {
                                family: label,
                                epsilon: eps,
                                alpha,
                                p,
                                n: r.n,
                                rate_nats: r.rate,
                                lower_bound_nats: r.lower_bound,
                                distortion: r.distortion,
                                iterations: r.iterations,
                                status: r.status,
                                dictionary_size: r.dictionary_size,
                            })
                            .collect())
                    }),
                )
            })
            .collect();
        Ok(run_tasks(tasks))
    }
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    only_params(cfg, &["problem", "dictionary", "p", "tol"])?;
    let eps = cfg.epsilons(None)?;
    let max_iter = cfg.budgets.max_iter;
    if let Some(path) = cfg.params.problem.clone() {
        if cfg.system.is_some() || cfg.n.is_some() || cfg.alphas.is_some() {
            return Err(usage("params.problem", "a loaded problem takes no system, n or alphas"));
        }
        if cfg.params.dictionary.is_some() || cfg.params.p.is_some() {
            return Err(usage("params.problem", "a loaded problem takes no dictionary or p"));
        }
        let (prob, bytes) = crate::formats::load_problem(&path, "params.problem")?;
        let opts = SolverOptions {
            tol: cfg.params.tol.unwrap_or(1e-9),
            max_iter,
            ..SolverOptions::default()
        };
        let inputs = vec![FileEntry::new(path.display().to_string(), &bytes)];
        let dictionary_size = prob.distortion.cols();
        let job = Box::new(move |ctx: &Ctx| {
            let prob = &prob;
            let tasks: Vec<(String, TaskFn<'_, Vec<RdfRow>>)> = eps
                .iter()
                .map(|&d| {
                    (
                        format!("D={d}"),
                        task(move || {
                            let pt = blahut_arimoto(prob, RdTarget::Distortion(d), &opts)?;
                            Ok(vec![RdfRow {
                                family: "matrix",
                                epsilon: d,
                                alpha: None,
                                p: None,
                                n: 1,
                                rate_nats: Some(pt.rate),
                                lower_bound_nats: Some(pt.lower_bound),
                                distortion: Some(pt.distortion),
                                iterations: pt.iterations,
                                status: Some(pt.status),
                                dictionary_size,
                            }])
                        }),
                    )
                })
                .collect();
            let (rows, mut tasks) = run_tasks(tasks);
            for (rec, rows) in tasks.iter_mut().zip(&rows) {
                let conv = rows.as_ref().map_or(true, |r| status_converged(r[0].status) == Some(true));
                rec.check(conv, || "solver did not converge".into());
            }
            let rows: Vec<RdfRow> = rows.into_iter().flatten().flatten().collect();
            Ok(Outcome {
                files: render(&rows, ctx)?,
                tasks,
            })
        });
        return Ok(Prepared { inputs, job });
    }

    let sys = build_system(cfg.system()?, cfg.seed)?;
    let n_list = cfg.n_list(None)?;
    let ps = cfg.params.p.clone().unwrap_or_else(|| vec![1.0]);
    if let Some(i) = ps.iter().position(|&p| !(p >= 1.0 && p.is_finite())) {
        return Err(usage(format!("params.p[{i}]"), "exponent must be finite and at least 1"));
    }
    let mut cells: Vec<Cell> = Vec::new();
    for &p in &ps {
        cells.extend(eps.iter().map(|&e| Cell::Avg { p, eps: e }));
    }
    if let Some(alphas) = cfg.alphas.clone() {
        for &e in &eps {
            cells.extend(alphas.iter().map(|&a| Cell::Counting { eps: e, alpha: a }));
        }
    }
    let opts = EstimateOptions {
        solver: SolverOptions {
            tol: cfg.params.tol.unwrap_or(1e-7),
            max_iter,
            ..SolverOptions::default()
        },
        search: search_options(cfg),
        max_cells: cfg.budgets.max_cells,
    };
    let dictionary = cfg.params.dictionary.unwrap_or(DictionaryKey::CoverRepresentatives);
    let max_points = cfg.budgets.max_points;
    let job = Box::new(move |ctx: &Ctx| {
        let (rows, tasks) = sys.visit(Cells {
            cells: &cells,
            n_list: &n_list,
            dictionary,
            opts,
            max_points,
        })?;
        let rows: Vec<RdfRow> = rows.into_iter().flatten().flatten().collect();
        Ok(Outcome {
            files: render(&rows, ctx)?,
            tasks,
        })
    });
    Ok(Prepared {
        inputs: Vec::new(),
        job,
    })
}
