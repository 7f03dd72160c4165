//! Rates of candidate invariant measures against the growth estimates of an
//! enumerable system.

use mdim_core::dynamics::{enumerate_or_sample_orbit_space, OrbitKind, OrbitScheme, System};
use mdim_core::mean_dim::{variational_report, Candidate, VariationalOptions, VariationalRow};
use mdim_core::metric::{max_separated_set, Mode};
use mdim_core::rd::{empirical_invariant_measure, Dictionary, EstimateOptions, SolverOptions, WeightedStates};

use super::{only_params, run_tasks, search_options, task, Ctx, Job, Outcome, TaskFn};
use crate::config::ExperimentConfig;
use crate::error::{usage, Result};
use crate::manifest::TaskRecord;
use crate::output::{json_bytes, Cell, Table, Unit};
use crate::systems::{build_system, SystemVisitor};

#[derive(Debug, Clone, serde::Serialize)]
struct RowOut {
    alpha: f64,
    #[serde(flatten)]
    row: VariationalRow,
}

/// The uniform measure on all states, and for each `n` the empirical
/// measure `(1/n) Σ T^k_* (uniform on S)` of a greedy `ε`-separated set `S`,
/// restricted to represented states and renormalized.
fn candidates<S: System>(sys: &S, states: &[S::State], eps: f64, n_list: &[usize], opts: &VariationalOptions) -> Result<Vec<Candidate<S::State>>> {
    let mut out = vec![Candidate {
        name: "uniform".into(),
        measure: WeightedStates::uniform(states.to_vec())?,
    }];
    let space = enumerate_or_sample_orbit_space(sys, 1, OrbitScheme::Exhaustive, &OrbitKind::Max, opts.max_points)?.space;
    let sep = max_separated_set(&space, eps, Mode::Greedy, &opts.estimate.search)?;
    let members: Vec<S::State> = sep.members.iter().map(|&i| states[i].clone()).collect();
    for &n in n_list {
        let emp = empirical_invariant_measure(sys, &members, n)?;
        let (ks, kw): (Vec<S::State>, Vec<f64>) = emp
            .states
            .iter()
            .zip(emp.weights.probs())
            .filter(|(s, _)| states.contains(s))
            .map(|(s, &w)| (s.clone(), w))
            .unzip();
        if !ks.is_empty() {
            out.push(Candidate {
                name: format!("separated-n{n}"),
                measure: WeightedStates::new(ks, &kw)?,
            });
        }
    }
    Ok(out)
}

struct Cells<'a> {
    eps: &'a [f64],
    alphas: &'a [f64],
    opts: VariationalOptions,
}

impl<'a> SystemVisitor for Cells<'a> {
    type Output = Result<(Vec<Option<RowOut>>, Vec<TaskRecord>)>;

    fn visit<S: System + Sync>(self, sys: &S, scheme: OrbitScheme) -> Self::Output
    where
        S::State: Send + Sync,
    {
        let states = enumerate_or_sample_orbit_space(sys, 1, scheme, &OrbitKind::Max, self.opts.max_points)?.states;
        let dict = Dictionary::CoverRepresentatives {
            states: states.clone(),
            mode: Mode::Greedy,
        };
        let (states, dict) = (&states, &dict);
        let mut tasks: Vec<(String, TaskFn<'_, RowOut>)> = Vec::new();
        for &eps in self.eps {
            for &alpha in self.alphas {
                let opts = VariationalOptions {
                    alpha,
                    ..self.opts.clone()
                };
                tasks.push((
                    format!("eps={eps}/alpha={alpha}"),
                    task(move || {
                        let cands = candidates(sys, states, eps, &opts.n_list, &opts)?;
                        let rep = variational_report(sys, &[eps], &cands, dict, &opts)?;
                        let row = rep.rows.into_iter().next().expect("one row per epsilon");
                        Ok(RowOut { alpha, row })
                    }),
                ));
            }
        }
        Ok(run_tasks(tasks))
    }
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Job> {
    only_params(cfg, &["d_factor", "tol"])?;
    let eps = cfg.epsilons(None)?;
    let alphas = cfg.alphas(Some(&[0.1]))?;
    let n_list = cfg.n_list(None)?;
    let sys = build_system(cfg.system()?, cfg.seed)?;
    if !sys.enumerable() {
        return Err(usage("system.samples", "the variational report needs an enumerable system"));
    }
    let d_factor = cfg.params.d_factor.unwrap_or(2);
    if d_factor < 2 {
        return Err(usage("params.d_factor", "D must be at least 2"));
    }
    let opts = VariationalOptions {
        n_list,
        alpha: alphas[0],
        d_factor,
        slack: 1e-9,
        estimate: EstimateOptions {
            solver: SolverOptions {
                tol: cfg.params.tol.unwrap_or(1e-7),
                max_iter: cfg.budgets.max_iter,
                ..SolverOptions::default()
            },
            search: search_options(cfg),
            max_cells: cfg.budgets.max_cells,
        },
        max_points: cfg.budgets.max_points,
    };
    Ok(Box::new(move |ctx: &Ctx| {
        let (rows, mut tasks) = sys.visit(Cells {
            eps: &eps,
            alphas: &alphas,
            opts,
        })?;
        for (rec, r) in tasks.iter_mut().zip(&rows) {
            if let Some(r) = r {
                rec.check(r.row.passes(), || "a rate exceeds its growth estimate".into());
            }
        }
        let rows: Vec<RowOut> = rows.into_iter().flatten().collect();
        let mut t = Table::new(&[
            ("system", Unit::Text),
            ("epsilon", Unit::Dimensionless),
            ("alpha", Unit::Dimensionless),
            ("rate_avg_nats", Unit::Nats),
            ("rate_avg_candidate", Unit::Text),
            ("rate_counting_nats", Unit::Nats),
            ("rate_counting_candidate", Unit::Text),
            ("s_tilde_nats", Unit::Nats),
            ("s_nats", Unit::Nats),
            ("avg_below_s_tilde", Unit::Text),
            ("counting_below_s", Unit::Text),
            ("s_tilde_below_s", Unit::Text),
            ("avg_lower_gap_nats", Unit::Nats),
            ("counting_lower_gap_nats", Unit::Nats),
        ]);
        for RowOut { alpha, row: r } in &rows {
            let best = |b: &Option<mdim_core::mean_dim::BestRate>| -> (Cell, Cell) {
                match b {
                    Some(b) => (b.rate.into(), b.candidate.as_str().into()),
                    None => (Cell::Empty, Cell::Empty),
                }
            };
            let (ra, ca) = best(&r.rate_avg);
            let (rc, cc) = best(&r.rate_counting);
            t.push(vec![
                sys.label().into(),
                r.epsilon.into(),
                (*alpha).into(),
                ra,
                ca,
                rc,
                cc,
                r.s_tilde.into(),
                r.s.into(),
                r.avg_below_s_tilde.into(),
                r.counting_below_s.into(),
                r.s_tilde_below_s.map_or(Cell::Empty, Into::into),
                r.avg_lower_gap.into(),
                r.counting_lower_gap.into(),
            ]);
        }
        Ok(Outcome {
            files: vec![(".csv".into(), t.to_bytes(ctx.bits)?), (".json".into(), json_bytes(&rows)?)],
            tasks,
        })
    }))
}
