//! Growth profiles `S(ε)` and `S̃(ε)` over block lengths, with a slope
//! against `|ln ε|` per orbit kind.

use mdim_core::dynamics::{OrbitScheme, System};
use mdim_core::mean_dim::{
    growth_profile, hilbert_profile, mdim_slope_from_profiles, BoundType, GrowthOptions, GrowthProfile, MdimEstimate,
    ProfileValue,
};
use serde::Serialize;

use super::covering::{kind_label, orbit_kind};
use super::{only_params, run_tasks, search_options, task, Ctx, Job, Outcome, TaskFn};
use crate::config::{ExperimentConfig, KindKey, SystemKey};
use crate::error::{usage, Result};
use crate::manifest::TaskRecord;
use crate::output::{json_bytes, Cell, Table, Unit};
use crate::systems::{build_system, SystemVisitor};

pub(crate) fn bound_label(b: BoundType) -> &'static str {
    match b {
        BoundType::Exact => "exact",
        BoundType::Upper => "upper",
        BoundType::Lower => "lower",
    }
}

#[derive(Debug, Clone, Serialize)]
struct RowOut {
    n: usize,
    /// Decimal; certificate counts overflow every float.
    count: String,
    log_count: f64,
    per_step: f64,
    bound_type: &'static str,
}

#[derive(Debug, Clone, Serialize)]
struct ProfileOut {
    kind: &'static str,
    epsilon: f64,
    estimate: Option<f64>,
    lower_estimate: Option<f64>,
    rows: Vec<RowOut>,
}

#[derive(Debug, Clone, Serialize)]
struct SlopeOut {
    kind: &'static str,
    estimate: Option<MdimEstimate>,
    lower: Option<MdimEstimate>,
    /// Why no slope was fitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
struct ReportOut {
    system: String,
    profiles: Vec<ProfileOut>,
    slopes: Vec<SlopeOut>,
}

struct Cells<'a> {
    kinds: &'a [KindKey],
    eps: &'a [f64],
    n_list: &'a [usize],
    opts: GrowthOptions,
}

type Cell2 = (KindKey, GrowthProfile);

impl<'a> SystemVisitor for Cells<'a> {
    type Output = (Vec<Option<Cell2>>, Vec<TaskRecord>);

    fn visit<S: System + Sync>(self, sys: &S, scheme: OrbitScheme) -> Self::Output
    where
        S::State: Send + Sync,
    {
        let mut tasks: Vec<(String, TaskFn<'_, Cell2>)> = Vec::new();
        for &kind in self.kinds {
            for &eps in self.eps {
                let (opts, n_list) = (self.opts, self.n_list);
                tasks.push((
                    format!("{}/eps={eps}", kind_label(kind)),
                    task(move || Ok((kind, growth_profile(sys, eps, orbit_kind(kind), n_list, scheme, &opts)?))),
                ));
            }
        }
        run_tasks(tasks)
    }
}

fn finish(system: &str, kinds: &[KindKey], cells: Vec<Cell2>, mut tasks: Vec<TaskRecord>, ctx: &Ctx) -> Result<Outcome> {
    let mut slopes = Vec::new();
    for &k in kinds {
        let profiles: Vec<GrowthProfile> = cells.iter().filter(|c| c.0 == k).map(|c| c.1.clone()).collect();
        let fit = |which| mdim_slope_from_profiles(&profiles, which);
        let (estimate, lower) = (fit(ProfileValue::Estimate), fit(ProfileValue::Lower));
        slopes.push(SlopeOut {
            kind: kind_label(k),
            note: estimate.as_ref().err().map(|e| e.to_string()),
            estimate: estimate.ok(),
            lower: lower.ok(),
        });
    }

    let mut t = Table::new(&[
        ("system", Unit::Text),
        ("kind", Unit::Text),
        ("epsilon", Unit::Dimensionless),
        ("n", Unit::Dimensionless),
        ("count", Unit::Dimensionless),
        ("log_count_nats", Unit::Nats),
        ("per_step_nats", Unit::Nats),
        ("bound_type", Unit::Text),
        ("s_estimate_nats", Unit::Nats),
        ("s_lower_nats", Unit::Nats),
        ("slope", Unit::Dimensionless),
    ]);
    let mut profiles = Vec::new();
    for (k, p) in &cells {
        let slope = slopes
            .iter()
            .find(|s| s.kind == kind_label(*k))
            .and_then(|s| s.estimate.as_ref())
            .map(|m| m.slope);
        for r in &p.rows {
            t.push(vec![
                system.into(),
                kind_label(*k).into(),
                p.epsilon.into(),
                r.n.into(),
                Cell::Text(r.count.to_string()),
                r.log_count.into(),
                r.per_step.into(),
                bound_label(r.bound).into(),
                p.estimate.into(),
                p.lower_estimate.into(),
                slope.into(),
            ]);
        }
        profiles.push(ProfileOut {
            kind: kind_label(*k),
            epsilon: p.epsilon,
            estimate: p.estimate,
            lower_estimate: p.lower_estimate,
            rows: p
                .rows
                .iter()
                .map(|r| RowOut {
                    n: r.n,
                    count: r.count.to_string(),
                    log_count: r.log_count,
                    per_step: r.per_step,
                    bound_type: bound_label(r.bound),
                })
                .collect(),
        });
        // Exact rows must be submultiplicative in n.
        if let Some(rec) = tasks.iter_mut().find(|r| r.name == format!("{}/eps={}", kind_label(*k), p.epsilon)) {
            let bad = p.subadditivity().into_iter().find(|c| !c.holds);
            rec.check(bad.is_none(), || format!("exact counts not submultiplicative: {bad:?}"));
        }
    }
    let report = ReportOut {
        system: system.to_string(),
        profiles,
        slopes,
    };
    Ok(Outcome {
        files: vec![(".csv".into(), t.to_bytes(ctx.bits)?), (".json".into(), json_bytes(&report)?)],
        tasks,
    })
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Job> {
    only_params(cfg, &["kinds", "separated", "estimator", "certificate"])?;
    let eps = cfg.epsilons(None)?;
    let n_list = cfg.n_list(None)?;
    let sys_cfg = cfg.system()?;
    if cfg.params.certificate == Some(true) {
        if sys_cfg.key != SystemKey::HilbertCube {
            return Err(usage("params.certificate", "certificates exist only for hilbert-cube"));
        }
        if sys_cfg.grid.is_some() || sys_cfg.window.is_some() || sys_cfg.samples.is_some() {
            return Err(usage("system", "certificate profiles take no grid, window or samples"));
        }
        if !matches!(cfg.params.kinds.as_deref(), None | Some([KindKey::Max])) {
            return Err(usage("params.kinds", "certificates bound d_n only"));
        }
        if cfg.params.separated.is_some() || cfg.params.estimator.is_some() {
            return Err(usage("params", "certificate profiles take no separated or estimator"));
        }
        return Ok(Box::new(move |ctx: &Ctx| {
            let tasks: Vec<(String, TaskFn<'_, Cell2>)> = eps
                .iter()
                .map(|&e| {
                    let n_list = &n_list;
                    (
                        format!("max/eps={e}"),
                        task(move || Ok((KindKey::Max, hilbert_profile(e, n_list)?))),
                    )
                })
                .collect();
            let (cells, tasks) = run_tasks(tasks);
            finish("hilbert-cube", &[KindKey::Max], cells.into_iter().flatten().collect(), tasks, ctx)
        }));
    }
    let sys = build_system(sys_cfg, cfg.seed)?;
    let kinds = cfg.params.kinds.clone().unwrap_or_else(|| vec![KindKey::Max, KindKey::Avg]);
    let opts = GrowthOptions {
        search: search_options(cfg),
        max_points: cfg.budgets.max_points,
        separated: cfg.params.separated.unwrap_or(true),
        estimator: cfg.params.estimator.unwrap_or_default(),
    };
    Ok(Box::new(move |ctx: &Ctx| {
        let (cells, tasks) = sys.visit(Cells {
            kinds: &kinds,
            eps: &eps,
            n_list: &n_list,
            opts,
        });
        finish(sys.label(), &kinds, cells.into_iter().flatten().collect(), tasks, ctx)
    }))
}
