//! `#(X, d_n, ε)` of a system surrogate or a loaded metric space, with a
//! separated-set lower bound next to every count.

use mdim_core::dynamics::{enumerate_or_sample_orbit_space, OrbitKind, OrbitScheme, System};
use mdim_core::metric::{covering_number, max_separated_set, FiniteMetricSpace, Mode, SearchOptions};
use serde::Serialize;

use super::{only_params, run_tasks, search_options, task, Ctx, Outcome, Prepared, TaskFn};
use crate::config::{ExperimentConfig, KindKey};
use crate::error::{usage, Result};
use crate::manifest::FileEntry;
use crate::output::{json_bytes, Table, Unit};
use crate::systems::{build_system, SystemVisitor};

pub(crate) fn orbit_kind(k: KindKey) -> OrbitKind {
    match k {
        KindKey::Max => OrbitKind::Max,
        KindKey::Avg => OrbitKind::Avg,
    }
}

pub(crate) fn kind_label(k: KindKey) -> &'static str {
    match k {
        KindKey::Max => "max",
        KindKey::Avg => "avg",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoveringRow {
    pub system: String,
    pub kind: &'static str,
    pub epsilon: f64,
    pub n: usize,
    pub points: usize,
    /// Cover size: exact in exact mode, an upper bound otherwise.
    pub count: usize,
    pub mode: Mode,
    /// Size of a greedy `ε`-separated set; no set of diameter `< ε` holds
    /// two of its members, so it bounds the count from below.
    pub separated: usize,
    /// `exact` when the search was exact or the two bounds meet.
    pub bound_type: &'static str,
    pub blocks: Vec<Vec<usize>>,
}

fn count_space(space: &FiniteMetricSpace, eps: f64, search: &SearchOptions) -> Result<(usize, Mode, usize, Vec<Vec<usize>>)> {
    let mode = if space.len() <= search.cover_exact_limit {
        Mode::Exact
    } else {
        Mode::Greedy
    };
    let cover = covering_number(space, eps, mode, search)?;
    let sep = max_separated_set(space, eps, Mode::Greedy, search)?;
    Ok((cover.count, mode, sep.len(), cover.certificate.blocks))
}

fn row(system: &str, kind: KindKey, eps: f64, n: usize, points: usize, c: (usize, Mode, usize, Vec<Vec<usize>>)) -> CoveringRow {
    let (count, mode, separated, blocks) = c;
    CoveringRow {
        system: system.to_string(),
        kind: kind_label(kind),
        epsilon: eps,
        n,
        points,
        count,
        mode,
        separated,
        bound_type: if mode == Mode::Exact || separated == count {
            "exact"
        } else {
            "upper"
        },
        blocks,
    }
}

struct Cells<'a> {
    label: &'a str,
    kinds: &'a [KindKey],
    eps: &'a [f64],
    n_list: &'a [usize],
    search: SearchOptions,
    max_points: usize,
}

impl<'a> SystemVisitor for Cells<'a> {
    type Output = (Vec<Option<CoveringRow>>, Vec<crate::manifest::TaskRecord>);

    fn visit<S: System + Sync>(self, sys: &S, scheme: OrbitScheme) -> Self::Output
    where
        S::State: Send + Sync,
    {
        let mut tasks: Vec<(String, TaskFn<'_, CoveringRow>)> = Vec::new();
        for &kind in self.kinds {
            for &eps in self.eps {
                for &n in self.n_list {
                    let (search, max_points, label) = (self.search, self.max_points, self.label);
                    tasks.push((
                        format!("{}/eps={eps}/n={n}", kind_label(kind)),
                        task(move || {
                            let orb = enumerate_or_sample_orbit_space(sys, n, scheme, &orbit_kind(kind), max_points)?;
                            let c = count_space(&orb.space, eps, &search)?;
                            Ok(row(label, kind, eps, n, orb.space.len(), c))
                        }),
                    ));
                }
            }
        }
        run_tasks(tasks)
    }
}

fn render(rows: &[CoveringRow], ctx: &Ctx) -> Result<Vec<(String, Vec<u8>)>> {
    let mut t = Table::new(&[
        ("system", Unit::Text),
        ("kind", Unit::Text),
        ("epsilon", Unit::Dimensionless),
        ("n", Unit::Dimensionless),
        ("points", Unit::Dimensionless),
        ("count", Unit::Dimensionless),
        ("separated", Unit::Dimensionless),
        ("log_count_nats", Unit::Nats),
        ("bound_type", Unit::Text),
    ]);
    for r in rows {
        t.push(vec![
            r.system.as_str().into(),
            r.kind.into(),
            r.epsilon.into(),
            r.n.into(),
            r.points.into(),
            r.count.into(),
            r.separated.into(),
            (r.count as f64).ln().into(),
            r.bound_type.into(),
        ]);
    }
    Ok(vec![(".csv".into(), t.to_bytes(ctx.bits)?), (".json".into(), json_bytes(rows)?)])
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    only_params(cfg, &["kinds", "space"])?;
    let eps = cfg.epsilons(None)?;
    let search = search_options(cfg);
    if let Some(path) = cfg.params.space.clone() {
        if cfg.system.is_some() {
            return Err(usage("params.space", "give either a system or a space file"));
        }
        if cfg.params.kinds.is_some() || cfg.n.is_some() {
            return Err(usage("params.space", "a loaded space has no orbit kinds or block lengths"));
        }
        let (space, bytes) = crate::formats::load_space(&path, "params.space")?;
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let label = format!("space:{name}");
        let inputs = vec![FileEntry::new(path.display().to_string(), &bytes)];
        let job = Box::new(move |ctx: &Ctx| {
            let tasks: Vec<(String, TaskFn<'_, CoveringRow>)> = eps
                .iter()
                .map(|&e| {
                    let (space, label) = (&space, label.as_str());
                    (
                        format!("eps={e}"),
                        task(move || Ok(row(label, KindKey::Max, e, 1, space.len(), count_space(space, e, &search)?))),
                    )
                })
                .collect();
            let (rows, tasks) = run_tasks(tasks);
            let rows: Vec<CoveringRow> = rows.into_iter().flatten().collect();
            Ok(Outcome {
                files: render(&rows, ctx)?,
                tasks,
            })
        });
        return Ok(Prepared { inputs, job });
    }
    let sys = build_system(cfg.system()?, cfg.seed)?;
    let n_list = cfg.n_list(Some(&[1]))?;
    let kinds = cfg.params.kinds.clone().unwrap_or_else(|| vec![KindKey::Max]);
    let max_points = cfg.budgets.max_points;
    let job = Box::new(move |ctx: &Ctx| {
        let (rows, tasks) = sys.visit(Cells {
            label: sys.label(),
            kinds: &kinds,
            eps: &eps,
            n_list: &n_list,
            search,
            max_points,
        });
        let rows: Vec<CoveringRow> = rows.into_iter().flatten().collect();
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
