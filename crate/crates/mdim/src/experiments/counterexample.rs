//! Collapse of `d̄_N` against separation under `d_N` on the level systems.

use mdim_core::mean_dim::{counterexample_report, CounterexampleOptions, CounterexampleReport};

use super::{only_params, run_tasks, task, Ctx, Job, Outcome};
use crate::config::{ExperimentConfig, SystemKey};
use crate::error::{usage, Result};
use crate::output::{json_bytes, Table, Unit};

pub fn options(cfg: &ExperimentConfig) -> Result<CounterexampleOptions> {
    only_params(cfg, &["big_n", "samples", "pairs", "blocks", "pad"])?;
    let d = CounterexampleOptions::default();
    let mut cap = d.cap;
    if let Some(s) = &cfg.system {
        if s.key != SystemKey::Counterexample {
            return Err(usage("system.key", "the counterexample report runs on the counterexample system"));
        }
        if s.grid.is_some() || s.window.is_some() || s.n.is_some() || s.samples.is_some() || s.seed.is_some() {
            return Err(usage("system", "only `cap` applies; levels come from `n`"));
        }
        cap = s.cap.unwrap_or(cap);
    }
    let levels: Vec<u32> = cfg
        .n_list(Some(&d.levels.iter().map(|&l| l as usize).collect::<Vec<_>>()))?
        .iter()
        .map(|&l| u32::try_from(l).map_err(|_| usage("n", "level too large")))
        .collect::<Result<_>>()?;
    let eps_grid = cfg.epsilons(Some(&d.eps_grid))?;
    if let Some(i) = eps_grid.iter().position(|&e| e > 1.0) {
        return Err(usage(format!("epsilons[{i}]"), "must lie in (0, 1]"));
    }
    let n_grid = cfg.params.big_n.clone().unwrap_or(d.n_grid);
    let max_n = n_grid.iter().copied().max().unwrap_or(0);
    if let Some(i) = levels.iter().position(|&l| l > 30 || (1usize << l) > max_n) {
        return Err(usage(format!("n[{i}]"), "every level needs 2^n ≤ the largest N"));
    }
    let pad = cfg.params.pad.unwrap_or(d.pad);
    if !(1..=1000).contains(&pad) {
        return Err(usage("params.pad", "must lie in [1, 1000]"));
    }
    Ok(CounterexampleOptions {
        cap,
        levels,
        eps_grid,
        n_grid,
        samples: cfg.params.samples.unwrap_or(d.samples),
        pairs: cfg.params.pairs.unwrap_or(d.pairs),
        blocks: cfg.params.blocks.unwrap_or(d.blocks),
        pad,
        seed: cfg.seed,
    })
}

fn tables(rep: &CounterexampleReport, ctx: &Ctx) -> Result<Vec<(String, Vec<u8>)>> {
    let mut t = Table::new(&[
        ("level", Unit::Dimensionless),
        ("epsilon", Unit::Dimensionless),
        ("big_l", Unit::Dimensionless),
        ("big_n", Unit::Dimensionless),
        ("worst", Unit::Dimensionless),
        ("sampled", Unit::Dimensionless),
        ("samples", Unit::Dimensionless),
        ("passed", Unit::Text),
    ]);
    for r in &rep.triples {
        t.push(vec![
            r.level.into(),
            r.epsilon.into(),
            r.big_l.into(),
            r.big_n.into(),
            r.worst.into(),
            r.sampled.into(),
            r.samples.into(),
            r.passed.into(),
        ]);
    }
    let mut s = Table::new(&[
        ("level", Unit::Dimensionless),
        ("big_n", Unit::Dimensionless),
        ("alphabet", Unit::Dimensionless),
        ("log_family_size_nats", Unit::Nats),
        ("pairs", Unit::Dimensionless),
        ("min_distance", Unit::Dimensionless),
        ("passed", Unit::Text),
    ]);
    for r in &rep.separation {
        s.push(vec![
            r.level.into(),
            r.big_n.into(),
            r.alphabet.into(),
            r.log_family_size.into(),
            r.pairs.into(),
            r.min_distance.into(),
            r.passed.into(),
        ]);
    }
    Ok(vec![
        (".csv".into(), t.to_bytes(ctx.bits)?),
        ("_separation.csv".into(), s.to_bytes(ctx.bits)?),
        (".json".into(), json_bytes(rep)?),
    ])
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Job> {
    let opts = options(cfg)?;
    Ok(Box::new(move |ctx: &Ctx| {
        let (reps, mut tasks) = run_tasks(vec![("report".to_string(), task(|| Ok(counterexample_report(&opts)?)))]);
        let files = match &reps[0] {
            Some(rep) => {
                tasks[0].check(rep.passed(), || "a tested triple or separation row failed".into());
                tables(rep, ctx)?
            }
            None => Vec::new(),
        };
        Ok(Outcome { files, tasks })
    }))
}
