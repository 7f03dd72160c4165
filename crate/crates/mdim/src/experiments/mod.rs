//! The experiments behind `mdim --config`.
//!
//! Each experiment resolves its config in `prepare`, where every usage
//! error surfaces before anything runs, and returns a job that fans its
//! tasks out over the current rayon pool.

use std::panic::{catch_unwind, AssertUnwindSafe};

use mdim_core::metric::SearchOptions;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{Result, RunError};
use crate::manifest::{FileEntry, TaskRecord, TaskStatus};

pub mod counterexample;
pub mod covering;
pub mod info_checks;
pub mod profile;
pub mod r_uniform;
pub mod rdf;
pub mod transport_demo;
pub mod variational;

/// Rendering options shared by all jobs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Ctx {
    pub bits: bool,
}

/// Files of one experiment, keyed by the suffix appended to its stem.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(String, Vec<u8>)>,
    pub tasks: Vec<TaskRecord>,
}

pub type Job = Box<dyn FnOnce(&Ctx) -> Result<Outcome> + Send>;

pub struct Prepared {
    /// Checksums of files read while preparing.
    pub inputs: Vec<FileEntry>,
    pub job: Job,
}

pub type TaskFn<'a, T> = Box<dyn FnOnce() -> Result<T> + Send + 'a>;

pub fn task<'a, T>(f: impl FnOnce() -> Result<T> + Send + 'a) -> TaskFn<'a, T> {
    Box::new(f)
}

/// Runs tasks in parallel. A failing or panicking task is recorded and
/// yields `None`; its siblings are unaffected. Results keep input order.
pub fn run_tasks<T: Send>(tasks: Vec<(String, TaskFn<'_, T>)>) -> (Vec<Option<T>>, Vec<TaskRecord>) {
    tasks
        .into_par_iter()
        .map(|(name, f)| {
            let res = catch_unwind(AssertUnwindSafe(f))
                .unwrap_or_else(|p| Err(RunError::Task(format!("panic: {}", panic_message(&p)))));
            match res {
                Ok(v) => (Some(v), TaskRecord::ok(name)),
                Err(e) => {
                    let status = match e {
                        RunError::Budget(_) => TaskStatus::Budget,
                        _ => TaskStatus::Failed,
                    };
                    (
                        None,
                        TaskRecord {
                            name,
                            status,
                            message: Some(e.to_string()),
                        },
                    )
                }
            }
        })
        .unzip()
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown".into())
}

pub fn search_options(cfg: &ExperimentConfig) -> SearchOptions {
    SearchOptions::with_exact_limit(cfg.budgets.exact_limit)
}

pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    let job = match cfg.experiment {
        ExperimentKind::Covering => return covering::prepare(cfg),
        ExperimentKind::MdimProfile => profile::prepare(cfg)?,
        ExperimentKind::Rdf => return rdf::prepare(cfg),
        ExperimentKind::RUniform => r_uniform::prepare(cfg)?,
        ExperimentKind::Variational => variational::prepare(cfg)?,
        ExperimentKind::Counterexample => counterexample::prepare(cfg)?,
        ExperimentKind::TransportDemo => transport_demo::prepare(cfg)?,
        ExperimentKind::InfoChecks => info_checks::prepare(cfg)?,
    };
    Ok(Prepared { inputs: Vec::new(), job })
}

/// Rejects params an experiment does not read, so typos in a known key
/// do not pass silently.
pub(crate) fn only_params(cfg: &ExperimentConfig, allowed: &[&str]) -> Result<()> {
    let v = serde_json::to_value(&cfg.params).map_err(|e| RunError::Task(e.to_string()))?;
    if let serde_json::Value::Object(map) = v {
        if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(crate::error::usage(
                format!("params.{k}"),
                format!("not used by {}", cfg.experiment.key()),
            ));
        }
    }
    Ok(())
}

pub(crate) fn no_system(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.system.is_some() {
        return Err(crate::error::usage("system", format!("not used by {}", cfg.experiment.key())));
    }
    Ok(())
}
