//! Runs a list of experiments into an output directory and writes the
//! manifest.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{usage, Result, RunError, EXIT_BUDGET, EXIT_OK, EXIT_TASK};
use crate::experiments::{prepare, Ctx, Outcome, Prepared};
use crate::manifest::{sha256_hex, ExperimentEntry, FileEntry, RunManifest, TaskRecord, TaskStatus, Versions};
use crate::output::{json_bytes, write_atomic};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: PathBuf,
    /// Worker threads; `None` lets rayon decide.
    pub threads: Option<usize>,
    pub bits: bool,
    pub wall_clock: bool,
    /// Replaces the base seed of every experiment.
    pub seed: Option<u64>,
    pub exact_limit: Option<usize>,
}

/// Applies command-line overrides and re-validates.
pub fn effective_configs(mut configs: Vec<ExperimentConfig>, opts: &RunOptions) -> Result<Vec<ExperimentConfig>> {
    for c in &mut configs {
        if let Some(s) = opts.seed {
            c.seed = s;
        }
        if let Some(l) = opts.exact_limit {
            c.budgets.exact_limit = l;
        }
    }
    for c in &configs {
        c.validate().map_err(|e| match e {
            RunError::Usage { path, message } if path.starts_with("budgets.exact_limit") => {
                usage("--exact-limit", message)
            }
            e => e,
        })?;
    }
    Ok(configs)
}

/// Default stems repeat when a batch lists one experiment twice; later
/// copies get their batch index appended.
fn stems(configs: &[ExperimentConfig]) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    configs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let s = c.stem();
            if seen.insert(s.clone()) {
                s
            } else {
                format!("{s}_{i}")
            }
        })
        .collect()
}

/// Failures and failed checks outrank budget stops.
pub fn exit_code(experiments: &[ExperimentEntry]) -> i32 {
    let statuses = || experiments.iter().flat_map(|e| e.tasks.iter().map(|t| &t.status));
    if statuses().any(|s| matches!(s, TaskStatus::Failed | TaskStatus::CheckFailed)) {
        EXIT_TASK
    } else if statuses().any(|s| *s == TaskStatus::Budget) {
        EXIT_BUDGET
    } else {
        EXIT_OK
    }
}

/// Runs everything and writes the manifest. Usage errors return before any
/// experiment starts; task failures are recorded in the manifest.
pub fn run(configs: Vec<ExperimentConfig>, opts: &RunOptions) -> Result<RunManifest> {
    let started = Instant::now();
    let configs = effective_configs(configs, opts)?;
    let config_sha256 = sha256_hex(&serde_json::to_vec(&configs).map_err(|e| RunError::Task(e.to_string()))?);
    let prepared: Vec<Prepared> = configs.iter().map(prepare).collect::<Result<_>>()?;
    let stems = stems(&configs);
    std::fs::create_dir_all(&opts.out).map_err(|e| RunError::io(&opts.out, e))?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = opts.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| RunError::Task(e.to_string()))?;
    let ctx = Ctx { bits: opts.bits };

    let jobs: Vec<_> = configs.iter().zip(stems).zip(prepared).collect();
    let experiments: Vec<ExperimentEntry> = pool.install(|| {
        jobs.into_par_iter()
            .map(|((cfg, stem), Prepared { inputs, job })| -> Result<ExperimentEntry> {
                let outcome = job(&ctx).unwrap_or_else(|e| Outcome {
                    files: Vec::new(),
                    tasks: vec![TaskRecord {
                        name: "experiment".into(),
                        status: match e {
                            RunError::Budget(_) => TaskStatus::Budget,
                            _ => TaskStatus::Failed,
                        },
                        message: Some(e.to_string()),
                    }],
                });
                let mut outputs = Vec::with_capacity(outcome.files.len());
                for (suffix, bytes) in &outcome.files {
                    let name = format!("{stem}{suffix}");
                    write_atomic(&opts.out.join(&name), bytes)?;
                    outputs.push(FileEntry::new(name, bytes));
                }
                Ok(ExperimentEntry {
                    experiment: cfg.experiment.key().into(),
                    stem,
                    seed: cfg.seed,
                    tasks: outcome.tasks,
                    inputs,
                    outputs,
                })
            })
            .collect::<Result<_>>()
    })?;

    let manifest = RunManifest {
        config_sha256,
        seed: opts.seed,
        versions: Versions::default(),
        bits: opts.bits,
        exit_code: exit_code(&experiments),
        experiments,
        wall_clock_seconds: opts.wall_clock.then(|| started.elapsed().as_secs_f64()),
    };
    write_atomic(&opts.out.join(MANIFEST), &json_bytes(&manifest)?)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_configs;

    fn entry(statuses: &[TaskStatus]) -> ExperimentEntry {
        ExperimentEntry {
            experiment: "covering".into(),
            stem: "covering".into(),
            seed: 0,
            tasks: statuses
                .iter()
                .map(|s| TaskRecord {
                    name: "t".into(),
                    status: s.clone(),
                    message: None,
                })
                .collect(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    #[test]
    fn exit_code_precedence() {
        use TaskStatus::*;
        assert_eq!(exit_code(&[]), EXIT_OK);
        assert_eq!(exit_code(&[entry(&[Ok, Ok])]), EXIT_OK);
        assert_eq!(exit_code(&[entry(&[Ok, Budget])]), EXIT_BUDGET);
        assert_eq!(exit_code(&[entry(&[Budget]), entry(&[CheckFailed])]), EXIT_TASK);
        assert_eq!(exit_code(&[entry(&[Failed, Budget])]), EXIT_TASK);
    }

    #[test]
    fn repeated_default_stems_get_indices() {
        let cfgs = parse_configs(
            r#"{"experiments": [{"experiment": "covering"}, {"experiment": "rdf"}, {"experiment": "covering"}, {"experiment": "covering", "output": "c"}]}"#,
        )
        .unwrap();
        assert_eq!(stems(&cfgs), vec!["covering", "rdf", "covering_2", "c"]);
    }

    #[test]
    fn overrides_apply_before_validation() {
        let cfgs = parse_configs(r#"{"experiment": "covering", "seed": 3}"#).unwrap();
        let opts = RunOptions {
            seed: Some(8),
            exact_limit: Some(40),
            ..RunOptions::default()
        };
        let eff = effective_configs(cfgs.clone(), &opts).unwrap();
        assert_eq!((eff[0].seed, eff[0].budgets.exact_limit), (8, 40));
        let opts = RunOptions {
            exact_limit: Some(0),
            ..RunOptions::default()
        };
        match effective_configs(cfgs, &opts) {
            Err(RunError::Usage { path, .. }) => assert_eq!(path, "--exact-limit"),
            other => panic!("{other:?}"),
        }
    }
}
