//! Experiment configuration files.
//!
//! A config file is one experiment object or `{"experiments": [...]}`.
//! Unknown keys are rejected and every error names the JSON path of the
//! offending value.

use std::path::{Path, PathBuf};

use mdim_core::mean_dim::Estimator;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result, RunError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Covering,
    MdimProfile,
    Rdf,
    RUniform,
    Variational,
    Counterexample,
    TransportDemo,
    InfoChecks,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Covering,
        ExperimentKind::MdimProfile,
        ExperimentKind::Rdf,
        ExperimentKind::RUniform,
        ExperimentKind::Variational,
        ExperimentKind::Counterexample,
        ExperimentKind::TransportDemo,
        ExperimentKind::InfoChecks,
    ];

    pub fn key(self) -> &'static str {
        match self {
            ExperimentKind::Covering => "covering",
            ExperimentKind::MdimProfile => "mdim-profile",
            ExperimentKind::Rdf => "rdf",
            ExperimentKind::RUniform => "r-uniform",
            ExperimentKind::Variational => "variational",
            ExperimentKind::Counterexample => "counterexample",
            ExperimentKind::TransportDemo => "transport-demo",
            ExperimentKind::InfoChecks => "info-checks",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystemKey {
    HilbertCube,
    BinaryShift,
    IdentityInterval,
    Counterexample,
}

impl SystemKey {
    pub fn key(self) -> &'static str {
        match self {
            SystemKey::HilbertCube => "hilbert-cube",
            SystemKey::BinaryShift => "binary-shift",
            SystemKey::IdentityInterval => "identity-interval",
            SystemKey::Counterexample => "counterexample",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub key: SystemKey,
    /// Grid step of the coordinate values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<f64>,
    /// Inclusive coordinate window `[lo, hi]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[i64; 2]>,
    /// Level of the counterexample system.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Seed of the sampled surrogate; the run seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Cap on the counterexample alphabet size.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
    /// Sample this many states instead of enumerating.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindKey {
    Max,
    Avg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DictionaryKey {
    SourceOrbits,
    CoverRepresentatives,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budgets {
    /// Largest space handed to an exact covering search.
    pub exact_limit: usize,
    /// Largest orbit-space surrogate.
    pub max_points: usize,
    /// Largest distortion matrix, in cells.
    pub max_cells: usize,
    /// Blahut–Arimoto iterations per solve.
    pub max_iter: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            exact_limit: 16,
            max_points: mdim_core::dynamics::DEFAULT_MAX_POINTS,
            max_cells: 1 << 22,
            max_iter: 200_000,
        }
    }
}

/// Experiment-specific knobs; each experiment reads the ones it knows.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kinds: Option<Vec<KindKey>>,
    /// Add greedy separated-set lower rows to growth profiles.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separated: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimator: Option<Estimator>,
    /// Use the explicit Hilbert-cube certificates instead of a surrogate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<bool>,
    /// Finite metric space file `{"points", "matrix"}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<PathBuf>,
    /// Rate distortion problem file `{"source", "repro", "matrix"}`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub problem: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dictionary: Option<DictionaryKey>,
    /// Exponents of the averaged `L^p` family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    /// Discretization levels of `r(ε)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_factor: Option<u32>,
    /// `N` grid of the counterexample.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_n: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pad: Option<i64>,
    /// Random instances per seed-free experiment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    /// Support size of random transport instances.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<usize>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub params: Params,
    /// File stem of the outputs; the experiment key by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

/// Resolves a grid: absent gives `default`, present must be nonempty.
fn grid<T: Clone>(v: &Option<Vec<T>>, path: &str, default: Option<&[T]>) -> Result<Vec<T>> {
    match (v, default) {
        (Some(g), _) if g.is_empty() => Err(usage(path, "grid must not be empty")),
        (Some(g), _) => Ok(g.clone()),
        (None, Some(d)) => Ok(d.to_vec()),
        (None, None) => Err(usage(path, "required")),
    }
}

impl ExperimentConfig {
    pub fn epsilons(&self, default: Option<&[f64]>) -> Result<Vec<f64>> {
        grid(&self.epsilons, "epsilons", default)
    }

    pub fn alphas(&self, default: Option<&[f64]>) -> Result<Vec<f64>> {
        grid(&self.alphas, "alphas", default)
    }

    pub fn n_list(&self, default: Option<&[usize]>) -> Result<Vec<usize>> {
        grid(&self.n, "n", default)
    }

    /// Explicit seeds, or `seed, seed + 1, …` for `count` instances.
    pub fn seed_list(&self, count: usize) -> Result<Vec<u64>> {
        match &self.seeds {
            Some(s) if s.is_empty() => Err(usage("seeds", "grid must not be empty")),
            Some(s) => Ok(s.clone()),
            None => Ok((0..count as u64).map(|i| self.seed.wrapping_add(i)).collect()),
        }
    }

    pub fn system(&self) -> Result<&SystemConfig> {
        self.system.as_ref().ok_or_else(|| usage("system", "required"))
    }

    pub fn stem(&self) -> String {
        self.output
            .clone()
            .unwrap_or_else(|| self.experiment.key().replace('-', "_"))
    }

    /// Structural checks shared by all experiments; experiments resolve
    /// their own required grids through the accessors above.
    pub fn validate(&self) -> Result<()> {
        if let Some(e) = &self.epsilons {
            if e.is_empty() {
                return Err(usage("epsilons", "grid must not be empty"));
            }
            if let Some(i) = e.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(usage(format!("epsilons[{i}]"), "must be positive and finite"));
            }
        }
        if let Some(a) = &self.alphas {
            if a.is_empty() {
                return Err(usage("alphas", "grid must not be empty"));
            }
            if let Some(i) = a.iter().position(|v| !(*v > 0.0 && *v <= 1.0)) {
                return Err(usage(format!("alphas[{i}]"), "must lie in (0, 1]"));
            }
        }
        if let Some(n) = &self.n {
            if n.is_empty() {
                return Err(usage("n", "grid must not be empty"));
            }
            if let Some(i) = n.iter().position(|&v| v == 0) {
                return Err(usage(format!("n[{i}]"), "must be at least 1"));
            }
        }
        if matches!(&self.seeds, Some(s) if s.is_empty()) {
            return Err(usage("seeds", "grid must not be empty"));
        }
        let b = &self.budgets;
        for (name, v) in [
            ("exact_limit", b.exact_limit),
            ("max_points", b.max_points),
            ("max_cells", b.max_cells),
            ("max_iter", b.max_iter),
        ] {
            if v == 0 {
                return Err(usage(format!("budgets.{name}"), "must be positive"));
            }
        }
        if b.exact_limit > mdim_core::metric::MAX_EXACT_POINTS {
            return Err(usage(
                "budgets.exact_limit",
                format!("exceeds the exact-search ceiling {}", mdim_core::metric::MAX_EXACT_POINTS),
            ));
        }
        let p = &self.params;
        let lists: [(&str, Option<usize>); 3] = [
            ("params.kinds", p.kinds.as_ref().map(Vec::len)),
            ("params.p", p.p.as_ref().map(Vec::len)),
            ("params.d_grid", p.d_grid.as_ref().map(Vec::len)),
        ];
        for (path, len) in lists {
            if len == Some(0) {
                return Err(usage(path, "grid must not be empty"));
            }
        }
        if matches!(&p.big_n, Some(v) if v.is_empty()) {
            return Err(usage("params.big_n", "grid must not be empty"));
        }
        for (path, v) in [
            ("params.levels", p.levels),
            ("params.samples", p.samples),
            ("params.pairs", p.pairs),
            ("params.blocks", p.blocks),
            ("params.instances", p.instances),
            ("params.support", p.support),
        ] {
            if v == Some(0) {
                return Err(usage(path, "must be positive"));
            }
        }
        if let Some(t) = p.tol {
            if !(t > 0.0) {
                return Err(usage("params.tol", "must be positive"));
            }
        }
        if let Some(s) = &self.system {
            if let Some(g) = s.grid {
                if !(g > 0.0 && g <= 1.0) {
                    return Err(usage("system.grid", "must lie in (0, 1]"));
                }
            }
            if let Some([lo, hi]) = s.window {
                if hi < lo {
                    return Err(usage("system.window", "needs lo ≤ hi"));
                }
            }
            if s.samples == Some(0) {
                return Err(usage("system.samples", "must be positive"));
            }
            if s.cap.is_some_and(|c| c < 2) {
                return Err(usage("system.cap", "must be at least 2"));
            }
        }
        if let Some(o) = &self.output {
            if o.is_empty() || !o.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return Err(usage("output", "stem must be nonempty ASCII letters, digits, '_' or '-'"));
            }
        }
        Ok(())
    }
}

fn prefixed(prefix: &str, e: RunError) -> RunError {
    match e {
        RunError::Usage { path, message } if !prefix.is_empty() => usage(format!("{prefix}.{path}"), message),
        other => other,
    }
}

fn parse_one(value: serde_json::Value, prefix: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner.as_str()) {
            (true, ".") => "<root>".to_string(),
            (true, _) => inner.clone(),
            (false, ".") => prefix.to_string(),
            (false, _) => format!("{prefix}.{inner}"),
        };
        usage(path, e.into_inner().to_string())
    })?;
    cfg.validate().map_err(|e| prefixed(prefix, e))?;
    Ok(cfg)
}

/// Parses one experiment or an `experiments` batch.
pub fn parse_configs(text: &str) -> Result<Vec<ExperimentConfig>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| usage("<root>", e.to_string()))?;
    match value {
        serde_json::Value::Object(mut map) if map.contains_key("experiments") => {
            if map.len() != 1 {
                let extra = map.keys().find(|k| *k != "experiments").cloned().unwrap_or_default();
                return Err(usage(extra, "unknown field next to `experiments`"));
            }
            let list = match map.remove("experiments") {
                Some(serde_json::Value::Array(a)) => a,
                _ => return Err(usage("experiments", "must be an array")),
            };
            if list.is_empty() {
                return Err(usage("experiments", "must not be empty"));
            }
            let configs = list
                .into_iter()
                .enumerate()
                .map(|(i, v)| parse_one(v, &format!("experiments[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let mut stems: Vec<String> = configs.iter().filter_map(|c| c.output.clone()).collect();
            stems.sort();
            if let Some(w) = stems.windows(2).find(|w| w[0] == w[1]) {
                return Err(usage("experiments", format!("duplicate output stem `{}`", w[0])));
            }
            Ok(configs)
        }
        v => Ok(vec![parse_one(v, "")?]),
    }
}

pub fn load_configs(path: &Path) -> Result<Vec<ExperimentConfig>> {
    let text = std::fs::read_to_string(path).map_err(|e| usage("--config", format!("{}: {e}", path.display())))?;
    parse_configs(&text)
}
