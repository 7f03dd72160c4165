//! System selection by string key.

use mdim_core::dynamics::{CounterexampleSystem, GridShift, IdentityGrid, OrbitScheme, System};

use crate::config::{SystemConfig, SystemKey};
use crate::error::{usage, Result};

pub const DEFAULT_HILBERT_GRID: f64 = 0.5;
pub const DEFAULT_HILBERT_WINDOW: [i64; 2] = [0, 2];
pub const DEFAULT_BINARY_WINDOW: [i64; 2] = [-2, 2];
pub const DEFAULT_INTERVAL_GRID: f64 = 0.01;
pub const DEFAULT_COUNTEREXAMPLE_LEVEL: u32 = 2;
pub const DEFAULT_CAP: u64 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub enum AnySystem {
    Shift(GridShift),
    Identity(IdentityGrid),
    Counterexample(CounterexampleSystem),
}

/// Generic code run against whichever system a config selects.
pub trait SystemVisitor {
    type Output;
    fn visit<S: System + Sync>(self, sys: &S, scheme: OrbitScheme) -> Self::Output
    where
        S::State: Send + Sync;
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuiltSystem {
    pub key: SystemKey,
    pub system: AnySystem,
    pub scheme: OrbitScheme,
}

impl BuiltSystem {
    pub fn label(&self) -> &'static str {
        self.key.key()
    }

    pub fn visit<V: SystemVisitor>(&self, v: V) -> V::Output {
        match &self.system {
            AnySystem::Shift(s) => v.visit(s, self.scheme),
            AnySystem::Identity(s) => v.visit(s, self.scheme),
            AnySystem::Counterexample(s) => v.visit(s, self.scheme),
        }
    }

    pub fn enumerable(&self) -> bool {
        matches!(self.scheme, OrbitScheme::Exhaustive)
    }
}

fn window(cfg: &SystemConfig, default: [i64; 2]) -> (i64, i64) {
    let [lo, hi] = cfg.window.unwrap_or(default);
    (lo, hi)
}

/// Builds the system; `run_seed` seeds sampled surrogates unless the
/// system config carries its own seed.
pub fn build_system(cfg: &SystemConfig, run_seed: u64) -> Result<BuiltSystem> {
    let bad = |e: mdim_core::Error| usage("system", e.to_string());
    let unused = |field: &str, present: bool| -> Result<()> {
        if present {
            Err(usage(format!("system.{field}"), format!("not used by {}", cfg.key.key())))
        } else {
            Ok(())
        }
    };
    let system = match cfg.key {
        SystemKey::HilbertCube => {
            unused("n", cfg.n.is_some())?;
            unused("cap", cfg.cap.is_some())?;
            let (lo, hi) = window(cfg, DEFAULT_HILBERT_WINDOW);
            AnySystem::Shift(GridShift::quantized(cfg.grid.unwrap_or(DEFAULT_HILBERT_GRID), lo, hi).map_err(bad)?)
        }
        SystemKey::BinaryShift => {
            unused("grid", cfg.grid.is_some())?;
            unused("n", cfg.n.is_some())?;
            unused("cap", cfg.cap.is_some())?;
            let (lo, hi) = window(cfg, DEFAULT_BINARY_WINDOW);
            AnySystem::Shift(GridShift::binary(lo, hi).map_err(bad)?)
        }
        SystemKey::IdentityInterval => {
            unused("window", cfg.window.is_some())?;
            unused("n", cfg.n.is_some())?;
            unused("cap", cfg.cap.is_some())?;
            AnySystem::Identity(IdentityGrid::new(cfg.grid.unwrap_or(DEFAULT_INTERVAL_GRID)).map_err(bad)?)
        }
        SystemKey::Counterexample => {
            unused("grid", cfg.grid.is_some())?;
            let level = cfg.n.unwrap_or(DEFAULT_COUNTEREXAMPLE_LEVEL);
            if !(1..=30).contains(&level) {
                return Err(usage("system.n", "level must lie in [1, 30]"));
            }
            let (lo, hi) = window(cfg, [0, 2 * (1i64 << level) - 1]);
            AnySystem::Counterexample(
                CounterexampleSystem::new(level, cfg.cap.unwrap_or(DEFAULT_CAP), (lo, hi)).map_err(bad)?,
            )
        }
    };
    let scheme = match cfg.samples {
        Some(count) => OrbitScheme::Sample {
            count,
            seed: cfg.seed.unwrap_or(run_seed),
        },
        None => OrbitScheme::Exhaustive,
    };
    Ok(BuiltSystem {
        key: cfg.key,
        system,
        scheme,
    })
}
