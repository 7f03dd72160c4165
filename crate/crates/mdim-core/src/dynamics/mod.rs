//! Dynamical systems at desk scale and their orbit metrics.
//!
//! A [`System`] supplies a state type, the map `T`, a base metric `d` and
//! optionally a finite enumeration or a sampler. Orbit metrics:
//! `d_n = max_{k<n} d(T^k x, T^k y)`, `d̄_n` the average of the same terms,
//! and `d_A` the maximum over `k ∈ A`.

mod counterexample;
mod finite;
mod hilbert;
mod orbit;
mod periodic;
mod shift;

pub use counterexample::{
    alphabet_size, counterexample_distance, CounterexamplePoint, CounterexampleSystem, SimplexAlphabet,
    Symbol,
};
pub use finite::{FiniteMap, IdentityGrid, OnePoint};
pub use hilbert::{HilbertCover, HilbertGrid};
pub use orbit::{
    enumerate_or_sample_orbit_space, orbit, orbit_distance, orbit_metric, OrbitKind, OrbitScheme,
    OrbitSpace, DEFAULT_MAX_POINTS,
};
pub use periodic::PeriodicShift;
pub use shift::{
    grid_levels, hilbert_cube_distance, sample_product_lebesgue, GridShift, HilbertCube, ShiftPoint,
};

use alloc::vec::Vec;
use rand_core::RngCore;

/// A map `T` on a represented state set with base metric `d`.
pub trait System {
    type State: Clone + PartialEq + core::fmt::Debug;

    /// The map `T`.
    fn step(&self, x: &Self::State) -> Self::State;

    /// The base metric `d`.
    fn dist(&self, x: &Self::State, y: &Self::State) -> f64;

    /// An upper bound on `d` over the whole state set.
    fn diameter_bound(&self) -> f64;

    /// Number of states [`System::enumerate`] would return, if finite.
    fn state_count(&self) -> Option<u128> {
        None
    }

    /// Every represented state, in a fixed order.
    fn enumerate(&self) -> Option<Vec<Self::State>> {
        None
    }

    /// One draw from the system's reference measure.
    fn sample(&self, _rng: &mut dyn RngCore) -> Option<Self::State> {
        None
    }
}
