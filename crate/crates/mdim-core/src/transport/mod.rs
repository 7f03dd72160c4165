//! Optimal transport on finite metric spaces.
//!
//! [`wasserstein1`] solves the transportation problem exactly with a
//! transportation simplex and returns the optimal plan with dual
//! potentials. [`greedy_cyclic_coupling`] is the inductive cyclic filling
//! that shows `W(μ_n, μ) → 0` when `μ_n → μ` entrywise; it is generic over
//! the number type so rationals give exact marginals.

mod coupling;
mod greedy;
mod simplex;

pub use coupling::{compose_couplings, diagonal_mass_gap, Coupling, DiagonalReport};
pub use greedy::{greedy_cyclic_coupling, GreedyCoupling};
pub use simplex::{transport, wasserstein1, TransportSolution, MAX_SUPPORT};
