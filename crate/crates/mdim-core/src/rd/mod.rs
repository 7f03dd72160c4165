//! Rate distortion on finite alphabets.
//!
//! [`blahut_arimoto`] solves a finite problem at a fixed slope or for a
//! distortion target, returning an achievable channel together with a
//! certified lower bound from the Lagrange dual. The remaining items build
//! the problems that arise from dynamical systems: orbit distortions,
//! dictionary-restricted rate estimates, empirical invariant measures, block
//! channel extensions and the scalar `r(ε)` for the uniform source.

mod blahut;
mod block;
mod codebook;
mod distortion;
mod estimate;
mod invariant;
mod problem;
mod scalar;

pub use blahut::{blahut_arimoto, solve_slope, SlopeSolution};
pub use block::{block_channel_extend, block_mixture, chain_check, BlockChannel, ChainReport};
pub use codebook::{codebook_rate, CodebookRate};
pub use distortion::{build_distortion, Family, Reproduction};
pub use estimate::{estimate_rate, Dictionary, EstimateOptions, RateRow, RateTable, STRICT_MARGIN};
pub use invariant::{empirical_invariant_measure, WeightedStates};
pub use problem::{DistortionMatrix, RdPoint, RdProblem, RdStatus, RdTarget, SolverOptions};
pub use scalar::{claim_lower_bound, quantizer_upper_bound, r_epsilon_uniform, ScalarRate};
