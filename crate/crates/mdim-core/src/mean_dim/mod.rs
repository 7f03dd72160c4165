//! Growth of covering numbers along orbits and what it bounds.
//!
//! `S(ε) = lim (1/n) log #(X, d_n, ε)` and `S̃(ε)` with `d̄_n` in place of
//! `d_n` are both limits of subadditive sequences, so the minimum over the
//! computed `n` is an upper bound on each. Lower rows come from separated
//! sets. Slopes against `|ln ε|` are finite-grid surrogates for the upper
//! and lower metric mean dimension and are labeled as such.

mod comparison;
mod counterexample;
mod profile;
mod slope;
mod variational;

pub use comparison::{lemma33_check, ComparisonReport};
pub use counterexample::{
    collapse_hypotheses, counterexample_report, tail_cutoff, CollapseRow, ContrastRow, CounterexampleOptions,
    CounterexampleReport, SeparationRow, SkippedTriple,
};
pub use profile::{
    growth_profile, hilbert_profile, ln_biguint, BoundType, Estimator, GrowthOptions, GrowthProfile, GrowthRow,
    SubadditivityCheck,
};
pub use slope::{mdim_slope, mdim_slope_from_profiles, MdimEstimate, ProfileValue, SlopePoint};
pub use variational::{
    variational_report, BestRate, Candidate, VariationalOptions, VariationalReport, VariationalRow,
};
