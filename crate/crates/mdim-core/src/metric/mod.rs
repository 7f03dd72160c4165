//! Finite metric spaces, covering numbers and separated sets.
//!
//! `#(X,d,ε)` is the least number of subsets of diameter `< ε` covering `X`.
//! On a finite carrier any subset counts, so the minimum is attained by
//! maximal cliques of the graph `d(a,b) < ε`.

mod bits;
mod cover;
mod growth;
mod separated;
mod space;

pub use cover::{covering_number, CoverCertificate, CoverResult};
pub use growth::{tame_growth_profile, TameGrowthProfile, TameGrowthRow};
pub use separated::{max_separated_set, SeparatedCertificate};
pub use space::{validate_metric, FiniteMetricSpace, MetricReport, Violation};

/// Exact combinatorial search or index-order greedy scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Mode {
    Exact,
    Greedy,
}

/// Limits and comparison rule for covering and packing searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Largest space handed to the exact set-cover search.
    pub cover_exact_limit: usize,
    /// Largest space handed to the exact independent-set search.
    pub packing_exact_limit: usize,
    pub threshold: crate::tol::Threshold,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            cover_exact_limit: 16,
            packing_exact_limit: 24,
            threshold: crate::tol::Threshold::default(),
        }
    }
}

impl SearchOptions {
    /// Both limits set to `limit`; the bitset search caps it at 128.
    pub fn with_exact_limit(limit: usize) -> Self {
        Self {
            cover_exact_limit: limit,
            packing_exact_limit: limit.max(24),
            ..Self::default()
        }
    }
}

/// Hard ceiling of the bitset searches.
pub const MAX_EXACT_POINTS: usize = 128;
