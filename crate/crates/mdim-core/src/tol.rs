//! Central tolerance ladder.

/// Sums of probabilities and marginals must match to this.
pub const STRUCTURAL: f64 = 1e-12;

/// Inequality checks on information quantities pass when slack ≥ −INEQUALITY.
pub const INEQUALITY: f64 = 1e-10;

/// Slack for `d < ε` and `d ≥ δ` comparisons on floating distances.
///
/// A distance within `COMPARE` (relative to `max(1, ε)`) of the threshold
/// counts as equal to it: not `< ε`, but `≥ δ`. Grid inputs whose true
/// distances either equal the threshold or miss it by far more than this
/// are classified exactly as in rational arithmetic.
pub const COMPARE: f64 = 1e-12;

/// Comparison rule for strict covers and separated sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub slack: f64,
}

impl Default for Threshold {
    fn default() -> Self {
        Self { slack: COMPARE }
    }
}

impl Threshold {
    pub const EXACT: Threshold = Threshold { slack: 0.0 };

    #[inline]
    fn margin(&self, t: f64) -> f64 {
        self.slack * if t.abs() > 1.0 { t.abs() } else { 1.0 }
    }

    /// `d < eps`, with near-ties resolved as equality.
    #[inline]
    pub fn lt(&self, d: f64, eps: f64) -> bool {
        d < eps - self.margin(eps)
    }

    /// `d ≥ delta`, with near-ties resolved as equality.
    #[inline]
    pub fn ge(&self, d: f64, delta: f64) -> bool {
        d >= delta - self.margin(delta)
    }
}
