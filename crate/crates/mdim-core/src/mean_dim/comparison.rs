use num_bigint::BigUint;

use crate::dynamics::{enumerate_or_sample_orbit_space, OrbitKind, OrbitScheme, System};
use crate::error::domain;
use crate::metric::{covering_number, Mode, SearchOptions};
use crate::Result;

/// The three covering numbers of the `d_n` versus `d̄_n` comparison and
/// its slack.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ComparisonReport {
    pub epsilon: f64,
    pub l: u32,
    pub n: usize,
    /// `#(X, d_n, 2Lε)`.
    pub max_count: usize,
    /// `#(X, d, ε)`.
    pub base_count: usize,
    /// `#(X, d̄_n, ε)`.
    pub avg_count: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub slack: f64,
    /// `A^L ≤ 2^{nL} M^n N^L` in integers.
    pub holds: bool,
}

/// Checks `(1/n) log#(X,d_n,2Lε) ≤ log 2 + (1/L) log#(X,d,ε) + (1/n) log#(X,d̄_n,ε)`
/// with exact covering numbers on an enumerable system.
///
/// Multiplying through by `nL` turns the inequality into one between
/// integers, which decides `holds`.
pub fn lemma33_check<S: System>(sys: &S, epsilon: f64, l: u32, n: usize, search: &SearchOptions) -> Result<ComparisonReport> {
    if !(epsilon > 0.0) || l < 2 || n == 0 {
        return Err(domain("need epsilon > 0, integer L ≥ 2 and n ≥ 1"));
    }
    let limit = search.cover_exact_limit;
    let count = |n: usize, kind: OrbitKind, eps: f64| -> Result<usize> {
        let orb = enumerate_or_sample_orbit_space(sys, n, OrbitScheme::Exhaustive, &kind, limit)?;
        Ok(covering_number(&orb.space, eps, Mode::Exact, search)?.count)
    };
    let a = count(n, OrbitKind::Max, 2.0 * l as f64 * epsilon)?;
    let m = count(1, OrbitKind::Max, epsilon)?;
    let c = count(n, OrbitKind::Avg, epsilon)?;

    let nf = n as f64;
    let lhs = libm::log(a as f64) / nf;
    let rhs = core::f64::consts::LN_2 + libm::log(m as f64) / l as f64 + libm::log(c as f64) / nf;
    let big = |v: usize| BigUint::from(v);
    let left = big(a).pow(l);
    let right = (BigUint::from(1u8) << (n * l as usize)) * big(m).pow(n as u32) * big(c).pow(l);
    Ok(ComparisonReport {
        epsilon,
        l,
        n,
        max_count: a,
        base_count: m,
        avg_count: c,
        lhs,
        rhs,
        slack: rhs - lhs,
        holds: left <= right,
    })
}
