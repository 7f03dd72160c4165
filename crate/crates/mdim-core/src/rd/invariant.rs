use alloc::vec::Vec;

use crate::dynamics::{orbit, System};
use crate::error::domain;
use crate::info::Distribution;
use crate::Result;

/// Finitely many states with a pmf; coinciding states are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedStates<T> {
    pub states: Vec<T>,
    pub weights: Distribution,
    /// Integer multiplicities when every weight is a multiple of a common
    /// unit; enables exact entropy comparisons.
    pub counts: Option<Vec<u64>>,
}

impl<T: Clone + PartialEq> WeightedStates<T> {
    /// Normalizes `weights` and merges equal states, keeping first
    /// occurrence order.
    pub fn new(states: Vec<T>, weights: &[f64]) -> Result<Self> {
        if states.len() != weights.len() {
            return Err(crate::error::shape("states and weights differ in length"));
        }
        if states.is_empty() {
            return Err(crate::Error::Empty("weighted states"));
        }
        let mut uniq: Vec<T> = Vec::new();
        let mut w: Vec<f64> = Vec::new();
        for (s, &v) in states.into_iter().zip(weights) {
            match uniq.iter().position(|u| *u == s) {
                Some(i) => w[i] += v,
                None => {
                    uniq.push(s);
                    w.push(v);
                }
            }
        }
        Ok(Self {
            states: uniq,
            weights: Distribution::from_weights(&w)?,
            counts: None,
        })
    }

    /// Weights proportional to integer multiplicities.
    pub fn from_counts(states: Vec<T>, counts: &[u64]) -> Result<Self> {
        if states.len() != counts.len() {
            return Err(crate::error::shape("states and counts differ in length"));
        }
        let mut uniq: Vec<T> = Vec::new();
        let mut c: Vec<u64> = Vec::new();
        for (s, &v) in states.into_iter().zip(counts) {
            match uniq.iter().position(|u| *u == s) {
                Some(i) => c[i] += v,
                None => {
                    uniq.push(s);
                    c.push(v);
                }
            }
        }
        let w: Vec<f64> = c.iter().map(|&v| v as f64).collect();
        let mut out = Self::new(uniq, &w)?;
        out.counts = Some(c);
        Ok(out)
    }

    pub fn uniform(states: Vec<T>) -> Result<Self> {
        let c = alloc::vec![1; states.len()];
        Self::from_counts(states, &c)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// `(1/n) Σ_{k<n} T^k_* ν` for `ν` uniform on `members`: each `T^k s`
/// carries `1/(n|S|)`, merged where orbits meet.
pub fn empirical_invariant_measure<S: System>(
    sys: &S,
    members: &[S::State],
    n: usize,
) -> Result<WeightedStates<S::State>> {
    if members.is_empty() {
        return Err(crate::Error::Empty("separated set"));
    }
    if n == 0 {
        return Err(domain("block length must be at least 1"));
    }
    let mut states = Vec::with_capacity(members.len() * n);
    for s in members {
        states.extend(orbit(sys, s, n));
    }
    let c = alloc::vec![1; states.len()];
    WeightedStates::from_counts(states, &c)
}
