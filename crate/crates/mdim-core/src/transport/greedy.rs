use alloc::vec::Vec;
use core::ops::{Add, Sub};
use num_traits::Zero;

use crate::error::{domain, shape};
use crate::Result;

/// Plan built by the cyclic filling rule, indexed by original points.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyCoupling<T> {
    /// `order[k]` is the point playing the role of `k ∈ Z/KZ`.
    pub order: Vec<usize>,
    /// Row-major `K × K` plan with rows `μ_n` and columns `μ`.
    pub plan: Vec<T>,
}

impl<T: Clone> GreedyCoupling<T> {
    pub fn get(&self, a: usize, b: usize) -> T {
        self.plan[a * self.order.len() + b].clone()
    }
}

fn min<T: PartialOrd>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

/// Couples `mu_n` (first marginal) with `mu` (second) by filling row `x`
/// in the cyclic column order `x, x+1, …, x+K−1`: the diagonal takes
/// `min(μ_n(x), μ(x) − Σ_{k<x} π(k,x))`, and each later column the least
/// of what row `x` has left and what column `y` can still take.
///
/// Each row is exhausted because the columns' remaining capacity equals
/// the rows' remaining mass, so the marginals hold exactly whenever `T`
/// has exact arithmetic.
pub fn greedy_cyclic_coupling<T>(mu_n: &[T], mu: &[T], order: Option<&[usize]>) -> Result<GreedyCoupling<T>>
where
    T: Clone + Zero + PartialOrd + Add<Output = T> + Sub<Output = T>,
{
    let k = mu.len();
    if mu_n.len() != k {
        return Err(shape("marginals differ in length"));
    }
    if k == 0 {
        return Err(crate::Error::Empty("marginals"));
    }
    let order: Vec<usize> = match order {
        Some(o) => {
            let mut seen = alloc::vec![false; k];
            if o.len() != k || o.iter().any(|&i| i >= k || core::mem::replace(&mut seen[i], true)) {
                return Err(domain("ordering must be a permutation of the points"));
            }
            o.to_vec()
        }
        None => (0..k).collect(),
    };
    let a: Vec<T> = order.iter().map(|&i| mu_n[i].clone()).collect();
    let b: Vec<T> = order.iter().map(|&i| mu[i].clone()).collect();
    // col_used[y] = Σ_{k<x} π(k, y), maintained as rows are filled.
    let mut col_used: Vec<T> = alloc::vec![T::zero(); k];
    let mut pi: Vec<T> = alloc::vec![T::zero(); k * k];
    for x in 0..k {
        let mut row_used = T::zero();
        for s in 0..k {
            let y = (x + s) % k;
            let v = min(a[x].clone() - row_used.clone(), b[y].clone() - col_used[y].clone());
            let v = if v < T::zero() { T::zero() } else { v };
            row_used = row_used + v.clone();
            pi[x * k + y] = v;
        }
        for y in 0..k {
            col_used[y] = col_used[y].clone() + pi[x * k + y].clone();
        }
    }
    // Back to original point indices.
    let mut plan = alloc::vec![T::zero(); k * k];
    for x in 0..k {
        for y in 0..k {
            plan[order[x] * k + order[y]] = pi[x * k + y].clone();
        }
    }
    Ok(GreedyCoupling { order, plan })
}
