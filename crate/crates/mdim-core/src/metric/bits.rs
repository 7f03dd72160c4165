//! Point sets as `u128` masks for the exact searches.

use alloc::vec::Vec;

pub(crate) type Mask = u128;

#[inline]
pub(crate) fn bit(i: usize) -> Mask {
    1u128 << i
}

pub(crate) fn full(n: usize) -> Mask {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

pub(crate) fn members(mut m: Mask) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

pub(crate) fn to_vec(m: Mask) -> Vec<usize> {
    members(m).collect()
}

/// All maximal cliques of the graph given by `adj` (no self loops),
/// Bron–Kerbosch with Tomita pivoting.
pub(crate) fn maximal_cliques(adj: &[Mask]) -> Vec<Mask> {
    let mut out = Vec::new();
    bron_kerbosch(adj, 0, full(adj.len()), 0, &mut out);
    out
}

fn bron_kerbosch(adj: &[Mask], r: Mask, mut p: Mask, mut x: Mask, out: &mut Vec<Mask>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = members(p | x)
        .max_by_key(|&u| (p & adj[u]).count_ones())
        .unwrap_or(0);
    for v in members(p & !adj[pivot]) {
        bron_kerbosch(adj, r | bit(v), p & adj[v], x & adj[v], out);
        p &= !bit(v);
        x |= bit(v);
    }
}
