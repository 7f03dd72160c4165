use alloc::vec::Vec;
use num_bigint::BigUint;

use crate::info::entropy_of;

/// Entropy of a codeword-index distribution with integer masses, with an
/// exact check that it does not exceed `ln K` for a codebook of size `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CodebookRate {
    /// `H(f(X))` in nats.
    pub entropy: f64,
    pub codebook_size: u64,
    /// `W^W ≤ K^W ∏ C_k^{C_k}`, i.e. `H ≤ ln K`, decided in integers.
    pub within_log_size: bool,
}

/// `counts[k]` is the number of equally weighted source points sent to
/// codeword `k`; unused codewords may be omitted or zero.
pub fn codebook_rate(counts: &[u64], codebook_size: u64) -> CodebookRate {
    let total: u64 = counts.iter().sum();
    let used = counts.iter().filter(|&&c| c > 0).count() as u64;
    let p: Vec<f64> = counts.iter().map(|&c| c as f64 / total.max(1) as f64).collect();
    let within = if total == 0 {
        true
    } else if used > codebook_size {
        false
    } else {
        let lhs = BigUint::from(total).pow(total as u32);
        let mut rhs = BigUint::from(codebook_size).pow(total as u32);
        for &c in counts.iter().filter(|&&c| c > 0) {
            rhs *= BigUint::from(c).pow(c as u32);
        }
        lhs <= rhs
    };
    CodebookRate {
        entropy: entropy_of(&p),
        codebook_size,
        within_log_size: within,
    }
}
