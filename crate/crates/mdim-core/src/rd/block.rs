use alloc::vec::Vec;

use crate::error::{domain, shape};
use crate::info::{mutual_information_of, Channel, Distribution};
use crate::Result;

/// Little-endian index of a word over an `a`-letter alphabet.
fn encode(word: &[usize], a: usize) -> usize {
    word.iter().rev().fold(0, |acc, &s| acc * a + s)
}

fn decode(mut idx: usize, a: usize, len: usize) -> Vec<usize> {
    let mut w = Vec::with_capacity(len);
    for _ in 0..len {
        w.push(idx % a);
        idx /= a;
    }
    w
}

fn checked_pow(a: usize, e: usize) -> Result<usize> {
    a.checked_pow(e as u32)
        .filter(|&v| v <= 1 << 24)
        .ok_or_else(|| domain("block alphabet too large to tabulate"))
}

/// `σ_{n,i}`: the channel on `n`-blocks that applies `τ` independently to
/// the `m`-blocks starting at `i, i+m, …, i+(q−1)m` and emits `anchor`
/// everywhere else, where `n = qm + r` with `m ≤ r ≤ 2m − 1`.
///
/// Words are indexed little-endian: position 0 is the least significant
/// digit.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockChannel {
    tau: Channel,
    alphabet: usize,
    m: usize,
    n: usize,
    phase: usize,
    anchor: usize,
}

impl BlockChannel {
    pub fn new(tau: Channel, alphabet: usize, m: usize, n: usize, phase: usize, anchor: usize) -> Result<Self> {
        if alphabet == 0 || m == 0 {
            return Err(domain("alphabet and block length must be positive"));
        }
        if n < 2 * m {
            return Err(domain("total length must be at least 2m"));
        }
        if phase >= m {
            return Err(domain("phase must lie in [0, m)"));
        }
        if anchor >= alphabet {
            return Err(domain("anchor outside the alphabet"));
        }
        let am = checked_pow(alphabet, m)?;
        if tau.inputs() != am || tau.outputs() != am {
            return Err(shape("τ must act on a^m × a^m"));
        }
        checked_pow(alphabet, n)?;
        Ok(Self {
            tau,
            alphabet,
            m,
            n,
            phase,
            anchor,
        })
    }

    /// `(q, r)` with `n = qm + r`, `m ≤ r ≤ 2m − 1`.
    pub fn split(&self) -> (usize, usize) {
        let q = self.n / self.m - 1;
        (q, self.n - q * self.m)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Probability of the output word `y` given the input word `x`.
    pub fn prob(&self, x: &[usize], y: &[usize]) -> f64 {
        let (q, r) = self.split();
        let (i, m) = (self.phase, self.m);
        let tail = self.n - r + i;
        for k in (0..i).chain(tail..self.n) {
            if y[k] != self.anchor {
                return 0.0;
            }
        }
        let mut p = 1.0;
        for j in 0..q {
            let s = i + j * m;
            let xi = encode(&x[s..s + m], self.alphabet);
            let yi = encode(&y[s..s + m], self.alphabet);
            p *= self.tau.get(xi, yi);
            if p == 0.0 {
                break;
            }
        }
        p
    }

    /// `σ_{n,i}(·|x)` over all `a^n` output words.
    pub fn row(&self, x: &[usize]) -> Result<Vec<f64>> {
        if x.len() != self.n || x.iter().any(|&s| s >= self.alphabet) {
            return Err(domain("input word has the wrong length or alphabet"));
        }
        let an = checked_pow(self.alphabet, self.n)?;
        Ok((0..an)
            .map(|yi| self.prob(x, &decode(yi, self.alphabet, self.n)))
            .collect())
    }
}

/// `σ_{n,i}(·|x)` as a distribution.
pub fn block_channel_extend(bc: &BlockChannel, x: &[usize]) -> Result<Distribution> {
    Distribution::new(bc.row(x)?)
}

/// `σ_n = (1/m) Σ_{i<m} σ_{n,i}` tabulated on `a^n × a^n`.
pub fn block_mixture(tau: &Channel, alphabet: usize, m: usize, n: usize, anchor: usize) -> Result<Channel> {
    let phases: Vec<BlockChannel> = (0..m)
        .map(|i| BlockChannel::new(tau.clone(), alphabet, m, n, i, anchor))
        .collect::<Result<_>>()?;
    let an = checked_pow(alphabet, n)?;
    let mut w = alloc::vec![0.0; an * an];
    for xi in 0..an {
        let x = decode(xi, alphabet, n);
        for bc in &phases {
            for (yi, v) in bc.row(&x)?.into_iter().enumerate() {
                w[xi * an + yi] += v / m as f64;
            }
        }
    }
    // Rows are sums of products of τ rows; they are pmfs up to rounding.
    Channel::new(an, an, w)
}

/// Both sides of the averaged chain
/// `(1/m) I(μ^m, τ) ≥ (1/n) I(ν^n, σ_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    /// `(1/m) I(μ^m, τ)` with `μ^m = (1/n) Σ_{k<n} law of x[k..k+m]`.
    pub block_side: f64,
    /// `(1/n) I(ν^n, σ_n)` with `ν^n` the law of `x[0..n]`.
    pub extended_side: f64,
    pub max_row_error: f64,
}

impl ChainReport {
    pub fn slack(&self) -> f64 {
        self.block_side - self.extended_side
    }
}

/// Evaluates the chain for a weighted family of words of length
/// `n + m − 1`, so every window `x[k..k+m]`, `k < n`, exists.
pub fn chain_check(
    tau: &Channel,
    alphabet: usize,
    m: usize,
    n: usize,
    anchor: usize,
    sources: &[(Vec<usize>, f64)],
) -> Result<ChainReport> {
    if sources.is_empty() {
        return Err(crate::Error::Empty("source words"));
    }
    if sources.iter().any(|(w, _)| w.len() != n + m - 1 || w.iter().any(|&s| s >= alphabet)) {
        return Err(domain("source words must have length n + m − 1 over the alphabet"));
    }
    let weights: Vec<f64> = sources.iter().map(|(_, v)| *v).collect();
    let nu = Distribution::from_weights(&weights)?;
    let am = checked_pow(alphabet, m)?;
    let an = checked_pow(alphabet, n)?;

    let mut mu_m = alloc::vec![0.0; am];
    let mut nu_n = alloc::vec![0.0; an];
    for ((w, _), &p) in sources.iter().zip(nu.probs()) {
        for k in 0..n {
            mu_m[encode(&w[k..k + m], alphabet)] += p / n as f64;
        }
        nu_n[encode(&w[..n], alphabet)] += p;
    }
    let sigma = block_mixture(tau, alphabet, m, n, anchor)?;
    let block_side = mutual_information_of(&Distribution::from_weights(&mu_m)?, tau)? / m as f64;
    let extended_side = mutual_information_of(&Distribution::from_weights(&nu_n)?, &sigma)? / n as f64;
    Ok(ChainReport {
        block_side,
        extended_side,
        max_row_error: sigma.max_row_error(),
    })
}
