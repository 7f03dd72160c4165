use alloc::vec::Vec;

use super::measures::{binary_entropy, conditional_entropy, mutual_information, mutual_information_of};
use super::types::{Channel, Distribution, Joint, Joint3, PartitionMap};
use crate::tol::INEQUALITY;
use crate::Result;

/// `H(X|Y) ≤ H(P_e) + P_e ln|X|` for a decoder `Y → X`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FanoReport {
    pub h_x_given_y: f64,
    pub p_error: f64,
    pub bound: f64,
    /// `bound − H(X|Y)`.
    pub slack: f64,
}

impl FanoReport {
    pub fn holds(&self) -> bool {
        self.slack >= -INEQUALITY
    }
}

/// Error probability of `decoder` and the Fano slack.
pub fn fano_gap(j: &Joint, decoder: &[usize]) -> Result<FanoReport> {
    if decoder.len() != j.ny() || decoder.iter().any(|&x| x >= j.nx()) {
        return Err(crate::error::shape("decoder must map every y into the x alphabet"));
    }
    let mut correct = 0.0;
    for (y, &x) in decoder.iter().enumerate() {
        correct += j.get(x, y);
    }
    let pe = (1.0 - correct).clamp(0.0, 1.0);
    let h = conditional_entropy(j);
    let bound = binary_entropy(pe)? + pe * libm::log(j.nx() as f64);
    Ok(FanoReport {
        h_x_given_y: h,
        p_error: pe,
        bound,
        slack: bound - h,
    })
}

/// Closed-form lower bounds on `I(X;Y)` for `X` uniform on a separated set.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SeparatedBounds {
    /// `(1 − 1/D) ln|S| − H(1/D)`, for a `2Dε`-separated `S` and `E d(X,Y) < ε`.
    pub average: f64,
    /// `ln|S| − nH(α) − αn ln|A|`, for a `2ε`-separated `S ⊂ A^n` and fewer
    /// than `αn` expected coordinates with `d(X_k,Y_k) ≥ ε`.
    pub counting: f64,
}

pub fn separated_mi_lower_bounds(s: f64, d: f64, n: usize, alpha: f64, a: f64) -> Result<SeparatedBounds> {
    if !(s >= 1.0) || !(a >= 1.0) {
        return Err(crate::error::domain("set sizes must be at least 1"));
    }
    if !(d > 2.0) {
        return Err(crate::error::domain("D must exceed 2"));
    }
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(crate::error::domain("alpha must lie in (0, 1/2]"));
    }
    let ls = libm::log(s);
    let nf = n as f64;
    Ok(SeparatedBounds {
        average: (1.0 - 1.0 / d) * ls - binary_entropy(1.0 / d)?,
        counting: ls - nf * binary_entropy(alpha)? - alpha * nf * libm::log(a),
    })
}

/// Pushes the `Y` side through `q`; mass lands on cell representatives.
pub fn quantize_y(j: &Joint, q: &PartitionMap) -> Result<Joint> {
    if q.len() != j.ny() {
        return Err(crate::error::shape("partition size differs from the y alphabet"));
    }
    let mut p = alloc::vec![0.0; j.nx() * j.ny()];
    for x in 0..j.nx() {
        for y in 0..j.ny() {
            p[x * j.ny() + q.apply(y)] += j.get(x, y);
        }
    }
    Ok(Joint::from_parts_unchecked(j.nx(), j.ny(), p))
}

/// Sub- and super-additivity of `I(Y; X,Z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AdditivityReport {
    pub i_y_xz: f64,
    pub i_y_x: f64,
    pub i_y_z: f64,
    /// `X` and `Z` are conditionally independent given `Y` (within 1e-10).
    pub cond_indep_given_y: bool,
    /// `X` and `Z` are independent (within 1e-10).
    pub indep_xz: bool,
    /// `I(Y;X) + I(Y;Z) − I(Y;X,Z)`.
    pub sub_slack: f64,
    /// `I(Y;X,Z) − I(Y;X) − I(Y;Z)`.
    pub super_slack: f64,
}

impl AdditivityReport {
    /// The inequality whose hypothesis holds is satisfied; vacuous otherwise.
    pub fn holds(&self) -> bool {
        (!self.cond_indep_given_y || self.sub_slack >= -INEQUALITY)
            && (!self.indep_xz || self.super_slack >= -INEQUALITY)
    }
}

pub fn additivity_checks(j: &Joint3) -> AdditivityReport {
    let xy = j.xy();
    let yz = j.yz();
    let xz = j.xz();
    let py = xy.marginal_y();
    let mut ci = 0.0f64;
    for x in 0..j.nx {
        for y in 0..j.ny {
            for z in 0..j.nz {
                ci = ci.max((j.get(x, y, z) * py[y] - xy.get(x, y) * yz.get(y, z)).abs());
            }
        }
    }
    let px = xz.marginal_x();
    let pz = xz.marginal_y();
    let mut ind = 0.0f64;
    for x in 0..j.nx {
        for z in 0..j.nz {
            ind = ind.max((xz.get(x, z) - px[x] * pz[z]).abs());
        }
    }
    let i_y_xz = mutual_information(&j.y_vs_xz());
    let i_y_x = mutual_information(&xy);
    let i_y_z = mutual_information(&yz);
    AdditivityReport {
        i_y_xz,
        i_y_x,
        i_y_z,
        cond_indep_given_y: ci <= INEQUALITY,
        indep_xz: ind <= INEQUALITY,
        sub_slack: i_y_x + i_y_z - i_y_xz,
        super_slack: i_y_xz - i_y_x - i_y_z,
    }
}

/// One grid point of a concavity or convexity check.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MixtureRow {
    pub t: f64,
    /// Mutual information at the mixture.
    pub mixed: f64,
    /// The same mixture of the endpoint values.
    pub chord: f64,
    /// Signed so that the inequality holds iff `slack ≥ 0`.
    pub slack: f64,
}

/// `I((1−t)μ1 + tμ2, ν) ≥ (1−t) I(μ1,ν) + t I(μ2,ν)`.
pub fn concavity_in_source(mu1: &Distribution, mu2: &Distribution, ch: &Channel, ts: &[f64]) -> Result<Vec<MixtureRow>> {
    let a = mutual_information_of(mu1, ch)?;
    let b = mutual_information_of(mu2, ch)?;
    ts.iter()
        .map(|&t| {
            let mixed = mutual_information_of(&mu1.mix(mu2, t)?, ch)?;
            let chord = (1.0 - t) * a + t * b;
            Ok(MixtureRow {
                t,
                mixed,
                chord,
                slack: mixed - chord,
            })
        })
        .collect()
}

/// `I(μ, (1−t)ν1 + tν2) ≤ (1−t) I(μ,ν1) + t I(μ,ν2)`.
pub fn convexity_in_channel(mu: &Distribution, ch1: &Channel, ch2: &Channel, ts: &[f64]) -> Result<Vec<MixtureRow>> {
    let a = mutual_information_of(mu, ch1)?;
    let b = mutual_information_of(mu, ch2)?;
    ts.iter()
        .map(|&t| {
            let mixed = mutual_information_of(mu, &ch1.mix(ch2, t)?)?;
            let chord = (1.0 - t) * a + t * b;
            Ok(MixtureRow {
                t,
                mixed,
                chord,
                slack: chord - mixed,
            })
        })
        .collect()
}
