use super::types::{Channel, Distribution, Joint, PartitionMap};
use crate::util::{sum, xlogx};
use crate::Result;

/// `−Σ p ln p` over raw masses.
pub fn entropy_of(p: &[f64]) -> f64 {
    -p.iter().map(|&v| xlogx(v)).sum::<f64>()
}

/// `H(X)` in nats.
pub fn entropy(p: &Distribution) -> f64 {
    entropy_of(p.probs())
}

/// `H(X,Y)`.
pub fn joint_entropy(j: &Joint) -> f64 {
    entropy_of(j.probs())
}

/// `H(X|Y) = H(X,Y) − H(Y)`.
pub fn conditional_entropy(j: &Joint) -> f64 {
    joint_entropy(j) - entropy_of(&j.marginal_y())
}

/// `H(p) = −p ln p − (1−p) ln(1−p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(crate::error::domain("binary entropy needs p in [0, 1]"));
    }
    Ok(-xlogx(p) - xlogx(1.0 - p))
}

/// `I(X;Y) = Σ p(x,y) ln(p(x,y) / p(x)p(y))`, the same quantity as
/// `H(X) + H(Y) − H(X,Y)` evaluated without cancellation.
pub fn mutual_information(j: &Joint) -> f64 {
    let px = j.marginal_x();
    let py = j.marginal_y();
    let mut terms = alloc::vec::Vec::with_capacity(j.probs().len());
    for (x, &a) in px.iter().enumerate() {
        if a <= 0.0 {
            continue;
        }
        for (y, &v) in j.row(x).iter().enumerate() {
            if v > 0.0 {
                // Separate logs stay finite for subnormal masses.
                terms.push(v * (libm::log(v) - libm::log(a) - libm::log(py[y])));
            }
        }
    }
    sum(&terms)
}

/// `I(μ, ν)` for a source and a channel.
pub fn mutual_information_of(mu: &Distribution, ch: &Channel) -> Result<f64> {
    Ok(mutual_information(&Joint::from_source_channel(mu, ch)?))
}

/// Mutual information of the joint pushed forward through partitions of
/// both sides, the finite form of the partition supremum.
pub fn partition_mutual_information(j: &Joint, px: &PartitionMap, py: &PartitionMap) -> Result<f64> {
    if px.len() != j.nx() || py.len() != j.ny() {
        return Err(crate::error::shape("partition sizes differ from the joint"));
    }
    let mut p = alloc::vec![0.0; j.nx() * j.ny()];
    for x in 0..j.nx() {
        for y in 0..j.ny() {
            p[px.apply(x) * j.ny() + py.apply(y)] += j.get(x, y);
        }
    }
    Ok(mutual_information(&Joint::from_parts_unchecked(j.nx(), j.ny(), p)))
}
