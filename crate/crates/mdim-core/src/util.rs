/// `x ln x` with `0 ln 0 = 0`.
#[inline]
pub(crate) fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * libm::log(x)
    } else {
        0.0
    }
}

pub(crate) fn sum(xs: &[f64]) -> f64 {
    // Neumaier summation; marginals are compared at 1e-12.
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for &x in xs {
        let t = s + x;
        if s.abs() >= x.abs() {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    s + c
}

pub(crate) fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn ceil_log2(x: f64) -> u32 {
    // Smallest l ≥ 0 with 2^l ≥ x, robust to x being an exact power of two.
    let mut l = 0u32;
    let mut p = 1.0f64;
    while p < x {
        p *= 2.0;
        l += 1;
    }
    l
}

pub(crate) fn floor_div(num: f64, den: f64) -> u64 {
    // ⌊num/den⌋ for positive operands, exact when the quotient is an integer
    // up to rounding of the division.
    let q = num / den;
    let f = libm::floor(q + 1e-9);
    if f < 0.0 {
        0
    } else {
        f as u64
    }
}
