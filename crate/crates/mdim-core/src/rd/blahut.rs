use alloc::vec::Vec;

use super::problem::{RdPoint, RdProblem, RdStatus, RdTarget, SolverOptions};
use crate::error::domain;
use crate::info::{mutual_information_of, Channel};
use crate::util::sum;
use crate::{Error, Result};

/// Floor for `Σ_y q(y) w(x,y)`; keeps `ln` finite once `q` underflows.
const A_FLOOR: f64 = 1e-300;
/// Mass mixed into a warm-start marginal so no output is frozen at zero.
const WARM_FLOOR: f64 = 1e-9;
const Q_FLUSH: f64 = 1e-250;

/// Result of Blahut–Arimoto at a fixed slope `−beta`.
///
/// `intercept − beta·D` is a lower bound on `R(D)` for every `D`; with
/// `beta = ∞` the problem is restricted to per-row minimal distortions and
/// `intercept` bounds `R(D_min)` only.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeSolution {
    pub beta: f64,
    pub marginal: Vec<f64>,
    pub channel: Channel,
    pub distortion: f64,
    pub rate: f64,
    pub intercept: f64,
    /// Dual gap of the final iterate; `rate − line(distortion) ≤ gap`.
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl SlopeSolution {
    /// Best lower bound this solve certifies at `d`, clipped at 0.
    pub fn lower_bound_at(&self, d: f64, d_min: f64, scale: f64) -> f64 {
        let v = if self.beta.is_infinite() {
            if d <= d_min + 1e-12 * scale {
                self.intercept
            } else {
                0.0
            }
        } else {
            self.intercept - self.beta * d
        };
        v.max(0.0)
    }
}

/// Alternating minimization at slope `−beta`, `beta ∈ [0, ∞]`.
///
/// `warm` seeds the output marginal; `None` starts from uniform.
pub fn solve_slope(prob: &RdProblem, beta: f64, warm: Option<&[f64]>, opts: &SolverOptions) -> Result<SlopeSolution> {
    if !(beta >= 0.0) {
        return Err(domain("slope must be ≤ 0"));
    }
    if !(opts.tol > 0.0) {
        return Err(domain("tolerance must be positive"));
    }
    let rho = &prob.distortion;
    let (nx, ny) = (rho.rows(), rho.cols());
    let p = prob.source.probs();
    let active: Vec<usize> = (0..nx).filter(|&x| p[x] > 0.0).collect();
    let scale = rho.max_entry().max(1.0);

    // Row-shifted weights exp(−β(ρ − m_x)) ∈ (0, 1], each row attaining 1.
    let mins: Vec<f64> = (0..nx)
        .map(|x| rho.row(x).iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    let mut w = alloc::vec![0.0; nx * ny];
    for x in 0..nx {
        for y in 0..ny {
            let e = rho.get(x, y) - mins[x];
            w[x * ny + y] = if beta.is_infinite() {
                if e <= 1e-12 * scale {
                    1.0
                } else {
                    0.0
                }
            } else {
                libm::exp(-beta * e)
            };
        }
    }

    let mut q: Vec<f64> = match warm {
        Some(q0) if q0.len() == ny => {
            let s = sum(q0);
            q0.iter()
                .map(|v| (1.0 - WARM_FLOOR) * v / s + WARM_FLOOR / ny as f64)
                .collect()
        }
        _ => alloc::vec![1.0 / ny as f64; ny],
    };

    let mut a = alloc::vec![0.0; nx];
    let mut c = alloc::vec![0.0; ny];
    let mut iterations = 0;
    let gap = loop {
        for &x in &active {
            let row = &w[x * ny..(x + 1) * ny];
            let s: f64 = row.iter().zip(&q).map(|(wv, qv)| wv * qv).sum();
            a[x] = s.max(A_FLOOR);
        }
        c.iter_mut().for_each(|v| *v = 0.0);
        for &x in &active {
            let f = p[x] / a[x];
            let row = &w[x * ny..(x + 1) * ny];
            for (cv, wv) in c.iter_mut().zip(row) {
                *cv += f * wv;
            }
        }
        let cmax = c.iter().copied().fold(0.0, f64::max);
        let avg: f64 = q
            .iter()
            .zip(&c)
            .filter(|(qv, cv)| **qv > 0.0 && **cv > 0.0)
            .map(|(qv, cv)| qv * cv * libm::log(*cv))
            .sum();
        let gap = (libm::log(cmax) - avg).max(0.0);
        if gap < opts.tol || iterations >= opts.max_iter {
            break gap;
        }
        for (qv, cv) in q.iter_mut().zip(&c) {
            *qv *= cv;
            // Outputs this light carry no mass in any sum; flushing them
            // avoids subnormal arithmetic.
            if *qv < Q_FLUSH {
                *qv = 0.0;
            }
        }
        let s = sum(&q);
        q.iter_mut().for_each(|v| *v /= s);
        iterations += 1;
    };

    // Channel and dual line from the same marginal as the final gap.
    let mut ch = alloc::vec![0.0; nx * ny];
    for x in 0..nx {
        let row = &w[x * ny..(x + 1) * ny];
        let s: f64 = row.iter().zip(&q).map(|(wv, qv)| wv * qv).sum();
        let out = &mut ch[x * ny..(x + 1) * ny];
        if s > 0.0 {
            for ((o, wv), qv) in out.iter_mut().zip(row).zip(&q) {
                *o = wv * qv / s;
            }
        } else {
            // Only reachable for zero-mass rows or a fully underflowed row.
            let y = (0..ny).find(|&y| row[y] == 1.0).unwrap_or(0);
            out[y] = 1.0;
        }
        let t = sum(out);
        out.iter_mut().for_each(|v| *v /= t);
    }
    let channel = Channel::from_parts_unchecked(nx, ny, ch);
    let cmax = c.iter().copied().fold(0.0, f64::max);
    let ln_a: Vec<f64> = active.iter().map(|&x| p[x] * libm::log(a[x])).collect();
    let mut intercept = -sum(&ln_a) - libm::log(cmax);
    if beta.is_finite() {
        let m: Vec<f64> = active.iter().map(|&x| p[x] * mins[x]).collect();
        intercept += beta * sum(&m);
    }
    Ok(SlopeSolution {
        beta,
        distortion: prob.expected_distortion(&channel),
        rate: mutual_information_of(&prob.source, &channel)?.max(0.0),
        marginal: q,
        channel,
        intercept,
        gap,
        iterations,
        converged: gap < opts.tol,
    })
}

/// Solves the finite rate-distortion problem at a slope or a distortion
/// budget.
///
/// For a budget `D` the returned channel meets `E ρ ≤ D` (up to rounding),
/// its rate is an upper bound on `R(D)` and `lower_bound` is the best dual
/// line at `D`; the solve converges when the two are within `opts.tol`.
/// Budgets below the least achievable distortion are [`Error::Infeasible`].
pub fn blahut_arimoto(prob: &RdProblem, target: RdTarget, opts: &SolverOptions) -> Result<RdPoint> {
    match target {
        RdTarget::Slope(s) => {
            if !(s <= 0.0) {
                return Err(domain("slope must be ≤ 0"));
            }
            let sol = solve_slope(prob, -s, None, opts)?;
            let scale = prob.distortion.max_entry().max(1.0);
            Ok(RdPoint {
                target: sol.distortion,
                distortion: sol.distortion,
                rate: sol.rate,
                lower_bound: sol.lower_bound_at(sol.distortion, prob.min_distortion(), scale),
                slope: s,
                iterations: sol.iterations,
                status: if sol.converged {
                    RdStatus::Converged
                } else {
                    RdStatus::NotConverged
                },
                channel: sol.channel,
            })
        }
        RdTarget::Distortion(d) => solve_distortion(prob, d, opts),
    }
}

struct Anchor {
    distortion: f64,
    channel: Channel,
    slope: f64,
}

fn solve_distortion(prob: &RdProblem, d: f64, opts: &SolverOptions) -> Result<RdPoint> {
    if !d.is_finite() {
        return Err(domain("distortion target must be finite"));
    }
    let scale = prob.distortion.max_entry().max(1.0);
    let (nx, ny) = (prob.distortion.rows(), prob.distortion.cols());
    let (d_zero, y0) = prob.zero_rate_distortion();
    if d >= d_zero {
        let channel = Channel::constant(nx, ny, y0);
        return Ok(RdPoint {
            target: d,
            distortion: prob.expected_distortion(&channel),
            rate: 0.0,
            lower_bound: 0.0,
            channel,
            slope: 0.0,
            iterations: 0,
            status: RdStatus::ZeroRate,
        });
    }
    let d_min = prob.min_distortion();
    if d < d_min - 1e-12 * scale {
        return Err(Error::Infeasible {
            target: d,
            minimum: d_min,
        });
    }
    let inner = SolverOptions {
        tol: opts.tol * 0.25,
        ..*opts
    };
    let restricted = solve_slope(prob, f64::INFINITY, None, &inner)?;
    let mut iterations = restricted.iterations;
    if d <= d_min + 1e-12 * scale {
        let lower = restricted.lower_bound_at(d_min, d_min, scale);
        return Ok(RdPoint {
            target: d,
            distortion: restricted.distortion,
            rate: restricted.rate,
            lower_bound: lower,
            status: if restricted.rate - lower < opts.tol {
                RdStatus::Converged
            } else {
                RdStatus::NotConverged
            },
            channel: restricted.channel,
            slope: f64::NEG_INFINITY,
            iterations,
        });
    }

    // Achievable anchors on either side of d; mixing them meets d exactly.
    let mut below = Anchor {
        distortion: restricted.distortion,
        channel: restricted.channel.clone(),
        slope: f64::NEG_INFINITY,
    };
    let mut above = Anchor {
        distortion: prob.expected_distortion(&Channel::constant(nx, ny, y0)),
        channel: Channel::constant(nx, ny, y0),
        slope: 0.0,
    };
    let mut lower = 0.0f64;
    let mut warm: Vec<f64> = restricted.marginal.clone();

    let evaluate = |beta: f64,
                        warm: &mut Vec<f64>,
                        below: &mut Anchor,
                        above: &mut Anchor,
                        lower: &mut f64,
                        iterations: &mut usize|
     -> Result<f64> {
        let sol = solve_slope(prob, beta, Some(warm), &inner)?;
        *iterations += sol.iterations;
        *lower = lower.max(sol.lower_bound_at(d, d_min, scale));
        if sol.distortion <= d && sol.distortion >= below.distortion {
            *below = Anchor {
                distortion: sol.distortion,
                channel: sol.channel.clone(),
                slope: -beta,
            };
        }
        if sol.distortion >= d && sol.distortion <= above.distortion {
            *above = Anchor {
                distortion: sol.distortion,
                channel: sol.channel.clone(),
                slope: -beta,
            };
        }
        *warm = sol.marginal;
        Ok(sol.distortion)
    };

    let upper = |below: &Anchor, above: &Anchor| -> Result<(Channel, f64)> {
        let span = above.distortion - below.distortion;
        let t = if span > 0.0 {
            ((d - below.distortion) / span).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let ch = below.channel.mix(&above.channel, t)?;
        let r = mutual_information_of(&prob.source, &ch)?.max(0.0);
        Ok((ch, r))
    };

    // Bracket ln β: `lo` has distortion above d, `hi` at or below. The
    // exponential-kernel slope 1/(d − D_min) is the first guess.
    let mut beta = (1.0 / (d - d_min)).clamp(1e-6, 1e9);
    let (mut lo, mut hi) = (None::<(f64, f64)>, None::<(f64, f64)>);
    for _ in 0..opts.bisection_depth {
        let db = evaluate(beta, &mut warm, &mut below, &mut above, &mut lower, &mut iterations)?;
        if db > d {
            lo = Some((beta, db));
            if hi.is_some() || beta > 1e12 {
                break;
            }
            beta *= 4.0;
        } else {
            hi = Some((beta, db));
            if lo.is_some() || beta < 1e-12 {
                break;
            }
            beta /= 4.0;
        }
    }

    // Illinois regula falsi on D(ln β), which is continuous and
    // nonincreasing; the retained endpoint's weight halves when it repeats.
    let (mut channel, mut rate) = upper(&below, &above)?;
    if let (Some((bl, mut fl)), Some((bh, mut fh))) = (lo, hi) {
        let (mut ll, mut lh) = (libm::log(bl), libm::log(bh));
        fl -= d;
        fh -= d;
        let mut side = 0i8;
        for _ in 0..opts.bisection_depth {
            if rate - lower < opts.tol || lh - ll < 1e-12 {
                break;
            }
            let t = if fl - fh > 0.0 { fl / (fl - fh) } else { 0.5 };
            let lm = ll + t.clamp(0.01, 0.99) * (lh - ll);
            let fm = evaluate(libm::exp(lm), &mut warm, &mut below, &mut above, &mut lower, &mut iterations)? - d;
            if fm > 0.0 {
                ll = lm;
                fl = fm;
                if side == 1 {
                    fh *= 0.5;
                }
                side = 1;
            } else {
                lh = lm;
                fh = fm;
                if side == -1 {
                    fl *= 0.5;
                }
                side = -1;
            }
            (channel, rate) = upper(&below, &above)?;
        }
    }
    let slope = if (below.distortion - d).abs() <= (above.distortion - d).abs() {
        below.slope
    } else {
        above.slope
    };
    Ok(RdPoint {
        target: d,
        distortion: prob.expected_distortion(&channel),
        rate,
        lower_bound: lower.min(rate),
        status: if rate - lower < opts.tol {
            RdStatus::Converged
        } else {
            RdStatus::NotConverged
        },
        channel,
        slope,
        iterations,
    })
}
