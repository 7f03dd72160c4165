use mdim_core::dynamics::{FiniteMap, GridShift, IdentityGrid, OnePoint, ShiftPoint};
use mdim_core::info::{binary_entropy, entropy, Channel, Distribution};
use mdim_core::metric::{FiniteMetricSpace, Mode};
use mdim_core::rd::*;
use mdim_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LN2: f64 = std::f64::consts::LN_2;

fn binary_hamming() -> RdProblem {
    RdProblem::new(Distribution::uniform(2), DistortionMatrix::hamming(2)).unwrap()
}

fn at(prob: &RdProblem, d: f64) -> RdPoint {
    blahut_arimoto(prob, RdTarget::Distortion(d), &SolverOptions::default()).unwrap()
}

/// Minimum of `I` over a grid of binary channels with step `h`, subject to
/// `E ρ ≤ d`.
fn binary_channel_grid(prob: &RdProblem, d: f64, h: f64) -> f64 {
    let k = (1.0 / h).round() as usize;
    let p = prob.source.probs();
    let mut best = f64::INFINITY;
    for i in 0..=k {
        for j in 0..=k {
            let a = i as f64 * h; // P(y=1 | x=0)
            let b = j as f64 * h; // P(y=0 | x=1)
            let w = [[1.0 - a, a], [b, 1.0 - b]];
            let dist: f64 = (0..2)
                .map(|x| p[x] * (0..2).map(|y| w[x][y] * prob.distortion.get(x, y)).sum::<f64>())
                .sum();
            if dist > d {
                continue;
            }
            let py = [p[0] * w[0][0] + p[1] * w[1][0], p[0] * w[0][1] + p[1] * w[1][1]];
            let mut mi = 0.0;
            for x in 0..2 {
                for y in 0..2 {
                    let v = p[x] * w[x][y];
                    if v > 0.0 {
                        mi += v * (w[x][y] / py[y]).ln();
                    }
                }
            }
            best = best.min(mi);
        }
    }
    best
}

/// `R(D) = min_q max_{β≥0} [−βD − Σ_x p(x) ln Σ_y q(y) e^{−βρ(x,y)}]`,
/// with `q` on a simplex grid refined around the best cell and the inner
/// concave maximization done by ternary search in `ln β`.
fn dual_q_grid(prob: &RdProblem, d: f64) -> f64 {
    let p = prob.source.probs().to_vec();
    let ny = prob.distortion.cols();
    assert_eq!(ny, 3);
    let inner = |q: &[f64]| -> f64 {
        let f = |beta: f64| -> f64 {
            let mut s = -beta * d;
            for (x, &px) in p.iter().enumerate() {
                if px > 0.0 {
                    // log-sum-exp over the support of q
                    let terms: Vec<f64> = (0..ny)
                        .filter(|&y| q[y] > 0.0)
                        .map(|y| q[y].ln() - beta * prob.distortion.get(x, y))
                        .collect();
                    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    let lse = m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln();
                    s -= px * lse;
                }
            }
            s
        };
        let (mut lo, mut hi) = (-12.0f64, 12.0f64);
        for _ in 0..80 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if f(m1.exp()) < f(m2.exp()) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        f(lo.exp()).max(0.0)
    };
    let scan = |center: (f64, f64), radius: f64, h: f64| -> ((f64, f64), f64) {
        let mut best = ((0.0, 0.0), f64::INFINITY);
        let k = (2.0 * radius / h).round() as i64;
        for i in 0..=k {
            for j in 0..=k {
                let a = center.0 - radius + i as f64 * h;
                let b = center.1 - radius + j as f64 * h;
                if a < -1e-12 || b < -1e-12 || a + b > 1.0 + 1e-12 {
                    continue;
                }
                let (a, b) = (a.max(0.0), b.max(0.0));
                let q = [a, b, (1.0 - a - b).max(0.0)];
                let v = inner(&q);
                if v < best.1 {
                    best = ((a, b), v);
                }
            }
        }
        best
    };
    let (c, _) = scan((0.5, 0.5), 0.5, 0.02);
    let (c, _) = scan(c, 0.04, 0.004);
    scan(c, 0.008, 0.0005).1
}

fn random_problem(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> RdProblem {
    let w: Vec<f64> = (0..nx).map(|_| rng.gen_range(0.05..1.0)).collect();
    let d: Vec<f64> = (0..nx * ny).map(|_| rng.gen_range(0.0..1.0)).collect();
    RdProblem::new(
        Distribution::from_weights(&w).unwrap(),
        DistortionMatrix::new(nx, ny, d).unwrap(),
    )
    .unwrap()
}

#[test]
fn binary_hamming_closed_form() {
    let prob = binary_hamming();
    for d in [0.05, 0.1, 0.2, 0.3] {
        let pt = at(&prob, d);
        let expected = LN2 - binary_entropy(d).unwrap();
        assert!((pt.rate - expected).abs() < 1e-6, "D={d}: {} vs {expected}", pt.rate);
        assert!(pt.lower_bound <= expected + 1e-12);
        assert!(pt.distortion <= d + 1e-12);
        assert_eq!(pt.status, RdStatus::Converged);
    }
    assert!((at(&prob, 0.1).rate - 0.3680642071684971).abs() < 1e-6);
}

#[test]
fn binary_hamming_channel_grid() {
    let prob = binary_hamming();
    for d in [0.1, 0.25] {
        let grid = binary_channel_grid(&prob, d, 0.001);
        let pt = at(&prob, d);
        assert!(pt.rate <= grid + 1e-9);
        assert!(grid - pt.rate < 1e-3, "grid {grid} vs {}", pt.rate);
    }
}

#[test]
fn trivial_regimes() {
    let prob = binary_hamming();
    let pt = at(&prob, 0.5);
    assert_eq!(pt.status, RdStatus::ZeroRate);
    assert_eq!(pt.rate, 0.0);
    assert!(pt.channel.rows().iter().all(|r| r == &pt.channel.row(0).to_vec()));

    let pt = at(&prob, 0.0);
    assert!((pt.rate - LN2).abs() < 1e-9);
    let three = RdProblem::new(
        Distribution::new(vec![0.2, 0.3, 0.5]).unwrap(),
        DistortionMatrix::hamming(3),
    )
    .unwrap();
    let pt = at(&three, 0.0);
    assert!((pt.rate - entropy(&three.source)).abs() < 1e-9);

    assert!(matches!(
        blahut_arimoto(&prob, RdTarget::Distortion(-0.1), &SolverOptions::default()),
        Err(Error::Infeasible { .. })
    ));
    assert!(blahut_arimoto(&prob, RdTarget::Slope(1.0), &SolverOptions::default()).is_err());
}

#[test]
fn slope_solutions_lie_on_the_curve() {
    let prob = binary_hamming();
    for beta in [0.5f64, 2.0, 5.0] {
        let pt = blahut_arimoto(&prob, RdTarget::Slope(-beta), &SolverOptions::default()).unwrap();
        // Binary Hamming: D(β) = 1/(1 + e^β) above the zero-rate slope.
        let d = 1.0 / (1.0 + beta.exp());
        if beta > 0.0 && d < 0.5 {
            assert!((pt.distortion - d).abs() < 1e-6, "β={beta}");
            assert!((pt.rate - (LN2 - binary_entropy(d).unwrap())).abs() < 1e-6);
        }
    }
}

#[test]
fn three_by_three_against_dual_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let prob = random_problem(&mut rng, 3, 3);
        let lo = prob.min_distortion();
        let (hi, _) = prob.zero_rate_distortion();
        let d = lo + rng.gen_range(0.1..0.9) * (hi - lo);
        let pt = at(&prob, d);
        let oracle = dual_q_grid(&prob, d);
        assert!((pt.rate - oracle).abs() < 1e-3, "{} vs {oracle}", pt.rate);
        assert!(pt.lower_bound <= pt.rate);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn curve_is_nonincreasing_and_bracketed(seed in 0u64..10_000, nx in 2usize..5, ny in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prob = random_problem(&mut rng, nx, ny);
        let lo = prob.min_distortion();
        let (hi, _) = prob.zero_rate_distortion();
        let mut prev = f64::INFINITY;
        for t in [0.0, 0.2, 0.5, 0.8, 1.0] {
            let d = lo + t * (hi - lo);
            let pt = at(&prob, d);
            prop_assert!(pt.rate >= 0.0);
            prop_assert!(pt.lower_bound <= pt.rate + 1e-12);
            prop_assert!(pt.distortion <= d + 1e-9);
            prop_assert!(pt.rate <= prev + 1e-7);
            prev = pt.rate;
        }
    }
}

#[test]
fn distortion_examples() {
    let sys = GridShift::binary(-4, 4).unwrap();
    let x = ShiftPoint::zeros(-4, 4);
    let e0 = ShiftPoint::new(0, vec![1.0]).unwrap();

    let m = build_distortion(&sys, 3, &[e0.clone()], &Reproduction::Orbits(vec![e0.clone()]), Family::average()).unwrap();
    assert_eq!(m.get(0, 0), 0.0);

    let m = build_distortion(
        &sys,
        2,
        &[x.clone()],
        &Reproduction::Tuples(vec![vec![x.clone(), e0.clone()]]),
        Family::average(),
    )
    .unwrap();
    // d(x, 0) = 0 and d(Tx, e_0) = 2^0 · 1.
    assert_eq!(m.get(0, 0), 0.5);

    let m = build_distortion(
        &sys,
        2,
        &[x.clone()],
        &Reproduction::Orbits(vec![e0.clone()]),
        Family::Avg { p: 2.0 },
    )
    .unwrap();
    // Orbit of e_0: e_0 then e_{−1}; distances 1 and 1/2.
    assert!((m.get(0, 0) - (1.0 + 0.25) / 2.0).abs() < 1e-15);

    let m = build_distortion(
        &sys,
        4,
        &[x.clone(), e0.clone()],
        &Reproduction::Orbits(vec![x.clone(), e0.clone()]),
        Family::Counting { eps: 3.5 },
    )
    .unwrap();
    assert!(m.to_rows().iter().flatten().all(|&v| v == 0.0));

    let m = build_distortion(&sys, 2, &[x], &Reproduction::Orbits(vec![e0]), Family::Counting { eps: 0.75 }).unwrap();
    assert_eq!(m.get(0, 0), 0.5);
}

#[test]
fn empirical_measures() {
    let fixed = empirical_invariant_measure(&OnePoint, &[()], 5).unwrap();
    assert_eq!(fixed.len(), 1);
    assert_eq!(fixed.weights.probs(), &[1.0]);

    let space = FiniteMetricSpace::line(&[0.0, 1.0, 0.5]);
    let swap = FiniteMap::new(vec![1, 0, 2], space).unwrap();
    let mu = empirical_invariant_measure(&swap, &[0], 2).unwrap();
    assert_eq!(mu.states, vec![0, 1]);
    assert_eq!(mu.weights.probs(), &[0.5, 0.5]);
    let mu = empirical_invariant_measure(&swap, &[2], 4).unwrap();
    assert_eq!(mu.states, vec![2]);

    // Binary shift: orbits of e_0 and e_0 + e_2 over three steps.
    let sys = GridShift::binary(-4, 4).unwrap();
    let a = ShiftPoint::new(0, vec![1.0]).unwrap();
    let b = ShiftPoint::new(0, vec![1.0, 0.0, 1.0]).unwrap();
    let mu = empirical_invariant_measure(&sys, &[a.clone(), b], 3).unwrap();
    assert_eq!(mu.len(), 6);
    assert!(mu.weights.probs().iter().all(|&p| (p - 1.0 / 6.0).abs() < 1e-15));
    // Orbits that meet are merged.
    let mu = empirical_invariant_measure(&sys, &[a.clone(), a.shifted()], 2).unwrap();
    assert_eq!(mu.len(), 3);
    assert_eq!(mu.counts.as_deref(), Some(&[1u64, 2, 1][..]));
}

#[test]
fn rate_estimates_on_simple_systems() {
    let opts = EstimateOptions::default();
    let one = WeightedStates::uniform(vec![()]).unwrap();
    let t = estimate_rate(&OnePoint, &one, Family::average(), 0.1, &[1, 2, 3], &Dictionary::SourceOrbits, &opts).unwrap();
    assert_eq!(t.estimate, Some(0.0));

    // Identity on the 0.05-grid: time-constant codewords at the centres of
    // ε-wide cells give rate_n ≤ ln⌈1/(2ε)⌉ / n.
    let sys = IdentityGrid::new(0.05).unwrap();
    let mu = WeightedStates::uniform(sys.levels.clone()).unwrap();
    for eps in [0.1f64, 0.25] {
        let k = (1.0 / (2.0 * eps)).ceil() as usize;
        let centres: Vec<f64> = (0..k).map(|i| ((2 * i + 1) as f64 * eps).min(1.0)).collect();
        let t = estimate_rate(&sys, &mu, Family::average(), eps, &[1, 2, 4, 8], &Dictionary::Constant(centres), &opts).unwrap();
        for row in &t.rows {
            let r = row.rate.unwrap();
            assert!(r <= (k as f64).ln() / row.n as f64 + 1e-6, "ε={eps} n={}: {r}", row.n);
        }
    }

    // Counting with a large α is always at rate 0; α → 0 is monotone.
    let sys = GridShift::binary(-2, 2).unwrap();
    let states = sys_states(&sys);
    let mu = WeightedStates::uniform(states.clone()).unwrap();
    let mut prev = 0.0;
    for alpha in [0.9, 0.5, 0.25, 0.1] {
        let t = estimate_rate(
            &sys,
            &mu,
            Family::Counting { eps: 0.5 },
            alpha,
            &[2],
            &Dictionary::SourceOrbits,
            &opts,
        )
        .unwrap();
        let r = t.estimate.unwrap();
        assert!(r + 1e-6 >= prev, "α={alpha}");
        prev = r;
    }
}

fn sys_states(sys: &GridShift) -> Vec<ShiftPoint> {
    use mdim_core::dynamics::System;
    sys.enumerate().unwrap()
}

#[test]
fn family_ordering() {
    // R(avg 1, ε′) ≤ R(avg p, ε′) ≤ R(counting ε, α) when ε^p + α·diam^p ≤ ε′^p.
    let sys = GridShift::binary(-2, 2).unwrap();
    let states = sys_states(&sys);
    let mu = WeightedStates::uniform(states.clone()).unwrap();
    let opts = EstimateOptions::default();
    let (eps, p, alpha) = (0.5f64, 2.0f64, 0.01f64);
    let eps2 = (eps.powf(p) + alpha * 3f64.powf(p)).powf(1.0 / p) + 1e-3;
    let d = Dictionary::SourceOrbits;
    let r1 = estimate_rate(&sys, &mu, Family::average(), eps2, &[2], &d, &opts).unwrap().estimate.unwrap();
    let rp = estimate_rate(&sys, &mu, Family::Avg { p }, eps2, &[2], &d, &opts).unwrap().estimate.unwrap();
    let rc = estimate_rate(&sys, &mu, Family::Counting { eps }, alpha, &[2], &d, &opts).unwrap().estimate.unwrap();
    let tol = 1e-6;
    assert!(r1 <= rp + tol && rp <= rc + tol, "{r1} {rp} {rc}");
}

#[test]
fn cover_codebook_is_bounded_by_cover_count() {
    let sys = GridShift::binary(-2, 2).unwrap();
    let states = sys_states(&sys);
    let mu = WeightedStates::uniform(states.clone()).unwrap();
    let opts = EstimateOptions::default();
    let dict = Dictionary::CoverRepresentatives {
        states: states.clone(),
        mode: Mode::Greedy,
    };
    for (family, level) in [(Family::average(), 0.6), (Family::Counting { eps: 0.6 }, 0.05)] {
        let t = estimate_rate(&sys, &mu, family, level, &[1, 2, 3], &dict, &opts).unwrap();
        for row in &t.rows {
            let k = row.cover_count.unwrap();
            let cb = row.codebook.as_ref().unwrap();
            assert!(cb.within_log_size);
            assert!(row.rate.unwrap() <= cb.entropy / row.n as f64);
            assert!(row.rate.unwrap() * row.n as f64 <= (k as f64).ln() + 1e-12);
        }
    }
}

#[test]
fn codebook_exact_check() {
    let cb = codebook_rate(&[1, 1, 1, 1], 4);
    assert!(cb.within_log_size);
    assert!((cb.entropy - 4f64.ln()).abs() < 1e-15);
    assert!(!codebook_rate(&[1, 1, 1, 1], 3).within_log_size);
    assert!(codebook_rate(&[3, 1, 0], 2).within_log_size);
}

#[test]
fn scalar_rate() {
    let opts = SolverOptions {
        tol: 1e-4,
        ..SolverOptions::default()
    };
    let r = r_epsilon_uniform(0.5, 16, &[2.0], &opts).unwrap();
    assert_eq!(r.rate, 0.0);
    assert_eq!(r.status, RdStatus::ZeroRate);

    let r = r_epsilon_uniform(0.05, 200, &[2.0, 4.0], &opts).unwrap();
    assert!(r.rate <= 10f64.ln());
    assert!(r.sandwich_holds());

    assert!(r_epsilon_uniform(0.05, 40, &[2.0], &opts).is_err());
    assert!((quantizer_upper_bound(0.05).unwrap() - 11f64.ln()).abs() < 1e-15);
    // D = 2, ε = 0.01: (0.98) ln 50 − ln 51 / 2 − ln 3.
    let v = claim_lower_bound(0.01, 2.0).unwrap();
    assert!((v - (0.98 * 50f64.ln() - 51f64.ln() / 2.0 - 3f64.ln())).abs() < 1e-12);
}

fn random_channel(rng: &mut ChaCha8Rng, k: usize) -> Channel {
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            let w: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
            let s: f64 = w.iter().sum();
            w.iter().map(|v| v / s).collect()
        })
        .collect();
    Channel::from_rows(&rows).unwrap()
}

#[test]
fn block_channel_examples() {
    // Alphabet {0,1}, m = 2, n = 5: q = 1, r = 3.
    let bc = BlockChannel::new(Channel::identity(4), 2, 2, 5, 0, 1).unwrap();
    assert_eq!(bc.split(), (1, 3));
    let x = [0, 1, 0, 0, 1];
    let row = block_channel_extend(&bc, &x).unwrap();
    // Copies x on [0, 2), anchor on [2, 5): y = (0,1,1,1,1) = 30.
    assert_eq!(row.get(30), 1.0);

    let bc = BlockChannel::new(Channel::identity(4), 2, 2, 5, 1, 0).unwrap();
    // Phase 1: anchor at 0, copy on [1,3), anchor on [3,5): y = (0,1,0,0,0).
    assert_eq!(block_channel_extend(&bc, &x).unwrap().get(2), 1.0);

    let constant = Channel::constant(4, 4, 3);
    let sources: Vec<(Vec<usize>, f64)> = (0..64).map(|i| ((0..6).map(|b| (i >> b) & 1).collect(), 1.0)).collect();
    let rep = chain_check(&constant, 2, 2, 5, 0, &sources).unwrap();
    assert!(rep.block_side.abs() < 1e-15 && rep.extended_side.abs() < 1e-15);

    assert!(BlockChannel::new(Channel::identity(4), 2, 2, 3, 0, 0).is_err());
    assert!(BlockChannel::new(Channel::identity(4), 2, 2, 5, 2, 0).is_err());
}

#[test]
fn block_chain_inequality_over_seeds() {
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tau = random_channel(&mut rng, 4);
        let k = rng.gen_range(1..=6);
        let sources: Vec<(Vec<usize>, f64)> = (0..k)
            .map(|_| ((0..6).map(|_| rng.gen_range(0..2)).collect(), 1.0))
            .collect();
        let rep = chain_check(&tau, 2, 2, 5, rng.gen_range(0..2), &sources).unwrap();
        assert!(rep.max_row_error < 1e-12);
        assert!(rep.slack() >= -1e-9, "seed {seed}: {rep:?}");
    }
}
