use mdim_core::dynamics::{
    enumerate_or_sample_orbit_space, CounterexamplePoint, FiniteMap, GridShift, IdentityGrid, OnePoint, OrbitKind,
    OrbitScheme, ShiftPoint, System,
};
use mdim_core::mean_dim::*;
use mdim_core::metric::{FiniteMetricSpace, Mode, SearchOptions};
use mdim_core::metric::SeparatedCertificate;
use mdim_core::rd::{empirical_invariant_measure, Dictionary, WeightedStates};
use mdim_core::tol::Threshold;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Minimum number of diameter-<ε subsets covering everything, by dynamic
/// programming over subsets.
fn cover_oracle(s: &FiniteMetricSpace, eps: f64) -> usize {
    let n = s.len();
    let th = Threshold::default();
    let full = (1usize << n) - 1;
    let ok: Vec<bool> = (0..=full)
        .map(|m| {
            (0..n).all(|i| m >> i & 1 == 0 || (i + 1..n).all(|j| m >> j & 1 == 0 || th.lt(s.dist(i, j), eps)))
        })
        .collect();
    let mut dp = vec![usize::MAX; full + 1];
    dp[0] = 0;
    for m in 1..=full {
        let low = m & m.wrapping_neg();
        let mut sub = m;
        while sub > 0 {
            if sub & low != 0 && ok[sub] && dp[m & !sub] != usize::MAX {
                dp[m] = dp[m].min(dp[m & !sub] + 1);
            }
            sub = (sub - 1) & m;
        }
    }
    dp[full]
}

fn random_permutation_system(rng: &mut ChaCha8Rng, k: usize) -> FiniteMap {
    let pts: Vec<(f64, f64)> = (0..k).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let space = FiniteMetricSpace::from_symmetric_fn(k, |i, j| {
        ((pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2)).sqrt()
    });
    let mut perm: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    FiniteMap::new(perm, space).unwrap()
}

#[test]
fn growth_examples() {
    let opts = GrowthOptions::default();
    for kind in [OrbitKind::Max, OrbitKind::Avg] {
        let p = growth_profile(&OnePoint, 0.3, kind, &[1, 2, 5], OrbitScheme::Exhaustive, &opts).unwrap();
        assert!(p.rows.iter().all(|r| r.log_count == 0.0 && r.bound == BoundType::Exact));
        assert_eq!(p.estimate, Some(0.0));
    }

    // Under the identity every orbit metric equals d.
    let grid = IdentityGrid::new(0.1).unwrap();
    let p = growth_profile(&grid, 0.25, OrbitKind::Max, &[1, 2, 4, 8], OrbitScheme::Exhaustive, &opts).unwrap();
    let base = p.rows[0].log_count;
    assert!(p.rows.iter().all(|r| r.log_count == base));
    assert!(p.estimate.unwrap() <= base / 8.0 + 1e-15);
    assert_eq!(p.rows[0].count, BigUint::from(4u32));

    assert!(growth_profile(&grid, 0.0, OrbitKind::Max, &[1], OrbitScheme::Exhaustive, &opts).is_err());
    assert!(growth_profile(&grid, 0.1, OrbitKind::Subset(vec![0]), &[1], OrbitScheme::Exhaustive, &opts).is_err());
    assert!(growth_profile(&grid, 0.1, OrbitKind::Max, &[], OrbitScheme::Exhaustive, &opts).is_err());
}

#[test]
fn binary_shift_growth() {
    // Window [0, 5] of the binary full shift: 64 states.
    let sys = GridShift::binary(0, 5).unwrap();
    let opts = GrowthOptions {
        search: SearchOptions::with_exact_limit(64),
        separated: true,
        ..GrowthOptions::default()
    };
    let eps = 0.5;
    let p = growth_profile(&sys, eps, OrbitKind::Max, &[2, 4, 6], OrbitScheme::Exhaustive, &opts).unwrap();
    for &n in &[2usize, 4, 6] {
        // Points free on coordinates 0..n and zero elsewhere differ by 1 at
        // some T^m, m < n.
        let orb = enumerate_or_sample_orbit_space(&sys, n, OrbitScheme::Exhaustive, &OrbitKind::Max, 64).unwrap();
        let members: Vec<usize> = (0..orb.states.len())
            .filter(|&i| orb.states[i].coords[n..].iter().all(|&v| v == 0.0))
            .collect();
        assert_eq!(members.len(), 1 << n);
        let cert = SeparatedCertificate {
            delta: eps,
            members,
        };
        assert!(cert.verify(&orb.space, Threshold::default()).is_ok());
        let exact = p.rows.iter().find(|r| r.n == n && r.bound == BoundType::Exact).unwrap();
        assert!(exact.log_count >= n as f64 * std::f64::consts::LN_2 - 1e-12);
        let lower = p.rows.iter().find(|r| r.n == n && r.bound == BoundType::Lower).unwrap();
        assert!(lower.count <= exact.count);
    }
    let s = p.estimate.unwrap();
    assert!(s >= std::f64::consts::LN_2 - 1e-12 && s <= 1.5 * std::f64::consts::LN_2, "{s}");
}

#[test]
fn exact_rows_match_oracle_and_dominate() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let opts = GrowthOptions::default();
    for _ in 0..30 {
        let k = rng.gen_range(2..9);
        let sys = random_permutation_system(&mut rng, k);
        let eps = rng.gen_range(0.05..0.6);
        let ns = [1, 2, 3, 4];
        let max = growth_profile(&sys, eps, OrbitKind::Max, &ns, OrbitScheme::Exhaustive, &opts).unwrap();
        let avg = growth_profile(&sys, eps, OrbitKind::Avg, &ns, OrbitScheme::Exhaustive, &opts).unwrap();
        for (rm, ra) in max.rows.iter().zip(&avg.rows) {
            let kinds = [(&OrbitKind::Max, rm), (&OrbitKind::Avg, ra)];
            for (kind, row) in kinds {
                let orb = enumerate_or_sample_orbit_space(&sys, row.n, OrbitScheme::Exhaustive, kind, 64).unwrap();
                assert_eq!(row.count, BigUint::from(cover_oracle(&orb.space, eps)));
            }
            assert!(ra.count <= rm.count);
        }
        assert!(avg.estimate.unwrap() <= max.estimate.unwrap());
        for p in [&max, &avg] {
            let checks = p.subadditivity();
            assert!(!checks.is_empty());
            assert!(checks.iter().all(|c| c.holds && c.slack >= -1e-12));
            for r in &p.rows {
                assert!(p.estimate.unwrap() <= r.per_step);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subadditivity_on_permutations(seed in 0u64..1_000_000, k in 2usize..9, eps in 0.05f64..0.8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_permutation_system(&mut rng, k);
        let opts = GrowthOptions::default();
        for kind in [OrbitKind::Max, OrbitKind::Avg] {
            let p = growth_profile(&sys, eps, kind, &[1, 2, 3, 4, 5, 6], OrbitScheme::Exhaustive, &opts).unwrap();
            prop_assert!(p.subadditivity().iter().all(|c| c.holds));
        }
    }
}

#[test]
fn fit_estimator() {
    let grid = IdentityGrid::new(0.1).unwrap();
    let opts = GrowthOptions {
        estimator: Estimator::Fit,
        ..GrowthOptions::default()
    };
    let p = growth_profile(&grid, 0.25, OrbitKind::Max, &[1, 2, 4], OrbitScheme::Exhaustive, &opts).unwrap();
    assert!(p.estimate.unwrap().abs() < 1e-12);
    let p = growth_profile(&grid, 0.25, OrbitKind::Max, &[3], OrbitScheme::Exhaustive, &opts).unwrap();
    assert_eq!(p.estimate, None);
}

#[test]
fn slope_examples() {
    let grid = [0.5, 0.25, 0.125, 0.0625];
    let zero: Vec<(f64, f64)> = grid.iter().map(|&e| (e, 0.0)).collect();
    let est = mdim_slope(&zero).unwrap();
    assert_eq!(est.slope, 0.0);
    assert_eq!((est.upper, est.lower), (0.0, 0.0));

    let exact: Vec<(f64, f64)> = grid.iter().map(|&e: &f64| (e, -e.ln())).collect();
    let est = mdim_slope(&exact).unwrap();
    assert!((est.slope - 1.0).abs() < 1e-12);
    assert!(est.rms_residual < 1e-12 && est.intercept.abs() < 1e-12);
    assert!((est.upper - 1.0).abs() < 1e-12 && (est.lower - 1.0).abs() < 1e-12);

    assert!(mdim_slope(&exact[..2]).is_err());
    assert!(mdim_slope(&[(0.5, 1.0), (0.25, 1.0), (0.2, 1.0)]).is_err());
    assert!(mdim_slope(&[(1.0, 1.0), (0.5, 1.0), (0.25, 1.0)]).is_err());
    assert!(mdim_slope(&[(0.5, 1.0), (0.5, 1.0), (0.5, 1.0)]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn slope_ratio_bracket(vals in proptest::collection::vec(0.0f64..10.0, 3..7), q in 0.1f64..0.9) {
        let pts: Vec<(f64, f64)> = vals.iter().enumerate().map(|(i, &v)| (0.9 * q.powi(i as i32), v)).collect();
        let est = mdim_slope(&pts).unwrap();
        prop_assert!(est.lower <= est.upper);
        for p in &est.points {
            prop_assert!(est.lower <= p.ratio && p.ratio <= est.upper);
        }
        let resid: f64 = est.points.iter().map(|p| p.residual).sum();
        prop_assert!(resid.abs() < 1e-9);
    }
}

fn k_of(eps: f64) -> u64 {
    (1.0 / eps + 1e-9).floor() as u64 + 1
}

#[test]
fn hilbert_sandwich() {
    let eps_grid = [0.25, 0.125, 0.0625, 0.03125];
    let mut profiles = Vec::new();
    for &eps in &eps_grid {
        let p = hilbert_profile(eps, &[1, 2, 4, 8]).unwrap();
        let l = (4.0f64 / eps).log2().ceil() as u32;
        for row in &p.rows {
            let n = row.n as u32;
            match row.bound {
                BoundType::Lower => assert_eq!(row.count, BigUint::from(k_of(eps)).pow(n)),
                BoundType::Upper => {
                    let big = BigUint::from((12.0 / eps + 1e-9).floor() as u64 + 1);
                    assert_eq!(row.count, big.pow(n + 2 * l + 1));
                    let lower = BigUint::from(k_of(eps)).pow(n);
                    assert!(lower <= row.count);
                    assert!((n as f64) * (k_of(eps) as f64).ln() <= row.log_count);
                }
                BoundType::Exact => unreachable!(),
            }
        }
        assert!((p.lower_estimate.unwrap() - (k_of(eps) as f64).ln()).abs() < 1e-12);
        profiles.push(p);
    }
    let lower = mdim_slope_from_profiles(&profiles, ProfileValue::Lower).unwrap();
    for pt in &lower.points {
        assert!(pt.ratio >= (k_of(pt.epsilon) as f64).ln() / pt.log_inv - 1e-12);
    }
    let upper = mdim_slope_from_profiles(&profiles, ProfileValue::Estimate).unwrap();
    assert!(lower.upper <= upper.upper && lower.lower <= upper.lower);
}

#[test]
fn ln_biguint_matches_floats() {
    for v in [1u64, 2, 3, 1000, u64::MAX] {
        assert!((ln_biguint(&BigUint::from(v)) - (v as f64).ln()).abs() < 1e-12);
    }
    let big = BigUint::from(3u32).pow(5000);
    assert!((ln_biguint(&big) - 5000.0 * 3f64.ln()).abs() < 1e-9);
    assert_eq!(ln_biguint(&BigUint::from(0u32)), 0.0);
}

/// The comparison inequality in integers, from oracle counts.
fn comparison_oracle(sys: &FiniteMap, eps: f64, l: u32, n: usize) -> (usize, usize, usize, bool) {
    let space = |n: usize, kind: OrbitKind| {
        enumerate_or_sample_orbit_space(sys, n, OrbitScheme::Exhaustive, &kind, 64).unwrap().space
    };
    let a = cover_oracle(&space(n, OrbitKind::Max), 2.0 * l as f64 * eps);
    let m = cover_oracle(&space(1, OrbitKind::Max), eps);
    let c = cover_oracle(&space(n, OrbitKind::Avg), eps);
    let lhs = BigUint::from(a).pow(l);
    let rhs = BigUint::from(2u32).pow(n as u32 * l) * BigUint::from(m).pow(n as u32) * BigUint::from(c).pow(l);
    (a, m, c, lhs <= rhs)
}

#[test]
fn comparison_examples() {
    let search = SearchOptions::default();
    let r = lemma33_check(&OnePoint, 0.1, 2, 3, &search).unwrap();
    assert_eq!((r.max_count, r.base_count, r.avg_count), (1, 1, 1));
    assert!((r.slack - std::f64::consts::LN_2).abs() < 1e-15 && r.holds);

    // Identity: every orbit metric is d.
    let space = FiniteMetricSpace::line(&[0.0, 0.1, 0.3, 0.35, 0.7, 1.0]);
    let id = FiniteMap::identity(space.clone());
    for (eps, l, n) in [(0.05, 2, 2), (0.12, 2, 3), (0.2, 4, 2), (0.3, 4, 3)] {
        let r = lemma33_check(&id, eps, l, n, &search).unwrap();
        assert_eq!(r.max_count, cover_oracle(&space, 2.0 * l as f64 * eps));
        assert_eq!(r.base_count, cover_oracle(&space, eps));
        assert_eq!(r.avg_count, r.base_count);
        assert!(r.holds && r.slack >= 0.0);
    }
    assert!(lemma33_check(&id, 0.1, 1, 2, &search).is_err());
    assert!(lemma33_check(&id, 0.1, 2, 0, &search).is_err());
}

#[test]
fn comparison_on_random_permutations() {
    let search = SearchOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for seed in 0..300 {
        let k = rng.gen_range(2..=12);
        let sys = random_permutation_system(&mut rng, k);
        let eps = rng.gen_range(0.01..0.2);
        for l in [2u32, 4] {
            for n in [2usize, 3] {
                let r = lemma33_check(&sys, eps, l, n, &search).unwrap();
                assert!(r.holds && r.slack >= -1e-12, "seed {seed}: {r:?}");
                if seed < 30 {
                    let (a, m, c, holds) = comparison_oracle(&sys, eps, l, n);
                    assert_eq!((r.max_count, r.base_count, r.avg_count, r.holds), (a, m, c, holds));
                }
            }
        }
    }
}

#[test]
fn variational_examples() {
    let opts = VariationalOptions {
        n_list: vec![1, 2],
        ..VariationalOptions::default()
    };
    let one = vec![Candidate {
        name: "point".into(),
        measure: WeightedStates::uniform(vec![()]).unwrap(),
    }];
    let dict = Dictionary::CoverRepresentatives {
        states: vec![()],
        mode: Mode::Exact,
    };
    let rep = variational_report(&OnePoint, &[0.5, 0.1], &one, &dict, &opts).unwrap();
    for row in &rep.rows {
        assert_eq!(row.rate_avg.as_ref().unwrap().rate, 0.0);
        assert_eq!(row.rate_counting.as_ref().unwrap().rate, 0.0);
        assert_eq!((row.s, row.s_tilde), (0.0, 0.0));
        assert!(row.passes());
    }

    // Identity on a grid: constant codebooks reach the same rate as orbit
    // ones, and everything decays like log K / n.
    let grid = IdentityGrid::new(0.25).unwrap();
    let states = grid.enumerate().unwrap();
    let opts = VariationalOptions {
        n_list: vec![1, 2, 4, 8],
        ..VariationalOptions::default()
    };
    let cands = vec![Candidate {
        name: "uniform".into(),
        measure: WeightedStates::uniform(states.clone()).unwrap(),
    }];
    let dict = Dictionary::CoverRepresentatives {
        states: states.clone(),
        mode: Mode::Exact,
    };
    let rep = variational_report(&grid, &[0.3], &cands, &dict, &opts).unwrap();
    let row = &rep.rows[0];
    assert!(row.passes());
    assert!(row.s <= (3f64).ln() / 8.0 + 1e-12);
    assert!(row.rate_avg.as_ref().unwrap().rate <= row.s_tilde + 1e-12);
    assert_eq!(row.s_tilde_below_s, Some(true));
    let constant = variational_report(&grid, &[0.3], &cands, &Dictionary::Constant(states.clone()), &opts).unwrap();
    assert!(constant.rows[0].rate_avg.as_ref().unwrap().rate <= row.s_tilde + 1e-6);

    assert!(variational_report(&grid, &[], &cands, &dict, &opts).is_err());
    assert!(variational_report(&grid, &[0.3], &[], &dict, &opts).is_err());
}

#[test]
fn variational_quantized_hilbert() {
    // Levels {0, 1/2, 1} on a three-coordinate window: 27 states.
    let sys = GridShift::quantized(0.5, 0, 2).unwrap();
    let states = sys.enumerate().unwrap();
    let opts = VariationalOptions {
        n_list: vec![1, 2, 3],
        ..VariationalOptions::default()
    };
    let space = enumerate_or_sample_orbit_space(&sys, 1, OrbitScheme::Exhaustive, &OrbitKind::Max, 64)
        .unwrap()
        .space;
    let sep = mdim_core::metric::max_separated_set(&space, 0.5, Mode::Greedy, &opts.estimate.search).unwrap();
    let members: Vec<ShiftPoint> = sep.members.iter().map(|&i| states[i].clone()).collect();
    let empirical = empirical_invariant_measure(&sys, &members, 2).unwrap();
    // Orbit points leave the window; keep those still in the state list.
    let kept: Vec<(ShiftPoint, f64)> = empirical
        .states
        .iter()
        .zip(empirical.weights.probs())
        .filter(|(s, _)| states.contains(s))
        .map(|(s, &w)| (s.clone(), w))
        .collect();
    let (ks, kw): (Vec<ShiftPoint>, Vec<f64>) = kept.into_iter().unzip();
    let cands = vec![
        Candidate {
            name: "product".into(),
            measure: WeightedStates::uniform(states.clone()).unwrap(),
        },
        Candidate {
            name: "separated".into(),
            measure: WeightedStates::new(ks, &kw).unwrap(),
        },
    ];
    let dict = Dictionary::CoverRepresentatives {
        states: states.clone(),
        mode: Mode::Greedy,
    };
    let rep = variational_report(&sys, &[0.125], &cands, &dict, &opts).unwrap();
    let row = &rep.rows[0];
    assert!(row.avg_below_s_tilde && row.counting_below_s, "{row:?}");
    assert!(row.rate_avg.is_some() && row.rate_counting.is_some());
    assert!(row.avg_lower_gap.is_some() && row.counting_lower_gap.is_some());
}

/// `(1/N) Σ_{i<N} Σ_p 2^{−|p−i|} ‖x_p‖` summed directly.
fn avg_to_zero_oracle(level: u32, positions: &[i64], big_n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..big_n as i64 {
        for &p in positions {
            s += 0.5f64.powi((p - i).abs() as i32) / level as f64;
        }
    }
    s / big_n as f64
}

#[test]
fn counterexample_examples() {
    assert_eq!(CounterexamplePoint::zero().avg_orbit_distance_to_zero(24), 0.0);

    // n = 4, ε = 1/2, L = 4, N = 24, offset 0, every support symbol nonzero.
    assert_eq!(tail_cutoff(0.5), 4);
    let window = (-64, 24 + 63);
    let positions: Vec<i64> = (-64..=87).filter(|p: &i64| p.rem_euclid(16) == 0).collect();
    let pairs: Vec<(i64, u64)> = positions.iter().map(|&p| (p, 1)).collect();
    let x = CounterexamplePoint::new(4, 0, window, &pairs, 2).unwrap();
    let v = x.avg_orbit_distance_to_zero(24);
    assert!((v - avg_to_zero_oracle(4, &positions, 24)).abs() < 1e-12);
    assert!(v < 0.25);
    assert!(collapse_hypotheses(4, 0.5, 24).is_err());
    assert!(collapse_hypotheses(9, 0.5, 520).is_ok());
    assert!(collapse_hypotheses(9, 0.5, 519).is_err());

    // Differing in the symbol at index 0 with N = 2^n.
    for n in 1..=6u32 {
        let big_n = 1usize << n;
        let a = CounterexamplePoint::new(n, 0, (0, big_n as i64 - 1), &[(0, 1)], 3).unwrap();
        let b = CounterexamplePoint::new(n, 0, (0, big_n as i64 - 1), &[(0, 2)], 3).unwrap();
        assert!(a.max_orbit_distance(&b, big_n) >= 1.0 / n as f64);
    }
}

#[test]
fn counterexample_report_small() {
    let opts = CounterexampleOptions {
        samples: 50,
        pairs: 50,
        ..CounterexampleOptions::default()
    };
    let rep = counterexample_report(&opts).unwrap();
    assert!(rep.passed());
    assert!(rep.triples.iter().any(|t| t.level >= 9 && t.passed));
    assert!(rep
        .skipped
        .iter()
        .any(|s| s.level == 4 && s.epsilon == 0.5 && s.big_n == 24));
    for t in &rep.triples {
        assert!(t.sampled <= t.worst + 1e-15);
        assert!(collapse_hypotheses(t.level, t.epsilon, t.big_n).is_ok());
    }
    assert_eq!(rep.triples.len() + rep.skipped.len(), 10 * 3 * 4);
    let c = rep.contrast.iter().find(|c| c.epsilon == 0.5).unwrap();
    assert_eq!(c.separated_level, Some(2));
    assert!(c.separated_growth > 0.0 && c.collapsed_levels.contains(&9));
    assert_eq!(rep.contrast[0].separated_ratio, None);

    let bad = CounterexampleOptions {
        n_grid: vec![24],
        ..CounterexampleOptions::default()
    };
    assert!(counterexample_report(&bad).is_err());
}
