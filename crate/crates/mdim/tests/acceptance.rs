//! Acceptance criteria A1–A10, one pass/fail line each.
//!
//! Tolerances are pinned next to each check. The process exits nonzero
//! when any criterion fails, so `cargo test` reports the failure.

use std::path::Path;
use std::time::Instant;

use mdim::config::parse_configs;
use mdim::experiments::{info_checks, transport_demo};
use mdim::runner::{run, RunOptions};
use mdim_core::dynamics::{
    enumerate_or_sample_orbit_space, FiniteMap, GridShift, HilbertCover, HilbertGrid, IdentityGrid, OrbitKind,
    OrbitScheme, System,
};
use mdim_core::info::{binary_entropy, Channel, Distribution};
use mdim_core::mean_dim::{counterexample_report, hilbert_profile, lemma33_check, BoundType, CounterexampleOptions};
use mdim_core::metric::{FiniteMetricSpace, Mode, SearchOptions};
use mdim_core::rd::{
    blahut_arimoto, chain_check, estimate_rate, r_epsilon_uniform, Dictionary, DistortionMatrix, EstimateOptions,
    Family, RdProblem, RdTarget, SolverOptions, WeightedStates,
};
use mdim_core::tol::Threshold;
use mdim_core::transport::{greedy_cyclic_coupling, wasserstein1};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// A1 -----------------------------------------------------------------------

/// ε = 2^{−j}: ⌊12/ε⌋ = 12·2^j, ⌈log2(4/ε)⌉ = j + 2 and ⌊1/ε⌋ = 2^j, all
/// in integers.
fn a1() -> Outcome {
    let mut cases = 0;
    for j in 2u32..=5 {
        let eps = 2f64.powi(-(j as i32));
        for n in [4usize, 8] {
            let cover = HilbertCover::new(eps, n).map_err(|e| e.to_string())?;
            let rep = cover.verify(Threshold::EXACT);
            ensure(rep.valid(), || format!("cover certificate invalid at ε=2^-{j}, n={n}: {rep:?}"))?;
            let blocks = BigUint::from(1 + 12 * (1u64 << j)).pow(n as u32 + 2 * (j + 2) + 1);
            ensure(rep.block_count == blocks, || format!("block count at ε=2^-{j}, n={n}"))?;

            let grid = HilbertGrid::new(eps, n).map_err(|e| e.to_string())?.verify(Threshold::EXACT);
            ensure(grid.valid(), || format!("grid certificate invalid at ε=2^-{j}, n={n}"))?;
            let members = BigUint::from(1 + (1u64 << j)).pow(n as u32);
            ensure(grid.member_count == members, || format!("member count at ε=2^-{j}, n={n}"))?;

            let lower = n as f64 * ((1 + (1u64 << j)) as f64).ln();
            let prof = hilbert_profile(eps, &[n]).map_err(|e| e.to_string())?;
            for row in prof.rows.iter().filter(|r| r.bound != BoundType::Lower) {
                ensure(lower <= row.log_count, || format!("separated bound exceeds log-count at ε=2^-{j}, n={n}"))?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} (ε, n) cases, certificates exact"))
}

// A2 -----------------------------------------------------------------------

/// `R(D) = min_q max_{β≥0} [−βD − Σ_x p(x) ln Σ_y q(y) e^{−βρ(x,y)}]` over a
/// refined simplex grid of `q`, inner maximization by ternary search in
/// `ln β`.
fn dual_q_grid(prob: &RdProblem, d: f64) -> f64 {
    let p = prob.source.probs().to_vec();
    let ny = prob.distortion.cols();
    let inner = |q: &[f64]| -> f64 {
        let f = |beta: f64| -> f64 {
            let mut s = -beta * d;
            for (x, &px) in p.iter().enumerate() {
                if px > 0.0 {
                    let terms: Vec<f64> = (0..ny)
                        .filter(|&y| q[y] > 0.0)
                        .map(|y| q[y].ln() - beta * prob.distortion.get(x, y))
                        .collect();
                    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    s -= px * (m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln());
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
                let v = inner(&[a, b, (1.0 - a - b).max(0.0)]);
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

fn a2() -> Outcome {
    let opts = SolverOptions::default();
    let err = |e: mdim_core::Error| e.to_string();
    let bin = RdProblem::new(Distribution::uniform(2), DistortionMatrix::hamming(2)).map_err(err)?;
    let mut worst_closed = 0.0f64;
    for d in [0.05, 0.1, 0.2, 0.3] {
        let pt = blahut_arimoto(&bin, RdTarget::Distortion(d), &opts).map_err(err)?;
        let exact = std::f64::consts::LN_2 - binary_entropy(d).map_err(err)?;
        worst_closed = worst_closed.max((pt.rate - exact).abs());
    }
    ensure(worst_closed <= 1e-6, || format!("closed form off by {worst_closed:e}"))?;

    let mut worst_grid = 0.0f64;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: Vec<f64> = (0..3).map(|_| rng.gen_range(0.05..1.0)).collect();
        let dm: Vec<f64> = (0..9).map(|_| rng.gen_range(0.0..1.0)).collect();
        let prob = RdProblem::new(
            Distribution::from_weights(&w).map_err(err)?,
            DistortionMatrix::new(3, 3, dm).map_err(err)?,
        )
        .map_err(err)?;
        let lo = prob.min_distortion();
        let (hi, _) = prob.zero_rate_distortion();
        let d = lo + rng.gen_range(0.1..0.9) * (hi - lo);
        let pt = blahut_arimoto(&prob, RdTarget::Distortion(d), &opts).map_err(err)?;
        let gap = (pt.rate - dual_q_grid(&prob, d)).abs();
        ensure(gap <= 1e-3, || format!("seed {seed}: off the grid oracle by {gap:e}"))?;
        worst_grid = worst_grid.max(gap);
    }
    Ok(format!(
        "closed form max error {worst_closed:.2e}, 100 random 3×3 max error {worst_grid:.2e}"
    ))
}

// A3 -----------------------------------------------------------------------

fn a3() -> Outcome {
    // ε = 1/q exactly, so every floor below is an integer division.
    let qs = [10u64, 20, 50, 100];
    let d_grid = [2u64, 3, 4, 6, 10];
    let opts = SolverOptions {
        tol: 1e-4,
        ..SolverOptions::default()
    };
    let df: Vec<f64> = d_grid.iter().map(|&d| d as f64).collect();
    let mut ratios = Vec::new();
    for &q in &qs {
        let eps = 1.0 / q as f64;
        let r = r_epsilon_uniform(eps, 400, &df, &opts).map_err(|e| e.to_string())?;
        // (1 − Dε) ln(1/(Dε)) − ln(1 + ⌊1/(Dε)⌋)/D − ln 3.
        let lower = d_grid
            .iter()
            .map(|&d| {
                let de = d as f64 / q as f64;
                (1.0 - de) * (1.0 / de).ln() - ((1 + q / d) as f64).ln() / d as f64 - 3f64.ln()
            })
            .fold(0.0f64, f64::max);
        let upper = ((1 + q / 2) as f64).ln();
        ensure(lower <= r.solver_lower && r.rate <= upper, || {
            format!("ε = 1/{q}: [{}, {}] outside [{lower}, {upper}]", r.solver_lower, r.rate)
        })?;
        ratios.push(r.rate / (q as f64).ln());
    }
    ensure(ratios.windows(2).all(|w| w[1] > w[0]), || format!("ratios not increasing: {ratios:?}"))?;
    let last = *ratios.last().unwrap();
    ensure(last >= 0.55, || format!("ratio at ε = 0.01 is {last}"))?;
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
    Ok(format!("sandwich holds, ratios {}", shown.join(" < ")))
}

// A4 -----------------------------------------------------------------------

fn a4() -> Outcome {
    let mut parts = Vec::new();
    for c in info_checks::Check::ALL {
        let s = info_checks::run_check(c, 0, 1000).map_err(|e| e.to_string())?;
        ensure(s.instances == 1000 && s.min_slack >= -1e-10 && s.failures == 0, || {
            format!("{}: {} failures, min slack {:e} at seed {}", c.key(), s.failures, s.min_slack, s.worst_seed)
        })?;
        parts.push(format!("{} {:.1e}", c.key(), s.min_slack));
    }
    Ok(format!("1000 instances each, min slacks: {}", parts.join(", ")))
}

// A5 -----------------------------------------------------------------------

fn a5() -> Outcome {
    let search = SearchOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut min_slack = f64::INFINITY;
    for inst in 0..300 {
        let k = rng.gen_range(2..=12);
        let pts: Vec<(f64, f64)> = (0..k).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
        let space = FiniteMetricSpace::from_symmetric_fn(k, |i, j| (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1));
        let mut perm: Vec<usize> = (0..k).collect();
        for i in (1..k).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let sys = FiniteMap::new(perm, space).map_err(|e| e.to_string())?;
        let eps = rng.gen_range(0.01..0.2);
        for l in [2u32, 4] {
            for n in [2usize, 3] {
                let r = lemma33_check(&sys, eps, l, n, &search).map_err(|e| e.to_string())?;
                ensure(r.holds && r.slack >= 0.0, || format!("instance {inst}, L={l}, n={n}: {r:?}"))?;
                min_slack = min_slack.min(r.slack);
            }
        }
    }
    Ok(format!("300 systems × 4 (L, n), min slack {min_slack:.4}"))
}

// A6 -----------------------------------------------------------------------

fn a6_system<S: System>(sys: &S, label: &str, cells: &[(Family, f64)]) -> Result<usize, String> {
    let states = enumerate_or_sample_orbit_space(sys, 1, OrbitScheme::Exhaustive, &OrbitKind::Max, 4096)
        .map_err(|e| e.to_string())?
        .states;
    let mu = WeightedStates::uniform(states.clone()).map_err(|e| e.to_string())?;
    let dict = Dictionary::CoverRepresentatives {
        states,
        mode: Mode::Exact,
    };
    let opts = EstimateOptions {
        search: SearchOptions::with_exact_limit(128),
        ..EstimateOptions::default()
    };
    let mut rows = 0;
    for &(family, level) in cells {
        let t = estimate_rate(sys, &mu, family, level, &[1, 2, 3], &dict, &opts).map_err(|e| e.to_string())?;
        for row in &t.rows {
            let cb = row.codebook.as_ref().ok_or_else(|| format!("{label}: no codebook at n={}", row.n))?;
            let count = row.cover_count.ok_or_else(|| format!("{label}: no cover at n={}", row.n))?;
            ensure(cb.codebook_size == count as u64 && cb.within_log_size, || {
                format!("{label} {family:?} n={}: codebook rate exceeds (1/n) ln {count}", row.n)
            })?;
            rows += 1;
        }
    }
    Ok(rows)
}

fn a6() -> Outcome {
    let cells = [
        (Family::average(), 0.3),
        (Family::average(), 0.6),
        (Family::Counting { eps: 0.6 }, 0.2),
    ];
    let mut rows = 0;
    for (lo, hi) in [(-1, 1), (-2, 2)] {
        let sys = GridShift::binary(lo, hi).map_err(|e| e.to_string())?;
        rows += a6_system(&sys, &format!("binary shift [{lo},{hi}]"), &cells)?;
    }
    let id = IdentityGrid::new(0.05).map_err(|e| e.to_string())?;
    rows += a6_system(&id, "identity", &[(Family::average(), 0.3), (Family::Counting { eps: 0.3 }, 0.2)])?;
    Ok(format!("{rows} (system, family, n) rows, integer comparisons"))
}

// A7 -----------------------------------------------------------------------

fn a7() -> Outcome {
    let mut min_slack = f64::INFINITY;
    let mut max_row = 0.0f64;
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..4)
            .map(|_| {
                let w: Vec<f64> = (0..4).map(|_| rng.gen::<f64>()).collect();
                let s: f64 = w.iter().sum();
                w.iter().map(|v| v / s).collect()
            })
            .collect();
        let tau = Channel::from_rows(&rows).map_err(|e| e.to_string())?;
        let k = rng.gen_range(1..=6);
        let sources: Vec<(Vec<usize>, f64)> = (0..k)
            .map(|_| ((0..6).map(|_| rng.gen_range(0..2)).collect(), rng.gen_range(0.1..1.0)))
            .collect();
        let rep = chain_check(&tau, 2, 2, 5, rng.gen_range(0..2), &sources).map_err(|e| e.to_string())?;
        ensure(rep.max_row_error <= 1e-12 && rep.slack() >= -1e-9, || format!("seed {seed}: {rep:?}"))?;
        min_slack = min_slack.min(rep.slack());
        max_row = max_row.max(rep.max_row_error);
    }
    Ok(format!("200 instances, max row error {max_row:.1e}, min slack {min_slack:.2e}"))
}

// A8 -----------------------------------------------------------------------

fn rational_pmf(rng: &mut ChaCha8Rng, k: usize) -> Vec<BigRational> {
    let w: Vec<i64> = (0..k).map(|_| rng.gen_range(0..1000)).collect();
    let s = w.iter().sum::<i64>();
    if s == 0 {
        let mut v = vec![BigRational::zero(); k];
        v[0] = BigRational::from_integer(BigInt::from(1));
        return v;
    }
    w.iter().map(|&x| BigRational::new(BigInt::from(x), BigInt::from(s))).collect()
}

fn float_pmf(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|v| v / s).collect()
}

fn a8() -> Outcome {
    let err = |e: mdim_core::Error| e.to_string();
    // Greedy marginals in rational arithmetic.
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..10);
        let (a, b) = (rational_pmf(&mut rng, k), rational_pmf(&mut rng, k));
        let g = greedy_cyclic_coupling(&a, &b, None).map_err(err)?;
        for x in 0..k {
            let row = (0..k).fold(BigRational::zero(), |s, y| s + g.get(x, y));
            let col = (0..k).fold(BigRational::zero(), |s, y| s + g.get(y, x));
            ensure(row == a[x] && col == b[x], || format!("seed {seed}: greedy marginal mismatch"))?;
        }
    }
    // Metric axioms of W on random triples.
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let k = rng.gen_range(2..9);
        let pts: Vec<(f64, f64)> = (0..k).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
        let space = FiniteMetricSpace::from_symmetric_fn(k, |i, j| (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1));
        let m: Vec<Vec<f64>> = (0..3).map(|_| float_pmf(&mut rng, k)).collect();
        let w = |i: usize, j: usize| wasserstein1(&m[i], &m[j], &space).map(|s| s.cost).map_err(err);
        let tol = 1e-10;
        ensure(w(0, 0)?.abs() <= tol, || format!("seed {seed}: W(μ, μ) ≠ 0"))?;
        ensure((w(0, 1)? - w(1, 0)?).abs() <= tol, || format!("seed {seed}: W not symmetric"))?;
        ensure(w(0, 2)? <= w(0, 1)? + w(1, 2)? + tol, || format!("seed {seed}: triangle inequality"))?;
        ensure(w(0, 1)? > 0.0, || format!("seed {seed}: W vanishes on distinct measures"))?;
    }
    // Entrywise bound on optimal plans, recomputed from the plan.
    let mut min_slack = f64::INFINITY;
    for seed in 0..200u64 {
        let (row, plan, space) = transport_demo::instance_row(seed, 6).map_err(|e| e.to_string())?;
        for a in 0..6 {
            for b in (0..6).filter(|&b| b != a) {
                let s = row.w1 / space.dist(a, b) + 1e-12 - plan.get(a, b);
                min_slack = min_slack.min(s);
                ensure(s >= 0.0, || format!("seed {seed}: π({a},{b}) above W/d"))?;
            }
        }
    }
    // W(μ_k, μ) = 2^{−k} W(ν, μ) by linearity of the dual in the first measure.
    for seed in 0..20u64 {
        let inst = transport_demo::random_instance(seed, 6);
        let f = |v: &[i64]| -> Vec<f64> { v.iter().map(|&u| u as f64 / transport_demo::UNITS as f64).collect() };
        let base = wasserstein1(&f(&inst.nu), &f(&inst.mu), &inst.space).map_err(err)?.cost;
        let steps = transport_demo::convergence(seed, 6).map_err(|e| e.to_string())?;
        ensure(steps.len() == 10, || "expected k = 1..=10".into())?;
        for (i, s) in steps.iter().enumerate() {
            let expect = base * 2f64.powi(-(s.k as i32));
            ensure((s.w1 - expect).abs() <= 1e-9, || format!("seed {seed}, k={}: {} vs {expect}", s.k, s.w1))?;
            if i > 0 {
                ensure(s.w1 <= steps[i - 1].w1 + 1e-12, || format!("seed {seed}: not monotone at k={}", s.k))?;
            }
        }
    }
    Ok(format!(
        "greedy exact over 200 rational seeds, axioms on 200 triples, entrywise min slack {min_slack:.2e}, W(μ_k, μ) halves through k = 10"
    ))
}

// A9 -----------------------------------------------------------------------

fn a9() -> Outcome {
    let opts = CounterexampleOptions::default();
    ensure(opts.cap == 4096 && opts.levels.iter().all(|&l| l <= 10) && opts.samples == 1000, || {
        "default options drifted from cap 4096, levels ≤ 10, 1000 samples".into()
    })?;
    let rep = counterexample_report(&opts).map_err(|e| e.to_string())?;
    for t in &rep.triples {
        ensure(t.worst < t.epsilon / 2.0 && t.sampled < t.epsilon / 2.0, || format!("triple failed: {t:?}"))?;
    }
    ensure(rep.triples.iter().any(|t| t.passed), || "no hypothesis-satisfying triple in the grid".into())?;
    for s in &rep.separation {
        ensure(s.min_distance >= 1.0 / s.level as f64, || format!("separation failed: {s:?}"))?;
    }
    ensure(rep.passed(), || "report flags a failure".into())?;
    Ok(format!(
        "{} triples tested, {} skipped, {} separation rows",
        rep.triples.len(),
        rep.skipped.len(),
        rep.separation.len()
    ))
}

// A10 ----------------------------------------------------------------------

const A10_CONFIG: &str = r#"{"experiments": [
  {"experiment": "covering", "system": {"key": "binary-shift"}, "epsilons": [0.5, 0.25], "n": [1, 2]},
  {"experiment": "mdim-profile", "system": {"key": "binary-shift", "window": [-1, 1]}, "epsilons": [0.5, 0.25, 0.125], "n": [1, 2]},
  {"experiment": "rdf", "system": {"key": "binary-shift"}, "epsilons": [0.3], "alphas": [0.2], "n": [1, 2]},
  {"experiment": "info-checks", "params": {"instances": 50}, "seed": 7},
  {"experiment": "transport-demo", "params": {"instances": 5}},
  {"experiment": "counterexample"}
]}"#;

fn tree(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| {
            let p = e.map_err(|e| e.to_string())?.path();
            let bytes = std::fs::read(&p).map_err(|e| e.to_string())?;
            Ok((p.file_name().unwrap().to_string_lossy().into_owned(), bytes))
        })
        .collect::<Result<_, String>>()?;
    files.sort();
    Ok(files)
}

fn a10() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut trees = Vec::new();
    for (i, threads) in [1usize, 2].into_iter().enumerate() {
        let out = tmp.path().join(format!("run{i}"));
        let configs = parse_configs(A10_CONFIG).map_err(|e| e.to_string())?;
        let opts = RunOptions {
            out: out.clone(),
            threads: Some(threads),
            seed: Some(11),
            ..RunOptions::default()
        };
        let m = run(configs, &opts).map_err(|e| e.to_string())?;
        ensure(m.exit_code == 0, || format!("run {i} exited {}", m.exit_code))?;
        trees.push(tree(&out)?);
    }
    ensure(trees[0] == trees[1], || "outputs differ between runs".into())?;
    let csvs = trees[0].iter().filter(|(n, _)| n.ends_with(".csv")).count();
    Ok(format!("manifest and {csvs} CSV files byte-identical across runs on 1 and 2 threads"))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 10] = [
        ("A1", "Hilbert-cube sandwich", a1),
        ("A2", "Blahut–Arimoto correctness", a2),
        ("A3", "scalar r(ε)", a3),
        ("A4", "information inequalities", a4),
        ("A5", "d_n against d̄_n comparison", a5),
        ("A6", "chain inequalities", a6),
        ("A7", "block channels", a7),
        ("A8", "transport", a8),
        ("A9", "counterexample report", a9),
        ("A10", "reproducibility", a10),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| a.starts_with('A')).collect();
    let mut failed = 0;
    for (id, title, f) in criteria {
        if !only.is_empty() && !only.iter().any(|o| o == id) {
            continue;
        }
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("{id:<4} PASS  {title}: {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("{id:<4} FAIL  {title}: {why} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
