use mdim_core::info::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LN2: f64 = std::f64::consts::LN_2;

fn random_pmf(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    // Some exact zeros, to exercise the 0 log 0 convention.
    let w: Vec<f64> = (0..k)
        .map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen::<f64>() })
        .collect();
    let s: f64 = w.iter().sum();
    if s == 0.0 {
        let mut v = vec![0.0; k];
        v[0] = 1.0;
        return v;
    }
    w.iter().map(|v| v / s).collect()
}

fn random_joint(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> Joint {
    Joint::new(nx, ny, random_pmf(rng, nx * ny)).unwrap()
}

fn random_channel(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> Channel {
    let rows: Vec<Vec<f64>> = (0..nx).map(|_| random_pmf(rng, ny)).collect();
    Channel::from_rows(&rows).unwrap()
}

/// H(X) + H(Y) − H(X,Y), the other route to mutual information.
fn mi_oracle(j: &Joint) -> f64 {
    entropy_of(&j.marginal_x()) + entropy_of(&j.marginal_y()) - joint_entropy(j)
}

#[test]
fn entropy_examples() {
    assert_eq!(entropy(&Distribution::point(3, 1)), 0.0);
    assert!((entropy(&Distribution::uniform(4)) - 4f64.ln()).abs() < 1e-15);
    let h = entropy(&Distribution::new(vec![0.25, 0.75]).unwrap());
    assert!((h - 0.562335144618).abs() < 1e-12);
    assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
    assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
    assert!((binary_entropy(0.5).unwrap() - LN2).abs() < 1e-15);
    assert!((binary_entropy(0.25).unwrap() - 0.562335144618).abs() < 1e-12);
    assert!(binary_entropy(1.5).is_err());
    assert!(Distribution::new(vec![0.5, 0.6]).is_err());
}

#[test]
fn mutual_information_examples() {
    let mu = Distribution::new(vec![0.3, 0.7]).unwrap();
    let nu = Distribution::new(vec![0.1, 0.2, 0.7]).unwrap();
    assert!(mutual_information(&Joint::product(&mu, &nu)).abs() < 1e-15);
    for k in [1, 2, 5, 16] {
        let j = Joint::from_source_channel(&Distribution::uniform(k), &Channel::identity(k)).unwrap();
        assert!((mutual_information(&j) - (k as f64).ln()).abs() < 1e-12);
    }
    let bsc = Channel::from_rows(&[vec![0.75, 0.25], vec![0.25, 0.75]]).unwrap();
    let i = mutual_information_of(&Distribution::uniform(2), &bsc).unwrap();
    assert!((i - 0.130812035941).abs() < 1e-11);
}

#[test]
fn mutual_information_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let nx = rng.gen_range(1..=16);
        let ny = rng.gen_range(1..=16);
        let j = random_joint(&mut rng, nx, ny);
        let i = mutual_information(&j);
        assert!(i >= -1e-12);
        assert!((i - mi_oracle(&j)).abs() < 1e-12);
        assert!((i - mutual_information(&j.transpose())).abs() < 1e-12);
        let hx = entropy_of(&j.marginal_x());
        let hy = entropy_of(&j.marginal_y());
        assert!(i <= hx.min(hy) + 1e-12);
        // The discrete partition attains the partition value.
        let p = partition_mutual_information(&j, &PartitionMap::identity(nx), &PartitionMap::identity(ny)).unwrap();
        assert!((p - i).abs() < 1e-12);
    }
}

#[test]
fn partition_refinement_chain_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..300 {
        let j = random_joint(&mut rng, 8, 8);
        // Dyadic chain: cells of size 8, 4, 2, 1 on both sides.
        let mut prev = -1.0;
        for shift in (0..=3).rev() {
            let cells: Vec<usize> = (0..8).map(|i| i >> shift).collect();
            let q = PartitionMap::from_cells(&cells);
            let v = partition_mutual_information(&j, &q, &q).unwrap();
            assert!(v >= prev - 1e-12);
            prev = v;
        }
        assert!((prev - mutual_information(&j)).abs() < 1e-12);
    }
}

#[test]
fn continuity_under_entrywise_convergence() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let j = random_joint(&mut rng, 4, 5);
        let other = random_joint(&mut rng, 4, 5);
        let target = mutual_information(&j);
        let mut prev = f64::INFINITY;
        for k in 1..=30 {
            let t = 0.5f64.powi(k);
            let p: Vec<f64> = j.probs().iter().zip(other.probs()).map(|(a, b)| (1.0 - t) * a + t * b).collect();
            let gap = (mutual_information(&Joint::new(4, 5, p).unwrap()) - target).abs();
            if k >= 10 {
                assert!(gap <= prev.max(1e-12) * 1.0001 + 1e-14, "k={k} gap={gap} prev={prev}");
            }
            prev = gap;
        }
        assert!(prev < 1e-7);
    }
}

#[test]
fn fano_examples_and_property() {
    let j = Joint::from_source_channel(&Distribution::uniform(4), &Channel::identity(4)).unwrap();
    let r = fano_gap(&j, &[0, 1, 2, 3]).unwrap();
    assert_eq!(r.p_error, 0.0);
    assert!(r.h_x_given_y.abs() < 1e-12 && r.slack.abs() < 1e-12);
    for k in 2..6 {
        let j = Joint::product(&Distribution::uniform(k), &Distribution::uniform(3));
        let r = fano_gap(&j, &[0, 1 % k, 0]).unwrap();
        assert!((r.h_x_given_y - (k as f64).ln()).abs() < 1e-12);
        assert!(r.holds());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let j = random_joint(&mut rng, 4, 4);
        let dec: Vec<usize> = (0..4).map(|_| rng.gen_range(0..4)).collect();
        assert!(fano_gap(&j, &dec).unwrap().slack >= -1e-12);
    }
}

#[test]
fn separated_bound_examples() {
    let b = separated_mi_lower_bounds(1.0, 4.0, 3, 0.25, 2.0).unwrap();
    assert!((b.average + binary_entropy(0.25).unwrap()).abs() < 1e-15);
    let b = separated_mi_lower_bounds(10f64.exp(), 1e6, 1, 0.5, 2.0).unwrap();
    assert!((b.average - 10.0).abs() < 1e-4);
    let b = separated_mi_lower_bounds(32.0, 4.0, 1, 0.5, 2.0).unwrap();
    assert!((b.average - (0.75 * 32f64.ln() - binary_entropy(0.25).unwrap())).abs() < 1e-15);
    assert!((b.average - 2.037).abs() < 1e-3);
    assert!(separated_mi_lower_bounds(32.0, 2.0, 1, 0.5, 2.0).is_err());
    assert!(separated_mi_lower_bounds(32.0, 3.0, 1, 0.6, 2.0).is_err());
}

#[test]
fn quantize_examples_and_dpi() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let j = random_joint(&mut rng, 3, 4);
    assert_eq!(quantize_y(&j, &PartitionMap::identity(4)).unwrap(), j);
    let c = quantize_y(&j, &PartitionMap::constant(4, 2).unwrap()).unwrap();
    assert!(mutual_information(&c).abs() < 1e-15);
    for _ in 0..1000 {
        let ny = rng.gen_range(1..=8);
        let nx = rng.gen_range(1..=8);
        let j = random_joint(&mut rng, nx, ny);
        let cells: Vec<usize> = (0..ny).map(|_| rng.gen_range(0..ny)).collect();
        let q = PartitionMap::from_cells(&cells);
        let qj = quantize_y(&j, &q).unwrap();
        assert!(mutual_information(&qj) <= mutual_information(&j) + 1e-12);
    }
}

fn triple(nx: usize, ny: usize, nz: usize, f: impl Fn(usize, usize, usize) -> f64) -> Joint3 {
    let mut p = Vec::new();
    for x in 0..nx {
        for y in 0..ny {
            for z in 0..nz {
                p.push(f(x, y, z));
            }
        }
    }
    Joint3::new(nx, ny, nz, p).unwrap()
}

#[test]
fn additivity_examples() {
    // X, Z iid uniform bits and Y = (X, Z) encoded as 2x + z.
    let j = triple(2, 4, 2, |x, y, z| if y == 2 * x + z { 0.25 } else { 0.0 });
    let r = additivity_checks(&j);
    assert!(r.cond_indep_given_y && r.indep_xz);
    assert!((r.i_y_xz - 2.0 * LN2).abs() < 1e-12);
    assert!(r.sub_slack.abs() < 1e-12 && r.super_slack.abs() < 1e-12);
    // X = Y = Z uniform bit.
    let j = triple(2, 2, 2, |x, y, z| if x == y && y == z { 0.5 } else { 0.0 });
    let r = additivity_checks(&j);
    assert!(r.cond_indep_given_y && !r.indep_xz);
    assert!((r.i_y_xz - LN2).abs() < 1e-12 && (r.sub_slack - LN2).abs() < 1e-12);
    assert!(r.holds());
}

#[test]
fn additivity_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..500 {
        let (nx, ny, nz) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4));
        // Markov chain X − Y − Z.
        let py = random_pmf(&mut rng, ny);
        let cx = random_channel(&mut rng, ny, nx);
        let cz = random_channel(&mut rng, ny, nz);
        let j = triple(nx, ny, nz, |x, y, z| py[y] * cx.get(y, x) * cz.get(y, z));
        let r = additivity_checks(&j);
        assert!(r.cond_indep_given_y);
        assert!(r.sub_slack >= -1e-10, "{r:?}");
        // X ⊥ Z with Y an arbitrary function of both plus noise.
        let px = random_pmf(&mut rng, nx);
        let pz = random_pmf(&mut rng, nz);
        let cy = random_channel(&mut rng, nx * nz, ny);
        let j = triple(nx, ny, nz, |x, y, z| px[x] * pz[z] * cy.get(x * nz + z, y));
        let r = additivity_checks(&j);
        assert!(r.indep_xz);
        assert!(r.super_slack >= -1e-10, "{r:?}");
    }
}

#[test]
fn mixture_examples_and_properties() {
    let ts = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mu = Distribution::new(random_pmf(&mut rng, 3)).unwrap();
    let ch = random_channel(&mut rng, 3, 3);
    for row in concavity_in_source(&mu, &mu, &ch, &ts).unwrap() {
        assert!(row.slack.abs() < 1e-12);
    }
    for row in convexity_in_channel(&mu, &ch, &ch, &ts).unwrap() {
        assert!(row.slack.abs() < 1e-12);
    }
    for _ in 0..500 {
        let mu1 = Distribution::new(random_pmf(&mut rng, 3)).unwrap();
        let mu2 = Distribution::new(random_pmf(&mut rng, 3)).unwrap();
        let c1 = random_channel(&mut rng, 3, 3);
        let c2 = random_channel(&mut rng, 3, 3);
        for row in concavity_in_source(&mu1, &mu2, &c1, &ts).unwrap() {
            assert!(row.slack >= -1e-10);
        }
        for row in convexity_in_channel(&mu1, &c1, &c2, &ts).unwrap() {
            assert!(row.slack >= -1e-10);
        }
    }
}

#[test]
fn error_set_entropy_bound() {
    // Random subset variables Z ⊂ [0,n) with E|Z| < αn ≤ n/2.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let n = rng.gen_range(1..=10usize);
        let mut p = random_pmf(&mut rng, 1 << n);
        let mean: f64 = p.iter().enumerate().map(|(s, v)| v * (s as u32).count_ones() as f64).sum();
        // Pull mass onto the empty set until E|Z| sits below n/2.
        let target = rng.gen_range(0.0..0.5) * n as f64;
        if mean > target {
            let t = target / mean;
            for v in p.iter_mut() {
                *v *= t;
            }
            p[0] += 1.0 - t;
        }
        let mean: f64 = p.iter().enumerate().map(|(s, v)| v * (s as u32).count_ones() as f64).sum();
        let alpha = (mean / n as f64 + 1e-9).min(0.5).max(1e-9);
        assert!(entropy_of(&p) <= n as f64 * binary_entropy(alpha).unwrap() + 1e-10);
    }
}
