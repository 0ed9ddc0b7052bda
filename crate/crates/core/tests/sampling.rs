//! Distributional checks: the uniform tree sampler against exhaustive
//! enumeration, agreement with rejection-sampled conditioned Galton-Watson
//! trees, Monte Carlo window laws against exact enumeration laws, and the
//! root/two-level laws of the size-biased tree.

use std::collections::HashMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use patperm::experiment::{exact_prefix_law, sample_prefix_law};
use patperm::offspring::{geometric_half_pmf, size_biased_pmf, OffspringDistribution};
use patperm::sampler::{enumerate_trees, sample_gw, sample_uniform_tree, GwDraw};
use patperm::spine::SpineTree;
use patperm::tree::OrderedTree;
use patperm::{Pattern, SeededRng};

fn chi_square_critical(df: usize, significance: f64) -> f64 {
    ChiSquared::new(df as f64)
        .unwrap()
        .inverse_cdf(1.0 - significance)
}

/// Pearson statistic of observed counts against expected probabilities;
/// cells with expected count below 5 are pooled.
fn goodness_of_fit(observed: &[u64], expected_probs: &[f64], total: u64) -> (f64, usize) {
    assert_eq!(observed.len(), expected_probs.len());
    let mut stat = 0.0;
    let mut cells = 0usize;
    let mut pooled_obs = 0.0;
    let mut pooled_exp = 0.0;
    for (&o, &p) in observed.iter().zip(expected_probs) {
        let e = p * total as f64;
        if e < 5.0 {
            pooled_obs += o as f64;
            pooled_exp += e;
            continue;
        }
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    if pooled_exp > 0.0 {
        stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
        cells += 1;
    }
    (stat, cells.saturating_sub(1))
}

#[test]
fn uniform_sampler_matches_enumeration() {
    // goodness of fit against the uniform law on trees of each size
    let mut rng = SeededRng::new(101);
    for size in 2..=6usize {
        let trees = enumerate_trees(size).unwrap();
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        for (i, t) in trees.iter().enumerate() {
            index.insert(t.preorder_degrees(), i);
        }
        let samples: u64 = 1_000_000;
        let mut observed = vec![0u64; trees.len()];
        for _ in 0..samples {
            let t = sample_uniform_tree(size, &mut rng);
            observed[index[&t.preorder_degrees()]] += 1;
        }
        let probs = vec![1.0 / trees.len() as f64; trees.len()];
        let (stat, df) = goodness_of_fit(&observed, &probs, samples);
        if df == 0 {
            // a single tree of this size; the sampler can only produce it
            assert_eq!(observed[0], samples);
            continue;
        }
        let crit = chi_square_critical(df, 0.01);
        assert!(
            stat < crit,
            "size {size}: chi2 {stat:.2} >= {crit:.2} (df {df})"
        );
    }
}

#[test]
fn uniform_sampler_agrees_with_conditioned_gw() {
    // two-sample chi-square on size 5: direct sampler vs rejection sampling
    // of the Geometric(1/2) tree conditioned on its size
    let trees = enumerate_trees(5).unwrap();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    for (i, t) in trees.iter().enumerate() {
        index.insert(t.preorder_degrees(), i);
    }
    let n: u64 = 100_000;
    let xi = OffspringDistribution::geometric_half();

    let mut rng = SeededRng::new(102);
    let mut direct = vec![0u64; trees.len()];
    for _ in 0..n {
        let t = sample_uniform_tree(5, &mut rng);
        direct[index[&t.preorder_degrees()]] += 1;
    }

    let mut rng = SeededRng::new(103);
    let mut rejected = vec![0u64; trees.len()];
    let mut accepted = 0u64;
    while accepted < n {
        if let GwDraw::Tree(t) = sample_gw(&xi, &mut rng, 64) {
            if t.len() == 5 {
                rejected[index[&t.preorder_degrees()]] += 1;
                accepted += 1;
            }
        }
    }

    let mut stat = 0.0;
    for i in 0..trees.len() {
        let pooled = (direct[i] + rejected[i]) as f64 / (2 * n) as f64;
        for counts in [&direct, &rejected] {
            let e = pooled * n as f64;
            stat += (counts[i] as f64 - e).powi(2) / e;
        }
    }
    let crit = chi_square_critical(trees.len() - 1, 0.01);
    assert!(stat < crit, "two-sample chi2 {stat:.2} >= {crit:.2}");
}

#[test]
fn sampled_window_law_matches_exact_enumeration_law() {
    // Monte Carlo law of the first two image values at n = 8 vs the law
    // computed from exhaustive enumeration
    let n = 8;
    let k = 2;
    let cap = 50;
    let count = 1_000_000u64;
    let exact = exact_prefix_law(Pattern::P231, n, k, cap).unwrap();
    let sampled = sample_prefix_law(Pattern::P231, n, count, k, cap, 104).unwrap();
    assert_eq!(sampled.total(), count);

    let keys: Vec<_> = exact.counts().keys().cloned().collect();
    let mut observed: Vec<u64> = Vec::new();
    let mut probs: Vec<f64> = Vec::new();
    let mut covered = 0u64;
    for key in &keys {
        observed.push(*sampled.counts().get(key).unwrap_or(&0));
        probs.push(exact.frequency(key));
        covered += sampled.counts().get(key).unwrap_or(&0);
    }
    // every sampled window must be a window of some enumerated tree
    assert_eq!(covered, count);
    let (stat, df) = goodness_of_fit(&observed, &probs, count);
    let crit = chi_square_critical(df, 0.01);
    assert!(stat < crit, "chi2 {stat:.2} >= {crit:.2} (df {df})");
}

#[test]
fn spine_root_degree_follows_size_biased_law() {
    // empirical law of the root degree over 1e5 seeds, chi-square at 0.01
    let xi = OffspringDistribution::geometric_half();
    let trials = 100_000u64;
    let max_k = 12usize;
    let mut observed = vec![0u64; max_k + 1]; // index 0 pools k > 12
    let mut completed = 0u64;
    for seed in 0..trials {
        let mut t = SpineTree::geometric_half(seed);
        if t.extend().is_err() {
            continue;
        }
        completed += 1;
        let k = t.step(0).unwrap().offspring() as usize;
        if k <= max_k {
            observed[k] += 1;
        } else {
            observed[0] += 1;
        }
        // the height-1 truncation is the star with the root's children
        if seed < 100 {
            let star = t.truncate_spine(1).unwrap();
            assert_eq!(star.len() as u32, 1 + star.root_degree());
            assert_eq!(star.root_degree() as usize, k);
        }
    }
    assert!(completed as f64 > 0.99 * trials as f64);
    let mut probs = vec![0.0; max_k + 1];
    for k in 1..=max_k {
        probs[k] = size_biased_pmf(&xi, k as u32).unwrap();
    }
    probs[0] = 1.0 - probs.iter().sum::<f64>();
    let (stat, df) = goodness_of_fit(&observed, &probs, completed);
    let crit = chi_square_critical(df, 0.01);
    assert!(stat < crit, "chi2 {stat:.2} >= {crit:.2} (df {df})");
}

#[test]
fn spine_two_level_law_matches_exact_formula() {
    // P(two-level truncation = t0) = (#vertices at height 2 in t0) * P(GW
    // truncation = t0), the latter a product of offspring probabilities over
    // the vertices of height <= 1
    let trials = 100_000u64;
    let targets = [
        // path of length 2: 1/16
        (OrderedTree::from_json_str("[[[]]]").unwrap(), 1.0 / 16.0),
        // root with (leaf-child, leaf): 1/64
        (OrderedTree::from_json_str("[[[]],[]]").unwrap(), 1.0 / 64.0),
        // root with one child having two leaf children: 2/32
        (OrderedTree::from_json_str("[[[],[]]]").unwrap(), 1.0 / 16.0),
    ];
    for (t0, p) in &targets {
        // cross-check the closed form against the product formula
        let count2 = t0.count_at_height(2) as f64;
        let product: f64 = t0
            .vertex_order()
            .iter()
            .filter(|v| v.height() <= 1)
            .map(|v| geometric_half_pmf(t0.child_count(v).unwrap()))
            .product();
        assert!((count2 * product - p).abs() < 1e-12);
    }
    let mut hits = vec![0u64; targets.len()];
    let mut completed = 0u64;
    for seed in 0..trials {
        let mut t = SpineTree::geometric_half(1_000_000 + seed);
        match t.truncate_spine(2) {
            Ok(cut) => {
                completed += 1;
                for (i, (t0, _)) in targets.iter().enumerate() {
                    if cut == *t0 {
                        hits[i] += 1;
                    }
                }
            }
            Err(_) => continue,
        }
    }
    assert!(completed as f64 > 0.99 * trials as f64);
    for ((_, p), &h) in targets.iter().zip(&hits) {
        let sigma = (completed as f64 * p * (1.0 - p)).sqrt();
        let expected = completed as f64 * p;
        assert!(
            (h as f64 - expected).abs() < 4.0 * sigma,
            "observed {h}, expected {expected:.1} +- {sigma:.1}"
        );
    }
}
