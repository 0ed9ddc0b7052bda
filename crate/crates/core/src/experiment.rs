//! Verification harness, Monte Carlo laws, and convergence experiments.
//!
//! Every sampling routine is deterministic given `(flags, seed)`: sample `i`
//! of a routine draws from ChaCha stream `base + i`, where `base` separates
//! the routines, so results do not depend on scheduling and evaluating
//! several patterns against shared samples changes nothing for any single
//! pattern.

use std::collections::BTreeMap;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::biject::{inverse_phi_321, phi};
use crate::error::{Error, Result};
use crate::extnat::ExtendedNat;
use crate::law::PrefixLaw;
use crate::pattern::{catalan, contains, enumerate_avoiders, Pattern};
use crate::perm::Permutation;
use crate::prefix::{phi_prefix, TreeStats};
use crate::rng::{SeededRng, RNG_ALGORITHM};
use crate::sampler::{enumerate_trees, sample_uniform_degrees};
use crate::spine::SpineTree;
use crate::tree::OrderedTree;

/// Default bucket cap for sampled laws.
pub const DEFAULT_BUCKET_CAP: u64 = 50;

/// Largest permutation length accepted by [`verify_bijections`].
pub const VERIFY_BOUND: usize = 9;

// Stream-id bases keeping the sampling routines on disjoint ChaCha streams.
const STREAM_SAMPLE: u64 = 0;
const STREAM_LIMIT: u64 = 1 << 40;
const STREAM_CONVERGE: u64 = 2 << 40; // row r uses (2 + r) << 40
const STREAM_TRUNC_UNIFORM: u64 = 1 << 50;
const STREAM_TRUNC_SPINE: u64 = 1 << 51;

/// Samples per rayon work item.
const CHUNK: u64 = 4096;

/// One named check of the verification suite.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyCheck {
    pub sigma: Pattern,
    pub n: usize,
    pub check: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Outcome of the exhaustive bijection verification.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "{} sigma={} n={} {}{}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.sigma,
                    c.n,
                    c.check,
                    if c.detail.is_empty() {
                        String::new()
                    } else {
                        format!(" ({})", c.detail)
                    }
                )
            })
            .collect()
    }
}

/// Exhaustively verifies the bijections for every pattern and every
/// permutation length up to `n_max <= 9`.
pub fn verify_bijections(n_max: usize) -> Result<VerifyReport> {
    verify_bijections_with(phi, n_max)
}

/// Same as [`verify_bijections`] but with an injectable map, so the harness
/// itself can be tested against deliberately corrupted bijections.
pub fn verify_bijections_with<F>(phi_fn: F, n_max: usize) -> Result<VerifyReport>
where
    F: Fn(Pattern, &OrderedTree) -> Result<Permutation>,
{
    if n_max == 0 || n_max > VERIFY_BOUND {
        return Err(Error::ExhaustionBound {
            requested: n_max,
            max: VERIFY_BOUND,
        });
    }
    let mut checks = Vec::new();
    for n in 1..=n_max {
        let trees = enumerate_trees(n + 1)?;
        for sigma in Pattern::ALL {
            let avoiders: std::collections::BTreeSet<Permutation> =
                enumerate_avoiders(n, sigma)?.into_iter().collect();
            let mut images = Vec::with_capacity(trees.len());
            for t in &trees {
                images.push(phi_fn(sigma, t)?);
            }

            let violations = images.iter().filter(|p| contains(p, sigma)).count();
            checks.push(VerifyCheck {
                sigma,
                n,
                check: "avoidance",
                pass: violations == 0,
                detail: if violations == 0 {
                    String::new()
                } else {
                    format!("{violations} images contain the pattern")
                },
            });

            let image_set: std::collections::BTreeSet<Permutation> =
                images.iter().cloned().collect();
            let injective = image_set.len() == images.len();
            let onto = image_set == avoiders;
            checks.push(VerifyCheck {
                sigma,
                n,
                check: "bijectivity",
                pass: injective && onto,
                detail: if injective && onto {
                    String::new()
                } else if !injective {
                    "images collide".to_string()
                } else {
                    "image set differs from the avoidance class".to_string()
                },
            });

            let expected = catalan(n);
            let catalan_ok =
                trees.len() as u64 == expected && avoiders.len() as u64 == expected;
            checks.push(VerifyCheck {
                sigma,
                n,
                check: "catalan-count",
                pass: catalan_ok,
                detail: format!(
                    "trees={} avoiders={} catalan={expected}",
                    trees.len(),
                    avoiders.len()
                ),
            });

            if sigma == Pattern::P321 {
                let mut failures = 0usize;
                for (t, img) in trees.iter().zip(&images) {
                    if inverse_phi_321(img).ok().as_ref() != Some(t) {
                        failures += 1;
                    }
                }
                checks.push(VerifyCheck {
                    sigma,
                    n,
                    check: "round-trip",
                    pass: failures == 0,
                    detail: if failures == 0 {
                        String::new()
                    } else {
                        format!("{failures} trees fail the round trip")
                    },
                });
            }
        }
    }
    Ok(VerifyReport { checks })
}

fn chunk_ranges(count: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < count {
        let end = (start + CHUNK).min(count);
        out.push((start, end));
        start = end;
    }
    out
}

/// Empirical bucketed laws of the first `k` image values of uniform random
/// permutations avoiding each pattern, all patterns sharing the same sampled
/// trees. Single-pattern results are unaffected by the sharing.
pub fn sample_prefix_laws(
    patterns: &[Pattern],
    n: usize,
    count: u64,
    k: usize,
    bucket_cap: u64,
    seed: u64,
) -> Result<Vec<PrefixLaw>> {
    sample_laws_at_base(patterns, n, count, k, bucket_cap, seed, STREAM_SAMPLE)
}

fn sample_laws_at_base(
    patterns: &[Pattern],
    n: usize,
    count: u64,
    k: usize,
    bucket_cap: u64,
    seed: u64,
    base: u64,
) -> Result<Vec<PrefixLaw>> {
    if k == 0 || k > n {
        return Err(Error::WindowTooLong { k, n });
    }
    let laws = chunk_ranges(count)
        .into_par_iter()
        .map(|(start, end)| {
            let mut laws: Vec<PrefixLaw> = patterns
                .iter()
                .map(|_| PrefixLaw::new(k, bucket_cap))
                .collect();
            for i in start..end {
                let mut rng = SeededRng::with_stream(seed, base + i);
                let degrees = sample_uniform_degrees(n + 1, &mut rng);
                let stats = TreeStats::from_degrees(degrees);
                for (law, &sigma) in laws.iter_mut().zip(patterns) {
                    law.add_finite(&phi_prefix(sigma, &stats, k));
                }
            }
            laws
        })
        .reduce(
            || patterns.iter().map(|_| PrefixLaw::new(k, bucket_cap)).collect(),
            |a, b| {
                a.into_iter()
                    .zip(b)
                    .map(|(x, y)| x.merge(y))
                    .collect()
            },
        );
    Ok(laws)
}

/// Single-pattern convenience wrapper around [`sample_prefix_laws`].
pub fn sample_prefix_law(
    sigma: Pattern,
    n: usize,
    count: u64,
    k: usize,
    bucket_cap: u64,
    seed: u64,
) -> Result<PrefixLaw> {
    Ok(sample_prefix_laws(&[sigma], n, count, k, bucket_cap, seed)?
        .pop()
        .expect("one law per pattern"))
}

/// The exact bucketed law of the first `k` image values over all trees with
/// `n + 1` vertices (uniform law, by exhaustive enumeration).
pub fn exact_prefix_law(sigma: Pattern, n: usize, k: usize, bucket_cap: u64) -> Result<PrefixLaw> {
    if k == 0 || k > n {
        return Err(Error::WindowTooLong { k, n });
    }
    let mut law = PrefixLaw::new(k, bucket_cap);
    for tree in enumerate_trees(n + 1)? {
        let stats = TreeStats::from_degrees(tree.preorder_degrees());
        law.add_finite(&phi_prefix(sigma, &stats, k));
    }
    Ok(law)
}

/// Empirical bucketed laws of the limit windows `(phi(1), ..., phi(k))` over
/// independent size-biased Geometric(1/2) trees, all patterns evaluated on
/// shared trees; the error count reports samples dropped because a side
/// tree overflowed or a `321` evaluation hit the leaf cap.
pub fn limit_prefix_laws(
    patterns: &[Pattern],
    count: u64,
    k: usize,
    bucket_cap: u64,
    seed: u64,
) -> Result<(Vec<PrefixLaw>, u64)> {
    if k == 0 {
        return Err(Error::WindowTooLong { k, n: 0 });
    }
    let (laws, errors) = chunk_ranges(count)
        .into_par_iter()
        .map(|(start, end)| {
            let mut laws: Vec<PrefixLaw> = patterns
                .iter()
                .map(|_| PrefixLaw::new(k, bucket_cap))
                .collect();
            let mut errors = 0u64;
            for i in start..end {
                let rng = SeededRng::with_stream(seed, STREAM_LIMIT + i);
                let mut tree = SpineTree::new(
                    crate::offspring::OffspringDistribution::geometric_half(),
                    rng,
                );
                let mut windows: Vec<Vec<ExtendedNat>> = Vec::with_capacity(patterns.len());
                let mut failed = false;
                'patterns: for &sigma in patterns {
                    let mut window = Vec::with_capacity(k);
                    for pos in 1..=k {
                        match tree.phi(sigma, pos) {
                            Ok(v) => window.push(v),
                            Err(_) => {
                                failed = true;
                                break 'patterns;
                            }
                        }
                    }
                    windows.push(window);
                }
                if failed {
                    errors += 1;
                    continue;
                }
                for (law, window) in laws.iter_mut().zip(&windows) {
                    law.add_extended(window);
                }
            }
            (laws, errors)
        })
        .reduce(
            || {
                (
                    patterns.iter().map(|_| PrefixLaw::new(k, bucket_cap)).collect(),
                    0,
                )
            },
            |(a, ea), (b, eb)| {
                (
                    a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
                    ea + eb,
                )
            },
        );
    Ok((laws, errors))
}

/// One row of a convergence table.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergeRow {
    pub n: usize,
    pub tv: f64,
    pub tv_stderr: f64,
    pub samples: u64,
    pub errors: u64,
}

/// Total-variation distances between the finite-`n` window laws and the
/// limit law, one row per entry of `n_list` (strictly increasing).
pub fn converge(
    sigma: Pattern,
    n_list: &[usize],
    count: u64,
    k: usize,
    bucket_cap: u64,
    seed: u64,
) -> Result<Vec<ConvergeRow>> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadInput(
            "n-list must be nonempty and strictly increasing".into(),
        ));
    }
    let (limit_laws, errors) = limit_prefix_laws(&[sigma], count, k, bucket_cap, seed)?;
    let limit_law = &limit_laws[0];
    let mut rows = Vec::with_capacity(n_list.len());
    for (r, &n) in n_list.iter().enumerate() {
        let base = STREAM_CONVERGE + ((r as u64) << 40);
        let laws = sample_laws_at_base(&[sigma], n, count, k, bucket_cap, seed, base)?;
        let (tv, tv_stderr) = laws[0].tv_distance(limit_law);
        rows.push(ConvergeRow {
            n,
            tv,
            tv_stderr,
            samples: count,
            errors,
        });
    }
    Ok(rows)
}

/// Empirical counts of the height-`m` truncation pattern (keyed by preorder
/// child counts) over uniform random trees with `size` vertices.
pub fn uniform_truncation_counts(
    size: usize,
    m: u32,
    count: u64,
    seed: u64,
) -> HashMap<Vec<u32>, u64> {
    chunk_ranges(count)
        .into_par_iter()
        .map(|(start, end)| {
            let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
            for i in start..end {
                let mut rng = SeededRng::with_stream(seed, STREAM_TRUNC_UNIFORM + i);
                let degrees = sample_uniform_degrees(size, &mut rng);
                let stats = TreeStats::from_degrees(degrees);
                *counts.entry(stats.truncated_degrees(m)).or_insert(0) += 1;
            }
            counts
        })
        .reduce(HashMap::new, merge_counts)
}

/// Empirical counts of the height-`m` truncation pattern of the size-biased
/// Geometric(1/2) tree; the second component counts samples dropped due to
/// side-tree overflow.
pub fn spine_truncation_counts(
    m: usize,
    count: u64,
    seed: u64,
) -> (HashMap<Vec<u32>, u64>, u64) {
    chunk_ranges(count)
        .into_par_iter()
        .map(|(start, end)| {
            let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
            let mut errors = 0u64;
            for i in start..end {
                let rng = SeededRng::with_stream(seed, STREAM_TRUNC_SPINE + i);
                let mut tree = SpineTree::new(
                    crate::offspring::OffspringDistribution::geometric_half(),
                    rng,
                );
                match tree.truncate_spine(m) {
                    Ok(cut) => {
                        *counts.entry(cut.preorder_degrees()).or_insert(0) += 1;
                    }
                    Err(_) => errors += 1,
                }
            }
            (counts, errors)
        })
        .reduce(
            || (HashMap::new(), 0),
            |(a, ea), (b, eb)| (merge_counts(a, b), ea + eb),
        )
}

fn merge_counts(
    mut a: HashMap<Vec<u32>, u64>,
    b: HashMap<Vec<u32>, u64>,
) -> HashMap<Vec<u32>, u64> {
    for (key, v) in b {
        *a.entry(key).or_insert(0) += v;
    }
    a
}

/// A reproducibility manifest wrapping command results.
pub fn manifest(
    command: &str,
    flags: &BTreeMap<String, String>,
    seed: u64,
    results: serde_json::Value,
) -> serde_json::Value {
    serde_json::json!({
        "command": command,
        "flags": flags,
        "seed": seed,
        "rng_algorithm": RNG_ALGORITHM,
        "version": env!("CARGO_PKG_VERSION"),
        "results": results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_passes_at_small_n() {
        let report = verify_bijections(3).unwrap();
        assert!(report.passed());
        // 6 patterns x 3 sizes x 3 checks + 3 round-trip checks
        assert_eq!(report.checks.len(), 6 * 3 * 3 + 3);
    }

    #[test]
    fn verify_trivial_n1() {
        let report = verify_bijections(1).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn verify_bound() {
        assert!(matches!(
            verify_bijections(10),
            Err(Error::ExhaustionBound { .. })
        ));
    }

    #[test]
    fn corrupted_bijection_fails_with_named_check() {
        // swap the first two values of every image: still a permutation,
        // no longer the right one
        let corrupted = |sigma: Pattern, t: &OrderedTree| -> Result<Permutation> {
            let p = phi(sigma, t)?;
            let mut values = p.values().to_vec();
            if values.len() >= 2 {
                values.swap(0, 1);
            }
            Permutation::new(values)
        };
        let report = verify_bijections_with(corrupted, 3).unwrap();
        assert!(!report.passed());
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.check)
            .collect();
        assert!(failed.contains(&"bijectivity") || failed.contains(&"avoidance"));
        assert!(report.lines().iter().any(|l| l.starts_with("FAIL")));
    }

    #[test]
    fn sample_law_n1_is_deterministic() {
        let law = sample_prefix_law(Pattern::P321, 1, 500, 1, 10, 7).unwrap();
        assert_eq!(law.total(), 500);
        assert_eq!(law.frequency(&[crate::law::Bucket::Value(1)]), 1.0);
    }

    #[test]
    fn sample_law_rejects_long_window() {
        assert!(matches!(
            sample_prefix_law(Pattern::P321, 2, 10, 3, 10, 7),
            Err(Error::WindowTooLong { .. })
        ));
    }

    #[test]
    fn sample_law_n2_is_even() {
        let law = sample_prefix_law(Pattern::P321, 2, 40_000, 2, 10, 21).unwrap();
        use crate::law::Bucket::Value;
        let f12 = law.frequency(&[Value(1), Value(2)]);
        let f21 = law.frequency(&[Value(2), Value(1)]);
        assert!((f12 + f21 - 1.0).abs() < 1e-12);
        // 3 sigma for a fair coin over 40k draws is ~0.0075
        assert!((f12 - 0.5).abs() < 0.0075, "f12 = {f12}");
    }

    #[test]
    fn sharing_patterns_changes_nothing() {
        let alone = sample_prefix_law(Pattern::P231, 6, 2_000, 2, 10, 3).unwrap();
        let together =
            sample_prefix_laws(&Pattern::ALL, 6, 2_000, 2, 10, 3).unwrap();
        assert_eq!(alone, together[3]);
    }

    #[test]
    fn exact_law_matches_enumeration() {
        let law = exact_prefix_law(Pattern::P231, 3, 1, 10).unwrap();
        assert_eq!(law.total(), catalan(3));
    }

    #[test]
    fn limit_laws_degenerate_patterns_all_large() {
        let (laws, errors) =
            limit_prefix_laws(&[Pattern::P123, Pattern::P132], 2_000, 2, 30, 5).unwrap();
        assert_eq!(errors, 0);
        for law in laws {
            assert_eq!(law.all_large_frequency(), 1.0);
        }
    }

    #[test]
    fn limit_law_312_single_values_stay_small() {
        // the first limit value for 312 is the height of the lex-largest
        // vertex, which has a geometric-type tail
        let (laws, _) = limit_prefix_laws(&[Pattern::P312], 2_000, 1, 50, 8).unwrap();
        assert_eq!(laws[0].all_large_frequency(), 0.0);
    }

    #[test]
    fn converge_split_seeds_agree() {
        let a = converge(Pattern::P231, &[40], 4_000, 1, 20, 100).unwrap();
        let b = converge(Pattern::P231, &[40], 4_000, 1, 20, 200).unwrap();
        let diff = (a[0].tv - b[0].tv).abs();
        let se = (a[0].tv_stderr.powi(2) + b[0].tv_stderr.powi(2)).sqrt();
        assert!(diff <= 3.0 * se, "tv {:.4} vs {:.4}, se {se:.4}", a[0].tv, b[0].tv);
    }

    #[test]
    fn converge_validates_inputs() {
        assert!(converge(Pattern::P231, &[10, 10], 100, 1, 10, 1).is_err());
        assert!(converge(Pattern::P231, &[], 100, 1, 10, 1).is_err());
    }

    #[test]
    fn manifest_is_deterministic() {
        let mut flags = BTreeMap::new();
        flags.insert("count".to_string(), "10".to_string());
        let a = manifest("sample", &flags, 3, serde_json::json!({"x": 1}));
        let b = manifest("sample", &flags, 3, serde_json::json!({"x": 1}));
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
