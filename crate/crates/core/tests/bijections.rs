//! Exhaustive checks of the six bijections against the brute-force oracle,
//! plus the structural correspondences that make them tick.

use std::collections::BTreeSet;

use patperm::biject::{inverse_phi_321, leaf_stats, phi, phi_123, phi_321};
use patperm::pattern::{catalan, contains, enumerate_avoiders, ltr_maxima_indices, Pattern};
use patperm::perm::Permutation;
use patperm::prefix::{phi_prefix, TreeStats};
use patperm::sampler::{enumerate_trees, sample_uniform_tree};
use patperm::tree::OrderedTree;
use patperm::SeededRng;

/// All trees with 2..=max_size vertices.
fn all_trees(max_size: usize) -> Vec<OrderedTree> {
    (2..=max_size)
        .flat_map(|s| enumerate_trees(s).unwrap())
        .collect()
}

#[test]
fn images_equal_avoidance_classes() {
    for n in 1..=7 {
        let trees = enumerate_trees(n + 1).unwrap();
        for sigma in Pattern::ALL {
            let image: BTreeSet<Permutation> =
                trees.iter().map(|t| phi(sigma, t).unwrap()).collect();
            assert_eq!(image.len(), trees.len(), "collision for {sigma}, n={n}");
            let avoiders: BTreeSet<Permutation> =
                enumerate_avoiders(n, sigma).unwrap().into_iter().collect();
            assert_eq!(image, avoiders, "image mismatch for {sigma}, n={n}");
            assert_eq!(image.len() as u64, catalan(n));
        }
    }
}

#[test]
fn images_avoid_their_pattern() {
    for t in all_trees(10) {
        for sigma in Pattern::ALL {
            let img = phi(sigma, &t).unwrap();
            assert!(!contains(&img, sigma), "{t:?} -> {img} contains {sigma}");
        }
    }
}

#[test]
fn inverse_round_trips_all_small_trees() {
    for t in all_trees(10) {
        let img = phi_321(&t).unwrap();
        assert_eq!(inverse_phi_321(&img).unwrap(), t);
    }
}

#[test]
fn complement_symmetry_pointwise() {
    for t in all_trees(9) {
        let a = phi_321(&t).unwrap();
        let b = phi_123(&t).unwrap();
        let total = t.len() as u32;
        for i in 1..=a.len() {
            assert_eq!(a.get(i) + b.get(i), total);
        }
    }
}

#[test]
fn leaves_map_to_left_to_right_maxima() {
    for t in all_trees(9) {
        let stats = leaf_stats(&t).unwrap();
        let img = phi_321(&t).unwrap();
        let maxima: Vec<u64> = ltr_maxima_indices(&img).iter().map(|&m| m as u64).collect();
        assert_eq!(stats.shifted(), maxima, "tree {t:?}");
        // and the maxima recover the leaf statistics
        for (i, &m) in ltr_maxima_indices(&img).iter().enumerate() {
            assert_eq!(img.get(m) as u64, stats.s[i]);
            assert_eq!(img.get(m) as u64 - m as u64 + 1, stats.p[i]);
        }
    }
}

#[test]
fn leaf_stats_invariants() {
    for t in all_trees(9) {
        let stats = leaf_stats(&t).unwrap();
        for (i, (&s, &p)) in stats.s.iter().zip(&stats.p).enumerate() {
            assert!(s > i as u64);
            assert!(p >= 1);
        }
        let shifted = stats.shifted();
        assert!(shifted.windows(2).all(|w| w[0] < w[1]));
        assert!(stats.s.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn inverse_rejects_non_avoiders() {
    assert!(inverse_phi_321(&Permutation::from_slice(&[3, 2, 1])).is_err());
    assert!(inverse_phi_321(&Permutation::from_slice(&[2, 4, 3, 1])).is_err());
}

#[test]
fn window_evaluation_matches_on_larger_samples() {
    // the preorder-based window route must agree with the label-based route
    // well beyond the exhaustive sizes
    let mut rng = SeededRng::new(2024);
    for &size in &[30usize, 100, 400] {
        for _ in 0..20 {
            let t = sample_uniform_tree(size, &mut rng);
            let stats = TreeStats::from_degrees(t.preorder_degrees());
            for sigma in Pattern::ALL {
                let full = phi(sigma, &t).unwrap();
                let k = 10.min(size - 1);
                let window = phi_prefix(sigma, &stats, k);
                let expected: Vec<u64> =
                    full.values()[..k].iter().map(|&v| v as u64).collect();
                assert_eq!(window, expected, "sigma {sigma}, size {size}");
            }
        }
    }
}
