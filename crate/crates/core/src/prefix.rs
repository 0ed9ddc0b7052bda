//! Window evaluation of the bijections straight from preorder child counts.
//!
//! Sampling experiments only look at the first few values of the image
//! permutation, and materializing Ulam-Harris labels for large trees would
//! dominate the cost. This module recomputes the bijection formulas from the
//! preorder representation alone; agreement with the label-based definitions
//! in [`crate::biject`] is covered by exhaustive tests.

use crate::biject::subtree_sizes;
use crate::pattern::Pattern;

/// Preorder child counts plus derived per-vertex statistics.
pub struct TreeStats {
    degrees: Vec<u32>,
    heights: Vec<u32>,
    sizes: Vec<u64>,
}

impl TreeStats {
    pub fn from_degrees(degrees: Vec<u32>) -> Self {
        let n = degrees.len();
        let mut heights = vec![0u32; n];
        // (index, remaining children)
        let mut stack: Vec<(usize, u32)> = Vec::new();
        for (i, &d) in degrees.iter().enumerate() {
            if i > 0 {
                let &mut (p, ref mut rem) = stack.last_mut().expect("parent is open");
                heights[i] = heights[p] + 1;
                *rem -= 1;
                if *rem == 0 {
                    stack.pop();
                }
            }
            if d > 0 {
                stack.push((i, d));
            }
        }
        let sizes = subtree_sizes(&degrees);
        TreeStats {
            degrees,
            heights,
            sizes,
        }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn height_of(&self, i: usize) -> u32 {
        self.heights[i]
    }

    /// Preorder child counts of the truncation to height `m`.
    pub fn truncated_degrees(&self, m: u32) -> Vec<u32> {
        self.degrees
            .iter()
            .zip(&self.heights)
            .filter(|&(_, &h)| h <= m)
            .map(|(&d, &h)| if h == m { 0 } else { d })
            .collect()
    }
}

/// The first `k` values of the bijection image of a tree with `len = n + 1`
/// vertices, `k <= n`.
pub fn phi_prefix(sigma: Pattern, stats: &TreeStats, k: usize) -> Vec<u64> {
    let total = stats.len();
    assert!(total >= 2 && k < total, "window must fit the permutation");
    match sigma {
        Pattern::P231 => (1..=k)
            .map(|i| i as u64 + stats.sizes[i] - stats.heights[i] as u64)
            .collect(),
        Pattern::P213 => (1..=k)
            .map(|i| (total as u64 - stats.sizes[i]) - i as u64 + stats.heights[i] as u64)
            .collect(),
        Pattern::P312 => (1..=k)
            .map(|i| {
                let w = total - i;
                i as u64 - stats.sizes[w] + stats.heights[w] as u64
            })
            .collect(),
        Pattern::P132 => (1..=k)
            .map(|i| {
                let w = total - i;
                (total - i) as u64 + stats.sizes[w] - stats.heights[w] as u64
            })
            .collect(),
        Pattern::P321 => phi_321_prefix(stats, k),
        Pattern::P123 => phi_321_prefix(stats, k)
            .into_iter()
            .map(|v| total as u64 - v)
            .collect(),
    }
}

fn phi_321_prefix(stats: &TreeStats, k: usize) -> Vec<u64> {
    let n = stats.len() - 1;
    // leaf statistics in preorder: rank and height
    let mut s_values = Vec::new();
    let mut shifted = Vec::new();
    for (rank, (&d, &h)) in stats.degrees.iter().zip(&stats.heights).enumerate() {
        if d == 0 && rank > 0 {
            s_values.push(rank as u64);
            shifted.push(rank as u64 - h as u64 + 1);
        }
    }
    // positions missing from the shifted sequence map to values missing
    // from the rank sequence, in increasing order
    let mut in_a = vec![false; n + 1];
    for &s in &s_values {
        in_a[s as usize] = true;
    }
    let missing_a: Vec<u64> = (1..=n as u64).filter(|&v| !in_a[v as usize]).collect();
    let mut out = Vec::with_capacity(k);
    let mut leaf_ptr = 0usize;
    let mut alpha = 0usize;
    for j in 1..=k as u64 {
        while leaf_ptr < shifted.len() && shifted[leaf_ptr] < j {
            leaf_ptr += 1;
        }
        if leaf_ptr < shifted.len() && shifted[leaf_ptr] == j {
            out.push(s_values[leaf_ptr]);
        } else {
            out.push(missing_a[alpha]);
            alpha += 1;
        }
    }
    out
}
