//! Galton-Watson sampling, exact uniform sampling of plane trees, and
//! exhaustive enumeration of small trees.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::offspring::OffspringDistribution;
use crate::rng::SeededRng;
use crate::tree::OrderedTree;

/// Default vertex cap for unconditioned Galton-Watson draws. Critical trees
/// have heavy size tails, so draws are truncated rather than unbounded.
pub const DEFAULT_GW_CAP: usize = 1_000_000;

/// Largest size accepted by [`enumerate_trees`].
pub const TREE_ENUMERATION_BOUND: usize = 12;

/// Result of an unconditioned Galton-Watson draw: `Overflow` is a value, not
/// a failure, reported when the tree would exceed the cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GwDraw {
    Tree(OrderedTree),
    Overflow,
}

impl GwDraw {
    pub fn tree(self) -> Option<OrderedTree> {
        match self {
            GwDraw::Tree(t) => Some(t),
            GwDraw::Overflow => None,
        }
    }
}

/// Draws the preorder child counts of a Galton-Watson tree depth-first,
/// together with the tree height, or `None` once the vertex count would
/// exceed `cap`.
pub(crate) fn sample_gw_degrees(
    xi: &OffspringDistribution,
    rng: &mut SeededRng,
    cap: usize,
) -> Option<(Vec<u32>, u32)> {
    let mut degrees: Vec<u32> = Vec::new();
    // children still owed at each level of the current path
    let mut pending: Vec<u32> = Vec::new();
    let mut height = 0u32;
    loop {
        if degrees.len() >= cap {
            return None;
        }
        let d = xi.sample(rng);
        degrees.push(d);
        if d > 0 {
            pending.push(d);
            height = height.max(pending.len() as u32);
        } else {
            loop {
                match pending.last_mut() {
                    None => return Some((degrees, height)),
                    Some(rem) => {
                        *rem -= 1;
                        if *rem == 0 {
                            pending.pop();
                        } else {
                            break;
                        }
                    }
                }
            }
        }
    }
}

/// Samples a Galton-Watson tree with offspring law `xi`, giving up with
/// [`GwDraw::Overflow`] once the vertex count exceeds `cap`.
pub fn sample_gw(xi: &OffspringDistribution, rng: &mut SeededRng, cap: usize) -> GwDraw {
    match sample_gw_degrees(xi, rng, cap) {
        Some((degrees, _)) => GwDraw::Tree(
            OrderedTree::from_preorder_degrees(&degrees)
                .expect("depth-first generation yields a valid preorder sequence"),
        ),
        None => GwDraw::Overflow,
    }
}

/// Draws the preorder child counts of a uniform plane tree with `size`
/// vertices in O(size) by the cycle lemma: shuffle `size - 1` up-steps and
/// `size` down-steps, rotate to start just after the first minimum of the
/// prefix-sum walk, drop the final down-step, and read the remaining
/// excursion as a depth-first traversal.
pub(crate) fn sample_uniform_degrees(size: usize, rng: &mut SeededRng) -> Vec<u32> {
    assert!(size >= 1, "tree size must be at least 1");
    if size == 1 {
        return vec![0];
    }
    let ups = size - 1;
    let total = 2 * size - 1;
    // step j is an up-step iff steps[j]
    let mut steps: Vec<bool> = (0..total).map(|j| j < ups).collect();
    steps.shuffle(rng);
    // first position of the minimal prefix sum
    let mut sum: i64 = 0;
    let mut min = i64::MAX;
    let mut min_at = 0;
    for (j, &up) in steps.iter().enumerate() {
        sum += if up { 1 } else { -1 };
        if sum < min {
            min = sum;
            min_at = j;
        }
    }
    let rotated = |j: usize| steps[(min_at + 1 + j) % total];
    decode_dyck(size, rotated)
}

/// Decodes a Dyck path of `2 * (size - 1)` steps into preorder child counts.
fn decode_dyck(size: usize, step: impl Fn(usize) -> bool) -> Vec<u32> {
    let mut degrees = vec![0u32; size];
    // preorder index of each vertex on the current path
    let mut path: Vec<usize> = vec![0];
    let mut created = 1;
    for j in 0..2 * (size - 1) {
        if step(j) {
            let parent = *path.last().expect("walk stays nonnegative");
            degrees[parent] += 1;
            path.push(created);
            created += 1;
        } else {
            path.pop().expect("walk stays nonnegative");
        }
    }
    debug_assert_eq!(created, size);
    degrees
}

/// Uniform sample over the plane trees with `size >= 2` vertices (this is
/// also the law of a critical Geometric(1/2) Galton-Watson tree conditioned
/// to have exactly `size` vertices).
pub fn sample_uniform_tree(size: usize, rng: &mut SeededRng) -> OrderedTree {
    let degrees = sample_uniform_degrees(size, rng);
    OrderedTree::from_preorder_degrees(&degrees)
        .expect("cycle lemma yields a valid preorder sequence")
}

/// All plane trees with exactly `size` vertices, for `size <= 12`.
pub fn enumerate_trees(size: usize) -> Result<Vec<OrderedTree>> {
    if size == 0 || size > TREE_ENUMERATION_BOUND {
        return Err(Error::ExhaustionBound {
            requested: size,
            max: TREE_ENUMERATION_BOUND,
        });
    }
    Ok(enumerate_degree_sequences(size)
        .iter()
        .map(|d| {
            OrderedTree::from_preorder_degrees(d).expect("enumeration yields valid sequences")
        })
        .collect())
}

/// Preorder child-count sequences of all plane trees with `size` vertices.
pub(crate) fn enumerate_degree_sequences(size: usize) -> Vec<Vec<u32>> {
    let mut trees: Vec<Vec<Vec<u32>>> = vec![Vec::new(); size + 1];
    trees[1] = vec![vec![0]];
    for n in 2..=size {
        // a tree is a root followed by a nonempty forest of n - 1 vertices
        let mut out = Vec::new();
        for (count, forest) in forest_sequences(&trees, n - 1) {
            let mut seq = Vec::with_capacity(n);
            seq.push(count);
            seq.extend(forest);
            out.push(seq);
        }
        trees[n] = out;
    }
    trees[size].clone()
}

/// All `(tree count, concatenated preorder)` pairs for ordered forests with
/// exactly `total >= 1` vertices.
fn forest_sequences(trees: &[Vec<Vec<u32>>], total: usize) -> Vec<(u32, Vec<u32>)> {
    let mut out = Vec::new();
    for first in 1..=total {
        for head in &trees[first] {
            if first == total {
                out.push((1, head.clone()));
            } else {
                for (count, tail) in forest_sequences(trees, total - first) {
                    let mut seq = head.clone();
                    seq.extend(tail);
                    out.push((count + 1, seq));
                }
            }
        }
    }
    out
}
