//! Bijections between plane trees with n+1 vertices and the length-n
//! avoidance classes, one per length-3 pattern.
//!
//! With `v_0 < v_1 < ... < v_n` the vertices in lex order, `w_i = v_{n+1-i}`
//! (so `w_1` is the lex-largest vertex), `|t_v|` the fringe size and `|v|`
//! the height, the images at `i = 1..n` are
//!
//! * `231`: `i + |t_{v_i}| - |v_i|`
//! * `213`: `|t \ t_{v_i}| - i + |v_i|`
//! * `312`: `i - |t_{w_i}| + |w_i|`
//! * `132`: `|t| - i + |t_{w_i}| - |w_i|`
//!
//! The `321` map sends the leaf statistics `(s_i, p_i)` to the pointwise
//! assignment `s_i - p_i + 1 -> s_i`, extended to the remaining positions by
//! the unique increasing map onto the remaining values; `123` is its value
//! complement. Leaves correspond to left-to-right maxima under `321`, which
//! also yields the explicit inverse.

use crate::error::{Error, Result};
use crate::pattern::{contains, ltr_maxima_indices, Pattern};
use crate::perm::Permutation;
use crate::tree::OrderedTree;
use crate::vertex::Vertex;

/// Per-leaf statistics, leaves in lex order: `s[i]` is the number of
/// vertices lex-smaller than the i-th leaf, `p[i]` its height.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafStats {
    pub s: Vec<u64>,
    pub p: Vec<u64>,
}

impl LeafStats {
    /// The values `s_i - p_i + 1`, increasing in `i`.
    pub fn shifted(&self) -> Vec<u64> {
        self.s
            .iter()
            .zip(&self.p)
            .map(|(&s, &p)| s - p + 1)
            .collect()
    }
}

/// Leaf statistics of a tree with at least two vertices.
pub fn leaf_stats(t: &OrderedTree) -> Result<LeafStats> {
    if t.len() < 2 {
        return Err(Error::TreeTooSmall);
    }
    let mut s = Vec::new();
    let mut p = Vec::new();
    for (rank, v) in t.vertex_order().iter().enumerate() {
        if t.child_count(v) == Some(0) {
            s.push(rank as u64);
            p.push(v.height() as u64);
        }
    }
    debug_assert!(s.windows(2).all(|w| w[0] < w[1]));
    Ok(LeafStats { s, p })
}

pub fn phi_321(t: &OrderedTree) -> Result<Permutation> {
    let stats = leaf_stats(t)?;
    let n = t.len() - 1;
    let mut values = vec![0u32; n];
    let mut in_image = vec![false; n + 1];
    for (&s, &p) in stats.s.iter().zip(&stats.p) {
        let pos = (s - p + 1) as usize;
        values[pos - 1] = s as u32;
        in_image[s as usize] = true;
    }
    // unused values in increasing order fill the unset positions
    let mut spare = (1..=n as u32).filter(|&v| !in_image[v as usize]);
    for slot in values.iter_mut() {
        if *slot == 0 {
            *slot = spare.next().expect("as many spare values as open slots");
        }
    }
    Permutation::new(values)
}

pub fn phi_123(t: &OrderedTree) -> Result<Permutation> {
    Ok(phi_321(t)?.complement())
}

/// Heights and fringe sizes per lex-order (= preorder) position.
fn heights_and_sizes(t: &OrderedTree) -> (Vec<u64>, Vec<u64>) {
    let heights: Vec<u64> = t.vertex_order().iter().map(|v| v.height() as u64).collect();
    let sizes = subtree_sizes(&t.preorder_degrees());
    (heights, sizes)
}

/// Subtree sizes from a preorder child-count sequence.
pub(crate) fn subtree_sizes(degrees: &[u32]) -> Vec<u64> {
    let mut sizes = vec![0u64; degrees.len()];
    let mut stack: Vec<(usize, u32)> = Vec::new();
    for (i, &d) in degrees.iter().enumerate() {
        stack.push((i, d));
        while let Some(&(j, rem)) = stack.last() {
            if rem > 0 {
                break;
            }
            sizes[j] = (i - j + 1) as u64;
            stack.pop();
            if let Some(top) = stack.last_mut() {
                top.1 -= 1;
            }
        }
    }
    debug_assert!(stack.is_empty());
    sizes
}

fn require_two_vertices(t: &OrderedTree) -> Result<usize> {
    if t.len() < 2 {
        Err(Error::TreeTooSmall)
    } else {
        Ok(t.len())
    }
}

pub fn phi_231(t: &OrderedTree) -> Result<Permutation> {
    let total = require_two_vertices(t)?;
    let (heights, sizes) = heights_and_sizes(t);
    let values = (1..total)
        .map(|i| (i as u64 + sizes[i] - heights[i]) as u32)
        .collect();
    Permutation::new(values)
}

pub fn phi_213(t: &OrderedTree) -> Result<Permutation> {
    let total = require_two_vertices(t)?;
    let (heights, sizes) = heights_and_sizes(t);
    let values = (1..total)
        .map(|i| ((total as u64 - sizes[i]) - i as u64 + heights[i]) as u32)
        .collect();
    Permutation::new(values)
}

pub fn phi_312(t: &OrderedTree) -> Result<Permutation> {
    let total = require_two_vertices(t)?;
    let (heights, sizes) = heights_and_sizes(t);
    let values = (1..total)
        .map(|i| {
            let w = total - i; // w_i = v_{n+1-i}
            (i as u64 - sizes[w] + heights[w]) as u32
        })
        .collect();
    Permutation::new(values)
}

pub fn phi_132(t: &OrderedTree) -> Result<Permutation> {
    let total = require_two_vertices(t)?;
    let (heights, sizes) = heights_and_sizes(t);
    let values = (1..total)
        .map(|i| {
            let w = total - i;
            (total as u64 - i as u64 + sizes[w] - heights[w]) as u32
        })
        .collect();
    Permutation::new(values)
}

/// The bijection for `sigma` applied to a tree with `n + 1 >= 2` vertices.
pub fn phi(sigma: Pattern, t: &OrderedTree) -> Result<Permutation> {
    match sigma {
        Pattern::P123 => phi_123(t),
        Pattern::P132 => phi_132(t),
        Pattern::P213 => phi_213(t),
        Pattern::P231 => phi_231(t),
        Pattern::P312 => phi_312(t),
        Pattern::P321 => phi_321(t),
    }
}

/// Reconstructs the unique tree mapping to a 321-avoiding permutation.
///
/// The left-to-right maxima of the image determine the leaf statistics:
/// `s_i = pi(m_i)` and `p_i = pi(m_i) - m_i + 1`. The tree is rebuilt leaf by
/// leaf in lex order: the first leaf is the all-ones path of length `p_1`;
/// each later leaf branches off the current rightmost path at height
/// `p_i - (s_i - s_{i-1})` and descends by first children.
pub fn inverse_phi_321(pi: &Permutation) -> Result<OrderedTree> {
    if contains(pi, Pattern::P321) {
        return Err(Error::NotAvoiding);
    }
    let maxima = ltr_maxima_indices(pi);
    let mut vertices = vec![Vertex::root()];
    let mut path: Vec<u32> = Vec::new();
    let mut prev_s = 0u64;
    let mut prev_p = 0u64;
    for (i, &m) in maxima.iter().enumerate() {
        let s = pi.get(m) as u64;
        let p = s - m as u64 + 1;
        if i == 0 {
            path = vec![1; p as usize];
        } else {
            let gap = s - prev_s;
            let branch = p
                .checked_sub(gap)
                .ok_or(Error::BadPermutation("inconsistent leaf statistics"))?
                as usize;
            if branch as u64 >= prev_p {
                return Err(Error::BadPermutation("inconsistent leaf statistics"));
            }
            path.truncate(branch + 1);
            path[branch] += 1;
            path.resize(p as usize, 1);
        }
        // record every new vertex along the descent
        let start = if i == 0 { 1 } else { (p - (s - prev_s) + 1) as usize };
        for h in start..=path.len() {
            vertices.push(Vertex::new(path[..h].to_vec())?);
        }
        prev_s = s;
        prev_p = p;
    }
    vertices.sort();
    let tree = OrderedTree::from_sorted_unchecked(vertices);
    debug_assert_eq!(tree.len() as u64, prev_s + 1);
    Ok(tree)
}
