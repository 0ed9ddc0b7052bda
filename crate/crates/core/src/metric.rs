//! The local metric on trees: `D(t,s) = sum_i 2^{-i} * (|d_t(f(i)) - d_s(f(i))| /\ 1)`
//! for a fixed enumeration `f` of Ulam-Harris labels.
//!
//! Convention for `f`: breadth-first over the labels with entries at most 8
//! and height at most 16, ties within a height broken lexicographically, and
//! `f(1)` is the root. Labels outside that domain are not enumerated; since
//! the metric is only used to compare small trees, the truncation is
//! irrelevant at any realistic tolerance.
//!
//! Because `|.| /\ 1` is 0 or 1, the distance is a finite sum of distinct
//! powers of two. It is kept in exact form (the sorted set of differing
//! indices), so zero tests and comparisons are exact even where `f64` would
//! underflow; `to_f64` gives the truncated numeric view.

use std::cmp::Ordering;

use crate::tree::OrderedTree;
use crate::vertex::Vertex;

const MAX_LABEL: u32 = 8;
const MAX_HEIGHT: usize = 16;

/// 1-based breadth-first index of a label in the enumeration domain, or
/// `None` if the label falls outside it.
pub fn enumeration_index(u: &Vertex) -> Option<u64> {
    let h = u.height();
    if h > MAX_HEIGHT || u.path().iter().any(|&a| a > MAX_LABEL) {
        return None;
    }
    // labels of height < h, then the rank of u within its level
    let mut below = 0u64;
    for g in 0..h {
        below += (MAX_LABEL as u64).pow(g as u32);
    }
    let mut offset = 0u64;
    for (j, &a) in u.path().iter().enumerate() {
        offset += (a as u64 - 1) * (MAX_LABEL as u64).pow((h - 1 - j) as u32);
    }
    Some(below + offset + 1)
}

/// An exact distance value: the sorted indices `i` where the two trees have
/// different degrees, representing `sum 2^{-i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDistance {
    diff_indices: Vec<u64>,
}

impl TreeDistance {
    pub fn is_zero(&self) -> bool {
        self.diff_indices.is_empty()
    }

    /// Numeric value; terms below the `f64` range underflow to 0.
    pub fn to_f64(&self) -> f64 {
        self.diff_indices
            .iter()
            .map(|&i| if i <= 1074 { 2f64.powi(-(i as i32)) } else { 0.0 })
            .sum()
    }

    pub fn diff_indices(&self) -> &[u64] {
        &self.diff_indices
    }
}

impl PartialOrd for TreeDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TreeDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        // Sums of distinct powers of two compare by their largest terms:
        // the smaller first index wins, and a strict superset is larger.
        let mut a = self.diff_indices.iter();
        let mut b = other.diff_indices.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => continue,
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    }
}

/// Distance between two trees in the local topology.
pub fn local_distance(t: &OrderedTree, s: &OrderedTree) -> TreeDistance {
    let mut indices = Vec::new();
    for u in t.vertex_order().iter().chain(s.vertex_order()) {
        if t.degree(u) != s.degree(u) {
            if let Some(i) = enumeration_index(u) {
                indices.push(i);
            }
        }
    }
    indices.sort_unstable();
    indices.dedup();
    TreeDistance {
        diff_indices: indices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(path: &[u32]) -> Vertex {
        Vertex::from_slice(path)
    }

    fn tree(paths: &[&[u32]]) -> OrderedTree {
        OrderedTree::from_vertex_set(paths.iter().map(|p| v(p))).unwrap()
    }

    #[test]
    fn enumeration_is_breadth_first() {
        assert_eq!(enumeration_index(&Vertex::root()), Some(1));
        assert_eq!(enumeration_index(&v(&[1])), Some(2));
        assert_eq!(enumeration_index(&v(&[8])), Some(9));
        assert_eq!(enumeration_index(&v(&[1, 1])), Some(10));
        assert_eq!(enumeration_index(&v(&[1, 2])), Some(11));
        assert_eq!(enumeration_index(&v(&[2, 1])), Some(18));
        assert_eq!(enumeration_index(&v(&[9])), None);
        assert_eq!(enumeration_index(&Vertex::from_slice(&[1; 17])), None);
    }

    #[test]
    fn distance_examples() {
        let t = tree(&[&[], &[1], &[2]]);
        assert!(local_distance(&t, &t).is_zero());
        let s = tree(&[&[], &[1]]);
        let d = local_distance(&t, &s);
        assert!(!d.is_zero());
        assert_eq!(d, local_distance(&s, &t));
        // singleton vs edge differ at the root (degree 0 vs 1) and at (1)
        // (absent vs present), i.e. indices 1 and 2
        let d2 = local_distance(&OrderedTree::singleton(), &s);
        assert_eq!(d2.diff_indices(), &[1, 2]);
        assert!((d2.to_f64() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn closer_agreement_means_smaller_distance() {
        let path2 = tree(&[&[], &[1], &[1, 1]]);
        let edge = tree(&[&[], &[1]]);
        let cherry = tree(&[&[], &[1], &[2]]);
        // edge agrees with path2 at the root; cherry does not
        assert!(local_distance(&path2, &edge) < local_distance(&path2, &cherry));
    }
}
