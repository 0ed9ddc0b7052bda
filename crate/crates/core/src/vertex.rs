//! Ulam-Harris vertex labels.
//!
//! A vertex is the sequence of child indices on the path from the root, so
//! the root is the empty sequence and the label `(2, 1)` is the first child
//! of the root's second child. The derived ordering on the underlying
//! sequence is exactly the lexicographic order in which a proper prefix
//! precedes all of its extensions.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex of the Ulam-Harris tree: a finite sequence of positive integers.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(Vec<u32>);

impl Vertex {
    /// The root label, i.e. the empty sequence.
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    /// Builds a vertex from a path of child indices; every index must be >= 1.
    pub fn new(path: Vec<u32>) -> Result<Self> {
        if path.contains(&0) {
            return Err(Error::ZeroLabel);
        }
        Ok(Vertex(path))
    }

    /// Shorthand for tests and small literals. Panics on a zero label.
    pub fn from_slice(path: &[u32]) -> Self {
        Vertex::new(path.to_vec()).expect("vertex labels must be positive")
    }

    pub fn path(&self) -> &[u32] {
        &self.0
    }

    /// The height of the vertex, i.e. the length of its label.
    pub fn height(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// The label of the `i`-th child (1-based).
    pub fn child(&self, i: u32) -> Result<Self> {
        if i == 0 {
            return Err(Error::ZeroLabel);
        }
        let mut path = self.0.clone();
        path.push(i);
        Ok(Vertex(path))
    }

    /// Parent label, or `None` for the root.
    pub fn parent(&self) -> Option<Self> {
        if self.0.is_empty() {
            None
        } else {
            Some(Vertex(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// Index of this vertex among its siblings, or `None` for the root.
    pub fn last_index(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Concatenation `uv` of two labels.
    pub fn concat(&self, other: &Vertex) -> Self {
        let mut path = self.0.clone();
        path.extend_from_slice(&other.0);
        Vertex(path)
    }

    /// All ancestors of the vertex including itself, root first.
    pub fn ancestors(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..=self.0.len()).map(move |k| Vertex(self.0[..k].to_vec()))
    }

    /// True iff `self` is a (not necessarily proper) prefix of `other`.
    pub fn is_prefix_of(&self, other: &Vertex) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Strips `prefix` from the front of the label.
    pub fn strip_prefix(&self, prefix: &Vertex) -> Option<Vertex> {
        if prefix.is_prefix_of(self) {
            Some(Vertex(self.0[prefix.0.len()..].to_vec()))
        } else {
            None
        }
    }
}

/// Lexicographic comparison of vertex labels (a prefix precedes its extensions).
pub fn lex_compare(a: &Vertex, b: &Vertex) -> Ordering {
    a.cmp(b)
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "()")
        } else {
            write!(f, "(")?;
            for (i, a) in self.0.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(path: &[u32]) -> Vertex {
        Vertex::from_slice(path)
    }

    #[test]
    fn lex_order_prefix_precedes_extension() {
        assert_eq!(lex_compare(&Vertex::root(), &v(&[1])), Ordering::Less);
        assert_eq!(lex_compare(&v(&[1, 2]), &v(&[2])), Ordering::Less);
        assert_eq!(lex_compare(&v(&[1]), &v(&[1, 1])), Ordering::Less);
        assert_eq!(lex_compare(&v(&[2]), &v(&[2])), Ordering::Equal);
        assert_eq!(lex_compare(&v(&[2, 1]), &v(&[1, 5])), Ordering::Greater);
    }

    #[test]
    fn zero_labels_rejected() {
        assert_eq!(Vertex::new(vec![1, 0]), Err(Error::ZeroLabel));
        assert_eq!(Vertex::root().child(0), Err(Error::ZeroLabel));
    }

    #[test]
    fn height_is_path_length() {
        assert_eq!(Vertex::root().height(), 0);
        assert_eq!(v(&[3, 1]).height(), 2);
        assert_eq!(v(&[3, 1]).child(2).unwrap().height(), 3);
    }

    #[test]
    fn ancestors_root_first() {
        let u = v(&[2, 1, 3]);
        let anc: Vec<_> = u.ancestors().collect();
        assert_eq!(anc, vec![Vertex::root(), v(&[2]), v(&[2, 1]), v(&[2, 1, 3])]);
    }

    #[test]
    fn concat_and_strip() {
        let u = v(&[2]);
        let w = v(&[1, 3]);
        let uw = u.concat(&w);
        assert_eq!(uw, v(&[2, 1, 3]));
        assert_eq!(uw.strip_prefix(&u), Some(w));
        assert_eq!(uw.strip_prefix(&v(&[3])), None);
    }
}
