//! Finite rooted ordered (plane) trees as prefix-closed, left-closed sets of
//! Ulam-Harris labels.
//!
//! A valid tree contains the root, contains the parent of each of its
//! vertices, and contains `u(i-1)` whenever it contains `ui` with `i >= 2`.
//! Trees are stored both as a lex-sorted vertex list (which is also the
//! preorder of the plane tree) and as a child-count map, so ordering queries
//! and degree queries are both cheap.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::vertex::Vertex;

/// A finite rooted ordered tree.
#[derive(Clone)]
pub struct OrderedTree {
    /// All vertices in lexicographic order; `vertices[0]` is the root.
    vertices: Vec<Vertex>,
    /// Child count per vertex.
    child_counts: HashMap<Vertex, u32>,
}

impl PartialEq for OrderedTree {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for OrderedTree {}

impl OrderedTree {
    /// The one-vertex tree.
    pub fn singleton() -> Self {
        let root = Vertex::root();
        OrderedTree {
            vertices: vec![root.clone()],
            child_counts: HashMap::from([(root, 0)]),
        }
    }

    /// Builds a tree from an arbitrary collection of vertices, checking the
    /// three axioms (root membership, ancestor closure, left closure).
    pub fn from_vertex_set<I: IntoIterator<Item = Vertex>>(vertices: I) -> Result<Self> {
        let mut vs: Vec<Vertex> = vertices.into_iter().collect();
        vs.sort();
        vs.dedup();
        if vs.is_empty() || !vs[0].is_root() {
            return Err(Error::InvalidTree("root missing"));
        }
        let mut counts: HashMap<Vertex, u32> = vs.iter().cloned().map(|v| (v, 0)).collect();
        for v in vs.iter().skip(1) {
            let parent = v.parent().expect("non-root vertex has a parent");
            match counts.get_mut(&parent) {
                None => return Err(Error::InvalidTree("ancestor missing")),
                Some(c) => *c += 1,
            }
            let idx = v.last_index().expect("non-root vertex has an index");
            if idx >= 2 && !counts.contains_key(&parent.child(idx - 1).expect("positive index")) {
                return Err(Error::InvalidTree("left sibling missing"));
            }
        }
        Ok(OrderedTree {
            vertices: vs,
            child_counts: counts,
        })
    }

    /// True iff the vertex set satisfies the tree axioms.
    pub fn is_valid_vertex_set<I: IntoIterator<Item = Vertex>>(vertices: I) -> bool {
        Self::from_vertex_set(vertices).is_ok()
    }

    /// Builds from a lex-sorted list of vertices assumed to form a valid tree.
    pub(crate) fn from_sorted_unchecked(vertices: Vec<Vertex>) -> Self {
        let mut counts: HashMap<Vertex, u32> =
            vertices.iter().cloned().map(|v| (v, 0)).collect();
        for v in vertices.iter().skip(1) {
            let parent = v.parent().expect("non-root vertex has a parent");
            *counts.get_mut(&parent).expect("parent present") += 1;
        }
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        OrderedTree {
            vertices,
            child_counts: counts,
        }
    }

    /// Decodes a preorder child-count sequence (root first).
    pub fn from_preorder_degrees(degrees: &[u32]) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::BadEncoding("empty degree sequence"));
        }
        let mut vertices = Vec::with_capacity(degrees.len());
        // Stack of (label, children emitted so far, degree).
        let mut stack: Vec<(Vec<u32>, u32, u32)> = vec![(Vec::new(), 0, degrees[0])];
        vertices.push(Vertex::root());
        let mut next = 1;
        while let Some(top) = stack.last_mut() {
            if top.1 == top.2 {
                stack.pop();
                continue;
            }
            if next >= degrees.len() {
                return Err(Error::BadEncoding("degree sequence ended early"));
            }
            top.1 += 1;
            let mut label = top.0.clone();
            label.push(top.1);
            vertices.push(Vertex::new(label.clone())?);
            stack.push((label, 0, degrees[next]));
            next += 1;
        }
        if next != degrees.len() {
            return Err(Error::BadEncoding("trailing degrees after tree closed"));
        }
        Ok(Self::from_sorted_unchecked(vertices))
    }

    /// The preorder child-count sequence. Lex order on labels is the preorder
    /// of the plane tree, so this is just the degree of each sorted vertex.
    pub fn preorder_degrees(&self) -> Vec<u32> {
        self.vertices
            .iter()
            .map(|v| self.child_counts[v])
            .collect()
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, u: &Vertex) -> bool {
        self.child_counts.contains_key(u)
    }

    /// Child count of `u`, or `None` if `u` is not a vertex of the tree.
    pub fn child_count(&self, u: &Vertex) -> Option<u32> {
        self.child_counts.get(u).copied()
    }

    /// Degree of `u` with the convention that a vertex outside the tree has
    /// degree -1.
    pub fn degree(&self, u: &Vertex) -> i64 {
        match self.child_counts.get(u) {
            Some(&c) => c as i64,
            None => -1,
        }
    }

    pub fn root_degree(&self) -> u32 {
        self.child_counts[&self.vertices[0]]
    }

    /// All vertices in lexicographic order (root first).
    pub fn vertex_order(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Position of `u` in the lexicographic order, i.e. the number of
    /// vertices strictly smaller than `u`.
    pub fn lex_rank(&self, u: &Vertex) -> Option<usize> {
        self.vertices.binary_search(u).ok()
    }

    /// Leaves (vertices of degree 0) in lexicographic order. The root is a
    /// leaf only in the one-vertex tree.
    pub fn leaves(&self) -> Vec<Vertex> {
        self.vertices
            .iter()
            .filter(|v| self.child_counts[*v] == 0)
            .cloned()
            .collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| self.child_counts[*v] == 0)
            .count()
    }

    /// Largest vertex height.
    pub fn height(&self) -> usize {
        self.vertices.iter().map(|v| v.height()).max().unwrap_or(0)
    }

    /// Number of vertices at height `k`.
    pub fn count_at_height(&self, k: usize) -> usize {
        self.vertices.iter().filter(|v| v.height() == k).count()
    }

    /// The fringe subtree at `u`, relabeled so that `u` becomes the root.
    pub fn fringe(&self, u: &Vertex) -> Result<OrderedTree> {
        let start = self.lex_rank(u).ok_or(Error::VertexNotInTree)?;
        // Descendants of u form a contiguous lex range starting at u.
        let mut rel = Vec::new();
        for v in &self.vertices[start..] {
            match v.strip_prefix(u) {
                Some(w) => rel.push(w),
                None => break,
            }
        }
        Ok(Self::from_sorted_unchecked(rel))
    }

    /// Size of the fringe subtree at `u` without materializing it.
    pub fn fringe_size(&self, u: &Vertex) -> Result<usize> {
        let start = self.lex_rank(u).ok_or(Error::VertexNotInTree)?;
        let n = self.vertices[start..]
            .iter()
            .take_while(|v| u.is_prefix_of(v))
            .count();
        Ok(n)
    }

    /// The subtree of vertices of height at most `m`.
    pub fn truncate(&self, m: usize) -> OrderedTree {
        let vs: Vec<Vertex> = self
            .vertices
            .iter()
            .filter(|v| v.height() <= m)
            .cloned()
            .collect();
        Self::from_sorted_unchecked(vs)
    }

    /// Attaches `subtrees` below the leaf `l`: the `i`-th subtree becomes the
    /// fringe at the new child `l i`.
    pub fn attach(&self, l: &Vertex, subtrees: &[OrderedTree]) -> Result<OrderedTree> {
        if subtrees.is_empty() {
            return Err(Error::BadInput("attach requires at least one subtree".into()));
        }
        match self.child_count(l) {
            None => Err(Error::VertexNotInTree),
            Some(c) if c != 0 => Err(Error::NotALeaf),
            Some(_) => {
                let mut vs = self.vertices.clone();
                for (i, sub) in subtrees.iter().enumerate() {
                    let anchor = l.child(i as u32 + 1)?;
                    for w in sub.vertex_order() {
                        vs.push(anchor.concat(w));
                    }
                }
                vs.sort();
                Ok(Self::from_sorted_unchecked(vs))
            }
        }
    }

    /// Builds the tree whose root has the given subtrees, left to right.
    pub fn from_children(children: &[OrderedTree]) -> OrderedTree {
        OrderedTree::singleton()
            .attach(&Vertex::root(), children)
            .unwrap_or_else(|_| OrderedTree::singleton())
    }

    /// Renders the recursive children-array JSON form, e.g. `[]` for a single
    /// vertex and `[[],[]]` for a root with two leaf children. Iterative, so
    /// deep path trees do not overflow the stack.
    pub fn to_json_string(&self) -> String {
        let degrees = self.preorder_degrees();
        let mut out = String::with_capacity(degrees.len() * 2 + 2);
        // remaining children per open bracket
        let mut stack: Vec<u32> = Vec::new();
        for &d in &degrees {
            if let Some(top) = stack.last_mut() {
                debug_assert!(*top > 0);
                *top -= 1;
            }
            out.push('[');
            stack.push(d);
            while let Some(&0) = stack.last() {
                stack.pop();
                out.push(']');
                if let Some(&r) = stack.last() {
                    if r > 0 {
                        out.push(',');
                    }
                }
            }
        }
        debug_assert!(stack.is_empty());
        out
    }

    /// Parses the recursive children-array JSON form.
    pub fn from_json_str(text: &str) -> Result<OrderedTree> {
        let mut degrees: Vec<u32> = Vec::new();
        // positions in `degrees` of the currently open vertices
        let mut open: Vec<usize> = Vec::new();
        let mut closed_root = false;
        for ch in text.chars() {
            match ch {
                '[' => {
                    if closed_root {
                        return Err(Error::BadEncoding("content after root closed"));
                    }
                    if let Some(&p) = open.last() {
                        degrees[p] += 1;
                    } else if !degrees.is_empty() {
                        return Err(Error::BadEncoding("multiple roots"));
                    }
                    open.push(degrees.len());
                    degrees.push(0);
                }
                ']' => {
                    if open.pop().is_none() {
                        return Err(Error::BadEncoding("unbalanced brackets"));
                    }
                    if open.is_empty() {
                        closed_root = true;
                    }
                }
                ',' | ' ' | '\t' | '\n' | '\r' => {}
                _ => return Err(Error::BadEncoding("unexpected character")),
            }
        }
        if !open.is_empty() || !closed_root {
            return Err(Error::BadEncoding("unbalanced brackets"));
        }
        OrderedTree::from_preorder_degrees(&degrees)
    }
}

impl fmt::Debug for OrderedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderedTree{}", self.to_json_string())
    }
}
