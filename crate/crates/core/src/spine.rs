//! Lazy realization of the size-biased Galton-Watson tree and the
//! infinite-tree versions of the six bijections.
//!
//! The tree is grown one spine level at a time: level `h` draws an offspring
//! count `K_h` from the size-biased law, a uniform spine position `i*` in
//! `1..=K_h`, and `K_h - 1` independent unconditioned Galton-Watson side
//! trees for the remaining child positions. Growth only ever appends levels;
//! realized structure is immutable, which is what makes the evaluated
//! bijection values stable under further growth.
//!
//! Queries are demand-driven. The `v` stream enumerates the vertices on or
//! to the left of the spine in increasing lexicographic order (no other
//! vertex has finitely many predecessors, so this is the increasing vertex
//! chain of the infinite tree); the `w` stream enumerates the vertices to
//! the right of the spine in decreasing order, which are exactly the
//! lex-largest vertices. Side trees keep their preorder child counts plus
//! lazily computed per-vertex statistics, so values that only need heights
//! and fringe sizes never materialize labels.

use rand::Rng;

use crate::biject::subtree_sizes;
use crate::error::{Error, Result};
use crate::extnat::ExtendedNat;
use crate::offspring::OffspringDistribution;
use crate::pattern::Pattern;
use crate::rng::SeededRng;
use crate::sampler::{sample_gw_degrees, DEFAULT_GW_CAP};
use crate::tree::OrderedTree;
use crate::vertex::Vertex;

/// Hard cap on the number of leaves streamed while resolving one `321`
/// value; exceeding it reports an error instead of looping.
pub const SPINE_LEAF_CAP: usize = 1_000_000;

/// A finite side tree hanging off the spine, stored as preorder child
/// counts with lazily computed per-vertex statistics.
struct SideTree {
    degrees: Vec<u32>,
    stats: Option<SideStats>,
}

struct SideStats {
    heights: Vec<u32>,
    sizes: Vec<u64>,
    parents: Vec<u32>,
    child_pos: Vec<u32>,
}

impl SideTree {
    fn new(degrees: Vec<u32>) -> Self {
        SideTree {
            degrees,
            stats: None,
        }
    }

    fn size(&self) -> usize {
        self.degrees.len()
    }

    fn stats(&mut self) -> &SideStats {
        if self.stats.is_none() {
            let n = self.degrees.len();
            let mut heights = vec![0u32; n];
            let mut parents = vec![0u32; n];
            let mut child_pos = vec![0u32; n];
            // (preorder index, degree, children emitted)
            let mut stack: Vec<(usize, u32, u32)> = Vec::new();
            for i in 0..n {
                if i > 0 {
                    let top = stack.last_mut().expect("non-root vertex has an open parent");
                    top.2 += 1;
                    parents[i] = top.0 as u32;
                    child_pos[i] = top.2;
                    heights[i] = heights[top.0] + 1;
                }
                stack.push((i, self.degrees[i], 0));
                while let Some(&(_, d, emitted)) = stack.last() {
                    if emitted == d {
                        stack.pop();
                    } else {
                        break;
                    }
                }
            }
            let sizes = subtree_sizes(&self.degrees);
            self.stats = Some(SideStats {
                heights,
                sizes,
                parents,
                child_pos,
            });
        }
        self.stats.as_ref().expect("just initialized")
    }

    /// Label of a vertex relative to the side-tree root.
    fn relative_label(&mut self, idx: usize) -> Vec<u32> {
        let stats = self.stats();
        let mut rev = Vec::new();
        let mut at = idx;
        while at != 0 {
            rev.push(stats.child_pos[at]);
            at = stats.parents[at] as usize;
        }
        rev.reverse();
        rev
    }

    fn to_ordered_tree(&self) -> OrderedTree {
        OrderedTree::from_preorder_degrees(&self.degrees)
            .expect("side trees are drawn as valid preorder sequences")
    }
}

/// One realized spine level.
pub struct SpineStep {
    offspring: u32,
    spine_index: u32,
    side: Vec<SideTree>,
}

impl SpineStep {
    /// The offspring count `K` of this level, drawn from the size-biased law.
    pub fn offspring(&self) -> u32 {
        self.offspring
    }

    /// The child position continuing the spine (1-based).
    pub fn spine_index(&self) -> u32 {
        self.spine_index
    }

    /// The side trees in child-position order (the spine position omitted),
    /// each relabeled to be rooted at the root.
    pub fn side_trees(&self) -> Vec<OrderedTree> {
        self.side.iter().map(|s| s.to_ordered_tree()).collect()
    }

    fn side_slot(&self, pos: u32) -> usize {
        debug_assert!(pos >= 1 && pos <= self.offspring && pos != self.spine_index);
        if pos < self.spine_index {
            (pos - 1) as usize
        } else {
            (pos - 2) as usize
        }
    }

    fn side_total(&self) -> u64 {
        self.side.iter().map(|s| s.size() as u64).sum()
    }
}

/// Cached facts about one entry of the `v` stream.
#[derive(Clone, Copy, Debug)]
struct VEntry {
    level: u32,
    pos: u32,
    idx: u32,
    height: u32,
    fringe: u64,
    on_spine: bool,
    is_leaf: bool,
}

/// Cached facts about one entry of the `w` stream (never on the spine).
#[derive(Clone, Copy, Debug)]
struct WEntry {
    level: u32,
    pos: u32,
    idx: u32,
    height: u32,
    fringe: u64,
}

#[derive(Clone, Copy, Debug)]
struct VCursor {
    level: usize,
    pos: u32,
    idx: usize,
    pending_spine: bool,
}

#[derive(Clone, Copy, Debug)]
struct WCursor {
    level: usize,
    pos: Option<u32>,
    idx: usize,
}

/// A lazily grown size-biased Galton-Watson tree.
pub struct SpineTree {
    xi: OffspringDistribution,
    rng: SeededRng,
    side_cap: usize,
    steps: Vec<SpineStep>,
    /// `above[h]` is the number of vertices outside the fringe at the spine
    /// vertex of height `h`: the `h` spine vertices above it plus all side
    /// trees at levels `< h`.
    above: Vec<u64>,
    /// Largest height of any realized vertex (spine or side).
    max_extent: usize,
    poisoned: bool,
    v_entries: Vec<VEntry>,
    v_cursor: VCursor,
    w_entries: Vec<WEntry>,
    w_cursor: WCursor,
}

impl SpineTree {
    pub fn new(xi: OffspringDistribution, rng: SeededRng) -> Self {
        SpineTree {
            xi,
            rng,
            side_cap: DEFAULT_GW_CAP,
            steps: Vec::new(),
            above: vec![0],
            max_extent: 0,
            poisoned: false,
            v_entries: Vec::new(),
            v_cursor: VCursor {
                level: 0,
                pos: 0,
                idx: 0,
                pending_spine: true,
            },
            w_entries: Vec::new(),
            w_cursor: WCursor {
                level: 0,
                pos: None,
                idx: 0,
            },
        }
    }

    /// Size-biased Geometric(1/2) tree from a bare seed.
    pub fn geometric_half(seed: u64) -> Self {
        Self::new(OffspringDistribution::geometric_half(), SeededRng::new(seed))
    }

    /// Number of realized spine levels.
    pub fn realized_height(&self) -> usize {
        self.steps.len()
    }

    /// Recovers the generator, e.g. to reuse its stream for the next tree.
    pub fn into_rng(self) -> SeededRng {
        self.rng
    }

    /// Draws one more spine level. Fails if a side tree overflows the vertex
    /// cap, after which the tree refuses to grow further.
    pub fn extend(&mut self) -> Result<()> {
        if self.poisoned {
            return Err(Error::SideTreeOverflow);
        }
        let k = self.xi.sample_size_biased(&mut self.rng)?;
        let spine_index = self.rng.random_range(1..=k);
        let level = self.steps.len();
        let mut side = Vec::with_capacity(k as usize - 1);
        for pos in 1..=k {
            if pos == spine_index {
                continue;
            }
            match sample_gw_degrees(&self.xi, &mut self.rng, self.side_cap) {
                Some((degrees, height)) => {
                    self.max_extent = self.max_extent.max(level + 1 + height as usize);
                    side.push(SideTree::new(degrees));
                }
                None => {
                    self.poisoned = true;
                    return Err(Error::SideTreeOverflow);
                }
            }
        }
        self.max_extent = self.max_extent.max(level + 1);
        let step = SpineStep {
            offspring: k,
            spine_index,
            side,
        };
        let prev = *self.above.last().expect("above is never empty");
        self.above.push(prev + 1 + step.side_total());
        self.steps.push(step);
        Ok(())
    }

    fn ensure_level(&mut self, level: usize) -> Result<()> {
        while self.steps.len() <= level {
            self.extend()?;
        }
        Ok(())
    }

    /// The realized step at spine height `h`, growing as needed.
    pub fn step(&mut self, h: usize) -> Result<&SpineStep> {
        self.ensure_level(h)?;
        Ok(&self.steps[h])
    }

    /// Label of the spine vertex at height `h`.
    pub fn spine_vertex(&mut self, h: usize) -> Result<Vertex> {
        if h > 0 {
            self.ensure_level(h - 1)?;
        }
        let path: Vec<u32> = self.steps[..h].iter().map(|s| s.spine_index).collect();
        Vertex::new(path)
    }

    /// The truncation to height `m`: a finite tree distributed as the
    /// size-biased tree cut at that height.
    pub fn truncate_spine(&mut self, m: usize) -> Result<OrderedTree> {
        if m > 0 {
            self.ensure_level(m - 1)?;
        }
        let mut vertices = Vec::new();
        let mut spine_path: Vec<u32> = Vec::new();
        vertices.push(Vertex::root());
        for h in 0..m {
            let spine_index = self.steps[h].spine_index;
            let offspring = self.steps[h].offspring;
            let limit = (m - h - 1) as u32;
            for pos in 1..=offspring {
                if pos == spine_index {
                    continue;
                }
                let slot = self.steps[h].side_slot(pos);
                let side = &mut self.steps[h].side[slot];
                let size = side.size();
                let mut base = spine_path.clone();
                base.push(pos);
                for idx in 0..size {
                    if side.stats().heights[idx] > limit {
                        continue;
                    }
                    let mut label = base.clone();
                    label.extend(side.relative_label(idx));
                    vertices.push(Vertex::new(label)?);
                }
            }
            spine_path.push(spine_index);
            vertices.push(Vertex::new(spine_path.clone())?);
        }
        vertices.sort();
        Ok(OrderedTree::from_sorted_unchecked(vertices))
    }

    /// Ensures the first `count` entries of the `v` stream are realized.
    fn ensure_v_entries(&mut self, count: usize) -> Result<()> {
        while self.v_entries.len() < count {
            self.advance_v()?;
        }
        Ok(())
    }

    fn advance_v(&mut self) -> Result<()> {
        loop {
            let VCursor {
                level,
                pos,
                idx,
                pending_spine,
            } = self.v_cursor;
            if pending_spine {
                self.v_entries.push(VEntry {
                    level: level as u32,
                    pos: 0,
                    idx: 0,
                    height: level as u32,
                    fringe: 0,
                    on_spine: true,
                    is_leaf: false,
                });
                self.v_cursor = VCursor {
                    level,
                    pos: 1,
                    idx: 0,
                    pending_spine: false,
                };
                return Ok(());
            }
            self.ensure_level(level)?;
            let spine_index = self.steps[level].spine_index;
            if pos == spine_index {
                self.v_cursor = VCursor {
                    level: level + 1,
                    pos: 0,
                    idx: 0,
                    pending_spine: true,
                };
                continue;
            }
            let slot = self.steps[level].side_slot(pos);
            let side = &mut self.steps[level].side[slot];
            let size = side.size();
            if idx >= size {
                self.v_cursor.pos += 1;
                self.v_cursor.idx = 0;
                continue;
            }
            let (height, fringe, is_leaf) = {
                let leaf = side.degrees[idx] == 0;
                let stats = side.stats();
                (
                    level as u32 + 1 + stats.heights[idx],
                    stats.sizes[idx],
                    leaf,
                )
            };
            self.v_entries.push(VEntry {
                level: level as u32,
                pos,
                idx: idx as u32,
                height,
                fringe,
                on_spine: false,
                is_leaf,
            });
            self.v_cursor.idx += 1;
            return Ok(());
        }
    }

    /// Ensures the first `count` entries of the `w` stream are realized.
    fn ensure_w_entries(&mut self, count: usize) -> Result<()> {
        while self.w_entries.len() < count {
            self.advance_w()?;
        }
        Ok(())
    }

    fn advance_w(&mut self) -> Result<()> {
        loop {
            let WCursor { level, pos, idx } = self.w_cursor;
            self.ensure_level(level)?;
            let spine_index = self.steps[level].spine_index;
            let pos = match pos {
                Some(p) => p,
                None => {
                    let start = self.steps[level].offspring;
                    self.w_cursor = WCursor {
                        level,
                        pos: Some(start),
                        idx: 0,
                    };
                    start
                }
            };
            if pos == spine_index {
                // no right siblings left at this level
                self.w_cursor = WCursor {
                    level: level + 1,
                    pos: None,
                    idx: 0,
                };
                continue;
            }
            let slot = self.steps[level].side_slot(pos);
            let side = &mut self.steps[level].side[slot];
            let size = side.size();
            if idx >= size {
                self.w_cursor.pos = Some(pos - 1);
                self.w_cursor.idx = 0;
                continue;
            }
            // reverse preorder within the side tree is decreasing lex order
            let rev_idx = size - 1 - idx;
            let (height, fringe) = {
                let stats = side.stats();
                (
                    level as u32 + 1 + stats.heights[rev_idx],
                    stats.sizes[rev_idx],
                )
            };
            self.w_entries.push(WEntry {
                level: level as u32,
                pos,
                idx: rev_idx as u32,
                height,
                fringe,
            });
            self.w_cursor.idx += 1;
            return Ok(());
        }
    }

    fn label_of_side_vertex(&mut self, level: u32, pos: u32, idx: u32) -> Result<Vertex> {
        let mut path: Vec<u32> = self.steps[..level as usize]
            .iter()
            .map(|s| s.spine_index)
            .collect();
        path.push(pos);
        let slot = self.steps[level as usize].side_slot(pos);
        let side = &mut self.steps[level as usize].side[slot];
        path.extend(side.relative_label(idx as usize));
        Vertex::new(path)
    }

    /// The increasing vertex chain `v_0, ..., v_j`.
    pub fn v_sequence(&mut self, j: usize) -> Result<Vec<Vertex>> {
        self.ensure_v_entries(j + 1)?;
        (0..=j)
            .map(|i| {
                let e = self.v_entries[i];
                if e.on_spine {
                    self.spine_vertex(e.level as usize)
                } else {
                    self.label_of_side_vertex(e.level, e.pos, e.idx)
                }
            })
            .collect()
    }

    /// The decreasing vertex chain `w_1, ..., w_j` (lex-largest first).
    pub fn w_sequence(&mut self, j: usize) -> Result<Vec<Vertex>> {
        self.ensure_w_entries(j)?;
        (0..j)
            .map(|i| {
                let e = self.w_entries[i];
                self.label_of_side_vertex(e.level, e.pos, e.idx)
            })
            .collect()
    }

    /// Whether `v_i` lies on the spine.
    pub fn v_on_spine(&mut self, i: usize) -> Result<bool> {
        self.ensure_v_entries(i + 1)?;
        Ok(self.v_entries[i].on_spine)
    }

    /// The bijection value at position `k >= 1` for any of the six patterns.
    pub fn phi(&mut self, sigma: Pattern, k: usize) -> Result<ExtendedNat> {
        assert!(k >= 1, "positions are 1-based");
        match sigma {
            // the tree is infinite, so the value complement is infinite
            Pattern::P123 | Pattern::P132 => Ok(ExtendedNat::Infinite),
            Pattern::P231 => {
                self.ensure_v_entries(k + 1)?;
                let e = self.v_entries[k];
                if e.on_spine {
                    // the fringe at a spine vertex is infinite
                    Ok(ExtendedNat::Infinite)
                } else {
                    // v_k has all its ancestors among v_0..v_{k-1}, so its
                    // height is at most k and the value stays positive
                    let value = (k as u64 + e.fringe)
                        .checked_sub(e.height as u64)
                        .expect("height of v_k is at most k");
                    Ok(ExtendedNat::Finite(value))
                }
            }
            Pattern::P213 => {
                self.ensure_v_entries(k + 1)?;
                let e = self.v_entries[k];
                if e.on_spine {
                    // everything outside the fringe at a spine vertex is the
                    // finite structure realized above it, which includes the
                    // k predecessors of v_k
                    let outside = self.above[e.level as usize];
                    let value = (outside + e.height as u64)
                        .checked_sub(k as u64)
                        .expect("v_k has at most `outside` predecessors");
                    Ok(ExtendedNat::Finite(value))
                } else {
                    // the complement contains the whole spine
                    Ok(ExtendedNat::Infinite)
                }
            }
            Pattern::P312 => {
                self.ensure_w_entries(k)?;
                let e = self.w_entries[k - 1];
                // descendants of w_k are lex-larger, hence among w_1..w_{k-1}
                let value = (k as u64)
                    .checked_sub(e.fringe)
                    .expect("fringe of w_k is at most k")
                    + e.height as u64;
                Ok(ExtendedNat::Finite(value))
            }
            Pattern::P321 => Ok(ExtendedNat::Finite(self.phi_321(k)?)),
        }
    }

    /// The `321` value at position `k >= 1`; always finite.
    ///
    /// Streams the leaves to the left of the spine in lex order with their
    /// statistics `(s_i, p_i)` (`s_i` is the leaf's index in the `v` chain).
    /// If `k = s_i - p_i + 1` for some leaf the value is `s_i`; otherwise the
    /// value is the `alpha`-th positive integer missing from `{s_i}`, where
    /// `alpha` counts the elements of `1..=k` missing from `{s_i - p_i + 1}`.
    pub fn phi_321(&mut self, k: usize) -> Result<u64> {
        assert!(k >= 1, "positions are 1-based");
        let mut leaves_seen = 0usize;
        let mut shifted_le_k = 0usize;
        // scan leaves until the increasing values s - p + 1 pass k
        let mut cursor = 0usize;
        loop {
            let (s, b) = self.next_leaf(&mut cursor, &mut leaves_seen)?;
            if b == k as u64 {
                return Ok(s);
            }
            if b > k as u64 {
                break;
            }
            shifted_le_k += 1;
        }
        let alpha = k - shifted_le_k;
        debug_assert!(alpha >= 1);
        // find the alpha-th positive integer not of the form s_i
        let mut cursor = 0usize;
        let mut leaves_seen = 0usize;
        let (mut next_s, _) = self.next_leaf(&mut cursor, &mut leaves_seen)?;
        let mut missing = 0usize;
        let mut ell = 0u64;
        loop {
            ell += 1;
            while next_s < ell {
                let (s, _) = self.next_leaf(&mut cursor, &mut leaves_seen)?;
                next_s = s;
            }
            if next_s == ell {
                continue;
            }
            missing += 1;
            if missing == alpha {
                return Ok(ell);
            }
        }
    }

    /// Next leaf of the `v` stream at or after `cursor`, returning
    /// `(s, s - p + 1)` and advancing the counters.
    fn next_leaf(&mut self, cursor: &mut usize, leaves_seen: &mut usize) -> Result<(u64, u64)> {
        loop {
            if *leaves_seen >= SPINE_LEAF_CAP {
                return Err(Error::HorizonCapExceeded);
            }
            self.ensure_v_entries(*cursor + 1)?;
            let e = self.v_entries[*cursor];
            let s = *cursor as u64;
            *cursor += 1;
            if e.is_leaf {
                *leaves_seen += 1;
                let p = e.height as u64;
                return Ok((s, s - p + 1));
            }
        }
    }

    /// A height below which the realized structure already determines
    /// `phi(sigma, k)`: evaluates the value, then reports one more than the
    /// largest realized vertex height (so it dominates the heights of every
    /// consulted chain vertex and fringe). Growing past this height never
    /// changes the value.
    pub fn stability_horizon(&mut self, sigma: Pattern, k: usize) -> Result<usize> {
        match sigma {
            Pattern::P123 | Pattern::P132 => Ok(0),
            _ => {
                self.phi(sigma, k)?;
                Ok(self.max_extent + 1)
            }
        }
    }
}

/// A serialized window of limit bijection values for one seeded tree;
/// infinity encodes as the string `"inf"`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PrefixRecord {
    pub seed: u64,
    pub sigma: Pattern,
    pub k: usize,
    pub values: Vec<ExtendedNat>,
}

/// Evaluates `(phi(1), ..., phi(k))` on a fresh size-biased Geometric(1/2)
/// tree grown from `seed`.
pub fn prefix_record(seed: u64, sigma: Pattern, k: usize) -> Result<PrefixRecord> {
    let mut tree = SpineTree::geometric_half(seed);
    let values = (1..=k)
        .map(|i| tree.phi(sigma, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(PrefixRecord {
        seed,
        sigma,
        k,
        values,
    })
}
