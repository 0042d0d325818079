//! Compressed quadtree from Morton order and nearest shallower transitions.

use crate::combinatorics::anlv_by;
use crate::error::QuadtreeError;
use crate::hull::GridPoint;
use crate::primitives::{deliver, lookup, oblivious_sort_by_key, sort_padded_by_key, Padded};
use crate::trace::TracedArray;

pub const MAX_GRID_BITS: u32 = 31;

/// Interleaves the coordinates, y bit first in every pair, most significant
/// pair first.
pub fn morton_key(p: &GridPoint, bits: u32) -> Result<u64, QuadtreeError> {
    if bits == 0 || bits > MAX_GRID_BITS {
        return Err(QuadtreeError::GridBits { bits });
    }
    let side = 1i64 << bits;
    if !(0..side).contains(&p.x) || !(0..side).contains(&p.y) {
        return Err(QuadtreeError::OutOfGrid { id: p.id, x: p.x, y: p.y, bits });
    }
    Ok(interleave(p.x as u64, p.y as u64, bits))
}

fn interleave(x: u64, y: u64, bits: u32) -> u64 {
    let mut k = 0;
    for l in (0..bits).rev() {
        k = (k << 2) | (((y >> l) & 1) << 1) | ((x >> l) & 1);
    }
    k
}

fn deinterleave(k: u64, pairs: u32) -> (u64, u64) {
    let (mut x, mut y) = (0, 0);
    for l in (0..pairs).rev() {
        let g = (k >> (2 * l)) & 3;
        x = (x << 1) | (g & 1);
        y = (y << 1) | (g >> 1);
    }
    (x, y)
}

/// A quadtree box: the first `depth` key pairs of its points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct QuadBox {
    pub depth: u32,
    pub prefix: u64,
}

impl QuadBox {
    pub fn of_key(key: u64, bits: u32, depth: u32) -> Self {
        QuadBox { depth, prefix: key >> (2 * (bits - depth)) }
    }

    /// The depth-`depth` box with lower-left corner `(x, y)`; `None` when
    /// the corner is off the grid.
    pub fn from_corner(x: i64, y: i64, bits: u32, depth: u32) -> Option<Self> {
        let side = 1i64 << bits;
        if !(0..side).contains(&x) || !(0..side).contains(&y) {
            return None;
        }
        Some(QuadBox::of_key(interleave(x as u64, y as u64, bits), bits, depth))
    }

    pub fn ancestor(&self, depth: u32) -> Self {
        debug_assert!(depth <= self.depth);
        QuadBox { depth, prefix: self.prefix >> (2 * (self.depth - depth)) }
    }

    /// Lower-left corner on the grid.
    pub fn corner(&self, bits: u32) -> (u64, u64) {
        let (x, y) = deinterleave(self.prefix, self.depth);
        let s = bits - self.depth;
        (x << s, y << s)
    }

    pub fn side(&self, bits: u32) -> u64 {
        1 << (bits - self.depth)
    }

    /// Which child box of the ancestor at depth `self.depth - 1` this is:
    /// `2 * y_bit + x_bit`.
    pub fn slot(&self) -> usize {
        (self.prefix & 3) as usize
    }

    /// Sort key placing every box before its descendants and boxes in
    /// Morton order otherwise.
    pub fn preorder_key(&self, bits: u32) -> (u64, u32) {
        (self.prefix << (2 * (bits - self.depth)), self.depth)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct QuadNode {
    pub id: usize,
    pub cell: QuadBox,
    pub parent: Option<usize>,
    pub children: [Option<usize>; 4],
    /// Set on leaves.
    pub point: Option<usize>,
}

/// Nodes in preorder (id = position, root first), blanks after.
#[derive(Debug)]
pub struct CompressedQuadtree {
    pub bits: u32,
    pub nodes: TracedArray<Padded<QuadNode>>,
    pub node_count: usize,
}

impl CompressedQuadtree {
    pub fn node_list(&self) -> Vec<QuadNode> {
        self.nodes.contents().iter().filter_map(|c| c.item().copied()).collect()
    }
}

#[derive(Clone, Copy, Debug)]
struct Rec {
    cell: QuadBox,
    parent: Option<QuadBox>,
    point: Option<usize>,
}

/// Builds the compressed quadtree of distinct points on the `2^bits` grid.
pub fn build_compressed_quadtree(points: &TracedArray<GridPoint>, bits: u32) -> Result<CompressedQuadtree, QuadtreeError> {
    let n = points.len();
    if n == 0 {
        return Err(QuadtreeError::Empty);
    }
    if bits == 0 || bits > MAX_GRID_BITS {
        return Err(QuadtreeError::GridBits { bits });
    }
    let tracer = points.tracer();
    let mut keyed = TracedArray::new(tracer, n, (0u64, GridPoint::new(0, 0, 0)));
    let mut bad = None;
    for i in 0..n {
        let p = points.read(i);
        let k = match morton_key(&p, bits) {
            Ok(k) => k,
            Err(e) => {
                bad.get_or_insert(e);
                0
            }
        };
        keyed.write(i, (k, p));
    }
    if let Some(e) = bad {
        return Err(e);
    }
    oblivious_sort_by_key(&mut keyed, |&(k, p)| (k, p.id));

    let m = n - 1;
    let mut trans = TracedArray::new(tracer, m, QuadBox { depth: 0, prefix: 0 });
    let mut dup = None;
    let mut prev = keyed.read(0);
    for i in 0..m {
        let cur = keyed.read(i + 1);
        let diff = prev.0 ^ cur.0;
        if diff == 0 {
            dup.get_or_insert((prev.1, cur.1));
        }
        let common = (diff.leading_zeros().saturating_sub(64 - 2 * bits) / 2).min(bits - 1);
        trans.write(i, QuadBox::of_key(prev.0, bits, common));
        prev = cur;
    }
    if let Some((a, b)) = dup {
        return Err(QuadtreeError::DuplicatePoint { first: a.id, second: b.id, x: a.x, y: a.y });
    }

    // nearest shallower transitions; an equal box further right marks a repeat
    let near = anlv_by(&trans, |a, b| b.depth.cmp(&a.depth));
    let mut table = TracedArray::new(tracer, m, Padded::Blank);
    let mut lq = TracedArray::new(tracer, m, Padded::Blank);
    let mut rq = TracedArray::new(tracer, m, Padded::Blank);
    for i in 0..m {
        let t = trans.read(i);
        let nr = near.read(i);
        table.write(i, Padded::Item((i, t)));
        lq.write(i, Padded::Item(nr.left));
        rq.write(i, Padded::Item(nr.right));
    }
    let left = lookup(&table, |&(i, _)| i, &lq, |q: &Option<usize>| *q);
    let right = lookup(&table, |&(i, _)| i, &rq, |q: &Option<usize>| *q);

    let mut recs = TracedArray::new(tracer, n + m, Padded::Blank);
    let mut before: Option<QuadBox> = None;
    for i in 0..n {
        let (k, p) = keyed.read(i);
        let after = if i < m { Some(trans.read(i)) } else { None };
        let parent = match (before, after) {
            (Some(a), Some(b)) => Some(if a.depth >= b.depth { a } else { b }),
            (a, b) => a.or(b),
        };
        recs.write(i, Padded::Item(Rec { cell: QuadBox::of_key(k, bits, bits), parent, point: Some(p.id) }));
        before = after;
    }
    for i in 0..m {
        let t = trans.read(i);
        let l = left.read(i).into_item().and_then(|(_, hit)| hit).map(|(_, b)| b.depth);
        let r = right.read(i).into_item().and_then(|(_, hit)| hit).map(|(_, b)| b.depth);
        let repeat = r == Some(t.depth);
        let parent = l.max(r).map(|d| t.ancestor(d));
        recs.write(n + i, if repeat { Padded::Blank } else { Padded::Item(Rec { cell: t, parent, point: None }) });
    }
    sort_padded_by_key(&mut recs, |r| r.cell.preorder_key(bits));

    let total = recs.len();
    let mut nodes = TracedArray::new(tracer, total, Padded::Blank);
    let mut count = 0;
    for i in 0..total {
        let r = recs.read(i);
        if r.is_item() {
            count += 1;
        }
        nodes.write(i, r.into_item().map(|r| (i, r)).into());
    }
    let parents = lookup(&nodes, |&(_, r): &(usize, Rec)| r.cell, &nodes, |&(_, r): &(usize, Rec)| r.parent);
    let mut out = TracedArray::new(tracer, total, Padded::Blank);
    let mut msgs = TracedArray::new(tracer, total, Padded::Blank);
    for i in 0..total {
        let cell = parents.read(i);
        let (node, msg) = match cell {
            Padded::Item(((id, r), hit)) => {
                let parent = hit.map(|(pid, _)| pid);
                let node = QuadNode { id, cell: r.cell, parent, children: [None; 4], point: r.point };
                let msg = hit.map(|(pid, pr)| (pid, r.cell.ancestor(pr.cell.depth + 1).slot(), id));
                (Padded::Item(node), msg.into())
            }
            Padded::Blank => (Padded::Blank, Padded::Blank),
        };
        out.write(i, node);
        msgs.write(i, msg);
    }
    deliver(
        &mut out,
        |n: &QuadNode| n.id,
        &msgs,
        |&(pid, _, _): &(usize, usize, usize)| pid,
        || [None; 4],
        |acc: &mut [Option<usize>; 4], &(_, slot, child)| acc[slot] = Some(child),
        |n: &mut QuadNode, acc| n.children = *acc,
    );
    Ok(CompressedQuadtree { bits, nodes: out, node_count: count })
}
