//! Well-separated pair decomposition over the compressed quadtree.
//!
//! Every internal node `B` visits, in lockstep with all other nodes, one
//! same-depth grid cell `B'` per round. The highest tree node `u` inside `B'`
//! (and its children when `u` has `B`'s depth) is paired with each child of
//! `B`, keeping a pair `(X, Y)` when `X` and `Y` are well separated, `B` and
//! `Y` are not, and `Y`'s ball is no larger than `B`'s.

use std::fmt;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::error::WspdError;
use crate::hull::GridPoint;
use crate::primitives::{cmp_padded_by, compact_to, lookup, merge_sorted_halves_by, sort_padded_by_key, Padded};
use crate::quadtree::{CompressedQuadtree, QuadBox, QuadNode};
use crate::rng::SeededRng;
use crate::trace::TracedArray;

/// Output capacity is `CAPACITY_FACTOR * n` pairs.
pub const CAPACITY_FACTOR: usize = 96;

const MAX_TERM: u64 = 1 << 20;

/// A rational separation parameter `s = num / den > 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    pub num: u64,
    pub den: u64,
}

impl Separation {
    pub fn new(num: u64, den: u64) -> Result<Self, WspdError> {
        if den == 0 || num <= 2 * den || num > MAX_TERM || den > MAX_TERM {
            return Err(WspdError::Separation { num, den });
        }
        Ok(Separation { num, den })
    }

    pub fn default_2_1() -> Self {
        Separation { num: 21, den: 10 }
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `(s + 2)^2` as a fraction over `den^2`.
    fn factor_sq(&self) -> u128 {
        let t = (self.num + 2 * self.den) as u128;
        t * t
    }

    /// Offsets `(i, j)` of same-depth cells that can contain a ball no
    /// larger than the box's own and not separated from it, self included.
    pub fn neighbor_offsets(&self) -> Vec<(i64, i64)> {
        let k = self.neighbor_radius();
        let mut out = Vec::new();
        for j in -k..=k {
            for i in -k..=k {
                if self.cell_reachable(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Largest `max(|i|, |j|)` over [`Separation::neighbor_offsets`].
    pub fn neighbor_radius(&self) -> i64 {
        let mut k = 0;
        while self.cell_reachable(k + 1, 0) {
            k += 1;
        }
        k
    }

    // nearest point of the cell within (s+2) * half-diagonal of the center,
    // in units of half a side: a^2 + b^2 < 2 (s+2)^2
    fn cell_reachable(&self, i: i64, j: i64) -> bool {
        let a = (2 * i.abs() - 1).max(0) as u128;
        let b = (2 * j.abs() - 1).max(0) as u128;
        let d2 = (self.den as u128).pow(2);
        d2 * (a * a + b * b) < 2 * self.factor_sq()
    }
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Ball of a node on the doubled grid: leaves are their point, internal
/// nodes the circumscribed circle of their box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ball {
    pub cx: i64,
    pub cy: i64,
    /// Squared radius, doubled coordinates.
    pub r_sq: u128,
}

pub fn ball(node: &QuadNode, bits: u32) -> Ball {
    ball_of(&node.cell, node.point.is_some(), bits)
}

fn ball_of(cell: &QuadBox, leaf: bool, bits: u32) -> Ball {
    let (x, y) = cell.corner(bits);
    let (x, y) = (2 * x as i64, 2 * y as i64);
    if leaf {
        return Ball { cx: x, cy: y, r_sq: 0 };
    }
    let side = cell.side(bits) as i64;
    Ball { cx: x + side, cy: y + side, r_sq: 2 * (side as u128).pow(2) }
}

/// The parts of a tree node the pair construction needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct NodeRef {
    pub id: usize,
    pub cell: QuadBox,
    pub point: Option<usize>,
}

impl NodeRef {
    fn of(node: &QuadNode) -> Self {
        NodeRef { id: node.id, cell: node.cell, point: node.point }
    }

    pub fn ball(&self, bits: u32) -> Ball {
        ball_of(&self.cell, self.point.is_some(), bits)
    }
}

fn separated(a: &Ball, b: &Ball, s: &Separation) -> bool {
    let dx = (a.cx - b.cx).unsigned_abs() as u128;
    let dy = (a.cy - b.cy).unsigned_abs() as u128;
    let lhs = (s.den as u128).pow(2) * (dx * dx + dy * dy);
    lhs >= s.factor_sq() * a.r_sq.max(b.r_sq)
}

/// `dist(centers) >= (s + 2) * r` with `r` the larger radius, exactly.
pub fn well_separated(a: &QuadNode, b: &QuadNode, bits: u32, s: &Separation) -> bool {
    separated(&ball(a, bits), &ball(b, bits), s)
}

/// Same-depth boxes around `node` in [`Separation::neighbor_offsets`] order
/// without the box itself, `None` where off the grid, padded with `None` to
/// `(2K + 1)^2 - 1` entries.
pub fn neighbor_boxes(node: &QuadNode, bits: u32, s: &Separation) -> Vec<Option<QuadBox>> {
    let k = s.neighbor_radius();
    let mut out: Vec<Option<QuadBox>> = s
        .neighbor_offsets()
        .into_iter()
        .filter(|&o| o != (0, 0))
        .map(|o| shifted(&node.cell, o, bits))
        .collect();
    out.resize(((2 * k + 1) * (2 * k + 1) - 1) as usize, None);
    out
}

fn shifted(cell: &QuadBox, (i, j): (i64, i64), bits: u32) -> Option<QuadBox> {
    let (x, y) = cell.corner(bits);
    let side = cell.side(bits) as i64;
    QuadBox::from_corner(x as i64 + i * side, y as i64 + j * side, bits, cell.depth)
}

/// Two quadtree node ids whose point sets are well separated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WspdPair {
    pub a: usize,
    pub b: usize,
}

pub(crate) type NodePairs = TracedArray<Padded<(NodeRef, NodeRef)>>;

#[derive(Debug)]
pub struct Wspd {
    pub separation: Separation,
    pub pairs: TracedArray<Padded<WspdPair>>,
    pub count: usize,
}

impl Wspd {
    pub fn pair_list(&self) -> Vec<WspdPair> {
        self.pairs.contents().iter().filter_map(|c| c.item().copied()).collect()
    }
}

/// A node with its parent and children.
#[derive(Clone, Copy, Debug)]
struct Family {
    node: NodeRef,
    parent: Option<NodeRef>,
    kids: [Option<NodeRef>; 4],
}

#[derive(Clone, Debug)]
enum Probe {
    Node(Rc<Family>),
    /// `fam.node` looks for the highest node inside `target`.
    Query { fam: Rc<Family>, target: QuadBox, found: Option<Rc<Family>> },
}

fn families(nodes: &TracedArray<Padded<QuadNode>>) -> TracedArray<Padded<Rc<Family>>> {
    let len = nodes.len();
    let tracer = nodes.tracer();
    let mut queries = TracedArray::new(tracer, 5 * len, Padded::Blank);
    for i in 0..len {
        let v = nodes.read(i);
        let v = v.item();
        queries.write(5 * i, Padded::Item(v.and_then(|v| v.parent)));
        for k in 0..4 {
            queries.write(5 * i + 1 + k, Padded::Item(v.and_then(|v| v.children[k])));
        }
    }
    let found = lookup(nodes, |n: &QuadNode| n.id, &queries, |q: &Option<usize>| *q);
    let mut out = TracedArray::new(tracer, len, Padded::Blank);
    for i in 0..len {
        let v = nodes.read(i);
        let hits: [Option<NodeRef>; 5] =
            std::array::from_fn(|k| found.read(5 * i + k).into_item().and_then(|(_, hit)| hit).map(|h| NodeRef::of(&h)));
        let fam = v
            .into_item()
            .map(|node| Rc::new(Family { node: NodeRef::of(&node), parent: hits[0], kids: [hits[1], hits[2], hits[3], hits[4]] }));
        out.write(i, fam.into());
    }
    out
}

/// For every non-root node `X` with parent `B`, the highest node inside `B`
/// shifted by `offset`. Queries are sorted by target, merged into the
/// preorder and resolved by one backward sweep; the result is in target
/// order.
fn locate(fams: &TracedArray<Padded<Rc<Family>>>, offset: (i64, i64), bits: u32) -> TracedArray<Padded<Probe>> {
    let len = fams.len();
    let half = len.next_power_of_two();
    let tracer = fams.tracer();
    let sweep_key = |p: &Probe| match p {
        Probe::Node(f) => (f.node.cell.preorder_key(bits), 1),
        Probe::Query { target, .. } => (target.preorder_key(bits), 0),
    };
    let mut queries = TracedArray::new(tracer, len, Padded::Blank);
    for i in 0..len {
        let f = fams.read(i);
        let q = f.item().and_then(|f| {
            let target = shifted(&f.parent?.cell, offset, bits)?;
            Some(Probe::Query { fam: f.clone(), target, found: None })
        });
        queries.write(i, q.into());
    }
    sort_padded_by_key(&mut queries, sweep_key);
    let mut probes = TracedArray::new(tracer, half + len, Padded::Blank);
    for i in 0..len {
        probes.write(i, fams.read(i).into_item().map(Probe::Node).into());
        probes.write(half + i, queries.read(i));
    }
    merge_sorted_halves_by(&mut probes, half, |a, b| cmp_padded_by(a, b, sweep_key));
    let mut next: Option<Rc<Family>> = None;
    for i in (0..probes.len()).rev() {
        let cell = match probes.read(i) {
            Padded::Item(Probe::Node(f)) => {
                next = Some(f.clone());
                Padded::Item(Probe::Node(f))
            }
            Padded::Item(Probe::Query { fam, target, .. }) => {
                let found =
                    next.clone().filter(|f| f.node.cell.depth >= target.depth && f.node.cell.ancestor(target.depth) == target);
                Padded::Item(Probe::Query { fam, target, found })
            }
            Padded::Blank => Padded::Blank,
        };
        probes.write(i, cell);
    }
    let (queries, _) = compact_to(&probes, len, |p| matches!(p, Probe::Query { .. })).expect("at most one query per node");
    queries
}

/// The pairs as node records, `CAPACITY_FACTOR * n` cells.
pub(crate) fn wspd_nodes(n: usize, tree: &CompressedQuadtree, s: &Separation) -> Result<(NodePairs, usize), WspdError> {
    let bits = tree.bits;
    let capacity = CAPACITY_FACTOR * n;
    let offsets = s.neighbor_offsets();
    let fams = families(&tree.nodes);
    let len = fams.len();

    let per_round = 5 * len;
    let mut cand = TracedArray::new(tree.nodes.tracer(), offsets.len() * per_round, Padded::Blank);
    for (round, &o) in offsets.iter().enumerate() {
        let located = locate(&fams, o, bits);
        for slot in 0..len {
            let base = round * per_round + 5 * slot;
            let (x, b, top) = match located.read(slot) {
                Padded::Item(Probe::Query { fam, found, .. }) => (Some(fam.node), fam.parent, found),
                _ => (None, None, None),
            };
            // each candidate with its parent
            let ys: [Option<(NodeRef, Option<NodeRef>)>; 5] = std::array::from_fn(|k| match (&top, b) {
                (Some(u), _) if k == 0 => Some((u.node, u.parent)),
                (Some(u), Some(b)) if u.node.cell.depth == b.cell.depth => u.kids[k - 1].map(|c| (c, Some(u.node))),
                _ => None,
            });
            for (yi, y) in ys.iter().enumerate() {
                let pair = match (b, x, y) {
                    (Some(b), Some(x), Some((y, py))) if x.id != y.id => {
                        let (bb, bx, by) = (b.ball(bits), x.ball(bits), y.ball(bits));
                        let keep = separated(&bx, &by, s) && !separated(&bb, &by, s) && by.r_sq <= bb.r_sq;
                        // the same pair is also produced from y's side
                        let mirrored = py.is_some_and(|py| {
                            let bp = py.ball(bits);
                            !separated(&bp, &bx, s) && bx.r_sq <= bp.r_sq && bp.r_sq <= bb.r_sq
                        });
                        (keep && (!mirrored || x.id < y.id)).then_some((x, *y))
                    }
                    _ => None,
                };
                cand.write(base + yi, pair.into());
            }
        }
    }
    let out_cap = capacity.min(cand.len());
    match compact_to(&cand, out_cap, |_| true) {
        Ok(found) => Ok(found),
        Err(crate::error::CoreError::CompactionOverflow { flagged, .. }) => Err(WspdError::Overflow { pairs: flagged, capacity }),
        Err(e) => unreachable!("{e}"),
    }
}

/// Pairs covering every unordered pair of distinct points, at most
/// [`CAPACITY_FACTOR`]` * n` of them. The construction is deterministic:
/// `rng` is accepted for interface uniformity and left untouched.
pub fn wspd(
    points: &TracedArray<GridPoint>,
    tree: &CompressedQuadtree,
    s: &Separation,
    _rng: &mut SeededRng,
) -> Result<Wspd, WspdError> {
    let (nodes, count) = wspd_nodes(points.len(), tree, s)?;
    let mut pairs = TracedArray::new(nodes.tracer(), nodes.len(), Padded::Blank);
    for i in 0..nodes.len() {
        let p = nodes.read(i).into_item().map(|(a, b)| WspdPair { a: a.id, b: b.id });
        pairs.write(i, p.into());
    }
    Ok(Wspd { separation: *s, pairs, count })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(depth: u32, x: i64, y: i64, bits: u32, leaf: bool) -> QuadNode {
        QuadNode {
            id: 0,
            cell: QuadBox::from_corner(x, y, bits, depth).unwrap(),
            parent: None,
            children: [None; 4],
            point: leaf.then_some(0),
        }
    }

    #[test]
    fn offsets_for_default_separation() {
        let s = Separation::default_2_1();
        assert_eq!(s.neighbor_radius(), 3);
        let offs = s.neighbor_offsets();
        assert_eq!(offs.len(), 37);
        assert!(offs.contains(&(3, 1)) && !offs.contains(&(3, 2)));
        for o in [(1, 0), (1, 1), (0, -1), (-1, -1)] {
            assert!(offs.contains(&o));
        }
    }

    #[test]
    fn separation_examples() {
        let s = Separation::default_2_1();
        let bits = 6;
        // unit boxes at center distance 10
        let a = node(5, 0, 0, bits, false);
        let b = node(5, 20, 0, bits, false);
        assert!(well_separated(&a, &b, bits, &s));
        let c = node(5, 2, 0, bits, false);
        assert!(!well_separated(&a, &c, bits, &s));
        let p = node(bits, 3, 3, bits, true);
        let q = node(bits, 4, 3, bits, true);
        assert!(well_separated(&p, &q, bits, &s));
    }

    #[test]
    fn corner_box_pads_off_grid() {
        let s = Separation::default_2_1();
        let a = node(2, 0, 0, 4, false);
        let nb = neighbor_boxes(&a, 4, &s);
        assert_eq!(nb.len(), 48);
        assert_eq!(nb.iter().filter(|b| b.is_some()).count(), 3 * 3 + 4 - 1);
    }

    #[test]
    fn rejects_small_separation() {
        assert!(Separation::new(2, 1).is_err());
        assert!(Separation::new(21, 10).is_ok());
    }
}
