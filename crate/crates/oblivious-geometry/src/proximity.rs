//! Closest pair and all nearest neighbors from the WSPD.
//!
//! Singleton-singleton pairs give the closest pair directly. For nearest
//! neighbors every pair `({a}, B)` makes `a` a candidate of box `B`; each box
//! keeps the candidate closest to its center per wedge, and the surviving
//! lists are pushed down the tree by pointer doubling to the leaves they can
//! still serve.

use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::error::ProximityError;
use crate::hull::GridPoint;
use crate::primitives::{compact_to, deliver, lookup, Padded};
use crate::quadtree::{build_compressed_quadtree, CompressedQuadtree, QuadBox, QuadNode, MAX_GRID_BITS};
use crate::trace::TracedArray;
use crate::wspd::{wspd_nodes, NodePairs, NodeRef, Separation};

/// Wedges around a box center (30 degrees each).
pub const WEDGES: usize = 12;

/// Entries kept per node while pushing candidate lists down.
pub const LIST_CAPACITY: usize = WEDGES + 4;

/// Capacity of the `(a, B)` candidate array is `CANDIDATE_FACTOR * n`.
pub const CANDIDATE_FACTOR: usize = 128;

/// A point `a` from a WSPD pair `({a}, B)`, with `B`'s node id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidatePair {
    pub a: usize,
    pub x: i64,
    pub y: i64,
    pub node: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClosestPair {
    pub dist_sq: u64,
    /// The smaller id.
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neighbor {
    pub id: usize,
    pub neighbor: usize,
    pub dist_sq: u64,
}

#[derive(Debug)]
pub struct NeighborResult {
    /// In input order.
    pub neighbors: TracedArray<Neighbor>,
    /// List entries dropped because a node's list was full.
    pub truncated: usize,
}

impl NeighborResult {
    pub fn neighbor_list(&self) -> Vec<Neighbor> {
        self.neighbors.contents().to_vec()
    }
}

/// The points that may have each leaf's point as nearest neighbor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateLists {
    /// `(b, candidates)` per point, in tree order.
    pub lists: Vec<(usize, Vec<usize>)>,
    pub truncated: usize,
}

pub fn dist_sq(ax: i64, ay: i64, bx: i64, by: i64) -> u64 {
    let (dx, dy) = (ax.abs_diff(bx), ay.abs_diff(by));
    dx * dx + dy * dy
}

/// Wedge of direction `(dx, dy)` among `wedges` equal wedges, counterclockwise
/// from the positive x axis, each closed at its first boundary. `wedges` must
/// be 4, 8 or 12.
pub fn wedge_index(dx: i64, dy: i64, wedges: usize) -> usize {
    assert!(matches!(wedges, 4 | 8 | 12), "wedge count must be 4, 8 or 12, got {wedges}");
    let (quadrant, u, v) = if dx > 0 && dy >= 0 {
        (0, dx, dy)
    } else if dx <= 0 && dy > 0 {
        (1, dy, -dx)
    } else if dx < 0 && dy <= 0 {
        (2, -dx, -dy)
    } else {
        (3, -dy, dx)
    };
    let (u, v) = (u as i128, v as i128);
    let k = wedges / 4;
    let sub = match k {
        1 => 0,
        2 => usize::from(v >= u),
        _ => {
            if 3 * v * v < u * u {
                0
            } else if v * v < 3 * u * u {
                1
            } else {
                2
            }
        }
    };
    quadrant * k + sub
}

fn center_key(c: &CandidatePair, center2: (i64, i64)) -> (u128, usize) {
    let dx = (2 * c.x - center2.0).unsigned_abs() as u128;
    let dy = (2 * c.y - center2.1).unsigned_abs() as u128;
    (dx * dx + dy * dy, c.a)
}

fn wedge_of(c: &CandidatePair, center2: (i64, i64), wedges: usize) -> usize {
    wedge_index(2 * c.x - center2.0, 2 * c.y - center2.1, wedges)
}

fn offer(best: &mut [Option<CandidatePair>], c: &CandidatePair, center2: (i64, i64)) {
    let w = wedge_of(c, center2, best.len());
    if best[w].is_none_or(|b| center_key(c, center2) < center_key(&b, center2)) {
        best[w] = Some(*c);
    }
}

/// Keeps, per wedge around `center2` (the center with doubled coordinates),
/// the candidate closest to the center; the others become blanks.
pub fn wedge_prune(
    candidates: &TracedArray<Padded<CandidatePair>>,
    center2: (i64, i64),
    wedges: usize,
) -> TracedArray<Padded<CandidatePair>> {
    let mut best = vec![None; wedges];
    for i in 0..candidates.len() {
        if let Padded::Item(c) = candidates.read(i) {
            offer(&mut best, &c, center2);
        }
    }
    let mut out = TracedArray::new(candidates.tracer(), candidates.len(), Padded::Blank);
    for i in 0..candidates.len() {
        let c = candidates.read(i);
        let keep = c.item().is_some_and(|c| best[wedge_of(c, center2, wedges)] == Some(*c));
        out.write(i, if keep { c } else { Padded::Blank });
    }
    out
}

fn grid_bits(points: &TracedArray<GridPoint>) -> u32 {
    let mut hi = 1i64;
    for i in 0..points.len() {
        let p = points.read(i);
        hi = hi.max(p.x).max(p.y);
    }
    (64 - (hi as u64).leading_zeros()).min(MAX_GRID_BITS)
}

fn tree_and_pairs(points: &TracedArray<GridPoint>, s: &Separation) -> Result<(CompressedQuadtree, NodePairs), ProximityError> {
    let n = points.len();
    if n < 2 {
        return Err(ProximityError::TooFewPoints(n));
    }
    let tree = build_compressed_quadtree(points, grid_bits(points))?;
    let (pairs, _) = wspd_nodes(n, &tree, s)?;
    Ok((tree, pairs))
}

fn leaf_point(node: &NodeRef, bits: u32) -> Option<(usize, i64, i64)> {
    let (x, y) = node.cell.corner(bits);
    node.point.map(|id| (id, x as i64, y as i64))
}

/// A globally closest pair, ties to the smallest `(a, b)`.
pub fn closest_pair(points: &TracedArray<GridPoint>) -> Result<ClosestPair, ProximityError> {
    closest_pair_with(points, &Separation::default_2_1())
}

pub fn closest_pair_with(points: &TracedArray<GridPoint>, s: &Separation) -> Result<ClosestPair, ProximityError> {
    let (tree, pairs) = tree_and_pairs(points, s)?;
    let mut best: Option<ClosestPair> = None;
    for i in 0..pairs.len() {
        let Padded::Item((x, y)) = pairs.read(i) else { continue };
        if let (Some((p, px, py)), Some((q, qx, qy))) = (leaf_point(&x, tree.bits), leaf_point(&y, tree.bits)) {
            let c = ClosestPair { dist_sq: dist_sq(px, py, qx, qy), a: p.min(q), b: p.max(q) };
            if best.is_none_or(|b| c < b) {
                best = Some(c);
            }
        }
    }
    Ok(best.expect("a closest pair is always a singleton pair"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Entry {
    a: usize,
    x: i64,
    y: i64,
    /// Squared distance from `a` to the nearest other member of its box's
    /// pruned list.
    bound: u64,
}

type List = Rc<[Option<Entry>; LIST_CAPACITY]>;

type Members = Rc<[Option<CandidatePair>; WEDGES]>;

#[derive(Clone, Copy, Debug)]
struct Slim {
    id: usize,
    cell: QuadBox,
    point: Option<usize>,
    parent: Option<usize>,
}

impl Slim {
    fn of(v: &QuadNode) -> Self {
        Slim { id: v.id, cell: v.cell, point: v.point, parent: v.parent }
    }
}

#[derive(Clone, Debug)]
struct Rec {
    id: usize,
    cell: QuadBox,
    point: Option<usize>,
    anc: Option<usize>,
    list: List,
}

fn box_dist_sq(cell: &QuadBox, bits: u32, x: i64, y: i64) -> u64 {
    let (x0, y0) = cell.corner(bits);
    let (x0, y0) = (x0 as i64, y0 as i64);
    let last = cell.side(bits) as i64 - 1;
    let dx = (x0 - x).max(x - x0 - last).max(0);
    let dy = (y0 - y).max(y - y0 - last).max(0);
    (dx * dx + dy * dy) as u64
}

/// Entries that can still reach a point of `cell`, closest first, cut to
/// [`LIST_CAPACITY`]. Returns the list and the number cut.
fn filtered(cell: &QuadBox, bits: u32, entries: impl Iterator<Item = Entry>) -> (List, usize) {
    let mut live: Vec<(u64, Entry)> = entries
        .map(|e| (box_dist_sq(cell, bits, e.x, e.y), e))
        .filter(|(d, e)| *d <= e.bound)
        .collect();
    live.sort_by_key(|(d, e)| (*d, e.a));
    let cut = live.len().saturating_sub(LIST_CAPACITY);
    let mut list = [None; LIST_CAPACITY];
    for (slot, (_, e)) in list.iter_mut().zip(live) {
        *slot = Some(e);
    }
    (Rc::new(list), cut)
}

fn own_entries(members: &[Option<CandidatePair>; WEDGES]) -> Vec<Entry> {
    let present: Vec<&CandidatePair> = members.iter().flatten().collect();
    present
        .iter()
        .map(|c| {
            let bound = present
                .iter()
                .filter(|o| o.a != c.a)
                .map(|o| dist_sq(c.x, c.y, o.x, o.y))
                .min()
                .unwrap_or(u64::MAX);
            Entry { a: c.a, x: c.x, y: c.y, bound }
        })
        .collect()
}

/// Leaf records holding `N'(b)`, and the number of entries cut.
fn leaf_lists(tree: &CompressedQuadtree, pairs: &NodePairs, n: usize) -> Result<(TracedArray<Padded<Rec>>, usize), ProximityError> {
    let bits = tree.bits;
    let tracer = tree.nodes.tracer();

    let mut cands = TracedArray::new(tracer, 2 * pairs.len(), Padded::Blank);
    for i in 0..pairs.len() {
        let pair = pairs.read(i).into_item();
        for (k, slot) in [2 * i, 2 * i + 1].into_iter().enumerate() {
            let c = pair.and_then(|(x, y)| {
                let (single, other) = if k == 0 { (x, y) } else { (y, x) };
                let (a, px, py) = leaf_point(&single, bits)?;
                let b = other.ball(bits);
                Some((CandidatePair { a, x: px, y: py, node: other.id }, (b.cx, b.cy)))
            });
            cands.write(slot, c.into());
        }
    }
    let capacity = (CANDIDATE_FACTOR * n).min(cands.len());
    let cands = match compact_to(&cands, capacity, |_| true) {
        Ok((c, _)) => c,
        Err(crate::error::CoreError::CompactionOverflow { flagged, .. }) => {
            return Err(ProximityError::Overflow { candidates: flagged, capacity })
        }
        Err(e) => unreachable!("{e}"),
    };

    let len = tree.nodes.len();
    let mut table = TracedArray::new(tracer, len, Padded::Blank);
    for i in 0..len {
        let node = tree.nodes.read(i);
        table.write(i, node.into_item().map(|v| (Slim::of(&v), Rc::new([None; WEDGES]))).into());
    }
    deliver(
        &mut table,
        |t: &(Slim, Members)| t.0.id,
        &cands,
        |c: &(CandidatePair, (i64, i64))| c.0.node,
        || [None; WEDGES],
        |acc, c| offer(acc, &c.0, c.1),
        |t, acc| t.1 = Rc::new(*acc),
    );

    let mut truncated = 0;
    let mut recs = TracedArray::new(tracer, len, Padded::Blank);
    for i in 0..len {
        let rec = table.read(i).into_item().map(|(v, members)| {
            let (list, cut) = filtered(&v.cell, bits, own_entries(&members).into_iter());
            truncated += cut;
            Rec { id: v.id, cell: v.cell, point: v.point, anc: v.parent, list }
        });
        recs.write(i, rec.into());
    }

    // each round doubles the number of ancestors folded into every list
    let rounds = len.next_power_of_two().trailing_zeros();
    for _ in 0..rounds {
        let found = lookup(&recs, |r: &Rec| r.id, &recs, |r: &Rec| r.anc);
        let mut next = TracedArray::new(tracer, len, Padded::Blank);
        for i in 0..len {
            let rec = found.read(i).into_item().map(|(mut r, hit)| {
                if let Some(h) = hit {
                    let (list, cut) = filtered(&r.cell, bits, r.list.iter().chain(h.list.iter()).flatten().copied());
                    truncated += cut;
                    r.list = list;
                    r.anc = h.anc;
                }
                r
            });
            next.write(i, rec.into());
        }
        recs = next;
    }
    let (leaves, _) = compact_to(&recs, n, |r| r.point.is_some()).expect("n leaves");
    Ok((leaves, truncated))
}

/// `N'(b)` for every point `b`: the points whose nearest neighbor may be `b`.
pub fn neighbor_candidates(points: &TracedArray<GridPoint>, s: &Separation) -> Result<CandidateLists, ProximityError> {
    let (tree, pairs) = tree_and_pairs(points, s)?;
    let (leaves, truncated) = leaf_lists(&tree, &pairs, points.len())?;
    let lists = leaves
        .contents()
        .iter()
        .filter_map(|r| r.item())
        .map(|r| (r.point.unwrap_or(usize::MAX), r.list.iter().flatten().map(|e| e.a).collect()))
        .collect();
    Ok(CandidateLists { lists, truncated })
}

/// Nearest neighbor of every point, squared-distance ties to the smaller id.
pub fn all_nearest_neighbors(points: &TracedArray<GridPoint>) -> Result<NeighborResult, ProximityError> {
    all_nearest_neighbors_with(points, &Separation::default_2_1())
}

pub fn all_nearest_neighbors_with(points: &TracedArray<GridPoint>, s: &Separation) -> Result<NeighborResult, ProximityError> {
    let n = points.len();
    let (tree, pairs) = tree_and_pairs(points, s)?;
    let (leaves, truncated) = leaf_lists(&tree, &pairs, n)?;
    let tracer = points.tracer();

    let mut msgs = TracedArray::new(tracer, n * LIST_CAPACITY, Padded::Blank);
    for i in 0..n {
        let leaf = leaves.read(i).into_item();
        for k in 0..LIST_CAPACITY {
            let m = leaf.as_ref().and_then(|r| {
                let e = r.list[k]?;
                let (b, (bx, by)) = (r.point?, r.cell.corner(tree.bits));
                Some((e.a, dist_sq(e.x, e.y, bx as i64, by as i64), b))
            });
            msgs.write(i * LIST_CAPACITY + k, m.into());
        }
    }
    let mut table = TracedArray::new(tracer, n, Padded::Blank);
    for i in 0..n {
        table.write(i, Padded::Item((points.read(i).id, None::<(u64, usize)>)));
    }
    deliver(
        &mut table,
        |t: &(usize, Option<(u64, usize)>)| t.0,
        &msgs,
        |m: &(usize, u64, usize)| m.0,
        || None::<(u64, usize)>,
        |acc, m| {
            if acc.is_none_or(|b| (m.1, m.2) < b) {
                *acc = Some((m.1, m.2));
            }
        },
        |t, acc| t.1 = *acc,
    );
    let mut lost = None;
    let mut neighbors = TracedArray::new(tracer, n, Neighbor { id: 0, neighbor: 0, dist_sq: 0 });
    for i in 0..n {
        let (id, best) = table.read(i).into_item().expect("one record per point");
        let (dist_sq, neighbor) = best.unwrap_or_else(|| {
            lost.get_or_insert(id);
            (u64::MAX, id)
        });
        neighbors.write(i, Neighbor { id, neighbor, dist_sq });
    }
    match lost {
        Some(id) => Err(ProximityError::LostNeighbor { id, truncated }),
        None => Ok(NeighborResult { neighbors, truncated }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::Tracer;

    fn cand(a: usize, x: i64, y: i64) -> CandidatePair {
        CandidatePair { a, x, y, node: 0 }
    }

    fn pts(raw: &[(i64, i64)]) -> TracedArray<GridPoint> {
        let t = Tracer::counting();
        TracedArray::from_vec(&t, raw.iter().enumerate().map(|(i, &(x, y))| GridPoint::new(x, y, i)).collect())
    }

    #[test]
    fn wedge_boundaries() {
        assert_eq!(wedge_index(1, 0, 12), 0);
        assert_eq!(wedge_index(10, 5, 12), 0);
        assert_eq!(wedge_index(10, 6, 12), 1);
        assert_eq!(wedge_index(1, 1, 12), 1);
        assert_eq!(wedge_index(1, 2, 12), 2);
        assert_eq!(wedge_index(0, 1, 12), 3);
        assert_eq!(wedge_index(-1, 0, 12), 6);
        assert_eq!(wedge_index(0, -1, 12), 9);
        assert_eq!(wedge_index(1, -1, 12), 10);
        assert_eq!(wedge_index(1, -1, 4), 3);
        assert_eq!(wedge_index(-1, -1, 8), 5);
    }

    #[test]
    fn single_candidate_survives() {
        let t = Tracer::counting();
        let c = TracedArray::from_vec(&t, vec![Padded::Item(cand(0, 50, 50))]);
        assert_eq!(wedge_prune(&c, (0, 0), WEDGES).contents(), c.contents());
    }

    #[test]
    fn farther_in_same_wedge_is_pruned() {
        let t = Tracer::counting();
        let c = TracedArray::from_vec(&t, vec![Padded::Item(cand(0, 100, 10)), Padded::Item(cand(1, 40, 4)), Padded::Item(cand(2, -40, 0))]);
        let out = wedge_prune(&c, (0, 0), WEDGES);
        assert_eq!(out.contents()[0], Padded::Blank);
        assert_eq!(out.contents()[1], Padded::Item(cand(1, 40, 4)));
        assert_eq!(out.contents()[2], Padded::Item(cand(2, -40, 0)));
    }

    #[test]
    fn two_points() {
        let p = pts(&[(0, 0), (3, 4)]);
        assert_eq!(closest_pair(&p).unwrap(), ClosestPair { dist_sq: 25, a: 0, b: 1 });
        let nn = all_nearest_neighbors(&p).unwrap().neighbor_list();
        assert_eq!(nn[0], Neighbor { id: 0, neighbor: 1, dist_sq: 25 });
        assert_eq!(nn[1], Neighbor { id: 1, neighbor: 0, dist_sq: 25 });
    }

    #[test]
    fn collinear_tie_goes_to_smaller_id() {
        let p = pts(&[(0, 0), (4, 0), (2, 0)]);
        let nn = all_nearest_neighbors(&p).unwrap().neighbor_list();
        assert_eq!(nn[2].neighbor, 0);
        assert_eq!(nn[2].dist_sq, 4);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(closest_pair(&pts(&[(1, 1)])), Err(ProximityError::TooFewPoints(1))));
        assert!(matches!(all_nearest_neighbors(&pts(&[])), Err(ProximityError::TooFewPoints(0))));
    }
}
