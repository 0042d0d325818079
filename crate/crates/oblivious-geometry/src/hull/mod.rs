//! Oblivious convex hull by divide and conquer with a four-round tangent
//! search at every merge.
//!
//! Collinear boundary points are all reported as hull vertices, including
//! every point of the leftmost and rightmost columns.

mod predicates;
mod tangent;

use std::cmp::Reverse;

pub use predicates::{
    classify_against_vertex, classify_edge, slope_cmp, strictly_above, Classification, EdgeLabel, HullEdge,
    HullVertex, IntersectionCase, Separator, Side, COORD_LIMIT,
};
pub use tangent::{find_upper_tangent, round_computation, ROUNDS};

use crate::error::HullError;
use crate::primitives::{compact_in_place, oblivious_sort_by_key, sort_padded_by_key, Padded};
use crate::trace::TracedArray;
use predicates::side_of_chord;

/// An input point. `id` is its index in the caller's array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
    pub id: usize,
}

impl GridPoint {
    pub fn new(x: i64, y: i64, id: usize) -> Self {
        GridPoint { x, y, id }
    }
}

/// The hull edge over a point, by endpoint ids. `right == None` is the
/// vertical edge at the rightmost hull vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct EdgeRef {
    pub left: usize,
    pub right: Option<usize>,
}

/// Per-point edge labels (indexed by input position) and the vertex ids in
/// `(x, y, id)` order followed by blanks.
#[derive(Debug)]
pub struct HullRepresentation {
    pub upper: TracedArray<EdgeRef>,
    pub lower: TracedArray<EdgeRef>,
    pub vertices: TracedArray<Padded<usize>>,
}

impl HullRepresentation {
    pub fn vertex_ids(&self) -> Vec<usize> {
        self.vertices.contents().iter().filter_map(|c| c.item().copied()).collect()
    }
}

#[derive(Clone, Copy, Debug)]
struct Label {
    left: HullVertex,
    right: Option<HullVertex>,
}

fn base_case(work: &TracedArray<HullVertex>, labels: &mut TracedArray<Label>, lo: usize, hi: usize) {
    let pts: Vec<HullVertex> = (lo..hi).map(|i| work.read(i)).collect();
    let m = pts.len();
    let vertex: Vec<bool> = (0..m)
        .map(|p| {
            !(0..p).any(|a| (p + 1..m).any(|b| side_of_chord(&pts[a], &pts[b], &pts[p]) == std::cmp::Ordering::Less))
        })
        .collect();
    for p in 0..m {
        let q = (0..=p).rev().find(|&i| vertex[i]).expect("first point is a vertex");
        let r = (q + 1..m).find(|&i| vertex[i]);
        labels.write(lo + p, Label { left: pts[q], right: r.map(|r| pts[r]) });
    }
}

fn vertex_list(work: &TracedArray<HullVertex>, labels: &TracedArray<Label>, lo: usize, hi: usize) -> TracedArray<Padded<HullVertex>> {
    let mut out = TracedArray::new(work.tracer(), hi - lo, Padded::Blank);
    for i in lo..hi {
        let p = work.read(i);
        let l = labels.read(i);
        out.write(i - lo, if l.left.pos == p.pos { Padded::Item(p) } else { Padded::Blank });
    }
    compact_in_place(&mut out, |_| true);
    out
}

fn merge(work: &TracedArray<HullVertex>, labels: &mut TracedArray<Label>, lo: usize, mid: usize, hi: usize) {
    let v1 = vertex_list(work, labels, lo, mid);
    let v2 = vertex_list(work, labels, mid, hi);
    let sep = Separator::before(&work.read(mid));
    let (q, r) = find_upper_tangent(&v1, mid - lo, &v2, hi - mid, &sep);
    for i in lo..hi {
        let p = work.read(i);
        let old = labels.read(i);
        let bridged = if i < mid { p.pos >= q.pos } else { p.pos < r.pos };
        labels.write(i, if bridged { Label { left: q, right: Some(r) } } else { old });
    }
}

fn solve(work: &TracedArray<HullVertex>, labels: &mut TracedArray<Label>, lo: usize, hi: usize) {
    if hi - lo <= 4 {
        base_case(work, labels, lo, hi);
        return;
    }
    let mid = lo + (hi - lo).div_ceil(2);
    solve(work, labels, lo, mid);
    solve(work, labels, mid, hi);
    merge(work, labels, lo, mid, hi);
}

/// Upper hull labels; with `flip` the lower hull of the mirrored points.
/// Output is indexed by input position.
fn half_hull(points: &TracedArray<GridPoint>, flip: bool) -> TracedArray<EdgeRef> {
    let n = points.len();
    let tracer = points.tracer();
    let zero = HullVertex { x: 0, y: 0, t: 0, pos: 0, id: 0 };
    let mut work = TracedArray::new(tracer, n, zero);
    for i in 0..n {
        let p = points.read(i);
        work.write(i, HullVertex { x: p.x, y: if flip { -p.y } else { p.y }, t: 0, pos: 0, id: p.id as u32 });
    }
    oblivious_sort_by_key(&mut work, |v| (v.x, Reverse(v.y), v.id));
    let mut prev_x = None;
    let mut t = 0;
    for i in 0..n {
        let mut v = work.read(i);
        t = if prev_x == Some(v.x) { t + 1 } else { 0 };
        prev_x = Some(v.x);
        v.t = t;
        v.pos = i as u32;
        work.write(i, v);
    }
    let mut labels = TracedArray::new(tracer, n, Label { left: zero, right: None });
    solve(&work, &mut labels, 0, n);
    // the rightmost column hangs off its top point
    let x_max = work.read(n - 1).x;
    let mut top = None;
    let mut keyed = TracedArray::new(tracer, n, (0usize, EdgeRef { left: 0, right: None }));
    for i in 0..n {
        let p = work.read(i);
        let mut l = labels.read(i);
        if p.x == x_max {
            let top = *top.get_or_insert(p);
            l = Label { left: top, right: None };
        }
        let e = EdgeRef { left: l.left.id as usize, right: l.right.map(|r| r.id as usize) };
        keyed.write(i, (p.id as usize, e));
    }
    oblivious_sort_by_key(&mut keyed, |&(id, _)| id);
    let mut out = TracedArray::new(tracer, n, EdgeRef { left: 0, right: None });
    for i in 0..n {
        out.write(i, keyed.read(i).1);
    }
    out
}

/// Computes the hull of points with distinct coordinates below
/// [`COORD_LIMIT`] in magnitude. Point ids must be `0..n` in input order.
pub fn convex_hull(points: &TracedArray<GridPoint>) -> Result<HullRepresentation, HullError> {
    let n = points.len();
    if n == 0 {
        return Err(HullError::Empty);
    }
    let tracer = points.tracer();
    let mut bad = None;
    let mut x_min = i64::MAX;
    let mut x_max = i64::MIN;
    let mut by_xy = TracedArray::new(tracer, n, GridPoint::new(0, 0, 0));
    for i in 0..n {
        let p = points.read(i);
        assert_eq!(p.id, i, "point ids must equal input positions");
        if bad.is_none() && (p.x.abs() >= COORD_LIMIT || p.y.abs() >= COORD_LIMIT) {
            bad = Some(p);
        }
        x_min = x_min.min(p.x);
        x_max = x_max.max(p.x);
        by_xy.write(i, p);
    }
    if let Some(p) = bad {
        return Err(HullError::CoordinateOutOfRange { id: p.id, x: p.x, y: p.y, limit: COORD_LIMIT });
    }
    oblivious_sort_by_key(&mut by_xy, |p| (p.x, p.y, p.id));
    let mut dup = None;
    let mut prev: Option<GridPoint> = None;
    for i in 0..n {
        let p = by_xy.read(i);
        if let Some(q) = prev {
            if dup.is_none() && (q.x, q.y) == (p.x, p.y) {
                dup = Some((q, p));
            }
        }
        prev = Some(p);
    }
    if let Some((a, b)) = dup {
        return Err(HullError::DuplicatePoint { first: a.id, second: b.id, x: a.x, y: a.y });
    }
    let upper = half_hull(points, false);
    let lower = half_hull(points, true);
    let mut flagged = TracedArray::new(tracer, n, Padded::Blank);
    for i in 0..n {
        let p = points.read(i);
        let u = upper.read(i);
        let l = lower.read(i);
        let on_hull = u.left == p.id || l.left == p.id || p.x == x_min || p.x == x_max;
        flagged.write(i, if on_hull { Padded::Item(p) } else { Padded::Blank });
    }
    sort_padded_by_key(&mut flagged, |p| (p.x, p.y, p.id));
    let mut vertices = TracedArray::new(tracer, n, Padded::Blank);
    for i in 0..n {
        let c = flagged.read(i);
        vertices.write(i, match c {
            Padded::Item(p) => Padded::Item(p.id),
            Padded::Blank => Padded::Blank,
        });
    }
    Ok(HullRepresentation { upper, lower, vertices })
}
