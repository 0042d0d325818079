//! Compressed quadtree by recursive splitting into quadrants.

use std::collections::HashSet;

use crate::hull::GridPoint;
use crate::quadtree::{QuadBox, QuadNode};

/// Smallest aligned box holding every point, as (depth, column, row).
fn enclosing(points: &[&GridPoint], bits: u32) -> (u32, i64, i64) {
    let mut depth = bits;
    loop {
        let s = bits - depth;
        let (cx, cy) = (points[0].x >> s, points[0].y >> s);
        if points.iter().all(|p| p.x >> s == cx && p.y >> s == cy) {
            return (depth, cx, cy);
        }
        depth -= 1;
    }
}

fn to_box(depth: u32, col: i64, row: i64) -> QuadBox {
    let mut prefix = 0u64;
    for l in (0..depth).rev() {
        prefix = (prefix << 2) | ((((row >> l) & 1) as u64) << 1) | ((col >> l) & 1) as u64;
    }
    QuadBox { depth, prefix }
}

fn build(points: &[&GridPoint], bits: u32, parent: Option<usize>, out: &mut Vec<QuadNode>) -> usize {
    let id = out.len();
    let (depth, col, row) = enclosing(points, bits);
    let cell = to_box(depth, col, row);
    if points.len() == 1 {
        out.push(QuadNode { id, cell, parent, children: [None; 4], point: Some(points[0].id) });
        return id;
    }
    out.push(QuadNode { id, cell, parent, children: [None; 4], point: None });
    let s = bits - depth - 1;
    for slot in 0..4 {
        let (xb, yb) = ((slot & 1) as i64, (slot >> 1) as i64);
        let part: Vec<&GridPoint> = points.iter().copied().filter(|p| (p.x >> s) & 1 == xb && (p.y >> s) & 1 == yb).collect();
        if !part.is_empty() {
            let child = build(&part, bits, Some(id), out);
            out[id].children[slot] = Some(child);
        }
    }
    id
}

/// Nodes in preorder, children in quadrant order (lower-left, lower-right,
/// upper-left, upper-right). Panics on points off the grid or duplicates.
pub fn quadtree_oracle(points: &[GridPoint], bits: u32) -> Vec<QuadNode> {
    let side = 1i64 << bits;
    assert!(points.iter().all(|p| (0..side).contains(&p.x) && (0..side).contains(&p.y)), "point off the grid");
    let mut seen = HashSet::new();
    assert!(points.iter().all(|p| seen.insert((p.x, p.y))), "duplicate points");
    let refs: Vec<&GridPoint> = points.iter().collect();
    let mut out = Vec::with_capacity(2 * points.len());
    if !refs.is_empty() {
        build(&refs, bits, None, &mut out);
    }
    out
}
