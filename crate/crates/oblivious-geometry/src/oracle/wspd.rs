//! All-pairs coverage and separation check for a pair decomposition.

use std::collections::HashMap;

use crate::quadtree::QuadNode;
use crate::wspd::WspdPair;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WspdCheck {
    pub point_pairs: u64,
    pub covered: u64,
    pub pairs: usize,
    pub separated: usize,
    pub nested: usize,
}

impl WspdCheck {
    pub fn ok(&self) -> bool {
        self.covered == self.point_pairs && self.separated == self.pairs && self.nested == 0
    }
}

fn corner(prefix: u64, depth: u32, bits: u32) -> (i128, i128) {
    let (mut x, mut y) = (0i128, 0i128);
    for l in (0..depth).rev() {
        let g = (prefix >> (2 * l)) & 3;
        x = 2 * x + (g & 1) as i128;
        y = 2 * y + (g >> 1) as i128;
    }
    (x << (bits - depth), y << (bits - depth))
}

// doubled center and doubled squared radius
fn ball(n: &QuadNode, bits: u32) -> (i128, i128, i128) {
    let (x, y) = corner(n.cell.prefix, n.cell.depth, bits);
    if n.point.is_some() {
        (2 * x, 2 * y, 0)
    } else {
        let side = 1i128 << (bits - n.cell.depth);
        (2 * x + side, 2 * y + side, 2 * side * side)
    }
}

/// Checks pairs over the tree `nodes` (ids are indices) built on `n` points
/// with separation `num / den`.
pub fn wspd_checker(nodes: &[QuadNode], n: usize, bits: u32, pairs: &[WspdPair], num: u64, den: u64) -> WspdCheck {
    let by_id: HashMap<usize, &QuadNode> = nodes.iter().map(|v| (v.id, v)).collect();
    let mut under: HashMap<usize, Vec<usize>> = HashMap::new();
    fn collect(id: usize, by_id: &HashMap<usize, &QuadNode>, under: &mut HashMap<usize, Vec<usize>>) -> Vec<usize> {
        let v = by_id[&id];
        let mut pts: Vec<usize> = v.point.into_iter().collect();
        for c in v.children.iter().flatten() {
            pts.extend(collect(*c, by_id, under));
        }
        under.insert(id, pts.clone());
        pts
    }
    if let Some(root) = nodes.iter().find(|v| v.parent.is_none()) {
        collect(root.id, &by_id, &mut under);
    }
    let mut seen = vec![false; n * n];
    let mut check = WspdCheck { point_pairs: (n * n.saturating_sub(1) / 2) as u64, pairs: pairs.len(), ..Default::default() };
    let t = (num + 2 * den) as i128;
    for p in pairs {
        let (a, b) = (&under[&p.a], &under[&p.b]);
        if a.iter().any(|x| b.contains(x)) {
            check.nested += 1;
        }
        let (ax, ay, ar) = ball(by_id[&p.a], bits);
        let (bx, by, br) = ball(by_id[&p.b], bits);
        let d2 = (ax - bx).pow(2) + (ay - by).pow(2);
        if (den as i128).pow(2) * d2 >= t * t * ar.max(br) {
            check.separated += 1;
        }
        for &x in a {
            for &y in b {
                seen[x * n + y] = true;
                seen[y * n + x] = true;
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if seen[x * n + y] {
                check.covered += 1;
            }
        }
    }
    check
}
