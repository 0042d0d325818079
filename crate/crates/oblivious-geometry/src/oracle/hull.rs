//! Monotone-chain hull with the same vertex and label conventions as
//! [`crate::hull::convex_hull`].

use std::collections::BTreeSet;

use crate::hull::{EdgeRef, GridPoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullAnswer {
    pub upper: Vec<EdgeRef>,
    pub lower: Vec<EdgeRef>,
    pub vertices: Vec<usize>,
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

// chain over column tops, keeping collinear points
fn upper_labels(pts: &[GridPoint], flip: bool) -> Vec<EdgeRef> {
    let key = |p: &GridPoint| (p.x, if flip { -p.y } else { p.y });
    let mut order: Vec<&GridPoint> = pts.iter().collect();
    order.sort_by_key(|p| (p.x, std::cmp::Reverse(key(p).1), p.id));
    let mut tops: Vec<&GridPoint> = Vec::new();
    for p in &order {
        if tops.last().is_none_or(|t| t.x != p.x) {
            tops.push(p);
        }
    }
    let mut chain: Vec<&GridPoint> = Vec::new();
    for p in tops {
        while chain.len() >= 2 {
            let a = chain[chain.len() - 2];
            let b = chain[chain.len() - 1];
            if cross(key(a), key(p), key(b)) < 0 {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(p);
    }
    let last = *chain.last().expect("non-empty");
    pts.iter()
        .map(|p| {
            if p.x == last.x {
                return EdgeRef { left: last.id, right: None };
            }
            let k = chain.iter().rposition(|c| c.x <= p.x).expect("leftmost column is on the chain");
            EdgeRef { left: chain[k].id, right: Some(chain[k + 1].id) }
        })
        .collect()
}

/// Points must carry ids `0..n` in order and have distinct coordinates.
pub fn hull_oracle(pts: &[GridPoint]) -> HullAnswer {
    let upper = upper_labels(pts, false);
    let lower = upper_labels(pts, true);
    let x_min = pts.iter().map(|p| p.x).min().expect("non-empty");
    let x_max = pts.iter().map(|p| p.x).max().expect("non-empty");
    let mut set = BTreeSet::new();
    for p in pts {
        if upper[p.id].left == p.id || lower[p.id].left == p.id || p.x == x_min || p.x == x_max {
            set.insert((p.x, p.y, p.id));
        }
    }
    HullAnswer { upper, lower, vertices: set.into_iter().map(|(_, _, id)| id).collect() }
}

/// Vertices `(q, r)` of the common upper tangent of two x-separated sets:
/// `q` the rightmost point of `left` on it and `r` the leftmost of `right`.
pub fn tangent_oracle(left: &[(i64, i64)], right: &[(i64, i64)]) -> ((i64, i64), (i64, i64)) {
    let mut best: Option<((i64, i64), (i64, i64))> = None;
    for &q in left {
        for &r in right {
            let ok = left.iter().chain(right).all(|&p| cross(q, r, p) <= 0);
            if ok {
                let better = match best {
                    None => true,
                    Some((bq, br)) => q.0 > bq.0 || (q == bq && r.0 < br.0),
                };
                if better {
                    best = Some((q, r));
                }
            }
        }
    }
    best.expect("separated sets have a tangent")
}
