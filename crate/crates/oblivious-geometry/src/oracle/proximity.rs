//! Quadratic nearest-neighbor and closest-pair scans.

use crate::hull::GridPoint;

fn d2(p: &GridPoint, q: &GridPoint) -> u64 {
    let dx = p.x.abs_diff(q.x);
    let dy = p.y.abs_diff(q.y);
    dx * dx + dy * dy
}

/// `(neighbor id, squared distance)` per point in input order, ties to the
/// smaller id. Points with no other point get `None`.
pub fn nn_oracle(points: &[GridPoint]) -> Vec<Option<(usize, u64)>> {
    points
        .iter()
        .map(|p| {
            points
                .iter()
                .filter(|q| q.id != p.id)
                .map(|q| (d2(p, q), q.id))
                .min()
                .map(|(d, id)| (id, d))
        })
        .collect()
}

/// Smallest squared distance over all pairs, with the lexicographically
/// smallest `(a, b)`, `a < b`, realizing it.
pub fn closest_pair_oracle(points: &[GridPoint]) -> Option<(usize, usize, u64)> {
    let mut best: Option<(u64, usize, usize)> = None;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let c = (d2(p, q), p.id.min(q.id), p.id.max(q.id));
            if best.is_none_or(|b| c < b) {
                best = Some(c);
            }
        }
    }
    best.map(|(d, a, b)| (a, b, d))
}
