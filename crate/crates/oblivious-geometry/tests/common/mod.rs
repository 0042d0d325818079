#![allow(dead_code)]

use std::collections::HashSet;

use oblivious_geometry::hull::{
    classify_edge, slope_cmp, Classification, EdgeLabel, HullEdge, HullVertex, IntersectionCase, Separator, Side,
};
use oblivious_geometry::oracle::tangent_oracle;
use rand::Rng;

fn cross(o: &HullVertex, a: &HullVertex, b: &HullVertex) -> i128 {
    (a.x - o.x) as i128 * (b.y - o.y) as i128 - (a.y - o.y) as i128 * (b.x - o.x) as i128
}

fn upper_chain(mut pts: Vec<HullVertex>) -> Vec<HullVertex> {
    pts.sort_by_key(|p| p.x);
    let mut chain: Vec<HullVertex> = Vec::new();
    for p in pts {
        while chain.len() >= 2 && cross(&chain[chain.len() - 2], &p, &chain[chain.len() - 1]) < 0 {
            chain.pop();
        }
        chain.push(p);
    }
    chain
}

fn edges(chain: &[HullVertex]) -> Vec<HullEdge> {
    let mut out = vec![HullEdge::LeftDummy(chain[0])];
    out.extend(chain.windows(2).map(|w| HullEdge::Segment(w[0], w[1])));
    out.push(HullEdge::RightDummy(*chain.last().unwrap()));
    out
}

/// Labels from the tangent: an edge is `L` when it ends at or left of the
/// tangent vertex of its own hull.
fn truth(e: &HullEdge, tangent_x: i64) -> EdgeLabel {
    match e {
        HullEdge::LeftDummy(_) => EdgeLabel::L,
        HullEdge::RightDummy(_) => EdgeLabel::R,
        HullEdge::Segment(_, b) if b.x <= tangent_x => EdgeLabel::L,
        HullEdge::Segment(..) => EdgeLabel::R,
    }
}

#[derive(Default, Debug)]
pub struct TripleStats {
    pub triples: u64,
    pub wrong: u64,
    pub x_labels: u64,
    pub bad_forcing: u64,
    pub case_i: u64,
}

/// Draws random x-separated point sets on a `side` x `side` grid, picks an
/// edge `e` of one upper hull and brackets it by a random subsample of the
/// other hull, and checks `classify_edge` against the tangent.
pub fn triple_trials<R: Rng>(rng: &mut R, trials: u64) -> TripleStats {
    let mut st = TripleStats::default();
    while st.triples < trials {
        let side = [6i64, 16, 64, 1 << 20][rng.gen_range(0..4)];
        let n = rng.gen_range(4..40);
        let split = rng.gen_range(1..side);
        let mut seen = HashSet::new();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for _ in 0..n {
            let q = (rng.gen_range(0..side), rng.gen_range(0..side));
            if !seen.insert(q) {
                continue;
            }
            if q.0 < split { left.push(q) } else { right.push(q) }
        }
        if left.is_empty() || right.is_empty() {
            continue;
        }
        // one point per x column so t = 0 throughout
        let dedup = |v: Vec<(i64, i64)>| {
            let mut cols = HashSet::new();
            v.into_iter().filter(|p| cols.insert(p.0)).collect::<Vec<_>>()
        };
        let (left, right) = (dedup(left), dedup(right));
        let mut all: Vec<(i64, i64)> = left.iter().chain(&right).copied().collect();
        all.sort();
        let vert = |p: &(i64, i64)| {
            let pos = all.binary_search(p).unwrap() as u32;
            HullVertex { x: p.0, y: p.1, t: 0, pos, id: pos }
        };
        let h1 = upper_chain(left.iter().map(vert).collect());
        let h2 = upper_chain(right.iter().map(vert).collect());
        let (q, r) = tangent_oracle(&left, &right);
        let sep = Separator::before(&vert(right.iter().min().unwrap()));
        for _ in 0..8 {
            let e_side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
            let (own, other, own_t, other_t) = match e_side {
                Side::Left => (&h1, &h2, q.0, r.0),
                Side::Right => (&h2, &h1, r.0, q.0),
            };
            if own.len() < 2 {
                continue;
            }
            let k = rng.gen_range(0..own.len() - 1);
            let e = HullEdge::Segment(own[k], own[k + 1]);
            let mut sample: Vec<HullEdge> = edges(other)
                .into_iter()
                .filter(|g| g.is_dummy() || rng.gen_bool(0.4))
                .collect();
            sample.dedup();
            let steeper = |g: &HullEdge| match slope_cmp(g, &e) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Equal => e_side == Side::Right,
                _ => false,
            };
            let d = *sample.iter().rev().find(|g| steeper(g)).unwrap();
            let f = *sample.iter().find(|g| !steeper(g)).unwrap();
            let c: Classification = classify_edge(&e, e_side, &d, &f, &sep);
            st.triples += 1;
            if c.case == IntersectionCase::BothLeft && e_side == Side::Left
                || c.case == IntersectionCase::BothRight && e_side == Side::Right
            {
                st.case_i += 1;
            }
            match c.label {
                EdgeLabel::X => {
                    st.x_labels += 1;
                    if truth(&d, other_t) != EdgeLabel::L || truth(&f, other_t) != EdgeLabel::R {
                        st.bad_forcing += 1;
                    }
                }
                l if l != truth(&e, own_t) => st.wrong += 1,
                _ => {}
            }
        }
    }
    st
}
