//! Common upper tangent of two x-separated upper hulls in four rounds of
//! sample labelling.

use std::cmp::Ordering;

use crate::hull::predicates::{
    classify_against_vertex, classify_edge, slope_cmp, EdgeLabel, HullEdge, HullVertex, Separator, Side,
};
use crate::primitives::{conditional_copy, Padded};
use crate::trace::TracedArray;

pub const ROUNDS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Full,
    Block,
    Done(HullVertex),
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    edge: HullEdge,
    // tangent vertex if this slot turns out to be the first R edge
    q: HullVertex,
}

struct SideCtx {
    v: TracedArray<Padded<HullVertex>>,
    stride: usize,
    full_slots: usize,
    slots: usize,
    first: HullVertex,
    last: HullVertex,
    block: TracedArray<Padded<HullVertex>>,
    state: State,
}

fn ceil_sqrt(m: usize) -> usize {
    let mut s = (m as f64).sqrt() as usize;
    while s * s < m {
        s += 1;
    }
    while s > 1 && (s - 1) * (s - 1) >= m {
        s -= 1;
    }
    s.max(1)
}

impl SideCtx {
    /// `v` lists the hull's vertices left to right, blanks after; `m`
    /// bounds the vertex count and fixes the access pattern.
    fn new(v: &TracedArray<Padded<HullVertex>>, m: usize) -> Self {
        let tracer = v.tracer().clone();
        let stride = ceil_sqrt(m);
        let blocks = m.div_ceil(stride);
        let padded = blocks * stride + stride + 1;
        let mut store = TracedArray::new(&tracer, padded, Padded::Blank);
        let mut first = None;
        let mut last = None;
        for i in 0..padded {
            let cell = if i < v.len() { v.read(i) } else { Padded::Blank };
            if let Padded::Item(p) = cell {
                first.get_or_insert(p);
                last = Some(p);
            }
            store.write(i, cell);
        }
        let first = first.expect("hull has a vertex");
        let full_slots = blocks + 2;
        SideCtx {
            v: store,
            stride,
            full_slots,
            slots: full_slots.max(stride + 2),
            first,
            last: last.unwrap_or(first),
            block: TracedArray::new(&tracer, stride + 1, Padded::Blank),
            state: State::Full,
        }
    }

    fn blocks(&self) -> usize {
        self.full_slots - 2
    }

    fn sample(&self) -> TracedArray<Slot> {
        let last = self.last;
        let dummy = Slot { edge: HullEdge::RightDummy(last), q: last };
        let mut full = Vec::with_capacity(self.full_slots);
        full.push(Slot { edge: HullEdge::LeftDummy(self.first), q: self.first });
        for j in 1..self.full_slots {
            let i = (j - 1) * self.stride;
            let a = self.v.read(i);
            let b = self.v.read(i + 1);
            full.push(match (a, b) {
                (Padded::Item(a), Padded::Item(b)) => Slot { edge: HullEdge::Segment(a, b), q: a },
                _ => dummy,
            });
        }
        let cells: Vec<Padded<HullVertex>> = (0..=self.stride).map(|i| self.block.read(i)).collect();
        let mut blocked = Vec::with_capacity(self.stride + 2);
        blocked.push(Slot { edge: HullEdge::LeftDummy(self.first), q: self.first });
        for i in 1..=self.stride {
            blocked.push(match (cells[i - 1], cells[i]) {
                (Padded::Item(a), Padded::Item(b)) => Slot { edge: HullEdge::Segment(a, b), q: a },
                _ => dummy,
            });
        }
        blocked.push(Slot { edge: HullEdge::RightDummy(last), q: cells[self.stride].into_item().unwrap_or(last) });
        let mut chosen = if self.state == State::Block { blocked } else { full };
        chosen.resize(self.slots, dummy);
        let mut out = TracedArray::new(self.v.tracer(), self.slots, dummy);
        for (i, s) in chosen.into_iter().enumerate() {
            out.write(i, s);
        }
        out
    }
}

struct Forced {
    last_l: Option<usize>,
    first_r: Option<usize>,
}

/// Raw labels of one side against the other side's sample; returns the
/// labels forced onto the other side by `X` outcomes.
fn label_side(
    own: &TracedArray<Slot>,
    side: Side,
    other: &TracedArray<Slot>,
    other_done: Option<HullVertex>,
    sep: &Separator,
    out: &mut TracedArray<EdgeLabel>,
) -> Forced {
    let mut forced = Forced { last_l: None, first_r: None };
    for i in 0..own.len() {
        let e = own.read(i).edge;
        let mut d = None;
        let mut f = None;
        for k in 0..other.len() {
            let g = other.read(k).edge;
            let steeper = matches!((slope_cmp(&g, &e), side), (Ordering::Greater, _) | (Ordering::Equal, Side::Right));
            if steeper {
                d = Some((k, g));
            } else if f.is_none() {
                f = Some((k, g));
            }
        }
        let label = match e {
            HullEdge::LeftDummy(_) => EdgeLabel::L,
            HullEdge::RightDummy(_) => EdgeLabel::R,
            HullEdge::Segment(..) => match (other_done, d, f) {
                (Some(v), _, _) => classify_against_vertex(&e, side, &v),
                (None, Some((di, d)), Some((fi, f))) => {
                    let c = classify_edge(&e, side, &d, &f, sep);
                    if c.forced {
                        forced.last_l = forced.last_l.max(Some(di));
                        forced.first_r = Some(forced.first_r.map_or(fi, |r| r.min(fi)));
                    }
                    c.label
                }
                _ => unreachable!("samples always hold both dummies"),
            },
        };
        out.write(i, label);
    }
    forced
}

/// Extends `L` backwards and `R` forwards, merging in forced labels.
/// Returns the index of the first `R` and whether any `X` is left.
fn settle(labels: &mut TracedArray<EdgeLabel>, forced: &Forced) -> (usize, bool) {
    let n = labels.len();
    let mut last_l = forced.last_l;
    let mut first_r = forced.first_r.unwrap_or(n);
    for i in 0..n {
        match labels.read(i) {
            EdgeLabel::L => last_l = Some(i),
            EdgeLabel::R => first_r = first_r.min(i),
            EdgeLabel::X => {}
        }
    }
    let last_l = last_l.expect("left dummy is L");
    debug_assert!(last_l < first_r, "contradictory labels");
    for i in 0..n {
        let l = if i <= last_l {
            EdgeLabel::L
        } else if i >= first_r {
            EdgeLabel::R
        } else {
            EdgeLabel::X
        };
        labels.write(i, l);
    }
    (first_r, last_l + 1 < first_r)
}

fn slots_of(edges: &TracedArray<HullEdge>) -> TracedArray<Slot> {
    let mut out = TracedArray::new(edges.tracer(), edges.len(), Slot {
        edge: HullEdge::RightDummy(HullVertex { x: 0, y: 0, t: 0, pos: 0, id: 0 }),
        q: HullVertex { x: 0, y: 0, t: 0, pos: 0, id: 0 },
    });
    for i in 0..edges.len() {
        let e = edges.read(i);
        out.write(i, Slot { edge: e, q: e.left_end() });
    }
    out
}

/// Labels both samples (edges in hull order, dummies included) of one
/// round. Afterwards at most one side holds `X` labels, and each side's
/// labels read `L* X* R*`.
pub fn round_computation(
    h1: &TracedArray<HullEdge>,
    h2: &TracedArray<HullEdge>,
    sep: &Separator,
) -> (TracedArray<EdgeLabel>, TracedArray<EdgeLabel>) {
    let (s1, s2) = (slots_of(h1), slots_of(h2));
    let tracer = h1.tracer();
    let mut l1 = TracedArray::new(tracer, s1.len(), EdgeLabel::X);
    let mut l2 = TracedArray::new(tracer, s2.len(), EdgeLabel::X);
    let into2 = label_side(&s1, Side::Left, &s2, None, sep, &mut l1);
    let into1 = label_side(&s2, Side::Right, &s1, None, sep, &mut l2);
    settle(&mut l1, &into1);
    settle(&mut l2, &into2);
    (l1, l2)
}

/// Finds the tangent vertices `(q, r)` of the upper hulls listed in `uh1`
/// and `uh2` (left to right, blanks after). Collinear tangent vertices are
/// resolved outward: `q` is the rightmost vertex of `uh1` on the tangent
/// and `r` the leftmost of `uh2`. `m1`, `m2` bound the vertex counts.
pub fn find_upper_tangent(
    uh1: &TracedArray<Padded<HullVertex>>,
    m1: usize,
    uh2: &TracedArray<Padded<HullVertex>>,
    m2: usize,
    sep: &Separator,
) -> (HullVertex, HullVertex) {
    let mut sides = [SideCtx::new(uh1, m1), SideCtx::new(uh2, m2)];
    let tracer = uh1.tracer().clone();
    for _ in 0..ROUNDS {
        let s1 = sides[0].sample();
        let s2 = sides[1].sample();
        let done = |s: &SideCtx| match s.state {
            State::Done(v) => Some(v),
            _ => None,
        };
        let mut l1 = TracedArray::new(&tracer, s1.len(), EdgeLabel::X);
        let mut l2 = TracedArray::new(&tracer, s2.len(), EdgeLabel::X);
        let into2 = label_side(&s1, Side::Left, &s2, done(&sides[1]), sep, &mut l1);
        let into1 = label_side(&s2, Side::Right, &s1, done(&sides[0]), sep, &mut l2);
        let settled = [settle(&mut l1, &into1), settle(&mut l2, &into2)];
        debug_assert!(!(settled[0].1 && settled[1].1), "both samples kept an X");
        for (k, side) in sides.iter_mut().enumerate() {
            let (first_r, has_x) = settled[k];
            let samples = if k == 0 { &s1 } else { &s2 };
            let mut q = None;
            for i in 0..samples.len() {
                let s = samples.read(i);
                if i == first_r {
                    q = Some(s.q);
                }
            }
            let start_block = first_r.saturating_sub(2);
            let to_block = !has_x && side.state == State::Full;
            for b in 0..side.blocks() {
                let at = b * side.stride;
                conditional_copy(to_block && b == start_block, &side.v, at..at + side.stride + 1, &mut side.block, 0..side.stride + 1)
                    .expect("equal ranges");
            }
            if !has_x {
                side.state = match side.state {
                    State::Full => State::Block,
                    State::Block => State::Done(q.expect("first R is a slot")),
                    done => done,
                };
            }
        }
    }
    match (sides[0].state, sides[1].state) {
        (State::Done(q), State::Done(r)) => (q, r),
        states => panic!("tangent search unfinished after {ROUNDS} rounds: {states:?}"),
    }
}
