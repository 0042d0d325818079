//! All nearest larger values over a merge-sort tree.
//!
//! Level `k` merges sibling blocks of `2^k` items (sorted by value) and one
//! descending scan per merged block hands every item without an answer the
//! nearest larger value from its sibling block.

use std::cmp::Ordering;

use crate::primitives::{merge_pass_by, oblivious_sort_by_key};
use crate::trace::TracedArray;

/// Nearest strictly larger neighbors of one position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Nearest {
    pub left: Option<usize>,
    pub right: Option<usize>,
}

/// Untraced view of an ANLV answer, one entry per input position.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnlvResult {
    pub left: Vec<Option<usize>>,
    pub right: Vec<Option<usize>>,
}

impl From<Vec<Nearest>> for AnlvResult {
    fn from(v: Vec<Nearest>) -> Self {
        AnlvResult {
            left: v.iter().map(|n| n.left).collect(),
            right: v.iter().map(|n| n.right).collect(),
        }
    }
}

#[derive(Clone)]
struct Slot<T> {
    idx: usize,
    value: T,
    near: Nearest,
}

/// ANLV under `cmp`, with equal values broken by index (lower index is
/// smaller). Entry `i` of the output belongs to input position `i`.
pub fn anlv_by<T: Clone>(a: &TracedArray<T>, mut cmp: impl FnMut(&T, &T) -> Ordering) -> TracedArray<Nearest> {
    let tracer = a.tracer().clone();
    let n = a.len();
    let slots = (0..n).map(|i| Slot { idx: i, value: a.read(i), near: Nearest::default() }).collect();
    let mut w: TracedArray<Slot<T>> = TracedArray::from_vec(&tracer, slots);
    let mut key_cmp = |x: &Slot<T>, y: &Slot<T>| cmp(&x.value, &y.value).then(x.idx.cmp(&y.idx));
    let mut half = 1;
    while half < n {
        let block = 2 * half;
        merge_pass_by(&mut w, block, &mut key_cmp);
        // suffix record of the left block / prefix record of the right block,
        // whichever was met most recently while walking values downward
        let mut left_reg: Option<usize> = None;
        let mut right_reg: Option<usize> = None;
        for i in (0..n).rev() {
            if (i + 1) % block == 0 || i == n - 1 {
                left_reg = None;
                right_reg = None;
            }
            let mut s = w.read(i);
            let in_right = (s.idx / half) & 1 == 1;
            if in_right {
                let was_prefix_record = s.near.left.is_none();
                if s.near.left.is_none() {
                    s.near.left = left_reg;
                }
                if was_prefix_record {
                    right_reg = Some(s.idx);
                }
            } else {
                let was_suffix_record = s.near.right.is_none();
                if s.near.right.is_none() {
                    s.near.right = right_reg;
                }
                if was_suffix_record {
                    left_reg = Some(s.idx);
                }
            }
            w.write(i, s);
        }
        half = block;
    }
    oblivious_sort_by_key(&mut w, |s| s.idx);
    let mut out = TracedArray::new(&tracer, n, Nearest::default());
    for i in 0..n {
        let s = w.read(i);
        out.write(i, s.near);
    }
    out
}

pub fn anlv<T: Clone + Ord>(a: &TracedArray<T>) -> TracedArray<Nearest> {
    anlv_by(a, |x, y| x.cmp(y))
}

/// Merges two ascending arrays with one ANLV call on `reverse(c) ++ d`
/// followed by one sort on the resulting merge ranks.
pub fn merge_via_anlv<T: Clone + Ord>(c: &TracedArray<T>, d: &TracedArray<T>) -> TracedArray<T> {
    let tracer = c.tracer().clone();
    let (lc, ld) = (c.len(), d.len());
    let n = lc + ld;
    // (value, side, index within side)
    let cells = (0..lc)
        .rev()
        .map(|i| (c.read(i), 0u8, i))
        .chain((0..ld).map(|j| (d.read(j), 1u8, j)))
        .collect();
    let x: TracedArray<(T, u8, usize)> = TracedArray::from_vec(&tracer, cells);
    let near = anlv(&x);
    let cells = (0..n)
        .map(|p| {
            let (v, side, i) = x.read(p);
            let nl = near.read(p);
            let rank = if side == 0 {
                i + nl.right.map(|q| q - lc).unwrap_or(ld)
            } else {
                i + nl.left.map(|q| lc - 1 - q).unwrap_or(lc)
            };
            (rank, v)
        })
        .collect();
    let mut ranked: TracedArray<(usize, T)> = TracedArray::from_vec(&tracer, cells);
    oblivious_sort_by_key(&mut ranked, |r| r.0);
    let cells = (0..n).map(|p| ranked.read(p).1).collect();
    TracedArray::from_vec(&tracer, cells)
}
