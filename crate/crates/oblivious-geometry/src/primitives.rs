//! Oblivious building blocks: a bitonic sorting network, order-preserving
//! compaction, conditional region copy, and sort-based key lookup/delivery.
//!
//! Every routine here touches memory in an order fixed by the array sizes.

use std::cmp::Ordering;
use std::ops::Range;

use crate::trace::{TracedArray, Tracer};
use crate::CoreError;

/// A real value or a blank sentinel. Blanks order after every real value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Padded<T> {
    Item(T),
    Blank,
}

impl<T> Padded<T> {
    pub fn item(&self) -> Option<&T> {
        match self {
            Padded::Item(t) => Some(t),
            Padded::Blank => None,
        }
    }

    pub fn into_item(self) -> Option<T> {
        match self {
            Padded::Item(t) => Some(t),
            Padded::Blank => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Padded::Blank)
    }

    pub fn is_item(&self) -> bool {
        !self.is_blank()
    }

    pub fn item_mut(&mut self) -> Option<&mut T> {
        match self {
            Padded::Item(t) => Some(t),
            Padded::Blank => None,
        }
    }
}

impl<T> From<Option<T>> for Padded<T> {
    fn from(o: Option<T>) -> Self {
        match o {
            Some(t) => Padded::Item(t),
            None => Padded::Blank,
        }
    }
}

/// Orders padded values by a key on the real ones, blanks last.
pub fn cmp_padded_by<T, K: Ord>(a: &Padded<T>, b: &Padded<T>, key: impl Fn(&T) -> K) -> Ordering {
    match (a, b) {
        (Padded::Item(x), Padded::Item(y)) => key(x).cmp(&key(y)),
        (Padded::Item(_), Padded::Blank) => Ordering::Less,
        (Padded::Blank, Padded::Item(_)) => Ordering::Greater,
        (Padded::Blank, Padded::Blank) => Ordering::Equal,
    }
}

/// Wraps values as items of a fresh array.
pub fn padded_array<T: Clone>(tracer: &Tracer, items: Vec<T>, capacity: usize) -> TracedArray<Padded<T>> {
    assert!(items.len() <= capacity);
    let mut cells: Vec<Padded<T>> = items.into_iter().map(Padded::Item).collect();
    cells.resize(capacity, Padded::Blank);
    TracedArray::from_vec(tracer, cells)
}

#[inline]
fn compare_exchange<T: Clone, F: FnMut(&T, &T) -> Ordering>(a: &mut TracedArray<T>, lo: usize, hi: usize, cmp: &mut F) {
    a.compare_swap(lo, hi, cmp);
}

/// Calls `f(lo, hi)` for every comparator of the merge pass that combines
/// adjacent sorted runs of length `block / 2` into sorted runs of length
/// `block`. Indices at or beyond `n` stand for virtual `+inf` cells, so
/// comparators touching them are skipped.
fn merge_pass_pairs(n: usize, block: usize, mut f: impl FnMut(usize, usize)) {
    debug_assert!(block.is_power_of_two() && block >= 2);
    let mut start = 0;
    while start < n {
        for i in 0..block / 2 {
            let lo = start + i;
            let hi = start + block - 1 - i;
            if hi < n {
                f(lo, hi);
            }
        }
        start += block;
    }
    let mut j = block / 4;
    while j >= 1 {
        for lo in 0..n.saturating_sub(j) {
            if lo & j == 0 {
                f(lo, lo + j);
            }
        }
        j /= 2;
    }
}

/// One merge pass of the bitonic network (see [`merge_pass_pairs`]).
pub fn merge_pass_by<T: Clone, F: FnMut(&T, &T) -> Ordering>(a: &mut TracedArray<T>, block: usize, mut cmp: F) {
    let n = a.len();
    merge_pass_pairs(n, block, |lo, hi| compare_exchange(a, lo, hi, &mut cmp));
}

/// Sorts in place with a bitonic network whose comparators all send the
/// minimum to the lower index. The array is treated as padded to the next
/// power of two with `+inf`.
pub fn oblivious_sort_by<T: Clone, F: FnMut(&T, &T) -> Ordering>(a: &mut TracedArray<T>, mut cmp: F) {
    let n = a.len();
    let mut block = 2;
    while block <= n.next_power_of_two() && n > 1 {
        merge_pass_pairs(n, block, |lo, hi| compare_exchange(a, lo, hi, &mut cmp));
        block *= 2;
    }
}

pub fn oblivious_sort<T: Clone + Ord>(a: &mut TracedArray<T>) {
    oblivious_sort_by(a, |x, y| x.cmp(y));
}

pub fn oblivious_sort_by_key<T: Clone, K: Ord>(a: &mut TracedArray<T>, key: impl Fn(&T) -> K) {
    oblivious_sort_by(a, |x, y| key(x).cmp(&key(y)));
}

/// Sorts items by key with blanks last.
pub fn sort_padded_by_key<T: Clone, K: Ord>(a: &mut TracedArray<Padded<T>>, key: impl Fn(&T) -> K) {
    oblivious_sort_by(a, |x, y| cmp_padded_by(x, y, &key));
}

/// Merges `a[..half]` and `a[half..]`, both sorted, where `half` is a power
/// of two and `a.len() <= 2 * half`.
pub fn merge_sorted_halves_by<T: Clone, F: FnMut(&T, &T) -> Ordering>(a: &mut TracedArray<T>, half: usize, cmp: F) {
    assert!(half.is_power_of_two() && a.len() <= 2 * half && a.len() >= half);
    if a.len() > half {
        merge_pass_by(a, 2 * half, cmp);
    }
}

/// Comparators the sorting network uses for `n` cells.
pub fn comparator_count(n: usize) -> u64 {
    let mut count = 0u64;
    let mut block = 2;
    while n > 1 && block <= n.next_power_of_two() {
        merge_pass_pairs(n, block, |_, _| count += 1);
        block *= 2;
    }
    count
}

/// Moves kept items to the front in their original order and blanks the rest.
/// Returns the kept count. Cost is `O(n log n)` and the access pattern depends
/// on `n` only.
pub fn compact_in_place<T: Clone>(a: &mut TracedArray<Padded<T>>, keep: impl Fn(&T) -> bool) -> usize {
    let n = a.len();
    let tracer = a.tracer().clone();
    let mut work: TracedArray<(Padded<T>, u64)> = TracedArray::new(&tracer, n, (Padded::Blank, 0));
    let mut dropped = 0u64;
    let mut kept = 0usize;
    for i in 0..n {
        let cell = a.read(i);
        let k = cell.item().map(&keep).unwrap_or(false);
        let entry = if k { (cell, dropped) } else { (Padded::Blank, 0) };
        if k {
            kept += 1;
        } else {
            dropped += 1;
        }
        work.write(i, entry);
    }
    let mut bit = 0;
    while (1usize << bit) < n {
        let step = 1usize << bit;
        let moves = |c: &(Padded<T>, u64)| c.0.is_item() && (c.1 >> bit) & 1 == 1;
        for p in 0..n {
            let cur = work.read(p);
            let incoming = if p + step < n { Some(work.read(p + step)) } else { None };
            let next = match incoming {
                Some(c) if moves(&c) => c,
                _ if !moves(&cur) => cur,
                _ => (Padded::Blank, 0),
            };
            work.write(p, next);
        }
        bit += 1;
    }
    for i in 0..n {
        let (cell, _) = work.read(i);
        a.write(i, cell);
    }
    kept
}

/// Compacts kept items of `a` into a new array of `out_capacity` cells.
pub fn compact_to<T: Clone>(
    a: &TracedArray<Padded<T>>,
    out_capacity: usize,
    keep: impl Fn(&T) -> bool,
) -> Result<(TracedArray<Padded<T>>, usize), CoreError> {
    assert!(out_capacity <= a.len(), "out_capacity exceeds input size");
    let tracer = a.tracer().clone();
    let mut work = TracedArray::new(&tracer, a.len(), Padded::Blank);
    for i in 0..a.len() {
        let v = a.read(i);
        work.write(i, v);
    }
    let kept = compact_in_place(&mut work, keep);
    let mut out = TracedArray::new(&tracer, out_capacity, Padded::Blank);
    for i in 0..out_capacity {
        let v = work.read(i);
        out.write(i, v);
    }
    if kept > out_capacity {
        return Err(CoreError::CompactionOverflow {
            flagged: kept,
            capacity: out_capacity,
        });
    }
    Ok((out, kept))
}

/// Places every flagged payload first, in order, padded with blanks to
/// `out_capacity`.
pub fn oblivious_compact<T: Clone>(
    a: &TracedArray<(bool, T)>,
    out_capacity: usize,
) -> Result<TracedArray<Padded<T>>, CoreError> {
    if out_capacity > a.len() {
        return Err(CoreError::CapacityTooLarge {
            requested: out_capacity,
            available: a.len(),
        });
    }
    let tracer = a.tracer().clone();
    let mut work = TracedArray::new(&tracer, a.len(), Padded::Blank);
    for i in 0..a.len() {
        let (flag, payload) = a.read(i);
        work.write(i, if flag { Padded::Item(payload) } else { Padded::Blank });
    }
    compact_to(&work, out_capacity, |_| true).map(|(out, _)| out)
}

/// Copies `src[src_range]` over `dst[dst_range]` when `flag` is set. Both
/// outcomes read the source cell, read the destination cell and write the
/// destination cell for every position.
pub fn conditional_copy<T: Clone>(
    flag: bool,
    src: &TracedArray<T>,
    src_range: Range<usize>,
    dst: &mut TracedArray<T>,
    dst_range: Range<usize>,
) -> Result<(), CoreError> {
    if src_range.len() != dst_range.len() {
        return Err(CoreError::LengthMismatch {
            left: src_range.len(),
            right: dst_range.len(),
        });
    }
    for (s, d) in src_range.zip(dst_range) {
        let v = src.read(s);
        let old = dst.read(d);
        dst.write(d, if flag { v } else { old });
    }
    Ok(())
}

#[derive(Clone)]
enum Joined<R, Q> {
    Table(R),
    Query(Option<Q>, usize, Option<R>),
}

/// For every query, fetches the table record with the same key (if any).
/// Results come back in query order; blank queries stay blank. Two sorts of
/// `|table| + |queries|` cells.
pub fn lookup<K, R, Q>(
    table: &TracedArray<Padded<R>>,
    tkey: impl Fn(&R) -> K,
    queries: &TracedArray<Padded<Q>>,
    qkey: impl Fn(&Q) -> Option<K>,
) -> TracedArray<Padded<(Q, Option<R>)>>
where
    K: Ord + Clone,
    R: Clone,
    Q: Clone,
{
    let tracer = table.tracer().clone();
    let t = table.len();
    let q = queries.len();
    let mut joined: TracedArray<Padded<Joined<R, Q>>> = TracedArray::new(&tracer, t + q, Padded::Blank);
    for i in 0..t {
        let r = table.read(i);
        joined.write(i, r.into_item().map(Joined::Table).into());
    }
    for i in 0..q {
        let x = queries.read(i);
        joined.write(t + i, Padded::Item(Joined::Query(x.into_item(), i, None)));
    }
    // table entries first within a key; keyless queries go after every key
    sort_padded_by_key(&mut joined, |e| match e {
        Joined::Table(r) => (Padded::Item(tkey(r)), 0u8, 0usize),
        Joined::Query(x, pos, _) => (x.as_ref().and_then(&qkey).into(), 1, *pos),
    });
    let mut last: Option<(K, R)> = None;
    for i in 0..t + q {
        let e = joined.read(i);
        let out = match e {
            Padded::Item(Joined::Table(r)) => {
                last = Some((tkey(&r), r.clone()));
                Padded::Item(Joined::Table(r))
            }
            Padded::Item(Joined::Query(x, pos, _)) => {
                let hit = match (&last, x.as_ref().and_then(&qkey)) {
                    (Some((k, r)), Some(qk)) if *k == qk => Some(r.clone()),
                    _ => None,
                };
                Padded::Item(Joined::Query(x, pos, hit))
            }
            Padded::Blank => Padded::Blank,
        };
        joined.write(i, out);
    }
    sort_padded_by_key(&mut joined, |e| match e {
        Joined::Query(_, pos, _) => (0u8, *pos),
        Joined::Table(_) => (1u8, 0),
    });
    let mut out = TracedArray::new(&tracer, q, Padded::Blank);
    for i in 0..q {
        let e = joined.read(i);
        let v = match e {
            Padded::Item(Joined::Query(Some(x), _, hit)) => Padded::Item((x, hit)),
            _ => Padded::Blank,
        };
        out.write(i, v);
    }
    out
}

/// Delivers messages to the table records with matching keys. Messages for one
/// key are folded into an accumulator which is then applied to the record.
/// The table keeps its order. Two sorts of `|table| + |msgs|` cells.
pub fn deliver<K, R, M, A>(
    table: &mut TracedArray<Padded<R>>,
    tkey: impl Fn(&R) -> K,
    msgs: &TracedArray<Padded<M>>,
    mkey: impl Fn(&M) -> K,
    init: impl Fn() -> A,
    absorb: impl Fn(&mut A, &M),
    apply: impl Fn(&mut R, &A),
) where
    K: Ord + Clone,
    R: Clone,
    M: Clone,
{
    #[derive(Clone)]
    enum Slot<R, M> {
        Table(R, usize),
        Msg(M),
    }
    let tracer = table.tracer().clone();
    let t = table.len();
    let m = msgs.len();
    let mut joined: TracedArray<Padded<Slot<R, M>>> = TracedArray::new(&tracer, t + m, Padded::Blank);
    for i in 0..t {
        let r = table.read(i);
        joined.write(i, r.into_item().map(|r| Slot::Table(r, i)).into());
    }
    for i in 0..m {
        let x = msgs.read(i);
        joined.write(t + i, x.into_item().map(Slot::Msg).into());
    }
    sort_padded_by_key(&mut joined, |e| match e {
        Slot::Table(r, pos) => (tkey(r), 0u8, *pos),
        Slot::Msg(x) => (mkey(x), 1u8, 0),
    });
    let mut acc = init();
    let mut acc_key: Option<K> = None;
    for i in (0..t + m).rev() {
        let e = joined.read(i);
        let out = match e {
            Padded::Item(Slot::Msg(x)) => {
                let k = mkey(&x);
                if acc_key.as_ref() != Some(&k) {
                    acc = init();
                    acc_key = Some(k);
                }
                absorb(&mut acc, &x);
                Padded::Item(Slot::Msg(x))
            }
            Padded::Item(Slot::Table(mut r, pos)) => {
                let k = tkey(&r);
                if acc_key.as_ref() == Some(&k) {
                    apply(&mut r, &acc);
                } else {
                    apply(&mut r, &init());
                }
                acc_key = None;
                acc = init();
                Padded::Item(Slot::Table(r, pos))
            }
            Padded::Blank => Padded::Blank,
        };
        joined.write(i, out);
    }
    sort_padded_by_key(&mut joined, |e| match e {
        Slot::Table(_, pos) => (0u8, *pos),
        Slot::Msg(_) => (1u8, 0),
    });
    for i in 0..t {
        let e = joined.read(i);
        let v = match e {
            Padded::Item(Slot::Table(r, _)) => Padded::Item(r),
            _ => Padded::Blank,
        };
        table.write(i, v);
    }
}
