//! Randomized list ranking: coin-flip link-out rounds shrink the list to
//! `max(n / log2 n, 32)` nodes, pointer jumping finishes it, and the removed
//! nodes are reinserted in reverse order.

use crate::error::ListError;
use crate::primitives::{compact_to, lookup, oblivious_sort_by_key, sort_padded_by_key, Padded};
use crate::rng::SeededRng;
use crate::trace::{TracedArray, Tracer};

/// Link-out rounds per halving phase.
pub const ROUNDS_PER_PHASE: usize = 4;
/// Attempts before giving up on the halving schedule.
pub const MAX_ATTEMPTS: u32 = 16;
const SMALL_LIST_FLOOR: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinkedNode {
    pub id: u64,
    pub succ: Option<u64>,
    /// Weight of the node; 1 for plain hop counting.
    pub d: u64,
}

impl LinkedNode {
    pub fn new(id: u64, succ: Option<u64>) -> Self {
        LinkedNode { id, succ, d: 1 }
    }
}

#[derive(Debug)]
pub struct ListRanking {
    /// Entry `i` is the summed weight of the nodes after input node `i`.
    pub ranks: TracedArray<u64>,
    pub restarts: u32,
}

#[derive(Clone, Copy, Debug)]
struct Live {
    id: u64,
    pos: usize,
    succ: Option<u64>,
    d: u64,
    weight: u64,
}

#[derive(Clone, Copy, Debug)]
struct Removed {
    id: u64,
    pos: usize,
    succ: Option<u64>,
    d: u64,
    weight: u64,
}

#[derive(Clone, Copy, Debug)]
struct Ranked {
    id: u64,
    pos: usize,
    total: u64,
    weight: u64,
}

#[derive(Clone, Copy, Debug)]
enum Entry {
    Node {
        slot: usize,
        live: Padded<Live>,
        coin: bool,
        pred_coin: Option<bool>,
    },
    Query {
        slot: usize,
        target: Option<u64>,
        coin: bool,
        reply: Option<(bool, Option<u64>, u64)>,
    },
}

fn small_list_size(n: usize) -> f64 {
    let log = (n.max(2) as f64).log2();
    (n as f64 / log).max(SMALL_LIST_FLOOR as f64)
}

/// Ranks a chain given as an array of nodes. Node ids must be distinct and
/// the successor references must form one chain.
pub fn list_rank(nodes: &TracedArray<LinkedNode>, rng: &SeededRng) -> Result<ListRanking, ListError> {
    let tracer = nodes.tracer().clone();
    let n = nodes.len();
    if n == 0 {
        return Ok(ListRanking { ranks: TracedArray::from_vec(&tracer, Vec::new()), restarts: 0 });
    }
    check_chain(nodes)?;
    let mut attempt = 0;
    loop {
        let mut r = if attempt == 0 { rng.clone() } else { rng.derive(attempt as u64) };
        if let Some(ranked) = attempt_rank(nodes, &mut r) {
            let ranks = finish(&tracer, ranked, nodes)?;
            return Ok(ListRanking { ranks, restarts: attempt });
        }
        attempt += 1;
        if attempt >= MAX_ATTEMPTS {
            return Err(ListError::RestartLimit { attempts: attempt });
        }
    }
}

/// One full run; `None` when some phase failed to halve.
fn attempt_rank(nodes: &TracedArray<LinkedNode>, rng: &mut SeededRng) -> Option<TracedArray<Padded<Ranked>>> {
    let tracer = nodes.tracer().clone();
    let n = nodes.len();
    let cells = (0..n)
        .map(|i| {
            let v = nodes.read(i);
            Padded::Item(Live { id: v.id, pos: i, succ: v.succ, d: v.d, weight: v.d })
        })
        .collect();
    let mut live: TracedArray<Padded<Live>> = TracedArray::from_vec(&tracer, cells);
    let limit = small_list_size(n);
    let mut phases: Vec<Vec<TracedArray<Padded<Removed>>>> = Vec::new();
    let mut failed = false;
    while live.len() as f64 > limit {
        let m = live.len();
        let mut logs = Vec::with_capacity(ROUNDS_PER_PHASE);
        for _ in 0..ROUNDS_PER_PHASE {
            logs.push(link_out_round(&mut live, rng));
        }
        phases.push(logs);
        match compact_to(&live, m.div_ceil(2), |_| true) {
            Ok((next, _)) => live = next,
            Err(_) => {
                // keep the schedule going so the failed attempt stays size-shaped
                failed = true;
                let cells = (0..m.div_ceil(2)).map(|i| live.read(i)).collect();
                live = TracedArray::from_vec(&tracer, cells);
            }
        }
    }
    let mut ranked = pointer_jump(&live);
    for logs in phases.iter().rev() {
        let m = logs[0].len();
        for log in logs.iter().rev() {
            ranked = reinsert(&ranked, log, m);
        }
    }
    (!failed).then_some(ranked)
}

fn link_out_round(live: &mut TracedArray<Padded<Live>>, rng: &mut SeededRng) -> TracedArray<Padded<Removed>> {
    let tracer = live.tracer().clone();
    let m = live.len();
    let mut cells = Vec::with_capacity(2 * m);
    let mut queries = Vec::with_capacity(m);
    for slot in 0..m {
        let v = live.read(slot);
        let coin = rng.bit();
        cells.push(Entry::Node { slot, live: v, coin, pred_coin: None });
        queries.push(Entry::Query { slot, target: v.item().and_then(|v| v.succ), coin, reply: None });
    }
    cells.extend(queries);
    let mut joined = TracedArray::from_vec(&tracer, cells);
    // a node's predecessor query sits right before it
    oblivious_sort_by_key(&mut joined, |e| match e {
        Entry::Node { slot, live, .. } => (live.item().map(|v| v.id).into(), 1u8, *slot),
        Entry::Query { slot, target, .. } => (Padded::from(*target), 0u8, *slot),
    });
    let mut last_query: Option<(u64, bool)> = None;
    for i in 0..2 * m {
        let mut e = joined.read(i);
        match &mut e {
            Entry::Query { target, coin, .. } => last_query = target.map(|t| (t, *coin)),
            Entry::Node { live: Padded::Item(v), pred_coin, .. } => {
                *pred_coin = last_query.filter(|q| q.0 == v.id).map(|q| q.1);
            }
            Entry::Node { .. } => {}
        }
        joined.write(i, e);
    }
    let mut last_node: Option<(u64, bool, Option<u64>, u64)> = None;
    for i in (0..2 * m).rev() {
        let mut e = joined.read(i);
        match &mut e {
            Entry::Node { live: Padded::Item(v), coin, pred_coin, .. } => {
                let removed = !*coin && *pred_coin == Some(true);
                last_node = Some((v.id, removed, v.succ, v.d));
            }
            Entry::Node { .. } => last_node = None,
            Entry::Query { target, reply, .. } => {
                *reply = match (last_node, *target) {
                    (Some((id, removed, succ, d)), Some(t)) if id == t => Some((removed, succ, d)),
                    _ => None,
                };
            }
        }
        joined.write(i, e);
    }
    oblivious_sort_by_key(&mut joined, |e| match e {
        Entry::Node { slot, .. } => (0u8, *slot),
        Entry::Query { slot, .. } => (1u8, *slot),
    });
    let mut log = Vec::with_capacity(m);
    for slot in 0..m {
        let node = joined.read(slot);
        let query = joined.read(m + slot);
        let (Entry::Node { live: cell, coin, pred_coin, .. }, Entry::Query { reply, .. }) = (node, query) else {
            unreachable!("node/query halves misaligned");
        };
        let mut out = Padded::Blank;
        let mut next = cell;
        if let Padded::Item(mut v) = cell {
            if !coin && pred_coin == Some(true) {
                out = Padded::Item(Removed { id: v.id, pos: v.pos, succ: v.succ, d: v.d, weight: v.weight });
                next = Padded::Blank;
            } else {
                if let Some((true, succ, d)) = reply {
                    v.succ = succ;
                    v.d += d;
                }
                next = Padded::Item(v);
            }
        }
        live.write(slot, next);
        log.push(out);
    }
    TracedArray::from_vec(&tracer, log)
}

fn jump_rounds(m: usize) -> usize {
    let mut r = 0;
    while (1usize << r) < m {
        r += 1;
    }
    r
}

/// `(id, succ, d, pos, weight)` while jumping.
type JumpCell = (u64, Option<u64>, u64, usize, u64);

fn pointer_jump(live: &TracedArray<Padded<Live>>) -> TracedArray<Padded<Ranked>> {
    let tracer = live.tracer().clone();
    let m = live.len();
    let cells = (0..m).map(|i| live.read(i).item().map(|v| (v.id, v.succ, v.d, v.pos, v.weight)).into()).collect();
    let mut cur: TracedArray<Padded<JumpCell>> = TracedArray::from_vec(&tracer, cells);
    for _ in 0..jump_rounds(m) {
        let joined = lookup(&cur, |r| r.0, &cur, |q| q.1);
        let cells = (0..m)
            .map(|i| {
                joined.read(i).into_item().map(|(v, hit)| match hit {
                    Some(s) => (v.0, s.1, v.2 + s.2, v.3, v.4),
                    None => v,
                })
                .into()
            })
            .collect();
        cur = TracedArray::from_vec(&tracer, cells);
    }
    let cells = (0..m)
        .map(|i| cur.read(i).item().map(|v| Ranked { id: v.0, pos: v.3, total: v.2, weight: v.4 }).into())
        .collect();
    TracedArray::from_vec(&tracer, cells)
}

fn reinsert(ranked: &TracedArray<Padded<Ranked>>, log: &TracedArray<Padded<Removed>>, cap: usize) -> TracedArray<Padded<Ranked>> {
    let tracer = ranked.tracer().clone();
    let joined = lookup(ranked, |r| r.id, log, |w| w.succ);
    let mut cells: Vec<Padded<Ranked>> = (0..ranked.len()).map(|i| ranked.read(i)).collect();
    for i in 0..log.len() {
        let e = joined.read(i);
        cells.push(
            e.into_item()
                .map(|(w, u)| Ranked { id: w.id, pos: w.pos, total: w.d + u.map(|u| u.total).unwrap_or(0), weight: w.weight })
                .into(),
        );
    }
    let both = TracedArray::from_vec(&tracer, cells);
    let (out, _) = compact_to(&both, cap.min(both.len()), |_| true).expect("reinsertion never overflows");
    out
}

fn finish(tracer: &Tracer, ranked: TracedArray<Padded<Ranked>>, nodes: &TracedArray<LinkedNode>) -> Result<TracedArray<u64>, ListError> {
    let n = nodes.len();
    let mut ranked = ranked;
    sort_padded_by_key(&mut ranked, |r| r.pos);
    let mut missing = false;
    let cells: Vec<Ranked> = (0..n)
        .map(|i| match ranked.read(i) {
            Padded::Item(r) => r,
            Padded::Blank => {
                missing = true;
                Ranked { id: 0, pos: i, total: 0, weight: 0 }
            }
        })
        .collect();
    let ranks: Vec<u64> = cells.iter().map(|r| r.total.wrapping_sub(r.weight)).collect();
    // rank(v) must equal weight(succ) + rank(succ)
    let table = TracedArray::from_vec(tracer, cells.iter().map(|r| Padded::Item((r.id, r.total))).collect());
    let queries = TracedArray::from_vec(tracer, (0..n).map(|i| Padded::Item((nodes.read(i), ranks[i]))).collect());
    let joined = lookup(&table, |r| r.0, &queries, |q| q.0.succ);
    let mut bad = missing;
    for i in 0..n {
        if let Padded::Item(((v, rank), hit)) = joined.read(i) {
            let expect = hit.map(|h| h.1).unwrap_or(0);
            bad |= v.succ.is_some() != hit.is_some() || rank != expect;
        }
    }
    if bad {
        return Err(ListError::MalformedChain("ranks are not consistent with successor links".into()));
    }
    Ok(TracedArray::from_vec(tracer, ranks))
}

/// Rejects duplicate ids, dangling successors, shared successors, zero
/// weights and anything other than exactly one tail. Errors are raised after
/// the full pass.
fn check_chain(nodes: &TracedArray<LinkedNode>) -> Result<(), ListError> {
    #[derive(Clone, Copy)]
    enum E {
        Node(u64, u64),
        Ref(Option<u64>),
    }
    let tracer = nodes.tracer().clone();
    let n = nodes.len();
    let mut cells = Vec::with_capacity(2 * n);
    let mut refs = Vec::with_capacity(n);
    for i in 0..n {
        let v = nodes.read(i);
        cells.push(E::Node(v.id, v.d));
        refs.push(E::Ref(v.succ));
    }
    cells.extend(refs);
    let mut all = TracedArray::from_vec(&tracer, cells);
    oblivious_sort_by_key(&mut all, |e| match e {
        E::Node(id, _) => (Padded::Item(*id), 0u8),
        E::Ref(t) => (Padded::from(*t), 1u8),
    });
    let mut tails = 0;
    let mut problem: Option<String> = None;
    let mut last_node: Option<u64> = None;
    let mut last_ref: Option<u64> = None;
    for i in 0..2 * n {
        let e = all.read(i);
        match e {
            E::Node(id, d) => {
                if last_node == Some(id) {
                    problem.get_or_insert(format!("duplicate node id {id}"));
                }
                if d == 0 {
                    problem.get_or_insert(format!("node {id} has zero weight"));
                }
                last_node = Some(id);
            }
            E::Ref(None) => tails += 1,
            E::Ref(Some(t)) => {
                if last_node != Some(t) {
                    problem.get_or_insert(format!("successor {t} is not a node"));
                }
                if last_ref == Some(t) {
                    problem.get_or_insert(format!("node {t} has two predecessors"));
                }
                last_ref = Some(t);
            }
        }
        all.write(i, e);
    }
    if tails != 1 {
        problem.get_or_insert(format!("{tails} nodes have no successor"));
    }
    match problem {
        Some(p) => Err(ListError::MalformedChain(p)),
        None => Ok(()),
    }
}
