//! Euler tours of rooted trees with at most [`MAX_ARITY`] child slots.

use super::list_rank::{list_rank, LinkedNode};
use crate::error::TreeError;
use crate::primitives::{compact_to, deliver, oblivious_sort_by_key, Padded};
use crate::rng::SeededRng;
use crate::trace::TracedArray;

pub const MAX_ARITY: usize = 4;

/// Child/parent structure of a tree node stored at its own array index.
pub trait TreeLinks {
    const ARITY: usize;
    /// Parent index and the child slot this node occupies there.
    fn parent_link(&self) -> Option<(usize, usize)>;
    fn child(&self, slot: usize) -> Option<usize>;
}

/// A plain rooted tree node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootedNode<const K: usize> {
    pub parent: Option<(usize, usize)>,
    pub children: [Option<usize>; K],
}

impl<const K: usize> TreeLinks for RootedNode<K> {
    const ARITY: usize = K;
    fn parent_link(&self) -> Option<(usize, usize)> {
        self.parent
    }
    fn child(&self, slot: usize) -> Option<usize> {
        self.children[slot]
    }
}

/// Builds rooted nodes from child lists; node 0 is not assumed to be the root.
pub fn rooted_from_children<const K: usize>(children: &[[Option<usize>; K]]) -> Vec<RootedNode<K>> {
    let mut out: Vec<RootedNode<K>> = children.iter().map(|c| RootedNode { parent: None, children: *c }).collect();
    for (i, c) in children.iter().enumerate() {
        for (j, ch) in c.iter().enumerate() {
            if let Some(ch) = ch {
                out[*ch].parent = Some((i, j));
            }
        }
    }
    out
}

/// One directed tree edge between `parent` and its child in `slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TourEdge {
    pub id: u64,
    pub parent: usize,
    pub child: usize,
    pub slot: usize,
    pub down: bool,
    pub succ: Option<u64>,
}

pub fn edge_id(arity: usize, parent: usize, slot: usize, down: bool) -> u64 {
    2 * (arity * parent + slot) as u64 + u64::from(!down)
}

#[derive(Clone, Copy, Debug)]
struct Gathered<N> {
    idx: usize,
    node: N,
    first_grandchild: [Option<usize>; MAX_ARITY],
    mismatch: bool,
}

/// The tour as a successor-linked list of exactly `2(n-1)` edges, ordered by
/// edge id.
pub fn euler_edges<N: TreeLinks + Clone>(tree: &TracedArray<N>) -> Result<TracedArray<TourEdge>, TreeError> {
    assert!(N::ARITY <= MAX_ARITY);
    let tracer = tree.tracer().clone();
    let n = tree.len();
    let k = N::ARITY;
    let first_child = |v: &N| (0..k).find(|&j| v.child(j).is_some());
    let (cells, msgs): (Vec<_>, Vec<_>) = (0..n)
        .map(|i| {
            let v = tree.read(i);
            let msg = v.parent_link().map(|(p, s)| (p, s, i, first_child(&v)));
            (
                Padded::Item(Gathered { idx: i, node: v, first_grandchild: [None; MAX_ARITY], mismatch: false }),
                Padded::from(msg),
            )
        })
        .unzip();
    let mut table = TracedArray::from_vec(&tracer, cells);
    let msgs = TracedArray::from_vec(&tracer, msgs);
    deliver(
        &mut table,
        |g| g.idx,
        &msgs,
        |m| m.0,
        || ([None; MAX_ARITY], [None; MAX_ARITY]),
        |acc: &mut ([Option<usize>; MAX_ARITY], [Option<Option<usize>>; MAX_ARITY]), m| {
            acc.0[m.1] = Some(m.2);
            acc.1[m.1] = Some(m.3);
        },
        |g, acc| {
            for j in 0..k {
                g.mismatch |= acc.0[j] != g.node.child(j);
                g.first_grandchild[j] = acc.1[j].flatten();
            }
        },
    );
    let mut roots = 0;
    let mut mismatch = false;
    let mut edges = Vec::with_capacity(2 * k * n);
    for i in 0..n {
        let g = table.read(i).into_item().expect("table keeps every node");
        roots += usize::from(g.node.parent_link().is_none());
        mismatch |= g.mismatch;
        for j in 0..k {
            let child = g.node.child(j);
            let down = child.map(|c| TourEdge {
                id: edge_id(k, i, j, true),
                parent: i,
                child: c,
                slot: j,
                down: true,
                succ: Some(match g.first_grandchild[j] {
                    Some(fc) => edge_id(k, c, fc, true),
                    None => edge_id(k, i, j, false),
                }),
            });
            let next_slot = (j + 1..k).find(|&jj| g.node.child(jj).is_some());
            let up = child.map(|c| TourEdge {
                id: edge_id(k, i, j, false),
                parent: i,
                child: c,
                slot: j,
                down: false,
                succ: match (next_slot, g.node.parent_link()) {
                    (Some(jj), _) => Some(edge_id(k, i, jj, true)),
                    (None, Some((p, s))) => Some(edge_id(k, p, s, false)),
                    (None, None) => None,
                },
            });
            edges.push(Padded::from(down));
            edges.push(Padded::from(up));
        }
    }
    let all = TracedArray::from_vec(&tracer, edges);
    let want = 2 * n.saturating_sub(1);
    let compacted = compact_to(&all, want, |_| true);
    if roots != 1 || mismatch {
        return Err(TreeError::MalformedTree(format!("{roots} roots, parent/child links consistent: {}", !mismatch)));
    }
    let (edges, count) = compacted.map_err(|e| TreeError::MalformedTree(e.to_string()))?;
    if count != want {
        return Err(TreeError::MalformedTree(format!("{count} edges for {n} nodes")));
    }
    let cells = (0..want).map(|i| edges.read(i).into_item().expect("exact count")).collect();
    Ok(TracedArray::from_vec(&tracer, cells))
}

#[derive(Debug)]
pub struct EulerTour {
    /// Edges in tour order.
    pub edges: TracedArray<TourEdge>,
    pub restarts: u32,
}

/// Euler tour in walking order, starting with the root's first down edge.
pub fn euler_tour<N: TreeLinks + Clone>(tree: &TracedArray<N>, rng: &SeededRng) -> Result<EulerTour, TreeError> {
    let tracer = tree.tracer().clone();
    let edges = euler_edges(tree)?;
    let m = edges.len();
    let links = (0..m)
        .map(|i| {
            let e = edges.read(i);
            LinkedNode::new(e.id, e.succ)
        })
        .collect();
    let ranking = list_rank(&TracedArray::from_vec(&tracer, links), rng)?;
    let cells = (0..m).map(|i| (m as u64 - 1 - ranking.ranks.read(i), edges.read(i))).collect();
    let mut placed: TracedArray<(u64, TourEdge)> = TracedArray::from_vec(&tracer, cells);
    oblivious_sort_by_key(&mut placed, |p| p.0);
    let cells = (0..m).map(|i| placed.read(i).1).collect();
    Ok(EulerTour { edges: TracedArray::from_vec(&tracer, cells), restarts: ranking.restarts })
}
