//! Tree contraction by raking odd-numbered leaves, with edge functions drawn
//! from a composable operator algebra.

use std::fmt::Debug;

use super::euler::{euler_edges, TreeLinks};
use super::list_rank::{list_rank, LinkedNode};
use crate::error::TreeError;
use crate::primitives::{compact_to, deliver, lookup, oblivious_sort_by_key, sort_padded_by_key, Padded};
use crate::rng::SeededRng;
use crate::trace::TracedArray;

/// Binary operators together with constant-size unary functions that are
/// closed under composition and under fixing one operand.
pub trait Algebra {
    type Value: Clone + PartialEq + Debug;
    type Op: Clone + Copy + PartialEq + Debug;
    type Func: Clone + PartialEq + Debug;

    fn apply_op(&self, op: Self::Op, l: &Self::Value, r: &Self::Value) -> Self::Value;
    /// `x -> op(l, x)`
    fn partial_left(&self, op: Self::Op, l: &Self::Value) -> Self::Func;
    /// `x -> op(x, r)`
    fn partial_right(&self, op: Self::Op, r: &Self::Value) -> Self::Func;
    /// `x -> outer(inner(x))`
    fn compose(&self, outer: &Self::Func, inner: &Self::Func) -> Self::Func;
    fn eval(&self, f: &Self::Func, x: &Self::Value) -> Self::Value;
    fn identity(&self) -> Self::Func;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Mul,
}

/// `x -> a*x + b` over integers mod 2^64.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub a: u64,
    pub b: u64,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ModularArithmetic;

impl Algebra for ModularArithmetic {
    type Value = u64;
    type Op = ArithOp;
    type Func = Affine;

    fn apply_op(&self, op: ArithOp, l: &u64, r: &u64) -> u64 {
        match op {
            ArithOp::Add => l.wrapping_add(*r),
            ArithOp::Mul => l.wrapping_mul(*r),
        }
    }
    fn partial_left(&self, op: ArithOp, l: &u64) -> Affine {
        match op {
            ArithOp::Add => Affine { a: 1, b: *l },
            ArithOp::Mul => Affine { a: *l, b: 0 },
        }
    }
    fn partial_right(&self, op: ArithOp, r: &u64) -> Affine {
        self.partial_left(op, r)
    }
    fn compose(&self, outer: &Affine, inner: &Affine) -> Affine {
        Affine {
            a: outer.a.wrapping_mul(inner.a),
            b: outer.a.wrapping_mul(inner.b).wrapping_add(outer.b),
        }
    }
    fn eval(&self, f: &Affine, x: &u64) -> u64 {
        f.a.wrapping_mul(*x).wrapping_add(f.b)
    }
    fn identity(&self) -> Affine {
        Affine { a: 1, b: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolOp {
    Or,
    And,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoolFn {
    Id,
    Const0,
    Const1,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BooleanAlgebra;

impl Algebra for BooleanAlgebra {
    type Value = bool;
    type Op = BoolOp;
    type Func = BoolFn;

    fn apply_op(&self, op: BoolOp, l: &bool, r: &bool) -> bool {
        match op {
            BoolOp::Or => *l || *r,
            BoolOp::And => *l && *r,
        }
    }
    fn partial_left(&self, op: BoolOp, l: &bool) -> BoolFn {
        match (op, l) {
            (BoolOp::Or, true) => BoolFn::Const1,
            (BoolOp::And, false) => BoolFn::Const0,
            _ => BoolFn::Id,
        }
    }
    fn partial_right(&self, op: BoolOp, r: &bool) -> BoolFn {
        self.partial_left(op, r)
    }
    fn compose(&self, outer: &BoolFn, inner: &BoolFn) -> BoolFn {
        match outer {
            BoolFn::Id => *inner,
            c => *c,
        }
    }
    fn eval(&self, f: &BoolFn, x: &bool) -> bool {
        match f {
            BoolFn::Id => *x,
            BoolFn::Const0 => false,
            BoolFn::Const1 => true,
        }
    }
    fn identity(&self) -> BoolFn {
        BoolFn::Id
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind<V, O> {
    Leaf(V),
    Internal(O),
}

/// Node of a proper binary expression tree, stored at its own index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArithTreeNode<V, O, F> {
    pub parent: Option<usize>,
    pub is_right: bool,
    pub left: Option<usize>,
    pub right: Option<usize>,
    pub kind: ArithKind<V, O>,
    /// Applied to this node's value before the parent's operator sees it.
    pub edge: F,
}

impl<V, O, F> TreeLinks for ArithTreeNode<V, O, F> {
    const ARITY: usize = 2;
    fn parent_link(&self) -> Option<(usize, usize)> {
        self.parent.map(|p| (p, usize::from(self.is_right)))
    }
    fn child(&self, slot: usize) -> Option<usize> {
        if slot == 0 {
            self.left
        } else {
            self.right
        }
    }
}

pub type NodeOf<A> = ArithTreeNode<<A as Algebra>::Value, <A as Algebra>::Op, <A as Algebra>::Func>;

/// A recursive expression, convenient for building trees.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr<V, O> {
    Leaf(V),
    Node(O, Box<Expr<V, O>>, Box<Expr<V, O>>),
}

impl<V, O> Expr<V, O> {
    pub fn node(op: O, l: Expr<V, O>, r: Expr<V, O>) -> Self {
        Expr::Node(op, Box::new(l), Box::new(r))
    }
}

/// Flattens an expression in preorder (root at index 0) with identity edges.
pub fn flatten_expr<A: Algebra>(alg: &A, e: &Expr<A::Value, A::Op>) -> Vec<NodeOf<A>> {
    fn go<A: Algebra>(alg: &A, e: &Expr<A::Value, A::Op>, parent: Option<usize>, is_right: bool, out: &mut Vec<NodeOf<A>>) -> usize {
        let me = out.len();
        let kind = match e {
            Expr::Leaf(v) => ArithKind::Leaf(v.clone()),
            Expr::Node(op, _, _) => ArithKind::Internal(*op),
        };
        out.push(ArithTreeNode { parent, is_right, left: None, right: None, kind, edge: alg.identity() });
        if let Expr::Node(_, l, r) = e {
            let li = go(alg, l, Some(me), false, out);
            let ri = go(alg, r, Some(me), true, out);
            out[me].left = Some(li);
            out[me].right = Some(ri);
        }
        me
    }
    let mut out = Vec::new();
    go(alg, e, None, false, &mut out);
    out
}

#[derive(Clone, Debug)]
struct Rake<V, O, F> {
    p: usize,
    s: usize,
    w: usize,
    w_right: bool,
    c_w: V,
    val_w: V,
    op: O,
    f_s_old: F,
}

#[derive(Clone, Debug)]
struct CNode<V, O, F> {
    id: usize,
    parent: Option<usize>,
    is_right: bool,
    left: Option<usize>,
    right: Option<usize>,
    kind: ArithKind<V, O>,
    f: F,
    leaf_no: u64,
    dead: bool,
    pending: Option<Rake<V, O, F>>,
}

#[derive(Clone, Debug)]
enum Msg<V, O, F> {
    Sibling {
        to: usize,
        new_parent: Option<usize>,
        new_is_right: bool,
        outer: F,
        rake: Rake<V, O, F>,
    },
    Grand {
        to: usize,
        right: bool,
        child: usize,
    },
    Remove {
        to: usize,
    },
}

impl<V, O, F> Msg<V, O, F> {
    fn to(&self) -> usize {
        match self {
            Msg::Sibling { to, .. } | Msg::Grand { to, .. } | Msg::Remove { to } => *to,
        }
    }
}

/// Sibling message: new parent, side, edge function and the rake record.
type SiblingMsg<V, O, F> = (Option<usize>, bool, F, Rake<V, O, F>);

struct Inbox<V, O, F> {
    sibling: Option<SiblingMsg<V, O, F>>,
    grand: [Option<usize>; 2],
    remove: bool,
}

#[derive(Debug)]
pub struct TreeValues<V> {
    /// Entry `i` is the value of node `i`'s subtree.
    pub values: TracedArray<V>,
    pub restarts: u32,
}

type Log<A> = TracedArray<Padded<Rake<<A as Algebra>::Value, <A as Algebra>::Op, <A as Algebra>::Func>>>;

/// Evaluates every node of a proper binary expression tree.
pub fn tree_contract<A: Algebra>(tree: &TracedArray<NodeOf<A>>, alg: &A, rng: &SeededRng) -> Result<TreeValues<A::Value>, TreeError> {
    let tracer = tree.tracer().clone();
    let n = tree.len();
    if n == 0 {
        return Err(TreeError::MalformedTree("empty tree".into()));
    }
    let mut shape_ok = true;
    for i in 0..n {
        let v = tree.read(i);
        shape_ok &= match v.kind {
            ArithKind::Leaf(_) => v.left.is_none() && v.right.is_none(),
            ArithKind::Internal(_) => v.left.is_some() && v.right.is_some(),
        };
    }
    let (mut nodes, restarts) = number_leaves(tree, rng)?;
    if !shape_ok {
        return Err(TreeError::MalformedTree("tree is not proper binary".into()));
    }
    let mut leaves = (n as u64).div_ceil(2);
    let mut history: Vec<[Log<A>; 2]> = Vec::new();
    while leaves > 1 {
        let m = nodes.len();
        let left = rake_step(&mut nodes, alg, false);
        let right = rake_step(&mut nodes, alg, true);
        for i in 0..m {
            let mut v = nodes.read(i);
            if let Padded::Item(node) = &mut v {
                if matches!(node.kind, ArithKind::Leaf(_)) {
                    node.leaf_no /= 2;
                }
            }
            nodes.write(i, v);
        }
        let keep = m - 2 * (leaves / 2) as usize;
        let (next, count) = compact_to(&nodes, keep, |_| true).expect("rakes remove a fixed number of nodes");
        debug_assert_eq!(count, keep);
        nodes = next;
        history.push([left, right]);
        leaves = leaves.div_ceil(2);
    }
    let last = nodes.read(0).into_item().expect("one node remains");
    let ArithKind::Leaf(v) = &last.kind else {
        unreachable!("the last node is a leaf");
    };
    let mut known: TracedArray<Padded<(usize, A::Value)>> = TracedArray::from_vec(&tracer, vec![Padded::Item((last.id, v.clone()))]);
    for [left, right] in history.iter().rev() {
        let m = left.len();
        known = unrake(&known, right, alg, m);
        known = unrake(&known, left, alg, m);
    }
    sort_padded_by_key(&mut known, |k| k.0);
    let cells = (0..n).map(|i| known.read(i).into_item().expect("every node valued").1).collect();
    Ok(TreeValues { values: TracedArray::from_vec(&tracer, cells), restarts })
}

type CNodes<V, O, F> = TracedArray<Padded<CNode<V, O, F>>>;
type Nodes<A> = TracedArray<Padded<CNode<<A as Algebra>::Value, <A as Algebra>::Op, <A as Algebra>::Func>>>;

fn number_leaves<V: Clone, O: Clone + Copy, F: Clone>(
    tree: &TracedArray<ArithTreeNode<V, O, F>>,
    rng: &SeededRng,
) -> Result<(CNodes<V, O, F>, u32), TreeError> {
    let tracer = tree.tracer().clone();
    let n = tree.len();
    let edges = euler_edges(tree)?;
    let m = edges.len();
    let links = (0..m)
        .map(|i| {
            let e = edges.read(i);
            LinkedNode::new(e.id, e.succ)
        })
        .collect();
    let ranking = list_rank(&TracedArray::from_vec(&tracer, links), rng)?;
    let cells = (0..m).map(|i| (ranking.ranks.read(i), edges.read(i))).collect();
    let mut placed: TracedArray<(u64, super::TourEdge)> = TracedArray::from_vec(&tracer, cells);
    // descending rank = tour order
    oblivious_sort_by_key(&mut placed, |p| std::cmp::Reverse(p.0));
    let mut count = 0u64;
    let msgs = (0..m)
        .map(|i| {
            let (_, e) = placed.read(i);
            let into_leaf = e.down && e.succ == Some(e.id + 1);
            let msg = into_leaf.then_some((e.child, count));
            count += u64::from(into_leaf);
            Padded::from(msg)
        })
        .collect();
    let msgs = TracedArray::from_vec(&tracer, msgs);
    let cells = (0..n)
        .map(|i| {
            let v = tree.read(i);
            Padded::Item(CNode {
                id: i,
                parent: v.parent,
                is_right: v.is_right,
                left: v.left,
                right: v.right,
                kind: v.kind,
                f: v.edge,
                leaf_no: 0,
                dead: false,
                pending: None,
            })
        })
        .collect();
    let mut nodes = TracedArray::from_vec(&tracer, cells);
    deliver(&mut nodes, |v| v.id, &msgs, |m| m.0, || 0u64, |a, m| *a = m.1, |v, a| v.leaf_no = *a);
    Ok((nodes, ranking.restarts))
}

fn rake_step<A: Algebra>(nodes: &mut Nodes<A>, alg: &A, right_side: bool) -> Log<A> {
    let tracer = nodes.tracer().clone();
    let m = nodes.len();
    let queries = (0..m)
        .map(|i| {
            let v = nodes.read(i);
            v.into_item()
                .filter(|w| matches!(w.kind, ArithKind::Leaf(_)) && w.leaf_no % 2 == 1 && w.is_right == right_side && w.parent.is_some())
                .into()
        })
        .collect();
    let queries = TracedArray::from_vec(&tracer, queries);
    let joined = lookup(nodes, |r| r.id, &queries, |q| q.parent);
    let mut msgs = Vec::with_capacity(3 * m);
    for i in 0..m {
        let hit = joined.read(i);
        let mut cell = nodes.read(i);
        let mut out = [Padded::Blank, Padded::Blank, Padded::Blank];
        if let Padded::Item((w, Some(p))) = hit {
            let (ArithKind::Leaf(val_w), ArithKind::Internal(op)) = (&w.kind, &p.kind) else {
                unreachable!("raked node is a leaf under an operator");
            };
            let c_w = alg.eval(&w.f, val_w);
            let h = if w.is_right { alg.partial_right(*op, &c_w) } else { alg.partial_left(*op, &c_w) };
            let s = if w.is_right { p.left } else { p.right }.expect("proper binary");
            out[0] = Padded::Item(Msg::Sibling {
                to: s,
                new_parent: p.parent,
                new_is_right: p.is_right,
                outer: alg.compose(&p.f, &h),
                rake: Rake { p: p.id, s, w: w.id, w_right: w.is_right, c_w, val_w: val_w.clone(), op: *op, f_s_old: alg.identity() },
            });
            if let Some(g) = p.parent {
                out[1] = Padded::Item(Msg::Grand { to: g, right: p.is_right, child: s });
            }
            out[2] = Padded::Item(Msg::Remove { to: p.id });
            cell = Padded::Blank;
        }
        nodes.write(i, cell);
        msgs.extend(out);
    }
    let msgs = TracedArray::from_vec(&tracer, msgs);
    deliver(
        nodes,
        |v| v.id,
        &msgs,
        |m| m.to(),
        || Inbox { sibling: None, grand: [None, None], remove: false },
        |inbox, m| match m {
            Msg::Sibling { new_parent, new_is_right, outer, rake, .. } => {
                debug_assert!(inbox.sibling.is_none());
                inbox.sibling = Some((*new_parent, *new_is_right, outer.clone(), rake.clone()));
            }
            Msg::Grand { right, child, .. } => {
                debug_assert!(inbox.grand[usize::from(*right)].is_none());
                inbox.grand[usize::from(*right)] = Some(*child);
            }
            Msg::Remove { .. } => inbox.remove = true,
        },
        |v, inbox| {
            if let Some((parent, is_right, outer, rake)) = &inbox.sibling {
                let mut rake = rake.clone();
                rake.f_s_old = v.f.clone();
                rake.s = v.id;
                v.f = alg.compose(outer, &v.f);
                v.parent = *parent;
                v.is_right = *is_right;
                v.pending = Some(rake);
            }
            if let Some(child) = inbox.grand[0] {
                v.left = Some(child);
            }
            if let Some(child) = inbox.grand[1] {
                v.right = Some(child);
            }
            v.dead |= inbox.remove;
        },
    );
    let mut log = Vec::with_capacity(m);
    for i in 0..m {
        let cell = nodes.read(i);
        let (next, entry) = match cell {
            Padded::Item(mut v) => {
                let entry = v.pending.take();
                (if v.dead { Padded::Blank } else { Padded::Item(v) }, Padded::from(entry))
            }
            Padded::Blank => (Padded::Blank, Padded::Blank),
        };
        nodes.write(i, next);
        log.push(entry);
    }
    TracedArray::from_vec(&tracer, log)
}

fn unrake<A: Algebra>(known: &TracedArray<Padded<(usize, A::Value)>>, log: &Log<A>, alg: &A, cap: usize) -> TracedArray<Padded<(usize, A::Value)>> {
    let tracer = known.tracer().clone();
    let joined = lookup(known, |k| k.0, log, |r| Some(r.s));
    let mut cells: Vec<_> = (0..known.len()).map(|i| known.read(i)).collect();
    for i in 0..log.len() {
        match joined.read(i) {
            Padded::Item((r, Some((_, val_s)))) => {
                let c_s = alg.eval(&r.f_s_old, &val_s);
                let val_p = if r.w_right { alg.apply_op(r.op, &c_s, &r.c_w) } else { alg.apply_op(r.op, &r.c_w, &c_s) };
                cells.push(Padded::Item((r.p, val_p)));
                cells.push(Padded::Item((r.w, r.val_w)));
            }
            Padded::Item((_, None)) => unreachable!("sibling value known before its rake is undone"),
            Padded::Blank => {
                cells.push(Padded::Blank);
                cells.push(Padded::Blank);
            }
        }
    }
    let all = TracedArray::from_vec(&tracer, cells);
    compact_to(&all, cap, |_| true).expect("values never exceed live nodes").0
}
