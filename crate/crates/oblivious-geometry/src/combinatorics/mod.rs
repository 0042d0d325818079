//! Oblivious ANLV, list ranking, Euler tours and tree contraction.

pub mod anlv;
pub mod contract;
pub mod euler;
pub mod list_rank;

pub use anlv::{anlv, anlv_by, merge_via_anlv, AnlvResult, Nearest};
pub use contract::{
    flatten_expr, tree_contract, Affine, Algebra, ArithKind, ArithOp, ArithTreeNode, BoolFn, BoolOp, BooleanAlgebra, Expr,
    ModularArithmetic, NodeOf, TreeValues,
};
pub use euler::{euler_edges, euler_tour, rooted_from_children, EulerTour, RootedNode, TourEdge, TreeLinks};
pub use list_rank::{list_rank, LinkedNode, ListRanking};
