//! Inputs and entry points for every algorithm, shared by `audit`, `bench`
//! and the acceptance harness.

use std::collections::HashSet;

use serde::Serialize;

use super::CliError;
use crate::combinatorics::{anlv, flatten_expr, list_rank, tree_contract, ArithOp, Expr, LinkedNode, ModularArithmetic, NodeOf};
use crate::hull::{convex_hull, GridPoint};
use crate::primitives::oblivious_sort;
use crate::proximity::{all_nearest_neighbors_with, closest_pair_with};
use crate::quadtree::build_compressed_quadtree;
use crate::rng::SeededRng;
use crate::trace::{TracedArray, Tracer};
use crate::wspd::{wspd, Separation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Sort,
    Anlv,
    ListRank,
    TreeContract,
    Hull,
    Quadtree,
    Wspd,
    ClosestPair,
    Ann,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::Sort,
        Algorithm::Anlv,
        Algorithm::ListRank,
        Algorithm::TreeContract,
        Algorithm::Hull,
        Algorithm::Quadtree,
        Algorithm::Wspd,
        Algorithm::ClosestPair,
        Algorithm::Ann,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sort => "sort",
            Algorithm::Anlv => "anlv",
            Algorithm::ListRank => "list-rank",
            Algorithm::TreeContract => "tree-contract",
            Algorithm::Hull => "hull",
            Algorithm::Quadtree => "quadtree",
            Algorithm::Wspd => "wspd",
            Algorithm::ClosestPair => "closest-pair",
            Algorithm::Ann => "ann",
        }
    }

    /// Uses the seed's random bits.
    pub fn randomized(self) -> bool {
        matches!(self, Algorithm::ListRank | Algorithm::TreeContract)
    }

    /// Smallest size the algorithm accepts.
    pub fn min_size(self) -> usize {
        match self {
            Algorithm::ClosestPair | Algorithm::Ann => 2,
            _ => 1,
        }
    }

    /// A random input of size `n`; points are distinct on the `2^bits` grid.
    pub fn random_workload(self, n: usize, bits: u32, rng: &mut SeededRng) -> Result<Workload, CliError> {
        Ok(match self {
            Algorithm::Sort => Workload::Keys((0..n).map(|_| rng.next_u64()).collect()),
            Algorithm::Anlv => Workload::Values((0..n).map(|_| (rng.next_u64() % (4 * n as u64)) as i64).collect()),
            Algorithm::ListRank => {
                let order = shuffled(n, rng);
                Workload::Chain(chain_in_order(&order))
            }
            Algorithm::TreeContract => Workload::Tree(flatten_expr(&ModularArithmetic, &random_expr(n, rng))),
            _ => Workload::Points(random_points(n, bits, rng)?),
        })
    }

    /// An input of the algorithm's kind derived from a point set.
    pub fn workload_from_points(self, pts: &[GridPoint]) -> Workload {
        match self {
            Algorithm::Sort => Workload::Keys(pts.iter().map(|p| ((p.x as u64) << 32) | p.y as u64).collect()),
            Algorithm::Anlv => Workload::Values(pts.iter().map(|p| p.x).collect()),
            Algorithm::ListRank => {
                let mut order: Vec<usize> = (0..pts.len()).collect();
                order.sort_by_key(|&i| (pts[i].x, pts[i].y, i));
                Workload::Chain(chain_in_order(&order))
            }
            Algorithm::TreeContract => Workload::Tree(flatten_expr(&ModularArithmetic, &expr_from_points(pts))),
            _ => Workload::Points(pts.to_vec()),
        }
    }

    /// Runs the algorithm on `w` against `tracer`; returns the restart count.
    pub fn execute(self, w: &Workload, tracer: &Tracer, params: &RunParams) -> Result<u32, CliError> {
        let rng = SeededRng::new(params.seed);
        match (self, w) {
            (Algorithm::Sort, Workload::Keys(k)) => {
                let mut a = TracedArray::from_vec(tracer, k.clone());
                oblivious_sort(&mut a);
                Ok(0)
            }
            (Algorithm::Anlv, Workload::Values(v)) => {
                anlv(&TracedArray::from_vec(tracer, v.clone()));
                Ok(0)
            }
            (Algorithm::ListRank, Workload::Chain(c)) => Ok(list_rank(&TracedArray::from_vec(tracer, c.clone()), &rng)?.restarts),
            (Algorithm::TreeContract, Workload::Tree(t)) => {
                Ok(tree_contract(&TracedArray::from_vec(tracer, t.clone()), &ModularArithmetic, &rng)?.restarts)
            }
            (_, Workload::Points(p)) => {
                let pts = TracedArray::from_vec(tracer, p.clone());
                match self {
                    Algorithm::Hull => {
                        convex_hull(&pts)?;
                    }
                    Algorithm::Quadtree => {
                        build_compressed_quadtree(&pts, params.grid_bits)?;
                    }
                    Algorithm::Wspd => {
                        let tree = build_compressed_quadtree(&pts, params.grid_bits)?;
                        wspd(&pts, &tree, &params.separation, &mut rng.clone())?;
                    }
                    Algorithm::ClosestPair => {
                        closest_pair_with(&pts, &params.separation)?;
                    }
                    Algorithm::Ann => {
                        all_nearest_neighbors_with(&pts, &params.separation)?;
                    }
                    _ => return Err(CliError::Usage(format!("{} does not take points", self.name()))),
                }
                Ok(0)
            }
            _ => Err(CliError::Usage(format!("wrong input kind for {}", self.name()))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunParams {
    pub seed: u64,
    pub grid_bits: u32,
    pub separation: Separation,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams { seed: 0, grid_bits: 20, separation: Separation::default_2_1() }
    }
}

#[derive(Clone, Debug)]
pub enum Workload {
    Keys(Vec<u64>),
    Values(Vec<i64>),
    Chain(Vec<LinkedNode>),
    /// A proper binary tree; its size is the leaf count.
    Tree(Vec<NodeOf<ModularArithmetic>>),
    Points(Vec<GridPoint>),
}

impl Workload {
    pub fn len(&self) -> usize {
        match self {
            Workload::Keys(v) => v.len(),
            Workload::Values(v) => v.len(),
            Workload::Chain(v) => v.len(),
            Workload::Tree(v) => v.len().div_ceil(2),
            Workload::Points(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn below(rng: &mut SeededRng, bound: u64) -> u64 {
    rng.next_u64() % bound
}

fn shuffled(n: usize, rng: &mut SeededRng) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        v.swap(i, below(rng, i as u64 + 1) as usize);
    }
    v
}

/// Node `i` of the array is the chain's `order`-th element's data.
fn chain_in_order(order: &[usize]) -> Vec<LinkedNode> {
    let mut nodes: Vec<LinkedNode> = (0..order.len()).map(|i| LinkedNode::new(i as u64, None)).collect();
    for w in order.windows(2) {
        nodes[w[0]].succ = Some(w[1] as u64);
    }
    nodes
}

/// Distinct points with ids equal to their positions.
pub fn random_points(n: usize, bits: u32, rng: &mut SeededRng) -> Result<Vec<GridPoint>, CliError> {
    if bits == 0 || bits > 31 || (2 * bits < 64 && n as u64 > 1u64 << (2 * bits)) {
        return Err(CliError::Usage(format!("{n} distinct points do not fit on a 2^{bits} grid")));
    }
    let side = 1u64 << bits;
    let mut seen = HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = (below(rng, side) as i64, below(rng, side) as i64);
        if seen.insert(p) {
            out.push(GridPoint::new(p.0, p.1, out.len()));
        }
    }
    Ok(out)
}

fn random_expr(leaves: usize, rng: &mut SeededRng) -> Expr<u64, ArithOp> {
    if leaves <= 1 {
        return Expr::Leaf(rng.next_u64() % 1000);
    }
    let left = 1 + below(rng, leaves as u64 - 1) as usize;
    let op = if rng.bit() { ArithOp::Add } else { ArithOp::Mul };
    Expr::node(op, random_expr(left, rng), random_expr(leaves - left, rng))
}

fn expr_from_points(pts: &[GridPoint]) -> Expr<u64, ArithOp> {
    match pts {
        [] => Expr::Leaf(0),
        [p] => Expr::Leaf(p.x as u64),
        [first, ..] => {
            let left = 1 + first.y.unsigned_abs() as usize % (pts.len() - 1);
            let op = if first.y % 2 == 0 { ArithOp::Add } else { ArithOp::Mul };
            Expr::node(op, expr_from_points(&pts[..left]), expr_from_points(&pts[left..]))
        }
    }
}
