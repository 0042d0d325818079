//! Evaluates arithmetic and boolean expression trees by contraction.

use oblivious_geometry::combinatorics::{flatten_expr, tree_contract, ArithOp, BoolOp, BooleanAlgebra, Expr, ModularArithmetic};
use oblivious_geometry::{SeededRng, TracedArray, Tracer};

fn main() {
    let rng = SeededRng::new(1);
    let tracer = Tracer::counting();

    // (2 + 3) * (4 + 5 * 6)
    let e = Expr::node(
        ArithOp::Mul,
        Expr::node(ArithOp::Add, Expr::Leaf(2), Expr::Leaf(3)),
        Expr::node(ArithOp::Add, Expr::Leaf(4), Expr::node(ArithOp::Mul, Expr::Leaf(5), Expr::Leaf(6))),
    );
    let tree = TracedArray::from_vec(&tracer, flatten_expr(&ModularArithmetic, &e));
    let out = tree_contract(&tree, &ModularArithmetic, &rng).expect("proper binary tree");
    println!("arithmetic root value: {}", out.values.read(0));

    // (true and false) or (true and true)
    let b = Expr::node(
        BoolOp::Or,
        Expr::node(BoolOp::And, Expr::Leaf(true), Expr::Leaf(false)),
        Expr::node(BoolOp::And, Expr::Leaf(true), Expr::Leaf(true)),
    );
    let tree = TracedArray::from_vec(&tracer, flatten_expr(&BooleanAlgebra, &b));
    let out = tree_contract(&tree, &BooleanAlgebra, &rng).expect("proper binary tree");
    println!("boolean root value: {}", out.values.read(0));
}
